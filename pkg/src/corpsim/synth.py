"""Synthetic register-labelled corpora drawn from perturbed Zipf laws.

Each language has one Zipf base over a fixed inventory of word forms. A cell
(language, country, register) draws tokens from that base after adding a
per-variety log-normal offset, a per-language register offset shared by all
varieties, and optionally shuffling a fraction of the variety's ranks.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Iterator

import numpy as np

from .experiments import make_rng
from .ingest import RawDocument, Register, VarietyKey

LANGUAGES = ("ara", "deu", "eng", "fra", "ind", "nld", "por", "rus", "spa")
COUNTRIES = ("US", "GB", "AU", "NZ", "CA", "IE", "IN", "ZA", "NG", "MX", "ES", "AR", "CO",
             "CL", "PE", "FR", "BE", "CH", "DE", "AT", "EG", "MA", "DZ", "TN", "BR", "PT",
             "RU", "UA", "BY", "KZ", "ID", "MY", "NL", "SR")
_LETTERS = "abcdefghijklmnopqrstuvwxyzäöüéèêñçåøáíóú"


class SynthError(ValueError):
    pass


@dataclass(frozen=True)
class SynthSpec:
    languages: int = 2
    varieties: int = 4
    samples_per_cell: int = 5
    sample_size: int = 100_000
    tokens_per_cell: int | None = None
    vocab_size: int = 20_000
    zipf_s: float = 1.1
    variety_divergence: float = 0.0
    register_divergence: float = 0.0
    rank_swap: float = 0.0
    copy_register: bool = False
    min_doc_tokens: int = 20
    max_doc_tokens: int = 200
    seed: int = 0

    def __post_init__(self):
        for name in ("languages", "varieties", "samples_per_cell", "sample_size", "vocab_size",
                     "min_doc_tokens"):
            if getattr(self, name) < 1:
                raise SynthError(f"{name} must be >= 1")
        if self.languages > len(LANGUAGES):
            raise SynthError(f"at most {len(LANGUAGES)} languages")
        if self.varieties > len(COUNTRIES):
            raise SynthError(f"at most {len(COUNTRIES)} varieties per language")
        if self.zipf_s <= 1:
            raise SynthError("zipf_s must be > 1")
        if self.max_doc_tokens < self.min_doc_tokens:
            raise SynthError("max_doc_tokens < min_doc_tokens")
        if min(self.variety_divergence, self.register_divergence) < 0:
            raise SynthError("divergences must be >= 0")
        if not 0 <= self.rank_swap <= 1:
            raise SynthError("rank_swap must lie in [0, 1]")
        if self.cell_tokens < self.sample_size:
            raise SynthError(
                f"tokens per cell ({self.cell_tokens}) smaller than sample_size ({self.sample_size})")

    @property
    def cell_tokens(self) -> int:
        if self.tokens_per_cell is not None:
            return self.tokens_per_cell
        return self.samples_per_cell * self.sample_size

    def language_codes(self) -> tuple[str, ...]:
        return LANGUAGES[:self.languages]

    def country_codes(self) -> tuple[str, ...]:
        return COUNTRIES[:self.varieties]

    def keys(self) -> list[VarietyKey]:
        return [VarietyKey(lang, c, r) for lang in self.language_codes()
                for c in self.country_codes() for r in (Register.TW, Register.CC)]


def word_forms(spec: SynthSpec, language: str) -> np.ndarray:
    """Distinct lowercase forms, shortest first so the frequent words are short."""
    rng = make_rng(spec.seed, "synth/forms", language)
    letters = np.array(list(_LETTERS))
    alphabet = letters[np.sort(rng.choice(letters.size, size=22, replace=False))]
    forms: dict[str, None] = {}
    while len(forms) < spec.vocab_size:
        lengths = 1 + rng.poisson(4.0, size=spec.vocab_size)
        chars = rng.choice(alphabet, size=int(lengths.sum()))
        pos = 0
        for n in lengths.tolist():
            forms.setdefault("".join(chars[pos:pos + n]), None)
            pos += n
            if len(forms) == spec.vocab_size:
                break
    ordered = sorted(forms, key=len)
    return np.array(ordered, dtype=object)


def base_log_probs(spec: SynthSpec) -> np.ndarray:
    ranks = np.arange(1, spec.vocab_size + 1, dtype=np.float64)
    return -spec.zipf_s * np.log(ranks)


def cell_probabilities(spec: SynthSpec, key: VarietyKey) -> np.ndarray:
    logp = base_log_probs(spec).copy()
    lang, country = key.language, key.country
    if spec.rank_swap > 0:
        rng = make_rng(spec.seed, "synth/swap", lang, country)
        k = int(round(spec.rank_swap * spec.vocab_size))
        if k >= 2:
            idx = np.sort(rng.choice(spec.vocab_size, size=k, replace=False))
            logp[idx] = logp[rng.permutation(idx)]
    if spec.variety_divergence > 0:
        z = make_rng(spec.seed, "synth/variety", lang, country).standard_normal(spec.vocab_size)
        logp += spec.variety_divergence * z
    if spec.register_divergence > 0:
        z = make_rng(spec.seed, "synth/register", lang, key.register.value).standard_normal(spec.vocab_size)
        logp += spec.register_divergence * z
    p = np.exp(logp - logp.max())
    return p / p.sum()


def _cell_documents(spec: SynthSpec, key: VarietyKey, forms: np.ndarray) -> list[str]:
    source = key
    if spec.copy_register and key.register is Register.CC:
        source = VarietyKey(key.language, key.country, Register.TW)
    rng = make_rng(spec.seed, "synth/tokens", str(source))
    ids = rng.choice(spec.vocab_size, size=spec.cell_tokens, p=cell_probabilities(spec, source))
    tokens = forms[ids]
    docs, pos = [], 0
    while pos < tokens.size:
        n = int(rng.integers(spec.min_doc_tokens, spec.max_doc_tokens + 1))
        docs.append(" ".join(tokens[pos:pos + n]))
        pos += n
    return docs


def iter_synthetic_documents(spec: SynthSpec) -> Iterator[RawDocument]:
    for lang in spec.language_codes():
        forms = word_forms(spec, lang)
        for country in spec.country_codes():
            for reg in (Register.TW, Register.CC):
                key = VarietyKey(lang, country, reg)
                for i, text in enumerate(_cell_documents(spec, key, forms)):
                    yield RawDocument(text, key, f"synth:{key}:{i}")


def ground_truth(spec: SynthSpec) -> dict:
    return {
        "spec": asdict(spec),
        "languages": list(spec.language_codes()),
        "countries": list(spec.country_codes()),
        "cells": [str(k) for k in spec.keys()],
        "model": "log p = -zipf_s*log(rank) [ranks shuffled on rank_swap share] "
                 "+ variety_divergence*N(0,1)[language,country] "
                 "+ register_divergence*N(0,1)[language,register]",
    }


def generate_synthetic_corpus(spec: SynthSpec, out_dir) -> Path:
    """Write ``corpus.jsonl`` and a ``truth.json`` sidecar; returns the corpus path."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    corpus = out / "corpus.jsonl"
    with open(corpus, "w", encoding="utf-8", newline="\n") as fh:
        for doc in iter_synthetic_documents(spec):
            k = doc.key
            fh.write(json.dumps({"text": doc.text, "language": k.language, "country": k.country,
                                 "register": k.register.value.lower()}, ensure_ascii=False))
            fh.write("\n")
    (out / "truth.json").write_text(json.dumps(ground_truth(spec), indent=1, sort_keys=True) + "\n",
                                    encoding="utf-8")
    return corpus
