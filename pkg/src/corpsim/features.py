"""Tokenization, word/character-trigram counting and top-k vocabularies."""
from __future__ import annotations

import enum
import functools
import hashlib
import re
import sys
import unicodedata
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .similarity import FrequencyVector


class FeatureKind(str, enum.Enum):
    WORD = "word"
    CHAR3 = "char3"

    @classmethod
    def parse(cls, value: "str | FeatureKind") -> "FeatureKind":
        if isinstance(value, FeatureKind):
            return value
        aliases = {"word": cls.WORD, "char": cls.CHAR3, "char3": cls.CHAR3}
        try:
            return aliases[str(value).strip().lower()]
        except KeyError:
            raise FeatureKindError(f"unknown feature kind {value!r}") from None


class FeatureKindError(ValueError):
    pass


# --------------------------------------------------------------------------
# tokenizer

# Hashtag marks go first so that removing them cannot expose a URL or mention.
_HASHTAG = re.compile(r"#+(?=\w)")
_URL = re.compile(r"(?:[a-z][a-z0-9+.\-]*://|www\.)\S*", re.IGNORECASE)
_MENTION = re.compile(r"@\w+")
_WWW = re.compile(r"www\.", re.IGNORECASE)


@functools.lru_cache(maxsize=1)
def _punctuation() -> tuple[str, frozenset]:
    """Every Unicode punctuation character (categories P*)."""
    chars = "".join(
        chr(cp)
        for cp in range(sys.maxunicode + 1)
        if unicodedata.category(chr(cp)).startswith("P")
    )
    return chars, frozenset(chars)


def tokenize(text: str) -> list[str]:
    """Split raw text into normalized word tokens.

    NFC-normalizes, removes URL-shaped spans, @-mentions and the ``#`` of
    hashtags, case-folds, splits on Unicode whitespace and strips leading and
    trailing punctuation from every token. Empty tokens are dropped.

    >>> tokenize("The cat, the CAT.")
    ['the', 'cat', 'the', 'cat']
    >>> tokenize("go http://x.y @bob #nlp")
    ['go', 'nlp']
    """
    text = unicodedata.normalize("NFC", text)
    # the substring checks only skip regex scans that cannot match
    if "#" in text:
        text = _HASHTAG.sub("", text)
    if "://" in text or _WWW.search(text):
        text = _URL.sub(" ", text)
    if "@" in text:
        text = _MENTION.sub(" ", text)
    # casefold can leave decomposed sequences behind (e.g. U+01F0)
    text = unicodedata.normalize("NFC", text.casefold())
    chars, charset = _punctuation()
    words = text.split()
    if charset.isdisjoint(text):
        return words
    out = []
    for w in words:
        if w[0] in charset or w[-1] in charset:
            w = w.strip(chars)
            if not w:
                continue
        out.append(w)
    return out


def char_trigrams(tokens: Sequence[str]) -> list[str]:
    """Every 3-code-point window of the space-joined tokens padded with one
    space on each side."""
    if not tokens:
        return []
    padded = " " + " ".join(tokens) + " "
    return [padded[i:i + 3] for i in range(len(padded) - 2)]


# --------------------------------------------------------------------------
# counting

@dataclass(frozen=True)
class FeatureCounts:
    kind: FeatureKind
    counts: Mapping[str, int]
    total: int = -1

    def __post_init__(self):
        counts = {f: int(c) for f, c in self.counts.items() if c}
        if any(c < 0 for c in counts.values()):
            raise ValueError("feature counts must be non-negative")
        total = sum(counts.values())
        if self.total not in (-1, total):
            raise ValueError(f"total {self.total} != sum of counts {total}")
        object.__setattr__(self, "counts", counts)
        object.__setattr__(self, "total", total)
        object.__setattr__(self, "kind", FeatureKind.parse(self.kind))

    def __len__(self) -> int:
        return len(self.counts)

    def sorted_items(self) -> list[tuple[str, int]]:
        """Descending count, ties in lexicographic order."""
        return sorted(self.counts.items(), key=lambda fc: (-fc[1], fc[0]))


_SEP = 0x110000  # one past the last code point; marks document boundaries
_MASK21 = (1 << 21) - 1


def _count_trigrams(docs: Sequence[Sequence[str]]) -> dict[str, int]:
    padded = [" " + " ".join(toks) + " " for toks in docs if toks]
    if not padded:
        return {}
    joined = "\x00".join(padded)
    cps = np.frombuffer(
        joined.encode("utf-32-le", "surrogatepass"), dtype=np.uint32
    ).astype(np.int64)
    lengths = np.fromiter(map(len, padded), dtype=np.int64, count=len(padded))
    cps[np.cumsum(lengths + 1)[:-1] - 1] = _SEP
    first, mid, last = cps[:-2], cps[1:-1], cps[2:]
    keep = (first != _SEP) & (mid != _SEP) & (last != _SEP)
    ids = (first[keep] << 42) | (mid[keep] << 21) | last[keep]
    uniq, freq = np.unique(ids, return_counts=True)
    triples = np.empty((uniq.size, 3), dtype=np.uint32)
    triples[:, 0] = uniq >> 42
    triples[:, 1] = (uniq >> 21) & _MASK21
    triples[:, 2] = uniq & _MASK21
    flat = triples.tobytes().decode("utf-32-le", "surrogatepass")
    return {flat[3 * i:3 * i + 3]: int(c) for i, c in enumerate(freq.tolist())}


def count_features(docs: Iterable[str | Sequence[str]], kind: FeatureKind | str) -> FeatureCounts:
    """Count features over a sample made of several documents.

    ``docs`` holds raw strings (tokenized here) or pre-tokenized lists.
    Trigram windows never span two documents.
    """
    kind = FeatureKind.parse(kind)
    token_docs = [tokenize(d) if isinstance(d, str) else d for d in docs]
    if kind is FeatureKind.WORD:
        counts: Counter[str] = Counter()
        for toks in token_docs:
            counts.update(toks)
        return FeatureCounts(kind, counts)
    return FeatureCounts(kind, _count_trigrams(token_docs))


# --------------------------------------------------------------------------
# vocabulary

@dataclass(frozen=True)
class Vocabulary:
    language: str
    kind: FeatureKind
    features: tuple[str, ...]
    k: int
    summed: tuple[int, ...] = field(default=(), compare=False)

    @functools.cached_property
    def index(self) -> dict[str, int]:
        return {f: i for i, f in enumerate(self.features)}

    @functools.cached_property
    def ref(self) -> str:
        h = hashlib.sha256("\n".join(self.features).encode("utf-8", "surrogatepass"))
        return f"{self.language}:{self.kind.value}:{self.k}:{h.hexdigest()[:16]}"

    def __len__(self) -> int:
        return len(self.features)


def build_vocabulary(all_counts: Sequence[FeatureCounts], k: int = 100_000,
                     language: str = "") -> Vocabulary:
    """Top-``k`` features by frequency summed over every sample of a language."""
    if not all_counts:
        raise ValueError("cannot build a vocabulary from no samples")
    if k < 1:
        raise ValueError("k must be >= 1")
    kinds = {c.kind for c in all_counts}
    if len(kinds) != 1:
        raise FeatureKindError(f"mixed feature kinds: {sorted(x.value for x in kinds)}")
    summed: Counter[str] = Counter()
    for c in all_counts:
        summed.update(c.counts)
    ranked = sorted(summed.items(), key=lambda fc: (-fc[1], fc[0]))[:k]
    return Vocabulary(
        language=language,
        kind=kinds.pop(),
        features=tuple(f for f, _ in ranked),
        k=k,
        summed=tuple(c for _, c in ranked),
    )


def project(counts: FeatureCounts, vocab: Vocabulary, label: str = "") -> FrequencyVector:
    """Dense counts over ``vocab``; unattested features are 0, out-of-vocabulary
    features are ignored."""
    if counts.kind != vocab.kind:
        raise FeatureKindError(
            f"cannot project {counts.kind.value} counts onto a {vocab.kind.value} vocabulary"
        )
    get = counts.counts.get
    values = np.fromiter((get(f, 0) for f in vocab.features), dtype=np.int64,
                         count=len(vocab.features))
    return FrequencyVector(values=values, vocab_ref=vocab.ref, kind=vocab.kind, label=label)


def vocabulary_to_tsv(vocab: Vocabulary) -> str:
    lines = [f"#language={vocab.language} kind={vocab.kind.value} k={vocab.k}"]
    summed = vocab.summed or (0,) * len(vocab.features)
    lines += [f"{i}\t{f}\t{c}" for i, (f, c) in enumerate(zip(vocab.features, summed), 1)]
    return "\n".join(lines) + "\n"


def vocabulary_from_tsv(text: str) -> Vocabulary:
    lines = text.split("\n")
    header = lines[0]
    if not header.startswith("#"):
        raise ValueError("vocabulary file lacks its header line")
    meta = dict(part.split("=", 1) for part in header[1:].split())
    features, summed = [], []
    for n, line in enumerate(lines[1:], 2):
        if not line:
            continue
        rank, feat, count = line.split("\t")
        if int(rank) != len(features) + 1:
            raise ValueError(f"vocabulary rank out of order at line {n}")
        features.append(feat)
        summed.append(int(count))
    return Vocabulary(meta["language"], FeatureKind.parse(meta["kind"]),
                      tuple(features), int(meta["k"]), tuple(summed))
