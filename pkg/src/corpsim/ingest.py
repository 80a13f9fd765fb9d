"""Reading register-labelled corpora, cutting fixed-size samples and storing
their feature counts."""
from __future__ import annotations

import enum
import hashlib
import json
import logging
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Iterator

from .features import FeatureCounts, FeatureKind, tokenize

log = logging.getLogger(__name__)


class IngestError(ValueError):
    pass


class ChecksumError(IngestError):
    pass


class Register(str, enum.Enum):
    TW = "TW"
    CC = "CC"

    @classmethod
    def parse(cls, value) -> "Register":
        if isinstance(value, Register):
            return value
        try:
            return cls(str(value).strip().upper())
        except ValueError:
            raise IngestError(f"unknown register value {value!r} (expected tw or cc)") from None


@dataclass(frozen=True, order=True)
class VarietyKey:
    language: str
    country: str
    register: Register

    def __post_init__(self):
        lang = str(self.language).strip().lower()
        country = str(self.country).strip().upper()
        if not lang or not country:
            raise IngestError("language and country must be non-empty")
        object.__setattr__(self, "language", lang)
        object.__setattr__(self, "country", country)
        object.__setattr__(self, "register", Register.parse(self.register))

    @property
    def variety(self) -> tuple[str, str]:
        return self.language, self.country

    def __str__(self) -> str:
        return f"{self.language}-{self.country}-{self.register.value}"


@dataclass(frozen=True)
class RawDocument:
    text: str
    key: VarietyKey
    source_id: str = ""


@dataclass(frozen=True, order=True)
class Sample:
    key: VarietyKey
    index: int
    token_count: int = field(compare=False)
    counts_path: str = field(compare=False, default="")
    checksums: tuple[tuple[str, str], ...] = field(compare=False, default=())

    @property
    def id(self) -> str:
        return f"{self.key}-{self.index:04d}"

    def counts_file(self, kind: FeatureKind) -> str:
        return f"{self.counts_path}.{FeatureKind.parse(kind).value}.tsv"

    def checksum(self, kind: FeatureKind) -> str | None:
        return dict(self.checksums).get(FeatureKind.parse(kind).value)

    def to_json(self) -> dict:
        return {
            "language": self.key.language,
            "country": self.key.country,
            "register": self.key.register.value,
            "index": self.index,
            "token_count": self.token_count,
            "counts_path": self.counts_path,
            "checksums": dict(self.checksums),
        }

    @classmethod
    def from_json(cls, d: dict) -> "Sample":
        key = VarietyKey(d["language"], d["country"], d["register"])
        return cls(key, int(d["index"]), int(d["token_count"]), d.get("counts_path", ""),
                   tuple(sorted(d.get("checksums", {}).items())))


@dataclass
class CellReport:
    key: VarietyKey
    total_tokens: int
    samples_emitted: int
    samples_retained: int
    discarded_tokens: int

    @property
    def discarded_samples(self) -> int:
        return self.samples_emitted - self.samples_retained

    def to_json(self) -> dict:
        return {
            "key": str(self.key),
            "total_tokens": self.total_tokens,
            "samples_emitted": self.samples_emitted,
            "samples_retained": self.samples_retained,
            "discarded_samples": self.discarded_samples,
            "discarded_tokens": self.discarded_tokens,
        }


@dataclass
class SampleManifest:
    samples: list[Sample]
    config_digest: str = ""
    sample_size: int = 0
    cap: int = 0
    cells: list[CellReport] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    def by_key(self) -> dict[VarietyKey, list[Sample]]:
        out: dict[VarietyKey, list[Sample]] = {}
        for s in sorted(self.samples):
            out.setdefault(s.key, []).append(s)
        return out

    def languages(self) -> list[str]:
        return sorted({s.key.language for s in self.samples})

    def validate(self) -> None:
        seen = set()
        for key, samples in self.by_key().items():
            if self.cap and len(samples) > self.cap:
                raise IngestError(f"{key}: {len(samples)} samples exceed cap {self.cap}")
            if [s.index for s in samples] != list(range(len(samples))):
                raise IngestError(f"{key}: sample indexes are not contiguous from 0")
            for s in samples:
                if (s.key, s.index) in seen:
                    raise IngestError(f"duplicate sample {s.id}")
                seen.add((s.key, s.index))

    def to_json(self) -> str:
        payload = {
            "config_digest": self.config_digest,
            "sample_size": self.sample_size,
            "cap": self.cap,
            "samples": [s.to_json() for s in sorted(self.samples)],
            "cells": [c.to_json() for c in sorted(self.cells, key=lambda c: c.key)],
            "warnings": list(self.warnings),
        }
        return json.dumps(payload, indent=1, sort_keys=True, ensure_ascii=False) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "SampleManifest":
        d = json.loads(text)
        cells = []
        for c in d.get("cells", []):
            lang, country, reg = c["key"].split("-")
            cells.append(CellReport(VarietyKey(lang, country, reg), c["total_tokens"],
                                    c["samples_emitted"], c["samples_retained"],
                                    c["discarded_tokens"]))
        m = cls([Sample.from_json(s) for s in d["samples"]], d.get("config_digest", ""),
                d.get("sample_size", 0), d.get("cap", 0), cells, d.get("warnings", []))
        m.validate()
        return m


# --------------------------------------------------------------------------
# reading

def _corpus_files(path: Path, pattern: str) -> list[Path]:
    if path.is_file():
        return [path]
    return sorted(p for p in path.rglob(pattern) if p.is_file())


def _read_jsonl(path: Path, skipped: list | None) -> Iterator[RawDocument]:
    for file in _corpus_files(path, "*.jsonl"):
        with open(file, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                if not line.strip():
                    continue
                where = f"{file}:{lineno}"
                try:
                    rec = json.loads(line)
                except json.JSONDecodeError as e:
                    raise IngestError(f"{where}: malformed JSON at line {lineno}: {e.msg}") from None
                if not isinstance(rec, dict):
                    raise IngestError(f"{where}: expected a JSON object at line {lineno}")
                for name in ("text", "language", "country", "register"):
                    if name not in rec:
                        raise IngestError(f"{where}: missing field {name} at line {lineno}")
                key = VarietyKey(rec["language"], rec["country"], Register.parse(rec["register"]))
                text = rec["text"]
                if not isinstance(text, str):
                    raise IngestError(f"{where}: field text is not a string at line {lineno}")
                if not text.strip():
                    if skipped is not None:
                        skipped.append(f"{where}: empty text")
                    continue
                yield RawDocument(text, key, where)


def _read_tree(root: Path, skipped: list | None) -> Iterator[RawDocument]:
    if root.is_file():
        raise IngestError(f"{root}: tree format needs a directory")
    for file in _corpus_files(root, "*.txt"):
        parts = file.relative_to(root).parts
        if len(parts) != 4:
            raise IngestError(f"{file}: expected layout language/country/register/NAME.txt")
        key = VarietyKey(parts[0], parts[1], Register.parse(parts[2]))
        with open(file, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                if not line.strip():
                    if skipped is not None:
                        skipped.append(f"{file}:{lineno}: blank line")
                    continue
                yield RawDocument(line.rstrip("\n"), key, f"{file}:{lineno}")


def read_corpus(path, format: str = "jsonl", skipped: list | None = None) -> Iterator[RawDocument]:
    """Stream documents in a deterministic order.

    Blank documents are not yielded; if ``skipped`` is given, one record per
    skipped line is appended to it.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"corpus path does not exist: {path}")
    if format == "jsonl":
        return _read_jsonl(path, skipped)
    if format == "tree":
        return _read_tree(path, skipped)
    raise IngestError(f"unknown corpus format {format!r}")


# --------------------------------------------------------------------------
# chunking

SampleSink = Callable[[Sample, list], None]


@dataclass
class _CellState:
    total: int = 0
    emitted: int = 0
    fill: int = 0
    segments: list = field(default_factory=list)


def chunk_into_samples(docs: Iterable[RawDocument], sample_size: int = 1_000_000,
                       cap: int = 20, sink: SampleSink | None = None,
                       tokenizer: Callable[[str], list[str]] = tokenize) -> SampleManifest:
    """Pack each cell's tokens, in stream order, into samples of exactly
    ``sample_size`` tokens.

    The trailing partial sample is discarded and only the first ``cap``
    samples of a cell are kept. Each retained sample is handed to ``sink``
    together with its token segments (one list per contributing document
    fragment) as soon as it is complete.
    """
    if sample_size < 1 or cap < 1:
        raise ValueError("sample_size and cap must be >= 1")
    cells: dict[VarietyKey, _CellState] = {}
    samples: list[Sample] = []

    for doc in docs:
        tokens = tokenizer(doc.text)
        st = cells.setdefault(doc.key, _CellState())
        st.total += len(tokens)
        pos = 0
        while pos < len(tokens):
            take = min(len(tokens) - pos, sample_size - st.fill)
            if st.emitted < cap:
                st.segments.append(tokens[pos:pos + take])
            st.fill += take
            pos += take
            if st.fill == sample_size:
                if st.emitted < cap:
                    sample = Sample(doc.key, st.emitted, sample_size,
                                    _counts_stem(doc.key, st.emitted))
                    samples.append(sample)
                    if sink is not None:
                        sink(sample, st.segments)
                st.emitted += 1
                st.fill = 0
                st.segments = []

    reports, warnings = [], []
    for key in sorted(cells):
        st = cells[key]
        retained = min(st.emitted, cap)
        reports.append(CellReport(key, st.total, st.emitted, retained, st.total % sample_size))
        if st.emitted == 0:
            warnings.append(f"{key}: {st.total} tokens, no complete sample of {sample_size}; cell omitted")
        elif st.emitted > cap:
            warnings.append(f"{key}: kept first {cap} of {st.emitted} samples")
    for w in warnings:
        log.warning(w)
    return SampleManifest(sorted(samples), sample_size=sample_size, cap=cap,
                          cells=reports, warnings=warnings)


def _counts_stem(key: VarietyKey, index: int) -> str:
    return f"counts/{key.language}/{key.country}/{key.register.value}/{index:04d}"


# --------------------------------------------------------------------------
# counts files

def counts_to_tsv(counts: FeatureCounts, tokens: int) -> tuple[str, str]:
    """Render counts as TSV; returns (text, checksum of the body)."""
    body = "".join(f"{f}\t{c}\n" for f, c in counts.sorted_items())
    checksum = hashlib.sha256(body.encode("utf-8", "surrogatepass")).hexdigest()
    header = f"#kind={counts.kind.value} tokens={tokens} checksum={checksum}\n"
    return header + body, checksum


def counts_from_tsv(text: str, where: str = "counts file") -> tuple[FeatureCounts, int, str]:
    header, sep, body = text.partition("\n")
    if not header.startswith("#") or not sep:
        raise ChecksumError(f"{where}: missing header line")
    try:
        meta = dict(part.split("=", 1) for part in header[1:].split())
        kind, tokens, checksum = FeatureKind.parse(meta["kind"]), int(meta["tokens"]), meta["checksum"]
    except (KeyError, ValueError) as e:
        raise ChecksumError(f"{where}: malformed header {header!r}") from e
    if hashlib.sha256(body.encode("utf-8", "surrogatepass")).hexdigest() != checksum:
        raise ChecksumError(f"{where}: checksum mismatch")
    counts = {}
    for line in body.split("\n"):
        if line:
            feat, _, c = line.rpartition("\t")
            counts[feat] = int(c)
    return FeatureCounts(kind, counts), tokens, checksum


def write_text_atomic(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "w", encoding="utf-8", errors="surrogatepass", newline="") as fh:
        fh.write(text)
    os.replace(tmp, path)


def store_counts(root, sample: Sample, counts: FeatureCounts) -> str:
    """Write one sample's counts under ``root``; returns the body checksum."""
    if not counts.counts:
        raise ValueError(f"refusing to store empty counts for sample {sample.id}")
    text, checksum = counts_to_tsv(counts, sample.token_count)
    write_text_atomic(Path(root) / sample.counts_file(counts.kind), text)
    return checksum


def load_counts(root, sample: Sample, kind: FeatureKind | str) -> FeatureCounts:
    kind = FeatureKind.parse(kind)
    path = Path(root) / sample.counts_file(kind)
    try:
        text = path.read_text(encoding="utf-8", errors="surrogatepass")
    except FileNotFoundError:
        raise IngestError(
            f"counts file for sample ({sample.key}, {sample.index}) not found: {path}") from None
    counts, _, checksum = counts_from_tsv(text, str(path))
    expected = sample.checksum(kind)
    if expected is not None and checksum != expected:
        raise ChecksumError(f"{path}: checksum differs from the manifest")
    if counts.kind != kind:
        raise IngestError(f"{path}: holds {counts.kind.value} counts, expected {kind.value}")
    return counts


def store_and_load_sample(root, sample: Sample, counts: FeatureCounts) -> FeatureCounts:
    store_counts(root, sample, counts)
    return load_counts(root, sample, counts.kind)


def write_manifest(path, manifest: SampleManifest) -> None:
    write_text_atomic(Path(path), manifest.to_json())


def load_manifest(path) -> SampleManifest:
    return SampleManifest.from_json(Path(path).read_text(encoding="utf-8"))

