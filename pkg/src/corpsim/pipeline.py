"""Ingest -> counts -> vocabularies -> experiments, in memory or against an
on-disk workspace with digest-based stage skipping."""
from __future__ import annotations

import hashlib
import json
import logging
import shutil
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable, Sequence

import filelock

from . import experiments as ex
from .config import RunConfig, digest
from .features import FeatureCounts, FeatureKind, Vocabulary, build_vocabulary, count_features
from .features import vocabulary_from_tsv, vocabulary_to_tsv
from .ingest import (RawDocument, Sample, SampleManifest, chunk_into_samples, load_counts,
                     load_manifest, read_corpus, store_counts, write_manifest, write_text_atomic)
from .reports import emit_plot_data, load_report, report_paths, write_report

log = logging.getLogger(__name__)


class WorkspaceConflict(RuntimeError):
    """Existing outputs were built from a different configuration."""


class WorkspaceLocked(RuntimeError):
    pass


def count_segments(segments: Sequence[Sequence[str]], kinds: Sequence[FeatureKind]) -> dict:
    return {kind: count_features(segments, kind) for kind in kinds}


class _Counter:
    """Chunking sink that counts every retained sample, optionally in worker
    processes. Results are gathered in submission order."""

    def __init__(self, kinds, workers: int):
        self.kinds = tuple(kinds)
        self.pool = ProcessPoolExecutor(workers) if workers > 1 else None
        self.pending: list = []

    def __call__(self, sample: Sample, segments: list) -> None:
        if self.pool is None:
            self.pending.append((sample, count_segments(segments, self.kinds)))
        else:
            self.pending.append((sample, self.pool.submit(count_segments, segments, self.kinds)))

    def results(self) -> list[tuple[Sample, dict]]:
        out = [(s, r if isinstance(r, dict) else r.result()) for s, r in self.pending]
        if self.pool is not None:
            self.pool.shutdown()
        return out


def build_vocabularies(manifest: SampleManifest, loader, kinds: Sequence[FeatureKind],
                       k: int) -> dict[tuple[str, FeatureKind], Vocabulary]:
    vocabs = {}
    for lang in manifest.languages():
        samples = [s for s in sorted(manifest.samples) if s.key.language == lang]
        for kind in kinds:
            vocabs[(lang, kind)] = build_vocabulary([loader(s, kind) for s in samples], k, lang)
    return vocabs


def run_experiment_set(manifest: SampleManifest, vectors: ex.SampleVectors, cfg: RunConfig,
                       ids: Iterable[str], analysis_digest: str = "") -> dict[str, ex.ExperimentReport]:
    ids = list(ids)
    reports: dict[str, ex.ExperimentReport] = {}
    e, w = cfg.experiment, cfg.workers
    for exp_id in ("exp1", "exp2", "exp3", "exp4", "exp5"):
        if exp_id not in ids and not (exp_id == "exp3" and "geo" in ids):
            continue
        log.info("%s: running", exp_id)
        if exp_id in ("exp1", "exp2"):
            rep = ex.EXPERIMENTS[exp_id](manifest, e, vectors, kinds=cfg.kinds, workers=w)
        else:
            rep = ex.EXPERIMENTS[exp_id](manifest, e, vectors, kind=cfg.focus_kind, workers=w)
        rep.config_digest = analysis_digest
        reports[exp_id] = rep
    if "geo" in ids:
        reports["geo"] = ex.geo_aggregate(reports["exp3"])
    return reports


@dataclass
class InMemoryRun:
    manifest: SampleManifest
    counts: dict[tuple[str, FeatureKind], FeatureCounts]
    vocabs: dict[tuple[str, FeatureKind], Vocabulary]
    reports: dict[str, ex.ExperimentReport]

    @property
    def vectors(self) -> ex.SampleVectors:
        return ex.SampleVectors(self.vocabs, lambda s, k: self.counts[(s.id, k)])


def run_in_memory(docs: Iterable[RawDocument], cfg: RunConfig,
                  experiments: Iterable[str] | None = None) -> InMemoryRun:
    """Whole analysis without touching disk; used by tests and scripts."""
    e = cfg.experiment
    sink = _Counter(cfg.kinds, cfg.workers)
    manifest = chunk_into_samples(docs, e.sample_size, e.cap, sink=sink)
    counts = {(s.id, k): c for s, per in sink.results() for k, c in per.items()}
    loader = lambda s, k: counts[(s.id, k)]  # noqa: E731
    vocabs = build_vocabularies(manifest, loader, cfg.kinds, e.vocab_k)
    vectors = ex.SampleVectors(vocabs, loader)
    ids = cfg.experiments if experiments is None else tuple(experiments)
    reports = run_experiment_set(manifest, vectors, cfg, ids)
    return InMemoryRun(manifest, counts, vocabs, reports)


# --------------------------------------------------------------------------
# workspace

def corpus_fingerprint(path, fmt: str) -> str:
    root = Path(path)
    files = [root] if root.is_file() else sorted(
        p for p in root.rglob("*.jsonl" if fmt == "jsonl" else "*.txt") if p.is_file())
    h = hashlib.sha256()
    for f in files:
        rel = f.name if root.is_file() else f.relative_to(root).as_posix()
        h.update(rel.encode("utf-8") + b"\0")
        with open(f, "rb") as fh:
            for chunk in iter(lambda: fh.read(1 << 20), b""):
                h.update(chunk)
        h.update(b"\0")
    return h.hexdigest()


@dataclass
class Digests:
    ingest: str
    vocab: str
    analysis: str


def stage_digests(cfg: RunConfig, fingerprint: str) -> Digests:
    ingest = digest("ingest", cfg.ingest_params(), fingerprint)
    vocab = digest("vocab", ingest, cfg.experiment.vocab_k)
    analysis = digest("analysis", vocab, cfg.analysis_params())
    return Digests(ingest, vocab, analysis)


class Workspace:
    def __init__(self, root):
        self.root = Path(root)

    manifest_path = property(lambda self: self.root / "manifest.json")
    vocab_dir = property(lambda self: self.root / "vocab")
    vocab_index = property(lambda self: self.root / "vocab" / "index.json")
    failed_path = property(lambda self: self.root / "FAILED.json")

    def lock(self) -> filelock.FileLock:
        self.root.mkdir(parents=True, exist_ok=True)
        return filelock.FileLock(str(self.root / ".lock"), timeout=0)

    def manifest(self) -> SampleManifest:
        return load_manifest(self.manifest_path)

    def loader(self):
        return lambda s, k: load_counts(self.root, s, k)

    def vocabularies(self, manifest: SampleManifest, kinds) -> dict:
        vocabs = {}
        for lang in manifest.languages():
            for kind in kinds:
                path = self.vocab_dir / f"{lang}.{kind.value}.tsv"
                vocabs[(lang, kind)] = vocabulary_from_tsv(path.read_text(encoding="utf-8"))
        return vocabs


def _existing_digest(path: Path, field: str = "config_digest") -> str | None:
    if not path.exists():
        return None
    try:
        return json.loads(path.read_text(encoding="utf-8")).get(field)
    except (json.JSONDecodeError, AttributeError):
        return "<unreadable>"


def stage_ingest(cfg: RunConfig, ws: Workspace, d: Digests, force: bool) -> SampleManifest:
    found = _existing_digest(ws.manifest_path)
    if found == d.ingest:
        log.info("ingest: up to date (digest %s), skipping", d.ingest[:12])
        return ws.manifest()
    if found is not None and not force:
        raise WorkspaceConflict(
            f"workspace {ws.root} was built with a different configuration "
            f"(digest {found[:12]} != {d.ingest[:12]}); rerun with --force to overwrite")
    for sub in ("counts", "vocab"):
        shutil.rmtree(ws.root / sub, ignore_errors=True)
    ws.manifest_path.unlink(missing_ok=True)
    log.info("ingest: reading %s", cfg.corpus)
    skipped: list[str] = []
    e = cfg.experiment
    sink = _Counter(cfg.kinds, cfg.workers)
    manifest = chunk_into_samples(read_corpus(cfg.corpus, cfg.corpus_format, skipped),
                                  e.sample_size, e.cap, sink=sink)
    stored = []
    for sample, per_kind in sink.results():
        sums = tuple(sorted((k.value, store_counts(ws.root, sample, c)) for k, c in per_kind.items()))
        stored.append(replace(sample, checksums=sums))
    manifest.samples = sorted(stored)
    manifest.config_digest = d.ingest
    if skipped:
        manifest.warnings.append(f"{len(skipped)} blank documents skipped (first: {skipped[0]})")
    write_manifest(ws.manifest_path, manifest)
    log.info("ingest: %d samples in %d cells", len(manifest.samples), len(manifest.by_key()))
    return manifest


def stage_vocab(cfg: RunConfig, ws: Workspace, d: Digests, manifest: SampleManifest) -> dict:
    if _existing_digest(ws.vocab_index) == d.vocab:
        log.info("vocab: up to date (digest %s), skipping", d.vocab[:12])
        return ws.vocabularies(manifest, cfg.kinds)
    shutil.rmtree(ws.vocab_dir, ignore_errors=True)
    vocabs = build_vocabularies(manifest, ws.loader(), cfg.kinds, cfg.experiment.vocab_k)
    files = {}
    for (lang, kind), vocab in sorted(vocabs.items()):
        text = vocabulary_to_tsv(vocab)
        name = f"{lang}.{kind.value}.tsv"
        write_text_atomic(ws.vocab_dir / name, text)
        files[name] = hashlib.sha256(text.encode("utf-8", "surrogatepass")).hexdigest()
    index = {"config_digest": d.vocab, "ingest_digest": d.ingest, "k": cfg.experiment.vocab_k,
             "files": files}
    write_text_atomic(ws.vocab_index, json.dumps(index, indent=1, sort_keys=True) + "\n")
    log.info("vocab: %d vocabularies", len(vocabs))
    return vocabs


def stage_experiments(cfg: RunConfig, ws: Workspace, d: Digests, manifest: SampleManifest,
                      vocabs: dict, ids: Sequence[str], force: bool) -> dict:
    out = Path(cfg.output)
    upstream = {"ingest_digest": d.ingest, "vocab_digest": d.vocab}
    todo, done = [], {}
    for exp_id in ids:
        sidecar = report_paths(exp_id, out)[1]
        found = _existing_digest(sidecar)
        if found == d.analysis and all(p.exists() for p in report_paths(exp_id, out)):
            log.info("%s: up to date (digest %s), skipping", exp_id, d.analysis[:12])
            done[exp_id] = load_report(sidecar)
        elif found is not None and not force:
            raise WorkspaceConflict(f"{sidecar} was produced by a different configuration; "
                                    "rerun with --force to overwrite")
        else:
            todo.append(exp_id)
    if todo:
        vectors = ex.SampleVectors(vocabs, ws.loader())
        need = list(todo)
        if "geo" in todo and "exp3" in done:
            need.remove("geo")
        fresh = run_experiment_set(manifest, vectors, cfg, need, d.analysis)
        if "geo" in todo and "geo" not in fresh:
            fresh["geo"] = ex.geo_aggregate(done["exp3"])
            fresh["geo"].config_digest = d.analysis
        for exp_id in todo:
            write_report(fresh[exp_id], out, upstream)
            done[exp_id] = fresh[exp_id]
        if "exp3" in fresh and fresh["exp3"].rows:
            emit_plot_data(fresh["exp3"], out / "plots")
    return done


def run_pipeline(cfg: RunConfig, force: bool = False, stages: Sequence[str] = ("ingest", "vocab", "experiments"),
                 experiments: Sequence[str] | None = None) -> dict:
    """Run the selected stages against ``cfg.workspace``; returns the reports
    produced or loaded. Raises on failure after writing ``FAILED.json``."""
    ws = Workspace(cfg.workspace)
    ids = list(cfg.experiments if experiments is None else experiments)
    try:
        lock = ws.lock()
        lock.acquire()
    except filelock.Timeout:
        raise WorkspaceLocked(f"workspace {ws.root} is locked by another run") from None
    stage = "setup"
    try:
        if not Path(cfg.corpus).exists() and "ingest" in stages:
            raise FileNotFoundError(f"corpus path does not exist: {cfg.corpus}")
        fingerprint = (corpus_fingerprint(cfg.corpus, cfg.corpus_format) if "ingest" in stages
                       else _existing_digest(ws.manifest_path, "config_digest"))
        if "ingest" in stages:
            d = stage_digests(cfg, fingerprint)
        else:
            if fingerprint is None:
                raise FileNotFoundError(f"no manifest in workspace {ws.root}; run ingest first")
            d = _digests_from_manifest(cfg, fingerprint)
        stage = "ingest"
        manifest = stage_ingest(cfg, ws, d, force) if "ingest" in stages else ws.manifest()
        stage = "vocab"
        if "vocab" in stages:
            vocabs = stage_vocab(cfg, ws, d, manifest)
        elif "experiments" in stages:
            if _existing_digest(ws.vocab_index) != d.vocab:
                raise FileNotFoundError(f"vocabularies in {ws.root} are missing or stale; run vocab first")
            vocabs = ws.vocabularies(manifest, cfg.kinds)
        reports = {}
        stage = "experiments"
        if "experiments" in stages and ids:
            reports = stage_experiments(cfg, ws, d, manifest, vocabs, ids, force)
        ws.failed_path.unlink(missing_ok=True)
        return reports
    except WorkspaceConflict:
        raise
    except BaseException as e:
        write_text_atomic(ws.failed_path, json.dumps(
            {"stage": stage, "error": f"{type(e).__name__}: {e}"}, indent=1, sort_keys=True) + "\n")
        raise
    finally:
        lock.release()


def _digests_from_manifest(cfg: RunConfig, ingest_digest: str) -> Digests:
    vocab = digest("vocab", ingest_digest, cfg.experiment.vocab_k)
    return Digests(ingest_digest, vocab, digest("analysis", vocab, cfg.analysis_params()))


# --------------------------------------------------------------------------
# integrity

def verify_workspace(workspace, output=None) -> list[str]:
    """Re-check every checksum and digest link; returns the problems found."""
    ws = Workspace(workspace)
    problems = []
    try:
        manifest = ws.manifest()
    except FileNotFoundError:
        return [f"{ws.manifest_path}: missing"]
    except Exception as e:  # noqa: BLE001 - any parse failure is a finding
        return [f"{ws.manifest_path}: {e}"]
    for s in manifest.samples:
        for kind, _ in s.checksums:
            try:
                load_counts(ws.root, s, kind)
            except Exception as e:  # noqa: BLE001
                problems.append(str(e))
    vocab_digest = None
    if ws.vocab_index.exists():
        index = json.loads(ws.vocab_index.read_text(encoding="utf-8"))
        vocab_digest = index.get("config_digest")
        if index.get("ingest_digest") != manifest.config_digest:
            problems.append(f"{ws.vocab_index}: built from another manifest")
        for name, checksum in index.get("files", {}).items():
            path = ws.vocab_dir / name
            if not path.exists():
                problems.append(f"{path}: missing")
            elif hashlib.sha256(path.read_bytes()).hexdigest() != checksum:
                problems.append(f"{path}: checksum mismatch")
    if output is not None:
        out = Path(output)
        for sidecar in sorted(out.glob("*.json")):
            d = json.loads(sidecar.read_text(encoding="utf-8"))
            if "experiment_id" not in d:
                continue
            up = d.get("upstream", {})
            if up.get("ingest_digest") != manifest.config_digest or up.get("vocab_digest") != vocab_digest:
                problems.append(f"{sidecar}: produced from a different workspace state")
            expected = f"# config_digest={d['config_digest']}"
            for csv in sorted(out.glob(f"{d['experiment_id']}*.csv")):
                if csv.read_text(encoding="utf-8").split("\n", 1)[0] != expected:
                    problems.append(f"{csv}: digest differs from {sidecar.name}")
        for plot in sorted((out / "plots").glob("*.json")):
            d = json.loads(plot.read_text(encoding="utf-8"))
            exp3 = _existing_digest(out / "exp3.json")
            if exp3 is not None and d.get("config_digest") != exp3:
                problems.append(f"{plot}: digest differs from exp3.json")
    return problems
