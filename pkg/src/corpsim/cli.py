"""Command-line entry point.

Exit codes: 0 success, 1 runtime failure, 2 usage or configuration error.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import sys
from pathlib import Path

from .config import CONFIG_KEYS, EXPERIMENT_IDS, ConfigError, ExperimentConfig, RunConfig, load_config
from .features import (FeatureKind, FeatureKindError, build_vocabulary, count_features, project,
                       tokenize, vocabulary_from_tsv)
from .ingest import ChecksumError, IngestError, counts_from_tsv, counts_to_tsv, write_text_atomic
from .pipeline import WorkspaceConflict, WorkspaceLocked, run_pipeline, verify_workspace
from .similarity import UndefinedCorrelationError, chi_square_distance, spearman_similarity
from .synth import SynthError, SynthSpec, generate_synthetic_corpus

log = logging.getLogger("corpsim")

EXIT_OK, EXIT_RUNTIME, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: {message}")


_HELP = {
    "corpus": "corpus file (jsonl) or directory (jsonl files or lang/country/register tree)",
    "corpus_format": "jsonl or tree",
    "workspace": "directory holding manifest, counts and vocabularies",
    "output": "directory for CSV/JSON reports",
    "kinds": "comma-separated feature kinds (word,char3)",
    "focus_kind": "feature kind used from exp3 onward",
    "experiments": "comma-separated experiment ids",
    "workers": "parallel workers for counting and scoring",
}


def _add_config_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="flat key = value config file; flags override it")
    p.add_argument("--force", action="store_true", help="overwrite outputs built from another config")
    group = p.add_argument_group("config overrides")
    for key in CONFIG_KEYS:
        group.add_argument(f"--{key.replace('_', '-')}", dest=key, default=None, metavar="V",
                           help=_HELP.get(key, f"ExperimentConfig.{key}"))


def _config(args) -> RunConfig:
    overrides = {k: getattr(args, k) for k in CONFIG_KEYS if getattr(args, k, None) is not None}
    return load_config(args.config, overrides)


def _check_corpus(cfg: RunConfig) -> None:
    if not cfg.corpus:
        raise ConfigError("no corpus given (set corpus in the config or pass --corpus)")
    if not Path(cfg.corpus).exists():
        raise ConfigError(f"corpus path does not exist: {cfg.corpus}")


def _print_reports(reports: dict, output: str) -> None:
    for exp_id in sorted(reports):
        r = reports[exp_id]
        print(f"{exp_id}: {len(r.rows)} rows -> {Path(output) / (exp_id + '.csv')}")
        for w in r.warnings:
            print(f"  warning: {w}")


# -- subcommands ---------------------------------------------------------

def cmd_run(args) -> int:
    cfg = _config(args)
    _check_corpus(cfg)
    _print_reports(run_pipeline(cfg, force=args.force), cfg.output)
    return EXIT_OK


def cmd_ingest(args) -> int:
    cfg = _config(args)
    _check_corpus(cfg)
    run_pipeline(cfg, force=args.force, stages=("ingest",))
    print(f"manifest written to {Path(cfg.workspace) / 'manifest.json'}")
    return EXIT_OK


def cmd_vocab(args) -> int:
    cfg = _config(args)
    run_pipeline(cfg, force=args.force, stages=("vocab",))
    print(f"vocabularies written to {Path(cfg.workspace) / 'vocab'}")
    return EXIT_OK


def _experiment_ids(values: list[str]) -> list[str]:
    ids = [v for chunk in values for v in chunk.split(",") if v]
    unknown = [i for i in ids if i not in EXPERIMENT_IDS]
    if unknown or not ids:
        raise ConfigError(f"unknown experiment ids: {', '.join(unknown) or '(none given)'}; "
                          f"choose from {', '.join(EXPERIMENT_IDS)}")
    return list(dict.fromkeys(ids))


def cmd_exp(args) -> int:
    cfg = _config(args)
    ids = _experiment_ids(args.ids)
    _print_reports(run_pipeline(cfg, force=args.force, stages=("experiments",), experiments=ids),
                   cfg.output)
    return EXIT_OK


def cmd_geo(args) -> int:
    cfg = _config(args)
    reports = run_pipeline(cfg, force=args.force, stages=("experiments",), experiments=["exp3", "geo"])
    geo = reports["geo"]
    for row in geo.rows:
        print(f"{row['country']}\t{row['n_languages']}\t{row['mean']:.4f}")
    return EXIT_OK


def _read_text_file(path: str) -> str:
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"file not found: {p}")
    return p.read_text(encoding="utf-8")


def cmd_count(args) -> int:
    kind = FeatureKind.parse(args.kind)
    text = _read_text_file(args.file)
    docs = [line for line in text.splitlines() if line.strip()]
    counts = count_features(docs, kind)
    tokens = sum(len(tokenize(d)) for d in docs)
    body, _ = counts_to_tsv(counts, tokens)
    if args.out:
        write_text_atomic(Path(args.out), body)
    else:
        sys.stdout.write(body)
    return EXIT_OK


def _load_counts_or_text(path: str, kind: FeatureKind):
    """A counts TSV written by ``count`` or ingest, or plain text (one
    document per line)."""
    text = _read_text_file(path)
    if text.startswith("#kind="):
        counts, _, _ = counts_from_tsv(text, path)
        if counts.kind is not kind:
            raise ConfigError(f"{path} holds {counts.kind.value} counts, not {kind.value}")
        return counts
    return count_features([line for line in text.splitlines() if line.strip()], kind)


def cmd_compare(args) -> int:
    kind = FeatureKind.parse(args.kind)
    a = _load_counts_or_text(args.a, kind)
    b = _load_counts_or_text(args.b, kind)
    if args.vocab:
        vocab = vocabulary_from_tsv(_read_text_file(args.vocab))
        if vocab.kind is not kind:
            raise ConfigError(f"vocabulary {args.vocab} is for {vocab.kind.value}, not {kind.value}")
    else:
        vocab = build_vocabulary([a, b], k=args.k)
    va, vb = project(a, vocab, args.a), project(b, vocab, args.b)
    result = {"kind": kind.value, "features": len(vocab.features)}
    try:
        result["spearman"] = spearman_similarity(va, vb)
    except UndefinedCorrelationError as e:
        result["spearman"] = None
        result["warning"] = str(e)
    result["chi_square"] = chi_square_distance(va, vb)
    print(json.dumps(result, sort_keys=True))
    return EXIT_OK


def cmd_synth(args) -> int:
    fields = {f.name for f in dataclasses.fields(SynthSpec)}
    values = {k: getattr(args, k) for k in fields if getattr(args, k, None) is not None}
    spec = SynthSpec(**values)
    path = generate_synthetic_corpus(spec, args.out)
    print(f"wrote {path} ({len(spec.keys())} cells)")
    return EXIT_OK


def cmd_verify(args) -> int:
    problems = verify_workspace(args.workspace, args.output)
    for p in problems:
        print(p)
    if problems:
        print(f"{len(problems)} problem(s) found", file=sys.stderr)
        return EXIT_RUNTIME
    print("ok")
    return EXIT_OK


# -- parser --------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="corpsim", description="Frequency-based corpus similarity experiments.")
    ap.add_argument("-q", "--quiet", action="store_true", help="only log warnings and errors")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("run", help="ingest, build vocabularies and run the selected experiments")
    _add_config_flags(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("ingest", help="chunk the corpus into samples and count features")
    _add_config_flags(p)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("vocab", help="build per-language vocabularies from an ingested workspace")
    _add_config_flags(p)
    p.set_defaults(func=cmd_vocab)

    p = sub.add_parser("exp", help="run experiments against a prepared workspace")
    p.add_argument("ids", nargs="+", help=f"experiment ids ({', '.join(EXPERIMENT_IDS)})")
    _add_config_flags(p)
    p.set_defaults(func=cmd_exp)

    p = sub.add_parser("geo", help="per-country cross-register averages")
    _add_config_flags(p)
    p.set_defaults(func=cmd_geo)

    p = sub.add_parser("count", help="count features of a text file (one document per line)")
    p.add_argument("file")
    p.add_argument("--kind", default="char3")
    p.add_argument("--out", help="write the counts TSV here instead of stdout")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("compare", help="Spearman and chi-square between two texts or counts files")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--kind", default="char3")
    p.add_argument("--vocab", help="vocabulary TSV to project onto (default: top-k of A+B)")
    p.add_argument("--k", type=int, default=ExperimentConfig.vocab_k)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("synth", help="generate a synthetic Zipf corpus with ground truth")
    p.add_argument("--out", required=True, help="output directory")
    for f in dataclasses.fields(SynthSpec):
        flag = f"--{f.name.replace('_', '-')}"
        if f.name == "copy_register":
            p.add_argument(flag, dest=f.name, action="store_true", default=None)
        elif f.name in ("zipf_s", "variety_divergence", "register_divergence", "rank_swap"):
            p.add_argument(flag, dest=f.name, type=float, default=None)
        else:
            p.add_argument(flag, dest=f.name, type=int, default=None)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("verify", help="re-check checksums and digests in a workspace")
    p.add_argument("--workspace", default=RunConfig.workspace)
    p.add_argument("--output", help="also check reports in this directory")
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as e:
        print(e, file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=logging.WARNING if args.quiet else logging.INFO,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (ConfigError, FeatureKindError, SynthError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (WorkspaceConflict, WorkspaceLocked, IngestError, ChecksumError, FileNotFoundError,
            OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
