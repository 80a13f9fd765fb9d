"""Run configuration: dataclasses, flat key=value files and digests."""
from __future__ import annotations

import dataclasses
import hashlib
import json
from dataclasses import dataclass, field, fields
from pathlib import Path

from .features import FeatureKind

# Bumped whenever tokenization or counting changes the bytes of the counts.
COUNTING_VERSION = "1"

EXPERIMENT_IDS = ("exp1", "exp2", "exp3", "exp4", "exp5", "geo")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    seed: int = 0
    pairs_exp1: int = 50
    pairs_exp2: int = 100
    pairs_exp3: int = 100
    pairs_exp4: int = 50
    vocab_k: int = 100_000
    sample_size: int = 1_000_000
    cap: int = 20
    alpha: float = 0.05

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if f.name == "seed":
                if not 0 <= value < 2 ** 64:
                    raise ConfigError("seed must be a non-negative 64-bit integer")
            elif f.name == "alpha":
                if not 0 < value < 1:
                    raise ConfigError("alpha must lie in (0, 1)")
            elif value < 1:
                raise ConfigError(f"{f.name} must be >= 1")


@dataclass(frozen=True)
class RunConfig:
    corpus: str = ""
    corpus_format: str = "jsonl"
    workspace: str = "workspace"
    output: str = "reports"
    kinds: tuple[FeatureKind, ...] = (FeatureKind.WORD, FeatureKind.CHAR3)
    focus_kind: FeatureKind = FeatureKind.CHAR3
    experiments: tuple[str, ...] = EXPERIMENT_IDS
    workers: int = 1
    experiment: ExperimentConfig = field(default_factory=ExperimentConfig)

    def __post_init__(self):
        if self.corpus_format not in ("jsonl", "tree"):
            raise ConfigError(f"corpus_format must be jsonl or tree, not {self.corpus_format!r}")
        unknown = set(self.experiments) - set(EXPERIMENT_IDS)
        if unknown:
            raise ConfigError(f"unknown experiments: {', '.join(sorted(unknown))}")
        if self.focus_kind not in self.kinds:
            raise ConfigError(f"focus_kind {self.focus_kind.value} is not among kinds")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")

    # -- digests ----------------------------------------------------------
    # Paths, worker count and experiment selection do not change results,
    # so they stay out of every digest.

    def ingest_params(self) -> dict:
        e = self.experiment
        return {"counting_version": COUNTING_VERSION, "corpus_format": self.corpus_format,
                "sample_size": e.sample_size, "cap": e.cap,
                "kinds": sorted(k.value for k in self.kinds)}

    def analysis_params(self) -> dict:
        d = dataclasses.asdict(self.experiment)
        d["focus_kind"] = self.focus_kind.value
        return d


def digest(*parts) -> str:
    blob = json.dumps(parts, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


# --------------------------------------------------------------------------
# flat key=value files

_RUN_KEYS = {f.name for f in fields(RunConfig)} - {"experiment"}
_EXP_KEYS = {f.name for f in fields(ExperimentConfig)}
CONFIG_KEYS = tuple(sorted(_RUN_KEYS | _EXP_KEYS))


def _coerce(name: str, raw):
    if not isinstance(raw, str):
        return raw
    value = raw.strip()
    if name in ("kinds",):
        return tuple(FeatureKind.parse(v) for v in value.split(",") if v.strip())
    if name == "focus_kind":
        return FeatureKind.parse(value)
    if name == "experiments":
        return tuple(v.strip() for v in value.split(",") if v.strip())
    if name == "alpha":
        return float(value)
    if name in ("workers", "seed") or name.startswith("pairs_") or name in ("vocab_k", "sample_size", "cap"):
        return int(value.replace("_", ""))
    return value


def parse_config_text(text: str, source: str = "config") -> dict:
    values = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected key = value")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in CONFIG_KEYS:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        values[key] = value
    return values


def make_config(values: dict) -> RunConfig:
    unknown = set(values) - set(CONFIG_KEYS)
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
    try:
        coerced = {k: _coerce(k, v) for k, v in values.items() if v is not None}
        exp = ExperimentConfig(**{k: v for k, v in coerced.items() if k in _EXP_KEYS})
        return RunConfig(experiment=exp, **{k: v for k, v in coerced.items() if k in _RUN_KEYS})
    except ConfigError:
        raise
    except (TypeError, ValueError) as e:
        raise ConfigError(str(e)) from e


def load_config(path=None, overrides: dict | None = None) -> RunConfig:
    """Read a flat config file; ``overrides`` (e.g. CLI flags) win over it."""
    values = {}
    if path is not None:
        p = Path(path)
        if not p.is_file():
            raise ConfigError(f"config file not found: {p}")
        values.update(parse_config_text(p.read_text(encoding="utf-8"), str(p)))
    values.update({k: v for k, v in (overrides or {}).items() if v is not None})
    return make_config(values)


def config_to_text(cfg: RunConfig) -> str:
    flat = {
        "corpus": cfg.corpus, "corpus_format": cfg.corpus_format,
        "workspace": cfg.workspace, "output": cfg.output,
        "kinds": ",".join(k.value for k in cfg.kinds), "focus_kind": cfg.focus_kind.value,
        "experiments": ",".join(cfg.experiments), "workers": cfg.workers,
        **dataclasses.asdict(cfg.experiment),
    }
    return "".join(f"{k} = {flat[k]}\n" for k in CONFIG_KEYS)
