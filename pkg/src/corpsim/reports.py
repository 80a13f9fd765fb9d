"""CSV/JSON serialization of experiment reports and plot data files."""
from __future__ import annotations

import io
import json
import math
from pathlib import Path

import numpy as np

from .experiments import ExperimentReport, Table, geo_aggregate
from .ingest import write_text_atomic
from .stats import descriptive_stats


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return "" if math.isnan(value) else repr(value)
    return str(value)


def table_to_csv(columns: list[str], rows: list[dict], digest: str) -> str:
    buf = io.StringIO()
    buf.write(f"# config_digest={digest}\n")
    buf.write(",".join(columns) + "\n")
    for row in rows:
        cells = []
        for c in columns:
            text = _cell(row.get(c))
            if any(ch in text for ch in ',"\n'):
                text = '"' + text.replace('"', '""') + '"'
            cells.append(text)
        buf.write(",".join(cells) + "\n")
    return buf.getvalue()


def _jsonable(value):
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return None if math.isnan(value) else value
    if isinstance(value, np.integer):
        return int(value)
    return value


def report_to_json(report: ExperimentReport, upstream: dict | None = None) -> str:
    payload = {
        "experiment_id": report.experiment_id,
        "config_digest": report.config_digest,
        "seed": report.seed,
        "upstream": upstream or {},
        "warnings": report.warnings,
        "notes": report.notes,
        "columns": report.columns,
        "rows": [{k: _jsonable(v) for k, v in r.items()} for r in report.rows],
        "tables": {name: {"columns": t.columns,
                          "rows": [{k: _jsonable(v) for k, v in r.items()} for r in t.rows]}
                   for name, t in sorted(report.tables.items())},
        "raw": {k: [float(x) for x in v] for k, v in sorted(report.raw.items())},
        "pairs": [obs.to_json() for obs in report.observations],
    }
    return json.dumps(payload, indent=1, sort_keys=True, ensure_ascii=False) + "\n"


def report_paths(report_id: str, out_dir) -> list[Path]:
    out = Path(out_dir)
    return [out / f"{report_id}.csv", out / f"{report_id}.json"]


def write_report(report: ExperimentReport, out_dir, upstream: dict | None = None) -> list[Path]:
    """``<id>.csv`` (main rows), ``<id>_<table>.csv`` per summary table and
    the ``<id>.json`` sidecar. Returns the paths written."""
    out = Path(out_dir)
    written = []
    main_csv, sidecar = report_paths(report.experiment_id, out)
    write_text_atomic(main_csv, table_to_csv(report.columns, report.rows, report.config_digest))
    written.append(main_csv)
    for name, table in sorted(report.tables.items()):
        path = out / f"{report.experiment_id}_{name}.csv"
        write_text_atomic(path, table_to_csv(table.columns, table.rows, report.config_digest))
        written.append(path)
    write_text_atomic(sidecar, report_to_json(report, upstream))
    written.append(sidecar)
    return written


def load_report(path) -> ExperimentReport:
    """Rebuild a report from its JSON sidecar (pair observations are not
    restored)."""
    d = json.loads(Path(path).read_text(encoding="utf-8"))
    return ExperimentReport(
        experiment_id=d["experiment_id"], columns=d["columns"], rows=d["rows"],
        config_digest=d["config_digest"], seed=d.get("seed", 0), warnings=d.get("warnings", []),
        notes=d.get("notes", []),
        tables={k: Table(v["columns"], v["rows"]) for k, v in d.get("tables", {}).items()},
        raw={k: list(v) for k, v in d.get("raw", {}).items()},
    )


def emit_plot_data(report: ExperimentReport, out_dir) -> list[Path]:
    """Violin data (one JSON per language) and the per-country map table from
    a cross-register report."""
    if not report.rows:
        raise ValueError("empty report; nothing to plot")
    if not report.raw:
        raise ValueError("raw scores required to emit plot data")
    out = Path(out_dir)
    by_lang: dict[str, dict] = {}
    for row in report.rows:
        lang, country = row["language"], row["country"]
        scores = report.raw.get(f"{lang}/{country}")
        if scores is None:
            raise ValueError(f"raw scores required for {lang}-{country}")
        s = descriptive_stats(scores)
        by_lang.setdefault(lang, {})[country] = {
            "scores": [float(x) for x in scores], "n": s.n, "mean": s.mean,
            "q1": s.q1, "median": s.median, "q3": s.q3, "min": s.min, "max": s.max}
    written = []
    kind = report.rows[0].get("kind", "")
    for lang, countries in sorted(by_lang.items()):
        path = out / f"violin_{lang}.json"
        payload = {"language": lang, "kind": kind, "config_digest": report.config_digest,
                   "countries": dict(sorted(countries.items()))}
        write_text_atomic(path, json.dumps(payload, indent=1, sort_keys=True) + "\n")
        written.append(path)
    geo = geo_aggregate(report)
    path = out / "country_map.json"
    payload = {"config_digest": report.config_digest,
               "countries": {r["country"]: {"mean": r["mean"], "n_languages": r["n_languages"],
                                            "languages": r["languages"].split(";")}
                             for r in geo.rows}}
    write_text_atomic(path, json.dumps(payload, indent=1, sort_keys=True) + "\n")
    written.append(path)
    return written
