#!/usr/bin/env python3
"""Freeze reference outputs that the test suite compares against.

Welch (t, df, p) come from scipy.stats.ttest_ind(equal_var=False), which the
package does not call. Rerun only when deliberately changing the fixtures:

    python scripts/build_reference_oracles.py
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np
from scipy import stats

OUT = Path(__file__).resolve().parents[1] / "tests" / "data"


def welch_cases(n_cases: int = 100, seed: int = 20240611) -> list[dict]:
    rng = np.random.default_rng(seed)
    cases = []
    while len(cases) < n_cases:
        na, nb = rng.integers(2, 61, size=2)
        loc = rng.uniform(-1, 1)
        a = np.round(rng.normal(loc, rng.uniform(0.05, 2), na), 6)
        b = np.round(rng.normal(loc + rng.uniform(-0.5, 0.5), rng.uniform(0.05, 2), nb), 6)
        if np.var(a) == 0 and np.var(b) == 0:
            continue
        r = stats.ttest_ind(a, b, equal_var=False)
        cases.append({"a": a.tolist(), "b": b.tolist(), "t": float(r.statistic),
                      "df": float(r.df), "p": float(r.pvalue)})
    return cases


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    path = OUT / "welch_reference.json"
    path.write_text(json.dumps({"source": f"scipy {stats.__name__} {__import__('scipy').__version__}",
                                "cases": welch_cases()}, indent=1) + "\n", encoding="utf-8")
    print(f"wrote {path}")


if __name__ == "__main__":
    main()
