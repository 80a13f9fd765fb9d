"""Significance tests and distribution summaries used by the experiments."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy import stats as sps

from .similarity import rank_with_ties

EXACT_PERMUTATION_MAX_N = 8


@dataclass(frozen=True)
class TestResult:
    statistic: float
    p_value: float
    n: tuple[int, ...]
    significant: bool
    df: float | None = None
    method: str = ""

    __test__ = False  # keep pytest from collecting this as a test class


def _ensure_varies(values: np.ndarray, name: str) -> None:
    if values.size and np.all(values == values[0]):
        raise ValueError(f"{name} is constant; correlation undefined")


def _permutation_p_value(rx: np.ndarray, ry: np.ndarray) -> float:
    # Doubled average ranks are integers, so the permutation statistic
    # n*sum(X*Y) - sum(X)*sum(Y) is compared exactly.
    x = np.rint(2 * rx).astype(np.int64)
    y = np.rint(2 * ry).astype(np.int64)
    n = x.size
    offset = int(x.sum()) * int(y.sum())
    observed = abs(n * int(x @ y) - offset)
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.int64)
    stats = np.abs(n * (y[perms] @ x) - offset)
    return float(np.count_nonzero(stats >= observed)) / perms.shape[0]


def spearman_rank_correlation(xs, ys, alpha: float = 0.05) -> TestResult:
    """Spearman correlation with a two-sided p-value.

    The p-value is exact (all n! pairings enumerated) for n <= 8 and uses the
    t approximation with n-2 degrees of freedom above that.
    """
    x = np.asarray(xs, dtype=np.float64)
    y = np.asarray(ys, dtype=np.float64)
    if x.size != y.size:
        raise ValueError(f"length mismatch: {x.size} vs {y.size}")
    if x.size < 3:
        raise ValueError("rank correlation needs at least 3 observations")
    _ensure_varies(x, "xs")
    _ensure_varies(y, "ys")
    rx, ry = rank_with_ties(x), rank_with_ties(y)
    cx, cy = rx - rx.mean(), ry - ry.mean()
    rho = float(np.sum(cx * cy) / math.sqrt(np.sum(cx * cx) * np.sum(cy * cy)))
    rho = min(1.0, max(-1.0, rho))
    n = x.size
    if n <= EXACT_PERMUTATION_MAX_N:
        p, method = _permutation_p_value(rx, ry), "exact-permutation"
    else:
        df = n - 2
        if abs(rho) >= 1.0:
            p = 0.0
        else:
            t = rho * math.sqrt(df / (1.0 - rho * rho))
            p = float(2 * sps.t.sf(abs(t), df))
        method = "t-approximation"
    p = min(1.0, max(0.0, p))
    return TestResult(rho, p, (n,), p < alpha, method=method)


def welch_t_test(a, b, alpha: float = 0.05) -> TestResult:
    """Two-sided Welch t-test with Welch-Satterthwaite degrees of freedom."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.size < 2 or b.size < 2:
        raise ValueError("each group needs at least 2 observations")
    va = a.var(ddof=1) / a.size
    vb = b.var(ddof=1) / b.size
    se2 = va + vb
    if se2 == 0:
        raise ValueError("both groups have zero variance; t statistic undefined")
    t = float((a.mean() - b.mean()) / math.sqrt(se2))
    df = float(se2 ** 2 / (va ** 2 / (a.size - 1) + vb ** 2 / (b.size - 1)))
    p = float(min(1.0, 2 * sps.t.sf(abs(t), df)))
    return TestResult(t, p, (int(a.size), int(b.size)), p < alpha, df=df, method="welch")


@dataclass(frozen=True)
class Summary:
    n: int
    mean: float
    sd: float
    min: float
    q1: float
    median: float
    q3: float
    max: float
    single_observation: bool = False

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in
                ("n", "mean", "sd", "min", "q1", "median", "q3", "max")}


def descriptive_stats(values) -> Summary:
    v = np.asarray(values, dtype=np.float64)
    if v.size == 0:
        raise ValueError("cannot summarize an empty list")
    q1, med, q3 = np.percentile(v, [25, 50, 75])
    single = v.size == 1
    return Summary(
        n=int(v.size),
        mean=float(v.mean()),
        sd=0.0 if single else float(v.std(ddof=1)),
        min=float(v.min()),
        q1=float(q1),
        median=float(med),
        q3=float(q3),
        max=float(v.max()),
        single_observation=single,
    )
