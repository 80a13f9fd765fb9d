"""Frequency-rank corpus similarity: Spearman rho and chi-square distance."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

if TYPE_CHECKING:
    from .features import FeatureKind


class UndefinedCorrelationError(ValueError):
    """Raised when a vector has no variation, so correlation is undefined."""


@dataclass(frozen=True, eq=False)
class FrequencyVector:
    values: np.ndarray
    vocab_ref: str
    kind: "FeatureKind"
    label: str = ""

    def __post_init__(self):
        values = np.asarray(self.values)
        if values.ndim != 1:
            raise ValueError("frequency vector must be one-dimensional")
        if values.size and values.min() < 0:
            raise ValueError("frequencies must be non-negative")
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return self.values.size

    @property
    def all_zero(self) -> bool:
        return not self.values.any()

    @property
    def total(self) -> int:
        return int(self.values.sum())


def rank_with_ties(values) -> np.ndarray:
    """Rank 1 for the largest value; ties share the mean of the ranks they span.

    >>> rank_with_ties([5, 3, 3, 1]).tolist()
    [1.0, 2.5, 2.5, 4.0]
    """
    x = np.asarray(values)
    if x.size == 0:
        return np.empty(0, dtype=np.float64)
    order = np.argsort(x, kind="stable")[::-1]
    ordered = x[order]
    new_group = np.empty(x.size, dtype=bool)
    new_group[0] = True
    np.not_equal(ordered[1:], ordered[:-1], out=new_group[1:])
    group = np.cumsum(new_group) - 1
    bounds = np.flatnonzero(np.append(new_group, True))
    mean_rank = (bounds[:-1] + bounds[1:] + 1) / 2.0
    ranks = np.empty(x.size, dtype=np.float64)
    ranks[order] = mean_rank[group]
    return ranks


@dataclass(frozen=True, eq=False)
class RankedVector:
    """Centered tie-averaged ranks of one frequency vector, ready for repeated
    correlation against others."""

    centered: np.ndarray
    norm: float
    vocab_ref: str = ""
    label: str = ""

    @classmethod
    def from_values(cls, values, vocab_ref: str = "", label: str = "") -> "RankedVector":
        ranks = rank_with_ties(values)
        # mean of 1..n ranks is exactly (n+1)/2 whatever the ties
        centered = ranks - (ranks.size + 1) / 2.0
        return cls(centered, float(np.sum(centered * centered)), vocab_ref, label)

    @classmethod
    def from_vector(cls, v: FrequencyVector) -> "RankedVector":
        return cls.from_values(v.values, v.vocab_ref, v.label)


def ranked_correlation(a: RankedVector, b: RankedVector) -> float:
    if a.centered.size != b.centered.size:
        raise ValueError(f"length mismatch: {a.centered.size} vs {b.centered.size}")
    if a.vocab_ref != b.vocab_ref:
        raise ValueError(f"vectors use different vocabularies: {a.vocab_ref} vs {b.vocab_ref}")
    for r in (a, b):
        if r.norm == 0.0:
            name = r.label or "<unnamed>"
            raise UndefinedCorrelationError(
                f"correlation undefined: sample {name} has constant frequencies")
    rho = float(np.sum(a.centered * b.centered)) / math.sqrt(a.norm * b.norm)
    return min(1.0, max(-1.0, rho))


def spearman_similarity(a: FrequencyVector, b: FrequencyVector) -> float:
    """Spearman rho between the frequency ranks of two samples (higher = more
    similar). Unattested features stay in the vector as zeros tied at the
    bottom."""
    if len(a) != len(b):
        raise ValueError(f"length mismatch: {len(a)} vs {len(b)}")
    if len(a) < 2:
        raise ValueError("need at least two features")
    return ranked_correlation(RankedVector.from_vector(a), RankedVector.from_vector(b))


def chi_square_distance(a: FrequencyVector, b: FrequencyVector) -> float:
    """Two-sample chi-square statistic over the shared features (lower = more
    similar). Features unattested in both samples are skipped."""
    if a.vocab_ref != b.vocab_ref or len(a) != len(b):
        raise ValueError("vectors must share a vocabulary")
    oa = a.values.astype(np.float64)
    ob = b.values.astype(np.float64)
    na, nb = oa.sum(), ob.sum()
    if na <= 0 or nb <= 0:
        raise ValueError("chi-square needs non-zero totals in both samples")
    both = oa + ob
    keep = both > 0
    oa, ob, both = oa[keep], ob[keep], both[keep]
    ea = both * (na / (na + nb))
    eb = both * (nb / (na + nb))
    return float(np.sum((oa - ea) ** 2 / ea) + np.sum((ob - eb) ** 2 / eb))
