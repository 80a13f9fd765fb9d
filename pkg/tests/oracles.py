"""Independent reference implementations used only by the tests.

Deliberately naive: plain Python loops, no numpy, no code shared with corpsim.
"""
from __future__ import annotations

import itertools
import math
from fractions import Fraction


def naive_ranks(values):
    """Average ranks, rank 1 for the largest value."""
    order = sorted(range(len(values)), key=lambda i: -values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        avg = (i + 1 + j + 1) / 2
        for k in range(i, j + 1):
            ranks[order[k]] = avg
        i = j + 1
    return ranks


def naive_pearson(x, y):
    n = len(x)
    mx, my = sum(x) / n, sum(y) / n
    sxy = sum((a - mx) * (b - my) for a, b in zip(x, y))
    sxx = sum((a - mx) ** 2 for a in x)
    syy = sum((b - my) ** 2 for b in y)
    return sxy / math.sqrt(sxx * syy)


def naive_spearman(a, b):
    return naive_pearson(naive_ranks(a), naive_ranks(b))


def naive_chi_square(a, b):
    """Two-sample chi-square over a 2 x n contingency table, zero-sum columns skipped."""
    ta, tb = sum(a), sum(b)
    n = ta + tb
    total = 0.0
    for x, y in zip(a, b):
        col = x + y
        if col == 0:
            continue
        for obs, row in ((x, ta), (y, tb)):
            exp = row * col / n
            total += (obs - exp) ** 2 / exp
    return total


def exact_permutation_p(xs, ys):
    """Two-sided p-value for Spearman rho by enumerating all n! pairings,
    in exact rational arithmetic."""
    rx = [Fraction(r).limit_denominator(4) for r in naive_ranks(xs)]
    ry = [Fraction(r).limit_denominator(4) for r in naive_ranks(ys)]

    def rho(u, v):
        n = len(u)
        mu, mv = sum(u) / n, sum(v) / n
        return sum((p - mu) * (q - mv) for p, q in zip(u, v))  # denominator is permutation-invariant

    observed = abs(rho(rx, ry))
    perms = list(itertools.permutations(ry))
    hits = sum(1 for p in perms if abs(rho(rx, p)) >= observed)
    return Fraction(hits, len(perms))
