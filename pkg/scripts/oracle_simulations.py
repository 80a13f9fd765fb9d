#!/usr/bin/env python3
"""Monte-Carlo oracles for the synthetic-corpus thresholds frozen in tests/.

Independent of corpsim's counting, similarity and experiment code: trigrams
are counted with collections.Counter, correlation is scipy.stats.spearmanr,
pairs are drawn with random.Random and the t-test is scipy's Welch variant.
Only the synthetic generator (the input being fed to both paths) is shared.

    python scripts/oracle_simulations.py zipf-floor
    python scripts/oracle_simulations.py exp3-band
    python scripts/oracle_simulations.py exp4-null
    python scripts/oracle_simulations.py desk --replicates 20
"""
from __future__ import annotations

import argparse
import itertools
import random
import statistics
import sys
from collections import Counter, defaultdict

from scipy import stats

from corpsim.synth import SynthSpec, iter_synthetic_documents


def samples_from_spec(spec: SynthSpec, sample_size: int):
    """Cut each cell's whitespace tokens into consecutive samples (synthetic
    text is lowercase and punctuation-free, so splitting is tokenization)."""
    fill = defaultdict(list)
    cur = defaultdict(list)
    count = defaultdict(int)
    for doc in iter_synthetic_documents(spec):
        toks = doc.text.split()
        while toks:
            take = min(len(toks), sample_size - count[doc.key])
            cur[doc.key].append(toks[:take])
            count[doc.key] += take
            toks = toks[take:]
            if count[doc.key] == sample_size:
                fill[doc.key].append(cur[doc.key])
                cur[doc.key], count[doc.key] = [], 0
    return dict(fill)


def trigram_counts(segments) -> Counter:
    c = Counter()
    for seg in segments:
        s = " " + " ".join(seg) + " "
        c.update(s[i:i + 3] for i in range(len(s) - 2))
    return c


def word_counts(segments) -> Counter:
    c = Counter()
    for seg in segments:
        c.update(seg)
    return c


def vocab(counters, k):
    total = Counter()
    for c in counters:
        total.update(c)
    return [f for f, _ in sorted(total.items(), key=lambda x: (-x[1], x[0]))[:k]]


def rho(ca, cb, feats):
    a = [ca.get(f, 0) for f in feats]
    b = [cb.get(f, 0) for f in feats]
    return stats.spearmanr(a, b).statistic


def draw(pool, n, rng):
    return pool if len(pool) <= n else rng.sample(pool, n)


def zipf_floor(args):
    """Two 1M-token samples from one Zipf(1.1) law over 100k types, word kind."""
    vals = []
    for rep in range(args.replicates):
        spec = SynthSpec(languages=1, varieties=1, samples_per_cell=2, sample_size=1_000_000,
                         vocab_size=100_000, zipf_s=1.1, seed=rep)
        cells = samples_from_spec(spec, 1_000_000)
        (tw,) = [v for k, v in cells.items() if k.register.value == "TW"]
        a, b = word_counts(tw[0]), word_counts(tw[1])
        vals.append(rho(a, b, vocab([a, b], 100_000)))
        print(f"rep {rep}: rho={vals[-1]:.6f}", flush=True)
    print(f"min={min(vals):.6f} mean={statistics.mean(vals):.6f} max={max(vals):.6f}")


def exp3_band(args):
    """Shared Zipf base, independent log-normal register noise (sigma 0.5)."""
    means = []
    for rep in range(args.replicates):
        spec = SynthSpec(languages=1, varieties=1, samples_per_cell=3, sample_size=50_000,
                         vocab_size=10_000, register_divergence=0.5, seed=rep)
        cells = samples_from_spec(spec, 50_000)
        counts = {k: [trigram_counts(s) for s in v] for k, v in cells.items()}
        feats = vocab([c for v in counts.values() for c in v], 20_000)
        tw = next(v for k, v in counts.items() if k.register.value == "TW")
        cc = next(v for k, v in counts.items() if k.register.value == "CC")
        means.append(statistics.mean(rho(a, b, feats) for a in tw for b in cc))
        print(f"rep {rep}: mean cross-register rho={means[-1]:.6f}", flush=True)
    print(f"min={min(means):.6f} mean={statistics.mean(means):.6f} max={max(means):.6f}")


def exp4_null(args):
    """All varieties drawn from one distribution: how often is Welch significant?"""
    tests = sig = 0
    for rep in range(args.replicates):
        spec = SynthSpec(languages=1, varieties=3, samples_per_cell=5, sample_size=20_000,
                         vocab_size=5_000, seed=rep)
        cells = samples_from_spec(spec, 20_000)
        counts = {(k, i): trigram_counts(s) for k, v in cells.items() for i, s in enumerate(v)}
        feats = vocab(list(counts.values()), 100_000)
        rng = random.Random(rep)
        for reg in ("TW", "CC"):
            pop = sorted((k, i) for k, i in counts if k.register.value == reg)
            pairs = list(itertools.combinations(pop, 2))
            same = [p for p in pairs if p[0][0].country == p[1][0].country]
            diff = [p for p in pairs if p[0][0].country != p[1][0].country]
            s = [rho(counts[a], counts[b], feats) for a, b in draw(same, 50, rng)]
            d = [rho(counts[a], counts[b], feats) for a, b in draw(diff, 50, rng)]
            p = stats.ttest_ind(s, d, equal_var=False).pvalue
            tests += 1
            sig += p < 0.05
            print(f"rep {rep} {reg}: p={p:.4f}", flush=True)
    print(f"significant in {sig}/{tests} tests ({100 * sig / tests:.1f}%)")


def desk(args):
    """The desk-scale reproduction setup, scored independently."""
    accs, ordering_ok, exp4_ok = [], 0, 0
    for rep in range(args.replicates):
        spec = SynthSpec(languages=2, varieties=4, samples_per_cell=5, sample_size=100_000,
                         vocab_size=20_000, variety_divergence=args.variety,
                         register_divergence=args.register, seed=rep)
        cells = samples_from_spec(spec, 100_000)
        rng = random.Random(rep)
        all_sig, all_order = True, True
        for lang in spec.language_codes():
            keys = [k for k in cells if k.language == lang]
            counts = {(k, i): trigram_counts(s) for k in keys for i, s in enumerate(cells[k])}
            feats = vocab(list(counts.values()), 20_000)
            r = lambda a, b: rho(counts[a], counts[b], feats)  # noqa: E731
            same_all, cross_all = [], []
            for country in spec.country_codes():
                ids = sorted(x for x in counts if x[0].country == country)
                pairs = list(itertools.combinations(ids, 2))
                same = [r(a, b) for a, b in draw([p for p in pairs if p[0][0] == p[1][0]], 100, rng)]
                cross = [r(a, b) for a, b in draw([p for p in pairs if p[0][0] != p[1][0]], 100, rng)]
                same_all += same
                cross_all += cross
                within = [r(a, b) for a, b in pairs if a[0] == b[0]]
                if statistics.mean(within) <= statistics.mean(cross):
                    all_order = False
            ms, mc = statistics.mean(same_all), statistics.mean(cross_all)
            ok = sum(abs(x - ms) < abs(x - mc) for x in same_all)
            ok += sum(not abs(x - ms) < abs(x - mc) for x in cross_all)
            accs.append(100 * ok / (len(same_all) + len(cross_all)))
            for reg in ("TW", "CC"):
                pop = sorted(x for x in counts if x[0].register.value == reg)
                pairs = list(itertools.combinations(pop, 2))
                s = [r(a, b) for a, b in draw([p for p in pairs if p[0][0].country == p[1][0].country], 50, rng)]
                d = [r(a, b) for a, b in draw([p for p in pairs if p[0][0].country != p[1][0].country], 50, rng)]
                all_sig &= stats.ttest_ind(s, d, equal_var=False).pvalue < 0.05
        ordering_ok += all_order
        exp4_ok += all_sig
        print(f"rep {rep}: char accuracy {accs[-2]:.1f}/{accs[-1]:.1f} exp1>exp3 {all_order} "
              f"exp4 significant {all_sig}", flush=True)
    print(f"char accuracy min={min(accs):.2f} mean={statistics.mean(accs):.2f}; "
          f"exp1>exp3 in {ordering_ok}/{args.replicates}; exp4 all significant in {exp4_ok}/{args.replicates}")


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("oracle", choices=["zipf-floor", "exp3-band", "exp4-null", "desk"])
    ap.add_argument("--replicates", type=int, default=20)
    ap.add_argument("--variety", type=float, default=0.3, help="desk: variety divergence")
    ap.add_argument("--register", type=float, default=1.0, help="desk: register divergence")
    args = ap.parse_args(argv)
    {"zipf-floor": zipf_floor, "exp3-band": exp3_band, "exp4-null": exp4_null, "desk": desk}[args.oracle](args)


if __name__ == "__main__":
    sys.exit(main())
