"""The five reliability experiments and per-country aggregation.

Every experiment draws its sample pairs in one seeded, sequential pass and
only then scores them, so results do not depend on the worker count.
"""
from __future__ import annotations

import enum
import hashlib
import logging
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Sequence

import numpy as np

from .config import ExperimentConfig
from .features import FeatureCounts, FeatureKind, Vocabulary, project
from .ingest import Register, Sample, SampleManifest, VarietyKey
from .similarity import (RankedVector, UndefinedCorrelationError, rank_with_ties,
                         ranked_correlation)
from .stats import descriptive_stats, spearman_rank_correlation, welch_t_test

log = logging.getLogger(__name__)

KIND_LABEL = {FeatureKind.WORD: "word", FeatureKind.CHAR3: "char"}


class Condition(str, enum.Enum):
    SAME_CELL = "same_cell"
    SAME_REGISTER_DIFFERENT_VARIETY = "same_register_different_variety"
    CROSS_REGISTER_SAME_VARIETY = "cross_register_same_variety"
    SAME_VARIETY = "same_variety"
    DIFFERENT_VARIETY = "different_variety"


def condition_holds(cond: Condition, a: VarietyKey, b: VarietyKey) -> bool:
    same_lang = a.language == b.language
    same_country = a.country == b.country
    same_reg = a.register == b.register
    if cond is Condition.SAME_CELL:
        return a == b
    if cond is Condition.SAME_REGISTER_DIFFERENT_VARIETY:
        return same_lang and same_reg and not same_country
    if cond is Condition.CROSS_REGISTER_SAME_VARIETY:
        return same_lang and same_country and not same_reg
    if cond is Condition.SAME_VARIETY:
        return same_lang and same_country
    if cond is Condition.DIFFERENT_VARIETY:
        return same_lang and not same_country
    raise ValueError(cond)


@dataclass(frozen=True)
class PairObservation:
    sample_a: Sample
    sample_b: Sample
    kind: FeatureKind
    rho: float
    condition: Condition

    def __post_init__(self):
        if (self.sample_a.key, self.sample_a.index) == (self.sample_b.key, self.sample_b.index):
            raise ValueError(f"pair of a sample with itself: {self.sample_a.id}")

    def to_json(self) -> list:
        return [self.sample_a.id, self.sample_b.id, self.kind.value, self.condition.value, self.rho]


@dataclass
class Table:
    columns: list[str]
    rows: list[dict]


@dataclass
class ExperimentReport:
    experiment_id: str
    columns: list[str]
    rows: list[dict]
    config_digest: str = ""
    seed: int = 0
    warnings: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    tables: dict[str, Table] = field(default_factory=dict)
    raw: dict[str, list[float]] = field(default_factory=dict)
    observations: list[PairObservation] = field(default_factory=list)

    def sort_rows(self) -> None:
        self.rows.sort(key=_row_key)


def _row_key(row: dict):
    return tuple(str(row.get(k, "")) for k in ("language", "country", "register", "kind"))


# --------------------------------------------------------------------------
# seeded pair sampling

def make_rng(seed: int, *labels: str) -> np.random.Generator:
    """PCG64 stream derived from the run seed and a stable label, so a cell's
    draws do not depend on which other cells exist or in what order they run."""
    words = []
    for label in labels:
        h = hashlib.sha256(label.encode("utf-8")).digest()
        words.extend(int.from_bytes(h[i:i + 4], "little") for i in range(0, 16, 4))
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=words)))


def eligible_pairs(population: Sequence[Sample], constraint: Condition) -> list[tuple[Sample, Sample]]:
    pop = sorted(set(population))
    return [(a, b) for a, b in combinations(pop, 2) if condition_holds(constraint, a.key, b.key)]


def sample_pairs(population: Sequence[Sample], n: int, constraint: Condition, seed: int,
                 *, label: str = "", warnings: list | None = None) -> list[tuple[Sample, Sample]]:
    """Draw ``n`` distinct unordered pairs satisfying ``constraint`` without
    replacement. If fewer exist, all of them are returned with a warning."""
    pool = eligible_pairs(population, constraint)
    where = label or constraint.value
    if not pool:
        if warnings is not None:
            warnings.append(f"{where}: no eligible {constraint.value} pairs; skipped")
        return []
    if len(pool) <= n:
        if len(pool) < n and warnings is not None:
            warnings.append(f"{where}: only {len(pool)} eligible {constraint.value} pairs (< {n}); using all")
        return pool
    idx = make_rng(seed, label, constraint.value).choice(len(pool), size=n, replace=False)
    return [pool[i] for i in sorted(idx.tolist())]


# --------------------------------------------------------------------------
# vectors

CountsLoader = Callable[[Sample, FeatureKind], FeatureCounts]


class SampleVectors:
    """Projects each sample's counts onto its language vocabulary and caches
    the centered ranks used for similarity."""

    def __init__(self, vocabs: dict[tuple[str, FeatureKind], Vocabulary], loader: CountsLoader):
        self.vocabs = vocabs
        self.loader = loader
        self._ranked: dict[tuple[str, FeatureKind], RankedVector] = {}

    def vocab(self, language: str, kind: FeatureKind) -> Vocabulary:
        try:
            return self.vocabs[(language, kind)]
        except KeyError:
            raise KeyError(f"no {kind.value} vocabulary for language {language}") from None

    def values(self, sample: Sample, kind: FeatureKind) -> np.ndarray:
        vocab = self.vocab(sample.key.language, kind)
        return project(self.loader(sample, kind), vocab, sample.id).values

    def ranked(self, sample: Sample, kind: FeatureKind) -> RankedVector:
        key = (sample.id, kind)
        r = self._ranked.get(key)
        if r is None:
            vocab = self.vocab(sample.key.language, kind)
            r = RankedVector.from_values(self.values(sample, kind), vocab.ref, sample.id)
            self._ranked[key] = r
        return r


def _map(fn, items, workers: int) -> list:
    if workers <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def score_pairs(pairs: Sequence[tuple[Sample, Sample]], kind: FeatureKind,
                vectors: SampleVectors, workers: int = 1) -> list[float]:
    needed = sorted({s for pair in pairs for s in pair})
    _map(lambda s: vectors.ranked(s, kind), needed, workers)
    return _map(lambda p: ranked_correlation(vectors.ranked(p[0], kind), vectors.ranked(p[1], kind)),
                list(pairs), workers)


def _observe(pairs, kind, vectors, cond, workers, report: ExperimentReport) -> list[float]:
    try:
        scores = score_pairs(pairs, kind, vectors, workers)
    except UndefinedCorrelationError as e:
        report.warnings.append(str(e))
        return []
    report.observations.extend(PairObservation(a, b, kind, rho, cond)
                               for (a, b), rho in zip(pairs, scores))
    return scores


def _summary_cols(values: Sequence[float]) -> dict:
    return descriptive_stats(values).as_dict()


SUMMARY_COLUMNS = ["n", "mean", "sd", "min", "q1", "median", "q3", "max"]


def _cells(manifest: SampleManifest) -> dict[VarietyKey, list[Sample]]:
    return manifest.by_key()


def _varieties(manifest: SampleManifest) -> dict[tuple[str, str], dict[Register, list[Sample]]]:
    out: dict[tuple[str, str], dict[Register, list[Sample]]] = defaultdict(dict)
    for key, samples in _cells(manifest).items():
        out[key.variety][key.register] = samples
    return dict(sorted(out.items()))


# --------------------------------------------------------------------------
# experiment 1: internal consistency

def exp1_internal_consistency(manifest: SampleManifest, config: ExperimentConfig,
                              vectors: SampleVectors,
                              kinds: Sequence[FeatureKind] = (FeatureKind.WORD, FeatureKind.CHAR3),
                              workers: int = 1) -> ExperimentReport:
    report = ExperimentReport("exp1", ["language", "country", "register", "kind", *SUMMARY_COLUMNS],
                              [], seed=config.seed)
    cell_means: dict[tuple[str, Register, FeatureKind], list[float]] = defaultdict(list)
    for key, samples in _cells(manifest).items():
        if len(samples) < 2:
            report.warnings.append(f"exp1 {key}: fewer than 2 samples; skipped")
            continue
        pairs = sample_pairs(samples, config.pairs_exp1, Condition.SAME_CELL, config.seed,
                             label=f"exp1/{key}", warnings=report.warnings)
        for kind in kinds:
            scores = _observe(pairs, kind, vectors, Condition.SAME_CELL, workers, report)
            if not scores:
                continue
            report.rows.append({"language": key.language, "country": key.country,
                                "register": key.register.value, "kind": kind.value,
                                **_summary_cols(scores)})
            report.raw[f"{key}/{kind.value}"] = scores
            cell_means[(key.language, key.register, kind)].append(float(np.mean(scores)))
    report.sort_rows()

    summary = []
    for (lang, reg, kind), means in sorted(cell_means.items()):
        summary.append({"language": lang, "register": reg.value, "kind": kind.value,
                        "n_cells": len(means), "mean": float(np.mean(means))})
    report.tables["summary"] = Table(["language", "register", "kind", "n_cells", "mean"], summary)
    report.tables["table3"] = _wide(summary, "mean", [("TW", FeatureKind.WORD), ("TW", FeatureKind.CHAR3),
                                                       ("CC", FeatureKind.WORD), ("CC", FeatureKind.CHAR3)])
    return report


def _wide(rows: list[dict], value: str, layout: list[tuple[str, FeatureKind]]) -> Table:
    cols = [f"{reg.lower()}_{KIND_LABEL[kind]}" for reg, kind in layout]
    by_lang: dict[str, dict] = {}
    for r in rows:
        d = by_lang.setdefault(r["language"], {"language": r["language"], **{c: None for c in cols}})
        col = f"{r['register'].lower()}_{KIND_LABEL[FeatureKind.parse(r['kind'])]}"
        if col in d:
            d[col] = r[value]
    return Table(["language", *cols], [by_lang[k] for k in sorted(by_lang)])


# --------------------------------------------------------------------------
# experiment 2: word vs character accuracy

def nearest_mean_predictions(scores: Sequence[float], same_mean: float,
                             cross_mean: float) -> list[bool]:
    """True where a score is strictly closer to the same-register mean; exact
    ties go to cross-register."""
    return [abs(s - same_mean) < abs(s - cross_mean) for s in scores]


def nearest_mean_accuracy(same_scores: Sequence[float], cross_scores: Sequence[float]) -> dict:
    """Classify each pair by the nearer class mean. Class means include the
    pair being classified (no hold-out)."""
    if not same_scores or not cross_scores:
        raise ValueError("both classes need at least one score")
    m_same = float(np.mean(same_scores))
    m_cross = float(np.mean(cross_scores))
    correct = sum(nearest_mean_predictions(same_scores, m_same, m_cross))
    correct += sum(not p for p in nearest_mean_predictions(cross_scores, m_same, m_cross))
    total = len(same_scores) + len(cross_scores)
    return {"same_mean": m_same, "cross_mean": m_cross, "n_same": len(same_scores),
            "n_cross": len(cross_scores), "correct": correct, "accuracy": 100.0 * correct / total}


def exp2_feature_accuracy(manifest: SampleManifest, config: ExperimentConfig,
                          vectors: SampleVectors,
                          kinds: Sequence[FeatureKind] = (FeatureKind.WORD, FeatureKind.CHAR3),
                          workers: int = 1) -> ExperimentReport:
    cols = ["language", "kind", "n_varieties", "n_same", "n_cross", "same_mean", "cross_mean",
            "correct", "accuracy"]
    report = ExperimentReport("exp2", cols, [], seed=config.seed)
    report.notes.append("class means include the pair being classified (no hold-out); "
                        "equidistant scores are predicted cross-register")
    plan: dict[str, list] = defaultdict(list)
    for (lang, country), regs in _varieties(manifest).items():
        if any(len(regs.get(r, [])) < 2 for r in Register):
            report.warnings.append(f"exp2 {lang}-{country}: needs both registers with >= 2 samples; excluded")
            continue
        pop = regs[Register.TW] + regs[Register.CC]
        label = f"exp2/{lang}-{country}"
        same = sample_pairs(pop, config.pairs_exp2, Condition.SAME_CELL, config.seed,
                            label=f"{label}/same", warnings=report.warnings)
        cross = sample_pairs(pop, config.pairs_exp2, Condition.CROSS_REGISTER_SAME_VARIETY,
                             config.seed, label=f"{label}/cross", warnings=report.warnings)
        plan[lang].append((same, cross))

    for lang, varieties in sorted(plan.items()):
        for kind in kinds:
            same_scores, cross_scores = [], []
            for same, cross in varieties:
                same_scores += _observe(same, kind, vectors, Condition.SAME_CELL, workers, report)
                cross_scores += _observe(cross, kind, vectors, Condition.CROSS_REGISTER_SAME_VARIETY,
                                         workers, report)
            if not same_scores or not cross_scores:
                report.warnings.append(f"exp2 {lang} {kind.value}: no scored pairs")
                continue
            report.rows.append({"language": lang, "kind": kind.value, "n_varieties": len(varieties),
                                **nearest_mean_accuracy(same_scores, cross_scores)})
            report.raw[f"{lang}/{kind.value}/same"] = same_scores
            report.raw[f"{lang}/{kind.value}/cross"] = cross_scores
    report.sort_rows()

    by_lang: dict[str, dict] = {}
    for r in report.rows:
        d = by_lang.setdefault(r["language"], {"language": r["language"], "word": None, "char": None})
        d[KIND_LABEL[FeatureKind.parse(r["kind"])]] = r["accuracy"]
    report.tables["table4"] = Table(["language", "word", "char"], [by_lang[k] for k in sorted(by_lang)])
    return report


# --------------------------------------------------------------------------
# experiment 3: cross-register similarity per variety

def exp3_cross_register(manifest: SampleManifest, config: ExperimentConfig,
                        vectors: SampleVectors, kind: FeatureKind = FeatureKind.CHAR3,
                        workers: int = 1) -> ExperimentReport:
    report = ExperimentReport("exp3", ["language", "country", "kind", *SUMMARY_COLUMNS],
                              [], seed=config.seed)
    for (lang, country), regs in _varieties(manifest).items():
        if len(regs) < 2:
            only = next(iter(regs)).value
            report.warnings.append(f"exp3 {lang}-{country}: only in {only}; excluded")
            continue
        pairs = sample_pairs(regs[Register.TW] + regs[Register.CC], config.pairs_exp3,
                             Condition.CROSS_REGISTER_SAME_VARIETY, config.seed,
                             label=f"exp3/{lang}-{country}", warnings=report.warnings)
        scores = _observe(pairs, kind, vectors, Condition.CROSS_REGISTER_SAME_VARIETY, workers, report)
        if not scores:
            continue
        report.rows.append({"language": lang, "country": country, "kind": kind.value,
                            **_summary_cols(scores)})
        report.raw[f"{lang}/{country}"] = scores
    report.sort_rows()

    ranges = []
    by_lang: dict[str, list[dict]] = defaultdict(list)
    for r in report.rows:
        by_lang[r["language"]].append(r)
    for lang, rows in sorted(by_lang.items()):
        lo = min(rows, key=lambda r: (r["mean"], r["country"]))
        hi = max(rows, key=lambda r: (r["mean"], r["country"]))
        ranges.append({"language": lang, "n_countries": len(rows),
                       "mean": float(np.mean([r["mean"] for r in rows])),
                       "min_country": lo["country"], "min_mean": lo["mean"],
                       "max_country": hi["country"], "max_mean": hi["mean"]})
    report.tables["ranges"] = Table(["language", "n_countries", "mean", "min_country", "min_mean",
                                     "max_country", "max_mean"], ranges)
    return report


# --------------------------------------------------------------------------
# experiment 4: within vs between varieties

def exp4_within_vs_between(manifest: SampleManifest, config: ExperimentConfig,
                           vectors: SampleVectors, kind: FeatureKind = FeatureKind.CHAR3,
                           workers: int = 1) -> ExperimentReport:
    cols = ["language", "register", "kind", "n_same", "n_different", "same_mean", "different_mean",
            "difference", "t", "df", "p_value", "significant"]
    report = ExperimentReport("exp4", cols, [], seed=config.seed)
    groups: dict[tuple[str, Register], list[Sample]] = defaultdict(list)
    for key, samples in _cells(manifest).items():
        groups[(key.language, key.register)].extend(samples)

    for (lang, reg), pop in sorted(groups.items()):
        where = f"exp4 {lang}-{reg.value}"
        if len({s.key.country for s in pop}) < 2:
            report.warnings.append(f"{where}: fewer than 2 varieties; skipped")
            continue
        label = f"exp4/{lang}-{reg.value}"
        same = sample_pairs(pop, config.pairs_exp4, Condition.SAME_VARIETY, config.seed,
                            label=f"{label}/same", warnings=report.warnings)
        diff = sample_pairs(pop, config.pairs_exp4, Condition.DIFFERENT_VARIETY, config.seed,
                            label=f"{label}/different", warnings=report.warnings)
        same_s = _observe(same, kind, vectors, Condition.SAME_VARIETY, workers, report)
        diff_s = _observe(diff, kind, vectors, Condition.DIFFERENT_VARIETY, workers, report)
        if not same_s or not diff_s:
            report.warnings.append(f"{where}: a condition has no pairs; skipped")
            continue
        row = {"language": lang, "register": reg.value, "kind": kind.value,
               "n_same": len(same_s), "n_different": len(diff_s),
               "same_mean": float(np.mean(same_s)), "different_mean": float(np.mean(diff_s)),
               "t": None, "df": None, "p_value": None, "significant": None}
        row["difference"] = row["same_mean"] - row["different_mean"]
        try:
            res = welch_t_test(same_s, diff_s, alpha=config.alpha)
            row.update(t=res.statistic, df=res.df, p_value=res.p_value, significant=res.significant)
        except ValueError as e:
            report.warnings.append(f"{where}: t-test not computed ({e})")
        report.rows.append(row)
        report.raw[f"{lang}/{reg.value}/same"] = same_s
        report.raw[f"{lang}/{reg.value}/different"] = diff_s
    report.sort_rows()
    t5 = {}
    for r in report.rows:
        d = t5.setdefault(r["language"], {"language": r["language"], "tw_same": None,
                                          "tw_different": None, "cc_same": None, "cc_different": None})
        d[f"{r['register'].lower()}_same"] = r["same_mean"]
        d[f"{r['register'].lower()}_different"] = r["different_mean"]
    report.tables["table5"] = Table(["language", "tw_same", "tw_different", "cc_same", "cc_different"],
                                    [t5[k] for k in sorted(t5)])
    return report


# --------------------------------------------------------------------------
# experiment 5: variety ranks by distance from the language centroid

def _mean_vector(samples: Sequence[Sample], kind: FeatureKind, vectors: SampleVectors) -> np.ndarray:
    total = None
    for s in samples:
        v = vectors.values(s, kind).astype(np.float64)
        total = v if total is None else total + v
    return total / len(samples)


def exp5_variety_ranks(manifest: SampleManifest, config: ExperimentConfig,
                       vectors: SampleVectors, kind: FeatureKind = FeatureKind.CHAR3,
                       workers: int = 1) -> ExperimentReport:
    cols = ["language", "country", "register", "kind", "rho_to_centroid", "rank"]
    report = ExperimentReport("exp5", cols, [], seed=config.seed)
    by_lang: dict[str, dict[VarietyKey, list[Sample]]] = defaultdict(dict)
    for key, samples in _cells(manifest).items():
        by_lang[key.language][key] = samples

    corr_rows = []
    pooled: dict[Register, list[float]] = {Register.TW: [], Register.CC: []}
    for lang, cells in sorted(by_lang.items()):
        ref = vectors.vocab(lang, kind).ref
        centroid = _mean_vector([s for ss in cells.values() for s in ss], kind, vectors)
        center = RankedVector.from_values(centroid, ref, f"{lang} centroid")
        keys = sorted(cells)
        cell_means = _map(lambda k: _mean_vector(cells[k], kind, vectors), keys, workers)
        rho: dict[VarietyKey, float] = {}
        for key, mean in zip(keys, cell_means):
            try:
                rho[key] = ranked_correlation(center, RankedVector.from_values(mean, ref, str(key)))
            except UndefinedCorrelationError as e:
                report.warnings.append(f"exp5 {key}: {e}")

        countries = sorted({k.country for k in rho})
        both = [c for c in countries
                if all(VarietyKey(lang, c, r) in rho for r in Register)]
        for c in countries:
            if c not in both:
                report.warnings.append(f"exp5 {lang}-{c}: missing a register; dropped from rank lists")
        ranks: dict[Register, dict[str, float]] = {}
        for reg in Register:
            vals = np.array([rho[VarietyKey(lang, c, reg)] for c in both])
            # ascending similarity: rank 1 is the variety farthest from the centroid
            ranks[reg] = dict(zip(both, rank_with_ties(-vals).tolist())) if both else {}
        for key in sorted(rho):
            report.rows.append({"language": lang, "country": key.country,
                                "register": key.register.value, "kind": kind.value,
                                "rho_to_centroid": rho[key],
                                "rank": ranks[key.register].get(key.country)})

        row = {"language": lang, "n_varieties": len(both), "rho": None, "p_value": None,
               "significance": "NA"}
        if len(both) >= 2:
            pooled[Register.TW] += [ranks[Register.TW][c] for c in both]
            pooled[Register.CC] += [ranks[Register.CC][c] for c in both]
        if len(both) >= 3:
            row.update(_rank_corr(ranks[Register.TW], ranks[Register.CC], both, config, report, lang))
        else:
            report.warnings.append(f"exp5 {lang}: {len(both)} varieties in both registers (< 3); "
                                   "no rank correlation")
        corr_rows.append(row)
    report.sort_rows()

    all_row = {"language": "all", "n_varieties": len(pooled[Register.TW]), "rho": None,
               "p_value": None, "significance": "NA"}
    if len(pooled[Register.TW]) >= 3:
        idx = [str(i) for i in range(len(pooled[Register.TW]))]
        all_row.update(_rank_corr(dict(zip(idx, pooled[Register.TW])),
                                  dict(zip(idx, pooled[Register.CC])), idx, config, report, "all"))
    report.tables["table6"] = Table(["language", "n_varieties", "rho", "p_value", "significance"],
                                    [all_row, *corr_rows])
    report.notes.append("pooled row correlates the within-language rank lists of all languages "
                        "with at least 2 varieties in both registers")
    return report


def _rank_corr(tw: dict, cc: dict, order: list, config, report, where) -> dict:
    try:
        res = spearman_rank_correlation([tw[c] for c in order], [cc[c] for c in order],
                                        alpha=config.alpha)
    except ValueError as e:
        report.warnings.append(f"exp5 {where}: rank correlation undefined ({e})")
        return {}
    return {"rho": res.statistic, "p_value": res.p_value,
            "significance": "*" if res.significant else "NS"}


# --------------------------------------------------------------------------
# geography

def geo_aggregate(exp3_report: ExperimentReport) -> ExperimentReport:
    """Unweighted mean of each country's per-language cross-register means."""
    if not exp3_report.rows:
        raise ValueError("exp3 report is empty")
    by_country: dict[str, dict[str, float]] = defaultdict(dict)
    for r in exp3_report.rows:
        by_country[r["country"]][r["language"]] = r["mean"]
    rows = []
    for country, langs in sorted(by_country.items()):
        rows.append({"country": country, "n_languages": len(langs),
                     "languages": ";".join(sorted(langs)),
                     "mean": float(np.mean([langs[k] for k in sorted(langs)]))})
    report = ExperimentReport("geo", ["country", "n_languages", "languages", "mean"], rows,
                              config_digest=exp3_report.config_digest, seed=exp3_report.seed)
    means = [r["mean"] for r in rows]
    report.tables["overall"] = Table(["n_countries", "mean", "min", "max"], [
        {"n_countries": len(rows), "mean": float(np.mean(means)),
         "min": float(np.min(means)), "max": float(np.max(means))}])
    return report


EXPERIMENTS = {
    "exp1": exp1_internal_consistency,
    "exp2": exp2_feature_accuracy,
    "exp3": exp3_cross_register,
    "exp4": exp4_within_vs_between,
    "exp5": exp5_variety_ranks,
}


def audit_conditions(report: ExperimentReport) -> list[str]:
    """Pairs whose recorded condition does not follow from their two keys."""
    bad = []
    for obs in report.observations:
        if not condition_holds(obs.condition, obs.sample_a.key, obs.sample_b.key):
            bad.append(f"{obs.sample_a.id} / {obs.sample_b.id}: {obs.condition.value}")
    return bad
