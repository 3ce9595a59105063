"""Evaluating rankings against seminal nodes: IR, NIR, age bias and similarity."""
from __future__ import annotations

import csv
import datetime as dt
import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Mapping, Sequence

import numpy as np

from .network import CitationNetwork, SeminalSet, snapshot_cutoffs, snapshot
from .scores import ScoreVector, fractional_ranks

log = logging.getLogger(__name__)

N_GROUPS = 40
SIGMA0_REPLICATES = 1000


class UndefinedMetric(ValueError):
    """The metric cannot be computed on this (usually tiny) network."""


@dataclass(frozen=True)
class AgeGrouping:
    """Equal-size age groups in node order; group 1 holds the oldest nodes."""

    G: int
    group: np.ndarray  # 1-based group of every node
    sizes: np.ndarray

    @classmethod
    def build(cls, n: int, G: int = N_GROUPS) -> "AgeGrouping":
        if G < 1 or G > n:
            raise ValueError(f"need 1 <= G <= N, got G={G}, N={n}")
        base, rest = divmod(n, G)
        sizes = np.full(G, base, dtype=np.int64)
        sizes[:rest] += 1
        group = np.repeat(np.arange(1, G + 1), sizes)
        return cls(G, group, sizes)


def n_top(z: float, n: int) -> int:
    if not 0 < z < 1:
        raise ValueError("z must lie in (0, 1)")
    # guard against 0.29 * 100 == 28.999999999999996
    return int(math.floor(z * n + 1e-9))


def top_fraction(scores: ScoreVector, z: float) -> np.ndarray:
    k = n_top(z, len(scores))
    if k < 1:
        raise ValueError(f"z * N = {z * len(scores):.3g} < 1")
    return scores.ranking[:k]


def _seminal_positions(seminal) -> np.ndarray:
    pos = seminal.positions if isinstance(seminal, SeminalSet) else np.asarray(seminal, dtype=np.int64)
    if len(pos) == 0:
        raise ValueError("empty seminal set")
    return pos


def identification_rate(scores: ScoreVector, seminal, z: float = 0.01) -> float:
    pos = _seminal_positions(seminal)
    return float(np.isin(pos, top_fraction(scores, z)).sum() / len(pos))


def top_histogram(scores: ScoreVector, grouping: AgeGrouping, z: float) -> np.ndarray:
    top = top_fraction(scores, z)
    return np.bincount(grouping.group[top] - 1, minlength=grouping.G)


def penalty_weights(hist: np.ndarray, n_uniform: float) -> np.ndarray:
    """min(1, N_U / N_z(g)); groups absent from the top get weight 1."""
    w = np.ones(len(hist))
    over = hist > n_uniform
    w[over] = n_uniform / hist[over]
    return w


def normalized_identification_rate(scores: ScoreVector, seminal, grouping: AgeGrouping, z: float = 0.01) -> float:
    pos = _seminal_positions(seminal)
    n = len(scores)
    hist = top_histogram(scores, grouping, z)
    w = penalty_weights(hist, z * n / grouping.G)
    hit = pos[np.isin(pos, top_fraction(scores, z))]
    return float(w[grouping.group[hit] - 1].sum() / len(pos))


@dataclass
class BiasProfile:
    hist: np.ndarray
    n_uniform: float
    sigma: float
    sigma0: float
    sigma0_analytic: float

    @property
    def ratio(self) -> float:
        return self.sigma / self.sigma0 if self.sigma0 > 0 else float("nan")

    def as_dict(self):
        return {
            "hist": self.hist.tolist(), "n_uniform": self.n_uniform, "sigma": self.sigma,
            "sigma0": self.sigma0, "sigma0_analytic": self.sigma0_analytic, "ratio": self.ratio,
        }


def histogram_sigma(hist, n_uniform: float) -> np.ndarray:
    hist = np.asarray(hist, dtype=np.float64)
    return np.sqrt(np.mean((hist - n_uniform) ** 2, axis=-1))


def sigma0_montecarlo(grouping: AgeGrouping, n: int, n_uniform: float, replicates=SIGMA0_REPLICATES, seed=0) -> float:
    """Mean sigma when n nodes are drawn uniformly without replacement."""
    rng = np.random.default_rng(seed)
    draws = rng.multivariate_hypergeometric(grouping.sizes, n, size=replicates)
    return float(histogram_sigma(draws, n_uniform).mean())


def sigma0_analytic(n: int, G: int) -> float:
    p = 1.0 / G
    return math.sqrt(n * p * (1 - p))


def bias_profile(scores: ScoreVector, grouping: AgeGrouping, z: float = 0.01,
                 replicates=SIGMA0_REPLICATES, seed=0) -> BiasProfile:
    n = len(scores)
    if len(grouping.group) != n:
        raise ValueError("grouping does not match score vector")
    hist = top_histogram(scores, grouping, z)
    nu = z * n / grouping.G
    k = n_top(z, n)
    return BiasProfile(
        hist, nu, float(histogram_sigma(hist, nu)),
        sigma0_montecarlo(grouping, k, nu, replicates, seed), sigma0_analytic(k, grouping.G),
    )


# -- age-resolved evaluation --------------------------------------------------

def add_years(d: dt.date, years: int) -> dt.date:
    try:
        return d.replace(year=d.year + years)
    except ValueError:  # 29 February
        return d.replace(year=d.year + years, day=28)


@dataclass
class AgeCurve:
    """Per-age IR and NIR; ``counts[dt]`` is the number of eligible seminal nodes."""

    ir: dict[int, float] = field(default_factory=dict)
    nir: dict[int, float] = field(default_factory=dict)
    counts: dict[int, int] = field(default_factory=dict)


def _tops(sv: ScoreVector | None, n: int, z: float, G: int):
    """Top-z membership and per-node NIR weight for one ranking."""
    k = n_top(z, n)
    in_top = np.zeros(n, dtype=bool)
    weight = np.zeros(n)
    if k < 1 or sv is None:
        return in_top, weight
    grouping = AgeGrouping.build(n, min(G, n))
    top = sv.ranking[:k]
    in_top[top] = True
    hist = np.bincount(grouping.group[top] - 1, minlength=grouping.G)
    weight = penalty_weights(hist, z * n / grouping.G)[grouping.group - 1]
    return in_top, weight


def age_schedule(net: CitationNetwork, seminal_pos: np.ndarray, cutoffs: Sequence) -> dict[int, list[tuple[int, int]]]:
    """For each whole-year age, the (seminal position, snapshot index) pairs that qualify.

    A seminal node aged ``dt`` years is judged on the first snapshot dated at
    least ``dt`` years after its publication; if that date lies beyond the
    network's reference date the node is too young and is left out.
    """
    as_of = net.as_of.astype(dt.date)
    cut = np.array(cutoffs, dtype="datetime64[D]")
    sched: dict[int, list[tuple[int, int]]] = {}
    for s in seminal_pos.tolist():
        born = net.dates[s].astype(dt.date)
        age = 0
        while True:
            target = add_years(born, age)
            if target > as_of:
                break
            j = int(np.searchsorted(cut, np.datetime64(target, "D"), side="left"))
            sched.setdefault(age, []).append((s, j))
            age += 1
    return dict(sorted(sched.items()))


def age_curves_many(rank_snapshot: Callable[[CitationNetwork, str], ScoreVector], labels: Sequence[str],
                    net: CitationNetwork, seminal, z=0.01, G=N_GROUPS, workers: int = 1) -> dict[str, AgeCurve]:
    """IR and NIR versus seminal node age for several metrics.

    ``rank_snapshot(snap, label)`` ranks one snapshot; it may raise
    UndefinedMetric, in which case no node of that snapshot counts as top.
    Snapshots are ranked independently and may be processed by ``workers``
    threads; results do not depend on scheduling.
    """
    pos = _seminal_positions(seminal)
    cutoffs = snapshot_cutoffs(net)
    sched = age_schedule(net, pos, cutoffs)
    needed = sorted({j for pairs in sched.values() for _, j in pairs})

    def run(j):
        snap = snapshot(net, cutoffs[j])
        out = {}
        for lab in labels:
            try:
                sv = rank_snapshot(snap, lab)
            except UndefinedMetric as e:
                log.info("%s undefined on snapshot %s: %s", lab, snap.as_of, e)
                sv = None
            out[lab] = _tops(sv, snap.N, z, G)
        return j, out

    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(workers) as ex:
            tops = dict(ex.map(run, needed))
    else:
        tops = dict(map(run, needed))

    curves = {}
    for lab in labels:
        c = AgeCurve()
        for age, pairs in sched.items():
            hits = [(tops[j][lab][0][s], tops[j][lab][1][s]) for s, j in pairs]
            c.ir[age] = sum(bool(t) for t, _ in hits) / len(pairs)
            c.nir[age] = sum(float(w) for t, w in hits if t) / len(pairs)
            c.counts[age] = len(pairs)
        curves[lab] = c
    return curves


def age_curves(metric: Callable[[CitationNetwork], ScoreVector], net: CitationNetwork, seminal, z=0.01,
               G=N_GROUPS) -> AgeCurve:
    """IR and NIR as functions of seminal node age, from year-end snapshots."""
    return age_curves_many(lambda snap, _: metric(snap), ["m"], net, seminal, z, G)["m"]


def identification_rate_vs_age(metric, net, seminal, z=0.01) -> dict[int, float]:
    return age_curves(metric, net, seminal, z).ir


def nir_vs_age(metric, net, seminal, z=0.01, G=N_GROUPS) -> dict[int, float]:
    return age_curves(metric, net, seminal, z, G).nir


def relative_performance(curves: Mapping[str, Mapping[int, float]]) -> dict[str, dict[int, float]]:
    """Each age bin divided by the best metric's value in that bin (0 where all are 0)."""
    if not curves:
        raise ValueError("no curves")
    grids = {tuple(sorted(c)) for c in curves.values()}
    if len(grids) != 1:
        raise ValueError("curves do not share an age grid")
    grid = grids.pop()
    best = {t: max(c[t] for c in curves.values()) for t in grid}
    return {m: {t: (c[t] / best[t] if best[t] > 0 else 0.0) for t in grid} for m, c in curves.items()}


def average_relative_score(nir_by_dataset: Mapping[str, Mapping[str, float]]) -> dict[str, float]:
    """Mean over datasets of NIR(m) / max_n NIR(n)."""
    metrics = set.intersection(*(set(d) for d in nir_by_dataset.values()))
    out = {m: 0.0 for m in metrics}
    for d in nir_by_dataset.values():
        top = max(d[m] for m in metrics)
        for m in metrics:
            out[m] += (d[m] / top if top > 0 else 0.0) / len(nir_by_dataset)
    return out


def spearman_matrix(vectors: Sequence[ScoreVector]) -> np.ndarray:
    """Pairwise Spearman correlation on average ranks; NaN where a vector is constant."""
    n = len(vectors)
    if len({len(v) for v in vectors}) > 1:
        raise ValueError("score vectors differ in length")
    ranks = []
    for v in vectors:
        r = fractional_ranks(v.scores)
        r = r - r.mean()
        norm = np.sqrt((r * r).sum())
        ranks.append(r / norm if norm > 0 else None)
    out = np.full((n, n), np.nan)
    for i in range(n):
        for j in range(i, n):
            if ranks[i] is None or ranks[j] is None:
                continue
            rho = 1.0 if i == j else float(np.clip(ranks[i] @ ranks[j], -1, 1))
            out[i, j] = out[j, i] = rho
    return out


# -- reports ------------------------------------------------------------------

@dataclass
class EvalReport:
    rows: list[dict] = field(default_factory=list)  # metric, z, IR, NIR, sigma_ratio
    bias: dict[str, BiasProfile] = field(default_factory=dict)
    curves: dict[str, AgeCurve] = field(default_factory=dict)
    spearman_labels: list[str] = field(default_factory=list)
    spearman: np.ndarray | None = None

    def relative_ir(self):
        return relative_performance({m: c.ir for m, c in self.curves.items()}) if self.curves else {}

    def relative_nir(self):
        return relative_performance({m: c.nir for m, c in self.curves.items()}) if self.curves else {}

    def as_dict(self):
        rho = None
        if self.spearman is not None:
            rho = [[None if np.isnan(x) else float(x) for x in row] for row in self.spearman]
        return {
            "identification": self.rows,
            "bias": {m: b.as_dict() for m, b in self.bias.items()},
            "age_curves": {
                m: {"ir": c.ir, "nir": c.nir, "counts": c.counts} for m, c in self.curves.items()
            },
            "relative_ir": self.relative_ir(),
            "relative_nir": self.relative_nir(),
            "spearman": {"labels": self.spearman_labels, "rho": rho},
        }

    def write(self, out: Path):
        out = Path(out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "report.json").write_text(json.dumps(self.as_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8")
        _table(out / "ir.csv", ["metric", "z", "IR", "NIR", "sigma_ratio", "rel_score"],
               [[r["metric"], r["z"], r["IR"], r["NIR"], r["sigma_ratio"], r.get("rel_score", "")] for r in self.rows])
        _table(out / "bias_hist.csv", ["metric", "group", "count"],
               [[m, g + 1, int(c)] for m, b in self.bias.items() for g, c in enumerate(b.hist)])
        if self.spearman is not None:
            _table(out / "spearman.csv", ["metric_a", "metric_b", "rho"],
                   [[a, b, "" if np.isnan(self.spearman[i, j]) else float(self.spearman[i, j])]
                    for i, a in enumerate(self.spearman_labels) for j, b in enumerate(self.spearman_labels)])
        if self.curves:
            _table(out / "age_curves.csv", ["metric", "dt_years", "ir", "nir", "n_seminal"],
                   [[m, t, c.ir[t], c.nir[t], c.counts[t]] for m, c in self.curves.items() for t in c.ir])


def _table(path: Path, header, rows):
    with open(path, "w", encoding="utf-8", newline="") as f:
        w = csv.writer(f, delimiter="\t", lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([repr(x) if isinstance(x, float) else x for x in r])
