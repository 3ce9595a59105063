"""Synthetic growing citation networks with preferential attachment, aging and node quality.

Each new node cites earlier nodes with probability proportional to
``(indegree + offset) * exp(-age / aging_days) * quality``. Node counts per
year grow geometrically, so late years dominate the population, which is what
pushes old seminal nodes into the first age groups.
"""
from __future__ import annotations

import logging
from dataclasses import asdict, dataclass

import numpy as np

from .network import CitationNetwork, SeminalSet, _write

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SynthParams:
    n_nodes: int = 20_000
    growth: float = 1.2  # ratio of node counts in consecutive years
    offset: float = 3.0
    refs_per_node: int = 10
    aging_days: float = 3650.0
    seed: int = 0
    n_seminal: int = 30
    age_skew: float = 0.0
    n_years: int = 20
    start_year: int = 1990
    quality_sigma: float = 0.5
    seminal_pool: float = 0.1  # top quality fraction eligible for the seminal set
    batches_per_year: int = 12

    def __post_init__(self):
        for name in ("n_nodes", "refs_per_node", "n_seminal", "n_years", "batches_per_year"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        for name in ("growth", "offset", "aging_days"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.age_skew < 0 or self.quality_sigma < 0:
            raise ValueError("age_skew and quality_sigma must be non-negative")
        if not 0 < self.seminal_pool <= 1:
            raise ValueError("seminal_pool must lie in (0, 1]")
        if self.n_seminal > self.n_nodes * self.seminal_pool:
            raise ValueError("n_seminal exceeds the quality-eligible pool")

    def as_dict(self):
        return asdict(self)


@dataclass
class SynthResult:
    network: CitationNetwork
    seminal: SeminalSet
    quality: np.ndarray  # aligned to network node order
    params: SynthParams
    clamped_nodes: int = 0


def _year_counts(p: SynthParams) -> np.ndarray:
    w = p.growth ** np.arange(p.n_years, dtype=float)
    raw = p.n_nodes * w / w.sum()
    counts = np.floor(raw).astype(np.int64)
    rest = p.n_nodes - counts.sum()
    counts[np.argsort(-(raw - counts), kind="stable")[:rest]] += 1
    return counts


def _dates(p: SynthParams, rng: np.random.Generator) -> np.ndarray:
    out = []
    for y, c in enumerate(_year_counts(p)):
        start = np.datetime64(f"{p.start_year + y}-01-01", "D")
        ndays = int((np.datetime64(f"{p.start_year + y + 1}-01-01", "D") - start).astype(np.int64))
        out.append(start + rng.integers(0, ndays, size=c))
    return np.sort(np.concatenate(out))


def _sample_refs(rng, cum, r):
    """Draw r distinct indices with probability proportional to the cumulative weights."""
    total = cum[-1]
    picked: dict[int, None] = {}
    while len(picked) < r:
        draws = np.searchsorted(cum, rng.random(2 * r) * total, side="right")
        for d in draws.tolist():
            picked.setdefault(d, None)
            if len(picked) == r:
                break
    return list(picked)


def generate_synthetic(p: SynthParams) -> SynthResult:
    rng = np.random.default_rng(p.seed)
    dates = _dates(p, rng)
    n = len(dates)
    quality = rng.lognormal(0.0, p.quality_sigma, size=n)
    days = dates.astype(np.int64)

    # batch boundaries: nodes only cite nodes from earlier batches
    first = np.datetime64(f"{p.start_year}-01-01", "D").astype(np.int64)
    span = days[-1] + 1 - first
    nb = p.n_years * p.batches_per_year
    batch = np.minimum(((days - first) * nb) // span, nb - 1)
    bounds = np.searchsorted(batch, np.arange(nb + 1))

    indeg = np.zeros(n, dtype=np.float64)
    src, dst = [], []
    clamped = 0
    for b in range(nb):
        lo, hi = bounds[b], bounds[b + 1]
        if lo == hi or lo == 0:
            continue
        now = days[lo:hi].mean()
        w = (indeg[:lo] + p.offset) * np.exp(-(now - days[:lo]) / p.aging_days) * quality[:lo]
        cum = np.cumsum(w)
        r = p.refs_per_node
        if r > lo:
            clamped += hi - lo
            r = lo
        start = len(dst)
        for i in range(lo, hi):
            refs = _sample_refs(rng, cum, r)
            src.extend([i] * len(refs))
            dst.extend(refs)
        np.add.at(indeg, np.asarray(dst[start:], dtype=np.int64), 1)
    if clamped:
        log.warning("%d node(s) had fewer earlier nodes than refs_per_node; references clamped", clamped)

    ids = np.array([f"n{i:07d}" for i in range(n)], dtype=object)
    net = CitationNetwork(ids, dates, src, dst, dates[-1])

    eligible = np.sort(np.argsort(-quality, kind="stable")[: max(int(p.seminal_pool * n), p.n_seminal)])
    u = eligible / n
    logw = p.age_skew * np.log1p(-u)
    w = np.exp(logw - logw.max())
    chosen = rng.choice(eligible, size=p.n_seminal, replace=False, p=w / w.sum())
    seminal = SeminalSet(frozenset(ids[chosen].tolist()), np.sort(chosen))
    return SynthResult(net, seminal, quality, p, clamped)


def write_quality(res: SynthResult, dest, delimiter="\t"):
    lines = [f"id{delimiter}quality"]
    lines += [f"{k}{delimiter}{q!r}" for k, q in zip(res.network.ids.tolist(), res.quality.tolist())]
    _write(dest, "\n".join(lines) + "\n")
