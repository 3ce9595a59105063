"""Node ranking metrics on a CitationNetwork.

Every function returns a ScoreVector aligned to the network's node order.
The iterative solvers use synchronous (Jacobi) updates and stop once the mean
absolute score change drops below ``cfg.eps``.
"""
from __future__ import annotations

import numpy as np
import scipy.sparse as sp

from .network import CitationNetwork, snapshot
from .scores import ConvergenceError, MetricConfig, ScoreVector, spearman_rho

DEFAULT = MetricConfig()


def _solve(label, step, x, cfg, n_avg=None):
    n_avg = n_avg or len(x)
    res = np.inf
    for it in range(1, cfg.max_iter + 1):
        new = step(x)
        res = np.abs(new - x).sum() / n_avg
        x = new
        if res < cfg.eps:
            return x, it, float(res)
    raise ConvergenceError(label, cfg.max_iter, float(res))


def _transition(net: CitationNetwork, extra_out: int = 0) -> sp.csr_matrix:
    """M[i, j] = 1 / (k_out_j + extra_out) for every citation j -> i."""
    w = 1.0 / (net.outdegree[net.src] + extra_out)
    return sp.csr_matrix((w, (net.dst, net.src)), shape=(net.N, net.N))


def citation_count(net: CitationNetwork) -> ScoreVector:
    return ScoreVector.build("C", net.indegree.astype(np.float64))


def _random_walk(label, net, cfg, teleport):
    n = net.N
    if n == 0:
        raise ValueError("empty network")
    M = _transition(net)
    dangling = net.outdegree == 0
    a = cfg.alpha

    def step(p):
        return a * (M @ p) + a * p[dangling].sum() / n + (1 - a) * teleport

    p, it, res = _solve(label, step, np.full(n, 1.0 / n), cfg)
    return ScoreVector.build(label, p, it, res)


def pagerank(net: CitationNetwork, cfg: MetricConfig = DEFAULT) -> ScoreVector:
    return _random_walk("P", net, cfg, np.full(net.N, 1.0 / max(net.N, 1)))


def recency_teleport(net: CitationNetwork, tau_days: float) -> np.ndarray:
    age = (net.as_of.astype(np.int64) - net.day_numbers).astype(np.float64)
    x = -(age - age.min()) / tau_days
    v = np.exp(x)
    return v / v.sum()


def citerank(net: CitationNetwork, cfg: MetricConfig = DEFAULT) -> ScoreVector:
    return _random_walk("T", net, cfg, recency_teleport(net, cfg.tau_days))


def leaderrank(net: CitationNetwork, cfg: MetricConfig = DEFAULT) -> ScoreVector:
    """Random walk with a ground node linked both ways to every node.

    The ground score is split evenly over the real nodes at the end, so the
    real-node scores sum to N + 1.
    """
    n = net.N
    if n == 0:
        raise ValueError("empty network")
    if net.E == 0:
        # Without citations the walk only bounces node <-> ground: period 2, the
        # iteration oscillates. Stationary split is half on ground, half on nodes.
        return ScoreVector.build("L", np.full(n, (n + 1) / n), 0, 0.0)
    M = _transition(net, extra_out=1)
    to_ground = 1.0 / (net.outdegree + 1)

    def step(x):
        real, g = x[:n], x[n]
        return np.concatenate([M @ real + g / n, [to_ground @ real]])

    x, it, res = _solve("L", step, np.ones(n + 1), cfg)
    return ScoreVector.build("L", x[:n] + x[n] / n, it, res)


def h_index(net: CitationNetwork) -> ScoreVector:
    k = net.indegree
    vals = k[net.src]
    order = np.lexsort((-vals, net.dst))
    tgt, vals = net.dst[order], vals[order]
    starts = np.searchsorted(tgt, np.arange(net.N))
    place = np.arange(len(tgt)) - starts[tgt] + 1
    h = np.bincount(tgt[vals >= place], minlength=net.N)
    return ScoreVector.build("H", h.astype(np.float64))


def _as_bool(m: sp.csr_matrix) -> sp.csr_matrix:
    m = m.tocsr()
    m.eliminate_zeros()
    m.data[:] = 1.0
    return m


def collective_influence(net: CitationNetwork, cfg: MetricConfig = DEFAULT) -> ScoreVector:
    """Directed CI on indegrees; distances follow references out of each node."""
    level = cfg.ci_level
    w = np.maximum(net.indegree - 1, 0).astype(np.float64)
    rows = np.flatnonzero(w > 0)
    ci = np.zeros(net.N)
    if len(rows) == 0:
        return ScoreVector.build("CI", ci)
    A = net.adjacency
    frontier = _as_bool(A[rows])
    visited = _as_bool(frontier + sp.csr_matrix(
        (np.ones(len(rows)), (np.arange(len(rows)), rows)), shape=frontier.shape))
    for _ in range(level - 1):
        nxt = _as_bool(frontier @ A)
        nxt = _as_bool(nxt - nxt.multiply(visited))
        visited = _as_bool(visited + nxt)
        frontier = nxt
    ci[rows] = w[rows] * (frontier @ w)
    return ScoreVector.build("CI", ci)


def semi_local_centrality(net: CitationNetwork) -> ScoreVector:
    B = _as_bool(net.citers)
    reach = _as_bool(B + B @ B)
    reach.setdiag(0)
    reach = _as_bool(reach)
    nk = np.diff(reach.indptr).astype(np.float64)
    q = B @ nk
    return ScoreVector.build("SLC", B @ q)


def hits(net: CitationNetwork, cfg: MetricConfig = DEFAULT, on_iteration=None):
    """Authority and hub vectors, each normalised to unit sum every iteration."""
    n = net.N
    if net.E == 0:
        raise ValueError("HITS needs at least one citation")
    A = net.adjacency
    AT = net.citers
    x = np.full(2 * n, 1.0 / n)
    x[n:] = 1.0 / n

    def step(x):
        a, h = AT @ x[n:], A @ x[:n]
        sa, sh = a.sum(), h.sum()
        if sa == 0 or sh == 0:
            raise ValueError("HITS score mass vanished")
        a /= sa
        h /= sh
        if on_iteration is not None:
            on_iteration(a, h)
        return np.concatenate([a, h])

    x, it, res = _solve("HITS", step, x, cfg, n_avg=n)
    return ScoreVector.build("HITS", x[:n], it, res), ScoreVector.build("HUB", x[n:], it, res)


def yccp(net: CitationNetwork) -> ScoreVector:
    """Share of same-year nodes with strictly fewer citations."""
    c = net.indegree
    _, year = np.unique(net.years, return_inverse=True)
    year = year.astype(np.int64)
    key = year * (int(c.max()) + 1) + c
    sk = np.sort(key)
    below = np.searchsorted(sk, key, side="left")
    start = np.searchsorted(sk, year * (int(c.max()) + 1), side="left")
    size = np.bincount(year)[year]
    return ScoreVector.build("YCCP", (below - start) / size)


def age_rank(net: CitationNetwork) -> ScoreVector:
    return ScoreVector.build("AgeR", -np.arange(net.N, dtype=np.float64))


def recent_indegree_gain(net: CitationNetwork, window_days: float) -> np.ndarray:
    recent = net.day_numbers[net.src] > net.as_of.astype(np.int64) - window_days
    return np.bincount(net.dst[recent], minlength=net.N)


def tune_citerank_params(net: CitationNetwork, alphas, taus_days, window_days=730.0, cfg=DEFAULT, holdout=True):
    """Grid point maximising Spearman correlation of CiteRank with recent citation gains.

    With ``holdout`` (default) CiteRank is computed on the network as it stood
    ``window_days`` before ``as_of`` and compared with the citations its nodes
    gained afterwards, so the scores cannot see the gains they are judged on.
    With ``holdout=False`` scores come from the full network.

    Returns ``(alpha, tau_days, table)`` where table maps each grid point to its
    correlation. Ties go to the smaller tau, then the smaller alpha.
    """
    alphas, taus = sorted(alphas), sorted(taus_days)
    if not alphas or not taus:
        raise ValueError("empty parameter grid")
    span = int(net.as_of.astype(np.int64) - net.day_numbers[0])
    if window_days > span:
        raise ValueError(f"window of {window_days} days exceeds network span of {span} days")
    gain = recent_indegree_gain(net, window_days)
    base = net
    if holdout:
        base = snapshot(net, net.as_of - np.timedelta64(int(round(window_days)), "D"))
        gain = gain[:base.N]
    if not gain.any():
        raise ValueError("no citations inside the recent window")
    best, table = None, {}
    for tau in taus:
        for a in alphas:
            t = citerank(base, MetricConfig(a, tau, cfg.eps, cfg.max_iter, cfg.ci_level))
            rho = spearman_rho(t.scores, gain)
            rho = -np.inf if rho is None else rho
            table[(a, tau)] = rho
            if best is None or rho > table[best]:
                best = (a, tau)
    return best[0], best[1], table
