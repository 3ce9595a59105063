import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from seminalrank import metrics as M
from seminalrank.network import CitationNetwork
from seminalrank.scores import ConvergenceError, MetricConfig
from seminalrank.synth import SynthParams, generate_synthetic

import oracles
from conftest import make_net, random_graph


def graphs(n_graphs, n, lo=0.05, hi=0.3, seed=0, dag=False):
    rng = np.random.default_rng(seed)
    for _ in range(n_graphs):
        yield random_graph(rng, n, rng.uniform(lo, hi), dag=dag)


# -- random walks -------------------------------------------------------------

def test_pagerank_net2(net2):
    p = M.pagerank(net2)
    np.testing.assert_allclose(p.scores, [0.6, 0.4], atol=1e-9)
    np.testing.assert_allclose(oracles.pagerank_linear(2, [(1, 0)], 0.5), [0.6, 0.4], atol=1e-12)


@pytest.mark.parametrize("alpha", [0.15, 0.5, 0.85])
def test_pagerank_matches_linear_solve(alpha):
    cfg = MetricConfig(alpha=alpha)
    for net, edges in graphs(10, 50, seed=int(alpha * 100)):
        p = M.pagerank(net, cfg)
        assert np.abs(p.scores - oracles.pagerank_linear(50, edges, alpha)).max() < 1e-6
        assert p.scores.sum() == pytest.approx(1.0, abs=1e-9)


def test_citerank_equal_dates_is_pagerank():
    net, edges = random_graph(np.random.default_rng(1), 30, 0.2, span_days=1)
    net = CitationNetwork(net.ids, np.full(30, np.datetime64("2000-01-01")), net.src, net.dst)
    np.testing.assert_allclose(M.citerank(net).scores, M.pagerank(net).scores, atol=1e-12)


def test_citerank_matches_linear_solve():
    cfg = MetricConfig(alpha=0.5, tau_days=400.0)
    for net, edges in graphs(10, 40, seed=7):
        v = M.recency_teleport(net, cfg.tau_days)
        want = oracles.citerank_linear(40, edges, 0.5, v)
        t = M.citerank(net, cfg)
        assert np.abs(t.scores - want).max() < 1e-6
        assert t.scores.sum() == pytest.approx(1.0, abs=1e-9)


def test_citerank_net2_closed_form(net2):
    # B is 10 days younger; teleport weights e^{-10/tau} : 1 for A : B
    tau = 30.0
    wa, wb = np.exp(-10 / tau), 1.0
    va, vb = wa / (wa + wb), wb / (wa + wb)
    a = 0.5
    # p_A = a p_B + a p_A / 2 + (1-a) v_A ;  p_B = a p_A / 2 + (1-a) v_B   (A dangling)
    det = (1 - a / 2) * 1 - (-a) * (-a / 2)
    pa = ((1 - a) * va * 1 + a * (1 - a) * vb) / det
    pb = ((1 - a / 2) * (1 - a) * vb + (a / 2) * (1 - a) * va) / det
    t = M.citerank(net2, MetricConfig(alpha=a, tau_days=tau))
    np.testing.assert_allclose(t.scores, [pa, pb], atol=1e-9)
    # short memory favours the recent node
    tiny = M.citerank(net2, MetricConfig(alpha=a, tau_days=0.01))
    assert tiny.scores[1] == pytest.approx(0.6, abs=1e-6)


def test_leaderrank_net2(net2):
    np.testing.assert_allclose(M.leaderrank(net2).scores, [5 / 3, 4 / 3], atol=1e-9)
    np.testing.assert_allclose(oracles.leaderrank_exact(2, [(1, 0)]), [5 / 3, 4 / 3], atol=1e-9)


def test_leaderrank_matches_exact_stationary():
    for net, edges in graphs(10, 40, seed=3):
        lr = M.leaderrank(net)
        assert np.abs(lr.scores - oracles.leaderrank_exact(40, edges)).max() < 1e-6
        assert lr.scores.sum() == pytest.approx(41, abs=1e-6)


def test_leaderrank_no_edges():
    net = make_net(["1990-01-01"] * 4, [])
    np.testing.assert_allclose(M.leaderrank(net).scores, 5 / 4)


def test_convergence_error(net2):
    with pytest.raises(ConvergenceError) as exc:
        M.pagerank(net2, MetricConfig(max_iter=2, eps=1e-15))
    assert exc.value.iterations == 2


# -- HITS ---------------------------------------------------------------------

def test_hits_net2(net2):
    a, h = M.hits(net2)
    np.testing.assert_allclose(a.scores, [1, 0])
    np.testing.assert_allclose(h.scores, [0, 1])


def test_hits_sums_every_iteration_and_matches_eigenvector():
    for net, edges in graphs(10, 40, lo=0.1, seed=11):
        sums = []
        a, h = M.hits(net, on_iteration=lambda a, h: sums.append((a.sum(), h.sum())))
        assert sums and np.allclose(sums, 1.0, atol=1e-9, rtol=0)
        want = oracles.authority_power(40, edges)
        cos = a.scores @ want / np.linalg.norm(a.scores) / np.linalg.norm(want)
        assert cos > 1 - 1e-6


def test_hits_needs_edges():
    with pytest.raises(ValueError):
        M.hits(make_net(["1990-01-01", "1990-01-02"], []))


# -- local metrics ------------------------------------------------------------

def test_h_index_example():
    # target 0 cited by nodes with indegree 3, 2 and 1
    edges = [(1, 0), (2, 0), (3, 0), (4, 1), (5, 1), (6, 1), (4, 2), (5, 2), (4, 3)]
    net = make_net(["1990-01-01"] * 7, edges)
    assert M.h_index(net).scores[0] == 2
    assert M.h_index(net).scores.tolist() == oracles.h_index_brute(7, edges)


def test_ci_example():
    # 0 <- 1 <- 2 and 0 <- 3; 1 is cited by 2 and 4; so k-1 = 1 for 0 and 1
    # node 2 reaches 0 at distance 2: CI_2 = (k_2-1)+ * (k_0-1)+
    edges = [(1, 0), (3, 0), (2, 1), (4, 1), (5, 2), (6, 2), (7, 2)]
    net = make_net(["1990-01-01"] * 8, edges)
    ci = M.collective_influence(net).scores
    assert ci[2] == 2 * 1
    assert ci.tolist() == oracles.ci_brute(8, edges, 2)


def test_slc_example():
    # chain 3 -> 2 -> 1 -> 0; two-step citer counts N(2)=1, so SLC(0) = Q(1) = N(2) = 1
    edges = [(1, 0), (2, 1), (3, 2)]
    net = make_net(["1990-01-01"] * 4, edges)
    assert M.semi_local_centrality(net).scores[0] == 1
    assert M.semi_local_centrality(net).scores.tolist() == oracles.slc_brute(4, edges)


def test_local_metrics_match_brute_force():
    rng = np.random.default_rng(99)
    for g in range(50):
        n = int(rng.integers(5, 201))
        net, edges = random_graph(rng, n, rng.uniform(0.005, 0.08), dag=bool(g % 2))
        assert M.h_index(net).scores.tolist() == oracles.h_index_brute(n, edges)
        for level in (1, 2):
            got = M.collective_influence(net, MetricConfig(ci_level=level)).scores
            assert got.tolist() == oracles.ci_brute(n, edges, level)
        assert M.semi_local_centrality(net).scores.tolist() == oracles.slc_brute(n, edges)
        got = M.yccp(net).scores
        assert got.tolist() == oracles.yccp_brute(net.indegree.tolist(), net.years.tolist())


def test_yccp_example():
    # same year, citation counts 5, 3, 1
    edges = [(i, 0) for i in range(3, 8)] + [(i, 1) for i in range(3, 6)] + [(3, 2)]
    net = make_net(["1990-01-01"] * 8, edges)
    np.testing.assert_allclose(M.yccp(net).scores[:3], [7 / 8, 6 / 8, 5 / 8])
    small = make_net(["1990-01-01"] * 3, [(1, 0), (2, 0), (2, 1)])
    np.testing.assert_allclose(M.yccp(small).scores, [2 / 3, 1 / 3, 0])


def test_yccp_single_year_orders_like_citations(rng):
    net, _ = random_graph(rng, 80, 0.1, span_days=300)
    assert len(set(net.years.tolist())) == 1
    c = M.citation_count(net).scores
    y = M.yccp(net).scores
    # same ordering, ties included
    assert np.array_equal(np.argsort(c, kind="stable"), np.argsort(y, kind="stable"))


def test_age_rank_ignores_edges(rng):
    a, _ = random_graph(rng, 30, 0.3)
    b = CitationNetwork(a.ids, a.dates, [], [])
    assert M.age_rank(a).ranking.tolist() == list(range(30))
    assert np.array_equal(M.age_rank(a).scores, M.age_rank(b).scores)


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 100_000))
def test_input_order_does_not_matter(seed):
    rng = np.random.default_rng(seed)
    net, _ = random_graph(rng, 25, 0.15)
    perm = rng.permutation(net.N)
    inv = np.argsort(perm)
    eperm = rng.permutation(net.E)
    other = CitationNetwork(net.ids[perm], net.dates[perm], inv[net.src][eperm], inv[net.dst][eperm])
    assert other == net
    for f in (M.pagerank, M.leaderrank, M.collective_influence):
        np.testing.assert_array_equal(f(other).scores, f(net).scores)


# -- CiteRank tuning ----------------------------------------------------------

def test_tuning_single_point(synth_small):
    a, tau, table = M.tune_citerank_params(synth_small.network, [0.5], [365.0])
    assert (a, tau) == (0.5, 365.0)
    assert len(table) == 1


def test_tuning_rejects_bad_window(net2):
    with pytest.raises(ValueError):
        M.tune_citerank_params(net2, [0.5], [365.0], window_days=1000)
    with pytest.raises(ValueError):
        M.tune_citerank_params(net2, [], [365.0])


@pytest.mark.slow
@pytest.mark.parametrize("seed", [0, 1])
def test_tuning_recovers_generator_memory(seed):
    aging = 365.0
    res = generate_synthetic(SynthParams(n_nodes=8000, aging_days=aging, seed=seed))
    taus = [y * 365.25 for y in (0.25, 0.5, 1, 2, 4, 8, 16, 32)]
    _, tau, _ = M.tune_citerank_params(res.network, [0.3, 0.5, 0.7], taus)
    assert aging / 3 <= tau <= aging * 3
