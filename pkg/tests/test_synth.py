import numpy as np
import pytest
from scipy.stats import chisquare

from seminalrank.evaluation import AgeGrouping
from seminalrank.synth import SynthParams, generate_synthetic


def test_deterministic():
    p = SynthParams(n_nodes=1500, seed=3)
    a, b = generate_synthetic(p), generate_synthetic(p)
    assert a.network == b.network
    assert a.seminal == b.seminal
    assert generate_synthetic(SynthParams(n_nodes=1500, seed=4)).network != a.network


def test_basic_shape(synth_small):
    net = synth_small.network
    assert net.N == 3000
    assert synth_small.seminal.S == 30
    # only older nodes are cited
    assert np.all(net.dates[net.src] > net.dates[net.dst])
    assert net.years.min() == 1990 and net.years.max() == 2009


def test_unskewed_seminal_is_uniform_in_age():
    res = generate_synthetic(SynthParams(n_nodes=10_000, n_seminal=800, refs_per_node=3, seed=1))
    g = AgeGrouping.build(res.network.N, 40)
    counts = np.bincount(g.group[res.seminal.positions] - 1, minlength=40)
    assert chisquare(counts).pvalue > 0.01


def test_skew_concentrates_in_oldest_group(synth_biased):
    g = AgeGrouping.build(synth_biased.network.N, 40)
    share = np.mean(g.group[synth_biased.seminal.positions] == 1)
    assert share >= 0.7


def test_reference_clamp_warns(caplog):
    res = generate_synthetic(SynthParams(n_nodes=200, refs_per_node=150, n_seminal=5, seed=0))
    assert res.clamped_nodes > 0
    assert "clamped" in caplog.text


@pytest.mark.parametrize("kw", [{"n_nodes": 0}, {"growth": 0}, {"n_seminal": 500, "n_nodes": 1000}])
def test_invalid_params(kw):
    with pytest.raises(ValueError):
        SynthParams(**kw)
