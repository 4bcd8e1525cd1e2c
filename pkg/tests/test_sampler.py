import numpy as np
import pytest
from scipy import stats

from bireg.errors import BalanceViolation, TooLarge
from bireg.graph import complete_bipartite
from bireg.sampler import (
    SamplerConfig,
    enumerate_all,
    sample_configuration,
    sample_graph,
    sample_switch_chain,
    seed_graph,
    trial_rng,
)


def test_enumerate_3322_has_six_graphs():
    graphs = enumerate_all(3, 3, 2, 2)
    assert len(graphs) == 6
    assert len(set(graphs)) == 6


def test_enumerate_small_cases():
    assert len(enumerate_all(2, 2, 2, 2)) == 1
    assert len(enumerate_all(2, 2, 1, 1)) == 2


def test_enumerate_too_large():
    with pytest.raises(TooLarge):
        enumerate_all(6, 6, 3, 3)


def test_configuration_sampler_validates():
    rng = trial_rng(0)
    for _ in range(20):
        g = sample_configuration(6, 8, 4, 3, rng)
        assert g.n == 6 and g.m == 8


def test_configuration_sampler_rejects_bad_params():
    with pytest.raises(BalanceViolation):
        sample_configuration(3, 2, 2, 2, trial_rng(0))
    with pytest.raises(ValueError):
        sample_configuration(2, 1, 2, 4, trial_rng(0))  # d1 > m
    with pytest.raises(ValueError):
        sample_configuration(1, 2, 4, 2, trial_rng(0))  # d2 > n


def test_unique_graph_space_always_returns_it():
    for t in range(5):
        assert sample_configuration(2, 2, 2, 2, trial_rng(0, t)) == complete_bipartite(2, 2)


def test_bit_reproducibility():
    g1 = sample_configuration(12, 12, 3, 3, trial_rng(7, 3))
    g2 = sample_configuration(12, 12, 3, 3, trial_rng(7, 3))
    assert g1 == g2
    c = SamplerConfig(method="switch-chain", mcmc_steps=500, seed=7)
    h1 = sample_switch_chain(12, 12, 3, 3, c, trial_rng(7, 4))
    h2 = sample_switch_chain(12, 12, 3, 3, c, trial_rng(7, 4))
    assert h1 == h2


def test_independent_streams_differ():
    g1 = sample_configuration(12, 12, 3, 3, trial_rng(7, 0))
    g2 = sample_configuration(12, 12, 3, 3, trial_rng(7, 1))
    assert g1 != g2


def test_seed_graph_circulant():
    g = seed_graph(9, 12, 4, 3)
    assert g.d1 == 4 and g.d2 == 3


def test_switch_chain_on_frozen_space_returns_seed():
    # K_{2,2} is the unique (2,2,2,2) graph: every proposal is rejected
    c = SamplerConfig(method="switch-chain", mcmc_steps=200, seed=0)
    g = sample_switch_chain(2, 2, 2, 2, c, trial_rng(0))
    assert g == complete_bipartite(2, 2)


def test_switch_chain_states_stay_biregular():
    c = SamplerConfig(method="switch-chain", mcmc_steps=100, seed=0)
    for t in range(10):
        g = sample_switch_chain(8, 8, 3, 3, c, trial_rng(1, t))
        assert g.n == 8  # construction re-validates degrees


@pytest.mark.parametrize("method", ["exact-rejection", "switch-chain"])
def test_uniformity_chi_square(method):
    graphs = {g.edges: i for i, g in enumerate(enumerate_all(3, 3, 2, 2))}
    counts = np.zeros(len(graphs))
    cfg = SamplerConfig(method=method, mcmc_steps=2000, seed=0)
    draws = 1500
    for t in range(draws):
        g = sample_graph(3, 3, 2, 2, cfg, trial_rng(31, t))
        counts[graphs[g.edges]] += 1
    expected = draws / len(graphs)
    chi2 = ((counts - expected) ** 2 / expected).sum()
    assert chi2 < stats.chi2.ppf(0.99, len(graphs) - 1)


def test_auto_method_picks_chain_for_dense_degrees():
    cfg = SamplerConfig(method="auto")
    assert cfg.resolve_method(1000, 1000, 8, 8) == "switch-chain"
    assert cfg.resolve_method(300, 300, 3, 3) == "exact-rejection"
    assert cfg.resolve_method(20, 20, 8, 8) == "switch-chain"


def test_config_roundtrip():
    cfg = SamplerConfig(method="switch-chain", mcmc_steps=5, seed=9)
    assert SamplerConfig.from_dict(cfg.to_dict()) == cfg
