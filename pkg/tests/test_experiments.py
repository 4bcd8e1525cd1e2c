import json

import numpy as np
import pytest
from scipy import stats

from bireg.chebyshev import basis_element
from bireg.experiments import (
    Moments,
    cycle_count_vector,
    fluctuation_experiment_fixed,
    fluctuation_experiment_growing,
    globallaw_experiment,
    poisson_cycle_mean,
    poisson_experiment,
    run_experiment,
    sample_limit_Yf,
    tv_empirical_poisson,
    tv_empirical_product_poisson,
    tv_two_samples,
)
from bireg.sampler import trial_rng
from bireg.walks import count_cycles
from conftest import random_corpus


def test_moments_merge_matches_batch():
    rng = np.random.default_rng(0)
    xs = rng.normal(size=101)
    a, b, whole = Moments(), Moments(), Moments()
    for x in xs[:40]:
        a.add(x)
    for x in xs[40:]:
        b.add(x)
    for x in xs:
        whole.add(x)
    a.merge(b)
    assert a.count == whole.count
    assert a.mean == pytest.approx(whole.mean, rel=1e-12)
    assert a.variance == pytest.approx(whole.variance, rel=1e-12)


def test_tv_poisson_exact_small_case():
    # empirical: half mass at 0, half at 1 vs Poisson(0) = point mass at 0
    assert tv_empirical_poisson([0, 1], 1e-12) == pytest.approx(0.5, abs=1e-6)
    draws = stats.poisson.rvs(4.0, size=4000, random_state=1)
    assert tv_empirical_poisson(draws, 4.0) < 0.05


def test_tv_joint_dominates_marginals():
    rng = trial_rng(9)
    rows = np.column_stack(
        [rng.poisson(4.0, size=500), rng.poisson(10.0, size=500)]
    )
    joint, cells, bias = tv_empirical_product_poisson(rows, [4.0, 10.0])
    tv2 = tv_empirical_poisson(rows[:, 0], 4.0)
    tv3 = tv_empirical_poisson(rows[:, 1], 10.0)
    assert joint >= max(tv2, tv3) - 1e-12
    assert 0 <= joint <= 1
    assert cells > 0 and bias > 0


def test_tv_two_samples_identical_is_zero():
    xs = np.arange(10)
    assert tv_two_samples(xs, xs) == 0.0
    assert tv_two_samples([0, 0, 1], [1, 1, 0]) == pytest.approx(1 / 3, abs=1e-12)


def test_cycle_count_vector_matches_dfs():
    for g in random_corpus(6, 12, 16, 4, 3, seed=51):
        assert cycle_count_vector(g, 4) == [count_cycles(g, k) for k in (2, 3, 4)]


def test_poisson_cycle_mean():
    assert poisson_cycle_mean(2, 3, 3) == pytest.approx(4.0)
    assert poisson_cycle_mean(3, 3, 3) == pytest.approx(64 / 6)


def test_poisson_experiment_report():
    rep = poisson_experiment(60, 60, 3, 3, r=3, samples=200, seed=3)
    assert rep.name == "poisson"
    assert set(rep.statistics) == {"C2", "C3"}
    assert 0 <= rep.distances["tv_C2"] <= 1
    assert rep.distances["tv_joint"] >= max(rep.distances["tv_C2"], rep.distances["tv_C3"]) - 1e-12
    # reproducibility
    rep2 = poisson_experiment(60, 60, 3, 3, r=3, samples=200, seed=3)
    assert rep.to_dict() == rep2.to_dict()
    rep3 = poisson_experiment(60, 60, 3, 3, r=3, samples=200, seed=4)
    assert rep3.to_dict() != rep.to_dict()


def test_poisson_mean_within_four_stderr_in_sparse_regime():
    # sqrt(r) q^{3r/2} / (n d1) = sqrt(2)/200 << 0.1 here, so the empirical
    # mean of C_2 must sit within 4 standard errors of mu_2
    rep = poisson_experiment(100, 100, 2, 2, r=2, samples=3000, seed=17)
    c2 = rep.statistics["C2"]
    assert abs(c2["mean"] - c2["target_mean"]) <= 4 * c2["stderr"]


def test_poisson_experiment_threads_deterministic():
    rep1 = poisson_experiment(40, 40, 2, 2, r=2, samples=100, seed=5, threads=1)
    rep4 = poisson_experiment(40, 40, 2, 2, r=2, samples=100, seed=5, threads=4)
    assert rep1.to_dict() == rep4.to_dict()


def test_sample_limit_yf_gamma2_is_poisson():
    rng = trial_rng(1)
    draws = [sample_limit_Yf(basis_element("gamma", 2, 3), 3, 3, 4, rng) for _ in range(3000)]
    assert np.mean(draws) == pytest.approx(4.0, abs=0.15)
    assert tv_empirical_poisson(draws, 4.0) < 0.05


def test_sample_limit_yf_zero_expansion():
    rng = trial_rng(2)
    zero = basis_element("gamma", 2, 3)
    zero = zero.__class__(basis="gamma", coeffs=[0.0, 0.0, 0.0], d1=3)
    assert sample_limit_Yf(zero, 3, 3, 4, rng) == 0.0


def test_sample_limit_yf_analytic_mean_gamma3():
    rng = trial_rng(3)
    q = 4
    draws = [sample_limit_Yf(basis_element("gamma", 3, 3), 3, 3, 6, rng) for _ in range(4000)]
    # mean = mu_3^cnbw / q^{3/2} = q^3 / q^{3/2} = 8
    assert np.mean(draws) == pytest.approx(8.0, rel=0.05)


def test_fluctuation_fixed_rejects_degenerate_degrees():
    with pytest.raises(ValueError):
        fluctuation_experiment_fixed(20, 2, 2, basis_element("gamma", 2, 2), samples=5, seed=1)


def test_fluctuation_fixed_zero_expansion_is_identically_zero():
    from bireg.chebyshev import ChebExpansion

    zero = ChebExpansion(basis="gamma", coeffs=[0.0], d1=3)
    rep = fluctuation_experiment_fixed(12, 3, 3, zero, samples=8, seed=2)
    assert np.all(rep.samples["Y"] == 0.0)
    assert np.all(rep.samples["Y_limit"] == 0.0)


def test_fluctuation_fixed_identity_vs_eigen_paths():
    exp = basis_element("gamma", 2, 3)
    a = fluctuation_experiment_fixed(30, 3, 3, exp, samples=25, seed=6, use_eigenvalues=False)
    b = fluctuation_experiment_fixed(30, 3, 3, exp, samples=25, seed=6, use_eigenvalues=True)
    assert np.allclose(a.samples["Y"], b.samples["Y"], atol=1e-8)


def test_fluctuation_fixed_mean_near_limit():
    exp = basis_element("gamma", 2, 3)
    rep = fluctuation_experiment_fixed(120, 3, 3, exp, samples=400, seed=7)
    target = rep.statistics["Y_limit"]["analytic_mean"]
    se = 3 * (rep.statistics["Y"]["variance"] / 400) ** 0.5
    assert abs(rep.statistics["Y"]["mean"] - target) < se + 0.5


def test_fluctuation_growing_report_fields():
    rep = fluctuation_experiment_growing(
        80, 4, 4, [basis_element("phi", 2)], samples=30, seed=8
    )
    assert "Y0" in rep.statistics
    assert rep.statistics["Y0"]["target_variance"] == pytest.approx(4.0)
    assert rep.notes


def test_globallaw_report(tmp_path):
    rep = globallaw_experiment(120, 6, 3, samples=3, model="semicircle", seed=9)
    assert 0 <= rep.distances["ks_mean"] <= 1
    path = tmp_path / "rep.json"
    rep.save(path)
    data = json.loads(path.read_text())
    assert data["name"] == "globallaw"
    assert data["seed"] == 9


def test_run_experiment_config_roundtrip():
    config = {
        "experiment": "poisson",
        "seed": 12,
        "params": {"n": 40, "m": 40, "d1": 2, "d2": 2, "r": 2, "samples": 50},
    }
    rep = run_experiment(config)
    assert rep.seed == 12
    config2 = {
        "experiment": "fluctuation-fixed",
        "seed": 1,
        "params": {"n": 30, "d1": 3, "d2": 3, "expansion": "gamma_2", "samples": 10},
    }
    rep2 = run_experiment(config2)
    assert rep2.name == "fluctuation-fixed"
