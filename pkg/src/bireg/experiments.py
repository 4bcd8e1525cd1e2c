"""Monte-Carlo experiments on the limit laws, with quantitative reports.

Every experiment is deterministic given (parameters, seed): trial t draws
from the stream ``trial_rng(seed, t)`` and the aggregation is order-fixed,
so thread counts do not change the output.  Reports carry the seed, the
full parameter set, summary statistics, and the distance diagnostics.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy import stats

from . import chebyshev, spectra, walks
from .chebyshev import ChebExpansion
from .graph import BiregularGraph, gram_shifted
from .sampler import SamplerConfig, sample_graph, trial_rng


def poisson_cycle_mean(k: int, d1: int, d2: int) -> float:
    """mu_k = (d1-1)^k (d2-1)^k / (2k), the limiting mean of C_k."""
    return ((d1 - 1) * (d2 - 1)) ** k / (2 * k)


# ---------------------------------------------------------------------------
# streaming moments (pairwise mergeable)
# ---------------------------------------------------------------------------


@dataclass
class Moments:
    count: int = 0
    mean: float = 0.0
    m2: float = 0.0

    def add(self, x: float) -> None:
        self.count += 1
        delta = x - self.mean
        self.mean += delta / self.count
        self.m2 += delta * (x - self.mean)

    def merge(self, other: "Moments") -> "Moments":
        if other.count == 0:
            return self
        if self.count == 0:
            self.count, self.mean, self.m2 = other.count, other.mean, other.m2
            return self
        total = self.count + other.count
        delta = other.mean - self.mean
        self.m2 += other.m2 + delta * delta * self.count * other.count / total
        self.mean += delta * other.count / total
        self.count = total
        return self

    @property
    def variance(self) -> float:
        return self.m2 / (self.count - 1) if self.count > 1 else float("nan")

    @property
    def stderr(self) -> float:
        return math.sqrt(self.variance / self.count) if self.count > 1 else float("nan")


# ---------------------------------------------------------------------------
# total-variation estimators (exact w.r.t. the empirical measure)
# ---------------------------------------------------------------------------


def tv_empirical_poisson(values, mu: float) -> float:
    """TV between the empirical law of integer values and Poisson(mu)."""
    vals, counts = np.unique(np.asarray(values, dtype=np.int64), return_counts=True)
    emp = counts / counts.sum()
    pmf = stats.poisson.pmf(vals, mu)
    return float(0.5 * (np.abs(emp - pmf).sum() + 1.0 - pmf.sum()))


def tv_empirical_product_poisson(tuples, mus) -> tuple:
    """TV between the empirical law of count vectors and independent Poissons.

    Returns (tv, lattice_cells, bias_estimate): lattice_cells is the size of
    the product lattice holding >= 99.9% of the product-Poisson mass and
    sqrt(cells/samples) estimates the positive bias of the plug-in TV.
    """
    mus = list(mus)
    counts = {}
    n = 0
    for t in tuples:
        key = tuple(int(x) for x in t)
        counts[key] = counts.get(key, 0) + 1
        n += 1
    tv = 0.0
    mass = 0.0
    for key, c in counts.items():
        p = math.prod(stats.poisson.pmf(key[i], mus[i]) for i in range(len(mus)))
        tv += abs(c / n - p)
        mass += p
    tv = 0.5 * (tv + 1.0 - mass)
    per_coord = 0.001 / max(len(mus), 1)
    cells = 1
    for mu in mus:
        cells *= int(stats.poisson.ppf(1 - per_coord, mu)) + 1
    return float(tv), cells, math.sqrt(cells / n)


def tv_two_samples(x, y) -> float:
    """TV between the empirical laws of two samples on a shared discretization.

    Integer-valued data uses integer cells; otherwise a common uniform grid
    with a Freedman-Diaconis-style width.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    both = np.concatenate([x, y])
    if np.allclose(both, np.round(both), atol=1e-9):
        xi, yi = np.round(x).astype(np.int64), np.round(y).astype(np.int64)
    else:
        iqr = np.subtract(*np.percentile(both, [75, 25])) or both.std() or 1.0
        width = 2 * iqr / len(both) ** (1 / 3)
        xi = np.floor(x / width).astype(np.int64)
        yi = np.floor(y / width).astype(np.int64)
    vals = np.union1d(xi, yi)
    px = np.searchsorted(vals, xi)
    py = np.searchsorted(vals, yi)
    hx = np.bincount(px, minlength=len(vals)) / len(xi)
    hy = np.bincount(py, minlength=len(vals)) / len(yi)
    return float(0.5 * np.abs(hx - hy).sum())


# ---------------------------------------------------------------------------
# fast cycle counting for sampled graphs
# ---------------------------------------------------------------------------


def cycle_count_vector(g: BiregularGraph, r: int) -> list:
    """[C_2, ..., C_r]; closed-form trace counts for k <= 3, DFS beyond.

    C_2 = sum_{i<l} C(codeg, 2); 6*C_3 = tr(A1^3) - 3(d2-2)(tr(P^2) - m d1 d2)
    + 2 m d2(d2-1)(d2-2) with P = XX^T, A1 = P - d1 I (mediator-coincidence
    inclusion-exclusion; cross-validated against the DFS enumerator).
    """
    out = []
    if r >= 2:
        # float64 BLAS keeps the products exact here (entries <= d1 << 2^53)
        if g.n * g.m <= 4_000_000:
            x = g.biadjacency.astype(np.float64)
            p = x @ x.T
            np.fill_diagonal(p, 0.0)
        else:
            p = gram_shifted(g).astype(np.float64)
        c2 = float((p * (p - 1)).sum()) / 4.0
        out.append(int(round(c2)))
    if r >= 3:
        d1, d2, m = g.d1, g.d2, g.m
        a1sq = p @ p
        tr_a1_cubed = float((a1sq * p).sum())
        # tr(P^2) from A1 = P - d1 I: tr(P^2) = tr(A1^2) + 2 d1 tr(P) - n d1^2
        tr_p2 = float(np.trace(a1sq)) + g.n * d1 * d1
        s_sum = tr_p2 - m * d1 * d2
        c3 = (tr_a1_cubed - 3 * (d2 - 2) * s_sum + 2 * m * d2 * (d2 - 1) * (d2 - 2)) / 6.0
        out.append(int(round(c3)))
    for k in range(4, r + 1):
        out.append(walks.count_cycles(g, k))
    return out


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------


@dataclass
class ExperimentReport:
    name: str
    params: dict
    seed: int
    statistics: dict = field(default_factory=dict)
    distances: dict = field(default_factory=dict)
    samples: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        def clean(obj):
            if isinstance(obj, dict):
                return {str(k): clean(v) for k, v in obj.items()}
            if isinstance(obj, (list, tuple)):
                return [clean(v) for v in obj]
            if isinstance(obj, np.ndarray):
                return [clean(v) for v in obj.tolist()]
            if isinstance(obj, (np.integer,)):
                return int(obj)
            if isinstance(obj, (np.floating,)):
                return float(obj)
            return obj

        return clean(
            {
                "name": self.name,
                "params": self.params,
                "seed": self.seed,
                "statistics": self.statistics,
                "distances": self.distances,
                "samples": self.samples,
                "notes": self.notes,
            }
        )

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2) + "\n")


def _map_trials(samples: int, worker, threads: int = 1) -> list:
    if threads <= 1:
        return [worker(t) for t in range(samples)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(worker, range(samples)))


def _infer_m(n, d1, d2):
    if (n * d1) % d2:
        raise ValueError(f"n*d1 = {n * d1} not divisible by d2 = {d2}")
    return n * d1 // d2


# ---------------------------------------------------------------------------
# experiments
# ---------------------------------------------------------------------------


def poisson_experiment(
    n: int,
    m: int,
    d1: int,
    d2: int,
    r: int,
    samples: int,
    seed: int,
    method: str = "auto",
    threads: int = 1,
    keep_samples: bool = False,
) -> ExperimentReport:
    """Sample graphs and compare (C_2..C_r) with independent Poissons."""
    if r < 2:
        raise ValueError("r must be >= 2")
    config = SamplerConfig(method=method, seed=seed)

    def worker(t):
        rng = trial_rng(seed, t)
        g = sample_graph(n, m, d1, d2, config, rng)
        return cycle_count_vector(g, r)

    rows = np.array(_map_trials(samples, worker, threads), dtype=np.int64)
    mus = [poisson_cycle_mean(k, d1, d2) for k in range(2, r + 1)]
    statistics = {}
    distances = {}
    for idx, k in enumerate(range(2, r + 1)):
        col = rows[:, idx]
        mom = Moments()
        for x in col:
            mom.add(float(x))
        statistics[f"C{k}"] = {
            "mean": mom.mean,
            "variance": mom.variance,
            "stderr": mom.stderr,
            "target_mean": mus[idx],
            "dispersion": mom.variance / mus[idx],
        }
        distances[f"tv_C{k}"] = tv_empirical_poisson(col, mus[idx])
    joint_tv, cells, bias = tv_empirical_product_poisson(rows, mus)
    distances["tv_joint"] = joint_tv
    distances["tv_joint_lattice_cells"] = cells
    distances["tv_joint_bias_estimate"] = bias
    report = ExperimentReport(
        name="poisson",
        params={"n": n, "m": m, "d1": d1, "d2": d2, "r": r, "samples": samples, "method": method},
        seed=seed,
        statistics=statistics,
        distances=distances,
    )
    if keep_samples:
        report.samples["cycle_counts"] = rows
    return report


def sample_limit_Yf(expansion: ChebExpansion, d1: int, d2: int, k_max: int, rng) -> float:
    """One draw of the limiting fixed-degree fluctuation.

    Draws independent Poisson cycle counts C_j for j = 2..k_max and assembles
    sum_k a_k q^{-k/2} sum_{j | k, j >= 2} 2j C_j with Gamma-basis a_k.
    """
    if k_max < 2:
        raise ValueError("k_max must be >= 2")
    exp = expansion.to_gamma(d1) if expansion.basis != "gamma" else expansion
    q = (d1 - 1) * (d2 - 1)
    cs = {j: rng.poisson(poisson_cycle_mean(j, d1, d2)) for j in range(2, k_max + 1)}
    total = 0.0
    for k in range(2, min(exp.degree, k_max) + 1):
        a = exp.coefficient(k)
        if a == 0.0:
            continue
        cnbw = sum(2 * j * cs[j] for j in range(2, k + 1) if k % j == 0)
        total += a * cnbw / q ** (k / 2)
    return float(total)


def fluctuation_experiment_fixed(
    n: int,
    d1: int,
    d2: int,
    expansion: ChebExpansion,
    samples: int,
    seed: int,
    method: str = "auto",
    threads: int = 1,
    use_eigenvalues: bool = False,
    k_max: int | None = None,
    keep_samples: bool = True,
) -> ExperimentReport:
    """Empirical law of the centered statistic vs the Poisson-built limit law.

    The statistic defaults to the exact walk-count identity (a polynomial
    expansion makes sum f(lambda_i) a rational combination of CNBW counts);
    use_eigenvalues=True computes it from the spectrum instead.
    """
    if (d1, d2) == (2, 2):
        raise ValueError("(d1, d2) = (2, 2) has no nondegenerate fixed-degree limit")
    m = _infer_m(n, d1, d2)
    exp = expansion.to_gamma(d1)
    deg = exp.degree  # a constant-only expansion yields Y identically 0
    k_max = k_max or max(deg, 2)
    config = SamplerConfig(method=method, seed=seed)
    q = (d1 - 1) * (d2 - 1)

    def worker(t):
        rng = trial_rng(seed, t)
        g = sample_graph(n, m, d1, d2, config, rng)
        if use_eigenvalues:
            return spectra.fluctuation_fixed(spectra.eigenvalues(g), exp)
        cnbw = walks.cnbw_counts_up_to(g, deg)
        return sum(
            exp.coefficient(k) * cnbw[k - 1] / q ** (k / 2) for k in range(1, deg + 1)
        )

    ys = np.array(_map_trials(samples, worker, threads), dtype=float)
    limit_rng_base = samples  # separate stream indices for the limit draws
    limit = np.array(
        [sample_limit_Yf(exp, d1, d2, k_max, trial_rng(seed, limit_rng_base + t)) for t in range(samples)],
        dtype=float,
    )
    mean_limit = sum(
        exp.coefficient(k) * chebyshev.mu_cnbw(k, d1, d2) / q ** (k / 2)
        for k in range(2, deg + 1)
    )
    mom = Moments()
    for y in ys:
        mom.add(y)
    lm = Moments()
    for y in limit:
        lm.add(y)
    report = ExperimentReport(
        name="fluctuation-fixed",
        params={
            "n": n, "m": m, "d1": d1, "d2": d2, "samples": samples,
            "expansion": exp.to_dict(), "k_max": k_max, "method": method,
            "use_eigenvalues": use_eigenvalues,
        },
        seed=seed,
        statistics={
            "Y": {"mean": mom.mean, "variance": mom.variance, "stderr": mom.stderr},
            "Y_limit": {"mean": lm.mean, "variance": lm.variance, "analytic_mean": mean_limit},
        },
        distances={"tv_vs_limit": tv_two_samples(ys, limit)},
    )
    if keep_samples:
        report.samples["Y"] = ys
        report.samples["Y_limit"] = limit
    return report


def fluctuation_experiment_growing(
    n: int,
    d1: int,
    d2: int,
    expansions: list,
    samples: int,
    seed: int,
    r_n: int | None = None,
    method: str = "auto",
    threads: int = 1,
    keep_samples: bool = True,
) -> ExperimentReport:
    """Gaussian check for growing degrees: means, variances, covariances, KS."""
    m = _infer_m(n, d1, d2)
    exps = [e.to_phi() for e in expansions]
    config = SamplerConfig(method=method, seed=seed)

    def worker(t):
        rng = trial_rng(seed, t)
        g = sample_graph(n, m, d1, d2, config, rng)
        sample = spectra.eigenvalues(g)
        return [spectra.fluctuation_growing(sample, e, r_n) for e in exps]

    ys = np.array(_map_trials(samples, worker, threads), dtype=float)
    statistics = {}
    distances = {}
    for i, e in enumerate(exps):
        target = chebyshev.sigma_f(e)
        col = ys[:, i]
        statistics[f"Y{i}"] = {
            "mean": float(col.mean()),
            "variance": float(col.var(ddof=1)),
            "target_variance": target,
            "stderr": float(col.std(ddof=1) / math.sqrt(samples)),
        }
        if target > 0:
            distances[f"ks_gaussian_Y{i}"] = spectra.ks_statistic(
                col, lambda x, s=math.sqrt(target): stats.norm.cdf(np.asarray(x) / s)
            )
    for i in range(len(exps)):
        for j in range(i + 1, len(exps)):
            emp = float(np.cov(ys[:, i], ys[:, j], ddof=1)[0, 1])
            statistics[f"cov_Y{i}_Y{j}"] = {
                "empirical": emp,
                "target": chebyshev.cov_fg(exps[i], exps[j]),
            }
    ratio = d1 / d2
    note = (
        f"d1/d2 = {ratio:g}, d2 = {d2}: the Gaussian limit requires the ratio "
        "or d2 to stay bounded along the sequence"
    )
    report = ExperimentReport(
        name="fluctuation-growing",
        params={
            "n": n, "m": m, "d1": d1, "d2": d2, "samples": samples,
            "expansions": [e.to_dict() for e in exps], "r_n": r_n, "method": method,
        },
        seed=seed,
        statistics=statistics,
        distances=distances,
        notes=[note],
    )
    if keep_samples:
        report.samples["Y"] = ys
    return report


def globallaw_experiment(
    n: int,
    d1: int,
    d2: int,
    samples: int,
    model: str,
    seed: int,
    params: dict | None = None,
    method: str = "auto",
    threads: int = 1,
) -> ExperimentReport:
    """Bulk Kolmogorov-Smirnov distance to a reference density, per sample."""
    m = _infer_m(n, d1, d2)
    params = params or {}
    if model == "fixed-degree" and not params:
        params = {"d1": d1, "d2": d2}
    config = SamplerConfig(method=method, seed=seed)

    def worker(t):
        rng = trial_rng(seed, t)
        g = sample_graph(n, m, d1, d2, config, rng)
        sample = spectra.eigenvalues(g)
        return (
            spectra.esd_distance(sample, model, params),
            spectra.spectral_edge_deviation(sample),
            abs(sample.eigenvalues[0] - sample.top_exact),
        )

    rows = _map_trials(samples, worker, threads)
    ks = np.array([r[0] for r in rows])
    edge = np.array([r[1] for r in rows])
    top = np.array([r[2] for r in rows])
    return ExperimentReport(
        name="globallaw",
        params={
            "n": n, "m": m, "d1": d1, "d2": d2, "samples": samples,
            "model": model, "model_params": params, "method": method,
        },
        seed=seed,
        statistics={
            "ks": {"mean": float(ks.mean()), "max": float(ks.max())},
            "edge_deviation": {"mean": float(edge.mean()), "max": float(edge.max())},
            "top_eigenvalue_error": {"max": float(top.max())},
        },
        distances={"ks_mean": float(ks.mean()), "ks_max": float(ks.max())},
    )


# ---------------------------------------------------------------------------
# config-file entry point
# ---------------------------------------------------------------------------


def run_experiment(config: dict) -> ExperimentReport:
    """Dispatch a config dict: {"experiment": name, "seed": s, "params": {...}}."""
    name = config["experiment"]
    seed = int(config.get("seed", 0))
    params = dict(config.get("params", {}))
    if name == "poisson":
        return poisson_experiment(seed=seed, **params)
    if name == "fluctuation-fixed":
        params["expansion"] = _expansion_from_config(params.pop("expansion"), params.get("d1"))
        return fluctuation_experiment_fixed(seed=seed, **params)
    if name == "fluctuation-growing":
        params["expansions"] = [
            _expansion_from_config(e, params.get("d1")) for e in params.pop("expansions")
        ]
        return fluctuation_experiment_growing(seed=seed, **params)
    if name == "globallaw":
        return globallaw_experiment(seed=seed, **params)
    raise ValueError(f"unknown experiment {name!r}")


def _expansion_from_config(spec, d1):
    if isinstance(spec, dict):
        return ChebExpansion.from_dict(spec)
    if isinstance(spec, str):
        f = chebyshev.builtin_function(spec, d1)
        if isinstance(f, ChebExpansion):
            return f
        return chebyshev.fit_expansion(f, basis="phi", d1=d1)
    raise ValueError(f"cannot build expansion from {spec!r}")
