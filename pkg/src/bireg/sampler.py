"""Samplers for uniform random biregular bipartite graphs.

Two methods are provided:

* ``exact-rejection`` -- the configuration model: a uniform perfect matching
  of the n*d1 left stubs to the m*d2 right stubs, rejected until simple.
  Conditioned on acceptance this is exactly uniform, but the acceptance
  probability decays like exp(-(d1-1)(d2-1)/2), so it stalls for dense
  degree pairs.
* ``switch-chain`` -- a double-edge-swap Markov chain started from a
  deterministic circulant seed graph.  Degree-exact at every step and
  approximately uniform after burn-in (a heuristic with no mixing
  guarantee; validated empirically against exhaustive enumeration at tiny
  sizes).

RNG contract: all sampling takes a ``numpy.random.Generator``.  Parallel
trials derive independent streams via ``trial_rng(seed, trial_index)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from ._switch_kernel import run_swaps
from .errors import (
    BalanceViolation,
    RejectionBudgetExceeded,
    SeedConstructionFailed,
    TooLarge,
)
from .graph import BiregularGraph

ENUMERATION_LIMIT = 25  # max n*m for enumerate_all
PROPOSAL_BLOCK = 1 << 14


def trial_rng(seed: int, trial_index: int = 0) -> np.random.Generator:
    """Independent, reproducible stream for (seed, trial_index)."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(seed), int(trial_index)])))


@dataclass
class SamplerConfig:
    """Sampling method and budgets.

    method: "auto" picks exact-rejection in the sparse regime and the switch
    chain when rejection is hopeless (dense threshold d1*d2 > n/4, or
    configuration-model acceptance estimate exp(-q/2) below 1/max_rejections).
    """

    method: str = "auto"
    mcmc_steps: int = 2000
    seed: int = 0
    max_rejections: int = 10000
    burnin_factor: int = 20  # target accepted swaps = burnin_factor * |E|
    dense_threshold: float = 0.25  # switch chain when d1*d2 > dense_threshold * n

    def __post_init__(self):
        if self.method not in ("auto", "exact-rejection", "switch-chain"):
            raise ValueError(f"unknown method {self.method!r}")
        if self.method == "switch-chain" and self.mcmc_steps < 1:
            raise ValueError("mcmc_steps must be >= 1 for the switch chain")

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "mcmc_steps": self.mcmc_steps,
            "seed": self.seed,
            "max_rejections": self.max_rejections,
            "burnin_factor": self.burnin_factor,
            "dense_threshold": self.dense_threshold,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SamplerConfig":
        return cls(**{k: data[k] for k in data})

    def resolve_method(self, n: int, m: int, d1: int, d2: int) -> str:
        if self.method != "auto":
            return self.method
        q = (d1 - 1) * (d2 - 1)
        if d1 * d2 > self.dense_threshold * n:
            return "switch-chain"
        # expected rejection count ~ exp(q/2); stay within budget
        if q / 2.0 > np.log(max(self.max_rejections, 2)):
            return "switch-chain"
        return "exact-rejection"


def _check_params(n, m, d1, d2):
    if min(n, m, d1, d2) < 1:
        raise ValueError("n, m, d1, d2 must all be >= 1")
    if n * d1 != m * d2:
        raise BalanceViolation(f"n*d1 = {n * d1} != m*d2 = {m * d2}")
    if d1 > m or d2 > n:
        raise ValueError("no simple graph exists: need d1 <= m and d2 <= n")


def _matching_edges(n, m, d1, d2, rng):
    """One configuration-model matching; returns edges or None if not simple."""
    rows = np.repeat(np.arange(n, dtype=np.int64), d1)
    cols = rng.permutation(np.repeat(np.arange(m, dtype=np.int64), d2))
    keys = rows * m + cols
    if np.unique(keys).size != keys.size:
        return None
    return keys


def sample_configuration(n, m, d1, d2, rng, max_rejections=10000) -> BiregularGraph:
    """Exactly uniform sample by stub matching with rejection of multi-edges."""
    _check_params(n, m, d1, d2)
    for _ in range(max_rejections):
        keys = _matching_edges(n, m, d1, d2, rng)
        if keys is not None:
            edges = tuple((int(k) // m, int(k) % m) for k in np.sort(keys))
            return BiregularGraph(n=n, m=m, d1=d1, d2=d2, edges=edges)
    raise RejectionBudgetExceeded(
        f"no simple matching in {max_rejections} attempts "
        f"(acceptance ~ exp(-{(d1 - 1) * (d2 - 1) / 2:.1f}))"
    )


def seed_graph(n, m, d1, d2) -> BiregularGraph:
    """Deterministic circulant placement: edges (i, (i*d1 + t) mod m)."""
    _check_params(n, m, d1, d2)
    if d1 > m:
        raise SeedConstructionFailed("d1 > m")
    edges = tuple((i, (i * d1 + t) % m) for i in range(n) for t in range(d1))
    return BiregularGraph(n=n, m=m, d1=d1, d2=d2, edges=edges)


def _run_chain(g: BiregularGraph, rng, burnin_target, steps):
    u = np.array([e[0] for e in g.edges], dtype=np.int64)
    v = np.array([e[1] for e in g.edges], dtype=np.int64)
    present = np.zeros((g.n, g.m), dtype=np.bool_)
    present[u, v] = True
    ne = len(u)

    def run_block(count):
        a = rng.integers(0, ne, size=count)
        b = rng.integers(0, ne, size=count)
        return run_swaps(u, v, present, a, b)

    # burn-in: run until the accepted-swap target, with a proposal cap so
    # frozen spaces (e.g. K_{2,2}, where every proposal is rejected) terminate
    accepted = 0
    proposals = 0
    cap = 40 * max(burnin_target, 1) + 1000
    while accepted < burnin_target and proposals < cap:
        block = min(PROPOSAL_BLOCK, cap - proposals)
        accepted += run_block(block)
        proposals += block

    done = 0
    while done < steps:
        block = min(PROPOSAL_BLOCK, steps - done)
        run_block(block)
        done += block
    edges = tuple(sorted(zip(u.tolist(), v.tolist())))
    return BiregularGraph(n=g.n, m=g.m, d1=g.d1, d2=g.d2, edges=edges)


def sample_switch_chain(n, m, d1, d2, config: SamplerConfig, rng) -> BiregularGraph:
    """Approximately uniform sample from a fresh double-edge-swap chain."""
    g0 = seed_graph(n, m, d1, d2)
    burnin_target = config.burnin_factor * len(g0.edges)
    return _run_chain(g0, rng, burnin_target, config.mcmc_steps)


def sample_graph(n, m, d1, d2, config: SamplerConfig, rng) -> BiregularGraph:
    """Dispatch on the configured (or auto-resolved) method."""
    method = config.resolve_method(n, m, d1, d2)
    if method == "exact-rejection":
        return sample_configuration(n, m, d1, d2, rng, config.max_rejections)
    return sample_switch_chain(n, m, d1, d2, config, rng)


def enumerate_all(n, m, d1, d2) -> list:
    """All simple (d1, d2)-biregular graphs on [n] x [m], each exactly once.

    Brute force over 0/1 matrices with the given margins; guarded by
    n*m <= ENUMERATION_LIMIT.
    """
    _check_params(n, m, d1, d2)
    if n * m > ENUMERATION_LIMIT:
        raise TooLarge(f"n*m = {n * m} > {ENUMERATION_LIMIT}")
    rows = list(itertools.combinations(range(m), d1))
    out = []
    capacity = [d2] * m

    def place(i, acc):
        if i == n:
            out.append(BiregularGraph(n=n, m=m, d1=d1, d2=d2, edges=tuple(acc)))
            return
        remaining = n - i
        for row in rows:
            if any(capacity[j] == 0 for j in row):
                continue
            for j in row:
                capacity[j] -= 1
            # prune: every column must still be fillable by the remaining rows
            if all(c <= remaining - 1 for c in capacity):
                place(i + 1, acc + [(i, j) for j in row])
            for j in row:
                capacity[j] += 1

    place(0, [])
    return out
