"""Biregular bipartite graphs and their matrix views.

A (n, m, d1, d2)-biregular bipartite graph has vertex classes V1 = [n] and
V2 = [m]; every V1 vertex has degree d1 and every V2 vertex degree d2, which
forces n*d1 = m*d2.  Graphs are immutable value objects; all derived views
(biadjacency, adjacency lists, Gram matrix) are cached on first use.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np

from .errors import (
    BalanceViolation,
    DegenerateScaling,
    DegreeMismatch,
    DuplicateEdge,
)


@dataclass(frozen=True)
class BiregularGraph:
    """Simple bipartite graph with constant degrees on both sides.

    Parameters
    ----------
    n, m : int
        Sizes of V1 and V2.
    d1, d2 : int
        Degrees of V1 and V2 vertices.
    edges : tuple of (int, int)
        Sorted tuple of (i, j) pairs, i in [n], j in [m].
    """

    n: int
    m: int
    d1: int
    d2: int
    edges: tuple

    def __post_init__(self):
        n, m, d1, d2 = self.n, self.m, self.d1, self.d2
        if min(n, m, d1, d2) < 1:
            raise ValueError("n, m, d1, d2 must all be >= 1")
        if n * d1 != m * d2:
            raise BalanceViolation(f"n*d1 = {n * d1} != m*d2 = {m * d2}")
        edges = tuple(sorted((int(i), int(j)) for i, j in self.edges))
        object.__setattr__(self, "edges", edges)
        if len(set(edges)) != len(edges):
            raise DuplicateEdge("repeated (i, j) pair")
        if len(edges) != n * d1:
            raise DegreeMismatch(f"expected {n * d1} edges, got {len(edges)}")
        row = [0] * n
        col = [0] * m
        for i, j in edges:
            if not (0 <= i < n and 0 <= j < m):
                raise ValueError(f"edge ({i}, {j}) out of range")
            row[i] += 1
            col[j] += 1
        bad = next((i for i in range(n) if row[i] != d1), None)
        if bad is not None:
            raise DegreeMismatch(f"V1 vertex {bad} has degree {row[bad]} != d1={d1}")
        bad = next((j for j in range(m) if col[j] != d2), None)
        if bad is not None:
            raise DegreeMismatch(f"V2 vertex {bad} has degree {col[bad]} != d2={d2}")

    # ---- derived views (cached, read-only) -------------------------------

    @property
    def q(self) -> int:
        return (self.d1 - 1) * (self.d2 - 1)

    @cached_property
    def edge_set(self) -> frozenset:
        return frozenset(self.edges)

    @cached_property
    def adjacency_left(self) -> tuple:
        """adjacency_left[i] = sorted tuple of V2 neighbours of i."""
        adj = [[] for _ in range(self.n)]
        for i, j in self.edges:
            adj[i].append(j)
        return tuple(tuple(sorted(a)) for a in adj)

    @cached_property
    def adjacency_right(self) -> tuple:
        """adjacency_right[j] = sorted tuple of V1 neighbours of j."""
        adj = [[] for _ in range(self.m)]
        for i, j in self.edges:
            adj[j].append(i)
        return tuple(tuple(sorted(a)) for a in adj)

    @cached_property
    def biadjacency(self) -> np.ndarray:
        """Dense 0/1 matrix X of shape (n, m); X[i, j] = 1 iff (i, j) is an edge."""
        x = np.zeros((self.n, self.m), dtype=np.int64)
        rows = [e[0] for e in self.edges]
        cols = [e[1] for e in self.edges]
        x[rows, cols] = 1
        return x

    def has_edge(self, i: int, j: int) -> bool:
        return (i, j) in self.edge_set

    def __eq__(self, other):
        if not isinstance(other, BiregularGraph):
            return NotImplemented
        return (self.n, self.m, self.d1, self.d2, self.edges) == (
            other.n,
            other.m,
            other.d1,
            other.d2,
            other.edges,
        )

    def __hash__(self):
        return hash((self.n, self.m, self.d1, self.d2, self.edges))

    # ---- serialization ---------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "d1": self.d1,
            "d2": self.d2,
            "edges": [list(e) for e in self.edges],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "BiregularGraph":
        return cls(
            n=int(data["n"]),
            m=int(data["m"]),
            d1=int(data["d1"]),
            d2=int(data["d2"]),
            edges=tuple((int(i), int(j)) for i, j in data["edges"]),
        )


@dataclass(frozen=True)
class ScaledGramMatrix:
    """M = (X X^T - d1 I) / sqrt(q) with q = (d1-1)(d2-1).

    Symmetric with identically zero diagonal; the largest eigenvalue is the
    deterministic value d1*(d2-1)/sqrt(q).
    """

    matrix: np.ndarray
    q: int
    n: int
    d1: int
    d2: int

    @property
    def top_eigenvalue_exact(self) -> float:
        return self.d1 * (self.d2 - 1) / np.sqrt(self.q)


def new_biregular(n, m, d1, d2, edges) -> BiregularGraph:
    """Validated constructor; see BiregularGraph for the field contracts."""
    return BiregularGraph(n=n, m=m, d1=d1, d2=d2, edges=tuple(edges))


def complete_bipartite(n: int, m: int) -> BiregularGraph:
    """K_{n,m}: all n*m edges present, so d1 = m and d2 = n."""
    edges = tuple((i, j) for i in range(n) for j in range(m))
    return BiregularGraph(n=n, m=m, d1=m, d2=n, edges=edges)


def full_adjacency(g: BiregularGraph) -> np.ndarray:
    """Block matrix [[0, X], [X^T, 0]] of shape (n+m, n+m).

    Its spectrum is {+/- sigma_i(X)} plus |n - m| zeros; the extreme
    eigenvalues are +/- sqrt(d1*d2).
    """
    x = g.biadjacency
    a = np.zeros((g.n + g.m, g.n + g.m), dtype=np.int64)
    a[: g.n, g.n :] = x
    a[g.n :, : g.n] = x.T
    return a


def gram_shifted(g: BiregularGraph) -> np.ndarray:
    """Integer matrix X X^T - d1 I (exactly symmetric, zero diagonal).

    Very lopsided graphs (large m) go through a sparse product so the dense
    n x m biadjacency never materializes.
    """
    if g.n * g.m > 4_000_000:
        from scipy import sparse

        rows = np.fromiter((e[0] for e in g.edges), dtype=np.int64, count=len(g.edges))
        cols = np.fromiter((e[1] for e in g.edges), dtype=np.int64, count=len(g.edges))
        x = sparse.csr_matrix(
            (np.ones(len(rows), dtype=np.int64), (rows, cols)), shape=(g.n, g.m)
        )
        p = (x @ x.T).toarray()
        return p - g.d1 * np.eye(g.n, dtype=np.int64)
    # float64 BLAS, exact: co-degrees are at most min(d1, d2) << 2^53
    x = g.biadjacency.astype(np.float64)
    p = np.rint(x @ x.T).astype(np.int64)
    return p - g.d1 * np.eye(g.n, dtype=np.int64)


def scaled_gram(g: BiregularGraph) -> ScaledGramMatrix:
    """The scaled Gram matrix M = (X X^T - d1 I)/sqrt((d1-1)(d2-1))."""
    if g.d1 == 1 or g.d2 == 1:
        raise DegenerateScaling(f"(d1-1)(d2-1) = 0 for d1={g.d1}, d2={g.d2}")
    m = gram_shifted(g).astype(np.float64) / np.sqrt(g.q)
    return ScaledGramMatrix(matrix=m, q=g.q, n=g.n, d1=g.d1, d2=g.d2)


def save_graph(g: BiregularGraph, path) -> None:
    Path(path).write_text(json.dumps(g.to_dict()) + "\n")


def load_graph(path) -> BiregularGraph:
    return BiregularGraph.from_dict(json.loads(Path(path).read_text()))
