"""Cycle counting, the walk-count recurrence, and the independent oracle.

The semantic DFS below enumerates closed two-step walks on the graph (steps
go V1 -> V2 -> V1 with the next V1 vertex always new, consecutive steps never
reversing the same (V2, pair) move, and for the cyclic variant no reversal
across the wrap either).  Those counts coincide with the recurrence objects
for k <= 3 (and for every k when d2 = 2); beyond that the recurrence counts
carry extra degree-correction terms, which is why the library oracle works
through plain walks and explicit polynomial coefficients instead.
"""

import numpy as np
import pytest

from bireg.errors import TooLarge
from bireg.graph import complete_bipartite
from bireg.walks import (
    brute_force_walks,
    closed_walk_counts,
    cnbw_count,
    count_cycles,
    enumerate_cycles,
    nbw_count,
    nbw_matrix,
    walk_table,
)
from conftest import random_corpus


def junction_rule_walks(g, k, cyclic):
    """Semantic two-step-walk DFS (test-only; agrees with counts for k <= 3)."""
    adj1, adj2 = g.adjacency_left, g.adjacency_right
    count = 0

    def rec(us, vs):
        nonlocal count
        t = len(vs)
        if t == k:
            if us[-1] != us[0]:
                return
            if cyclic and k >= 2 and vs[0] == vs[-1] and us[1] == us[-2]:
                return
            count += 1
            return
        u = us[-1]
        for v in adj1[u]:
            for u2 in adj2[v]:
                if u2 == u:
                    continue
                if t >= 1 and v == vs[-1] and u2 == us[-2]:
                    continue
                rec(us + [u2], vs + [v])

    for u0 in range(g.n):
        rec([u0], [])
    return count


# ---- cycles ---------------------------------------------------------------


def test_cycle_counts_fixtures(k22, k33, hexagon):
    assert count_cycles(k22, 2) == 1
    assert count_cycles(hexagon, 2) == 0
    assert count_cycles(hexagon, 3) == 1
    assert count_cycles(k33, 2) == 9
    assert count_cycles(k33, 3) == 6


def test_cycles_enumerated_once_and_canonical(k33):
    cycles = list(enumerate_cycles(k33, 2))
    assert len(cycles) == len(set(cycles)) == 9
    for c in cycles:
        xs, ys = c[0::2], c[1::2]
        assert xs[0] == min(xs)
        assert ys[0] < ys[-1]


def test_cycle_budget():
    with pytest.raises(TooLarge):
        count_cycles(complete_bipartite(6, 6), 4, budget=10)


# ---- recurrence matrices ---------------------------------------------------


def test_nbw_matrices_k22(k22):
    a1 = nbw_matrix(k22, 1)
    assert np.array_equal(a1, [[0, 2], [2, 0]])
    assert np.array_equal(nbw_matrix(k22, 2), 2 * np.eye(2))
    assert np.array_equal(nbw_matrix(k22, 3), a1)


def test_nbw_matrices_hexagon(hexagon):
    j = np.ones((3, 3), dtype=np.int64) - np.eye(3, dtype=np.int64)
    assert np.array_equal(nbw_matrix(hexagon, 1), j)
    assert np.array_equal(nbw_matrix(hexagon, 2), j)
    assert np.array_equal(nbw_matrix(hexagon, 3), 2 * np.eye(3))


def test_nbw_counts_fixtures(k22, hexagon):
    assert nbw_count(k22, 1) == 0
    assert nbw_count(k22, 2) == 4
    assert nbw_count(k22, 3) == 0
    assert nbw_count(hexagon, 3) == 6


def test_cnbw_fixtures(k22, hexagon):
    assert cnbw_count(k22, 2) == 4 == 4 * count_cycles(k22, 2)
    assert cnbw_count(k22, 3) == 0
    assert cnbw_count(hexagon, 3) == 6 == 6 * count_cycles(hexagon, 3)


def test_nbw_matrix_entries_nonnegative():
    for g in random_corpus(5, 10, 10, 3, 3, seed=11):
        for k in range(1, 7):
            assert np.all(nbw_matrix(g, k) >= 0)


def test_bigint_escalation_matches_small_k(k33):
    import bireg.walks as walks

    mats = walks._recurrence_matrices(k33, 40)
    assert mats[40].dtype == object
    assert np.array_equal(np.asarray(mats[4], dtype=np.int64), nbw_matrix(k33, 4))


# ---- independent oracle -----------------------------------------------------


def test_plain_walk_counts_match_traces(k33, hexagon):
    from bireg.graph import gram_shifted

    for g in (k33, hexagon):
        w = closed_walk_counts(g, 5)
        a1 = gram_shifted(g).astype(np.int64)
        acc = np.eye(g.n, dtype=np.int64)
        for t in range(1, 6):
            acc = acc @ a1
            assert w[t] == np.trace(acc)


def test_brute_force_matches_recurrence_fixtures(k22, k33, hexagon):
    for g in (k22, k33, hexagon):
        for k in range(1, 5):
            assert brute_force_walks(g, k, "nbw") == nbw_count(g, k)
            assert brute_force_walks(g, k, "cnbw") == cnbw_count(g, k)


def test_brute_force_matches_recurrence_random():
    for g in random_corpus(8, 12, 12, 3, 3, seed=12):
        for k in range(1, 5):
            assert brute_force_walks(g, k, "nbw") == nbw_count(g, k)
            assert brute_force_walks(g, k, "cnbw") == cnbw_count(g, k)


def test_brute_force_budget():
    with pytest.raises(TooLarge):
        brute_force_walks(complete_bipartite(8, 8), 8, "nbw", budget=100)


# ---- semantic walk rules ----------------------------------------------------


def test_junction_rule_matches_counts_up_to_k3():
    corpus = [complete_bipartite(3, 3)] + random_corpus(4, 10, 10, 3, 3, seed=13)
    for g in corpus:
        for k in (1, 2, 3):
            assert junction_rule_walks(g, k, cyclic=False) == nbw_count(g, k)
            assert junction_rule_walks(g, k, cyclic=True) == cnbw_count(g, k)


def test_junction_rule_matches_all_k_when_d2_is_2(hexagon):
    corpus = [hexagon] + random_corpus(3, 4, 8, 4, 2, seed=14)
    for g in corpus:
        for k in range(1, 6):
            assert junction_rule_walks(g, k, cyclic=False) == nbw_count(g, k)
            assert junction_rule_walks(g, k, cyclic=True) == cnbw_count(g, k)


# ---- the table ---------------------------------------------------------------


def test_walk_table_hexagon(hexagon):
    t = walk_table(hexagon, 3)
    assert t.cycles == (0, 0, 1)
    assert t.cnbw == (0, 0, 6)
    assert t.bad == (0, 0, 0)


def test_walk_table_k33(k33):
    t = walk_table(k33, 2)
    assert t.cnbw[1] == 4 * t.cycles[1] == 36
    assert t.bad[1] == 0


def test_bad_walks_b2_always_zero():
    for g in random_corpus(6, 12, 12, 3, 3, seed=15):
        t = walk_table(g, 4)
        assert t.cycles[0] == 0 and t.cnbw[0] == 0  # k = 1
        assert t.bad[1] == 0  # k = 2
        assert all(b >= 0 for b in t.bad)


def test_bad_walks_b3_structure():
    # the k = 3 leftover decomposes exactly into the degree-forced star walks
    # plus the cycle-with-pendant walks: B_3 = m d2(d2-1)(d2-2) + 12(d2-2) C_2
    corpus = random_corpus(4, 12, 12, 3, 3, seed=16) + random_corpus(3, 9, 12, 4, 3, seed=16)
    for g in corpus:
        t = walk_table(g, 3)
        expected = g.m * g.d2 * (g.d2 - 1) * (g.d2 - 2) + 12 * (g.d2 - 2) * t.cycles[1]
        assert t.bad[2] == expected
