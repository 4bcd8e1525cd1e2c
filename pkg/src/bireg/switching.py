"""Forward and backward cycle switchings.

A forward switching takes a 2k-cycle alpha = (x1, y1, ..., xk, yk) contained
in the graph plus 2k auxiliary edges e_i = (u_i, v_i), e'_i = (u'_i, v'_i),
deletes the 2k cycle edges together with all e_i, e'_i, and adds the edges
(x_i, v_i), (x_i, v'_i), (u_i, y_i), (u'_i, y_i).  The backward switching is
the inverse rewiring: it consumes the paths v_i x_i v'_i and u_i y_i u'_i
and creates the cycle alpha together with the edges (u_i, v_i), (u'_i, v'_i).
Both preserve all vertex degrees.

A switching is *valid* for horizon r when alpha is the only cycle of length
<= 2r created or destroyed.  Validity is checked operationally: the short
cycles destroyed are read off a precomputed edge-to-cycle index, and the
cycles created are enumerated through the added edges in the rewired graph.
Counting identifies switchings that perform the same rewiring (same removed
and added edge sets), which subsumes the relabelings of alpha.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import EdgeMissing, PreconditionViolated, TooLarge
from .graph import BiregularGraph
from .walks import enumerate_cycles

SWITCH_BUDGET = 10**7


@dataclass(frozen=True)
class Cycle:
    """A simple 2k-cycle as an alternating (x1, y1, ..., xk, yk) sequence.

    Stored in canonical form: x1 is the smallest V1 vertex on the cycle and
    the traversal direction makes the second vertex minimal.
    """

    vertices: tuple

    def __post_init__(self):
        v = tuple(int(a) for a in self.vertices)
        if len(v) < 4 or len(v) % 2:
            raise ValueError("cycle needs an even vertex count >= 4")
        xs, ys = v[0::2], v[1::2]
        if len(set(xs)) != len(xs) or len(set(ys)) != len(ys):
            raise ValueError("cycle vertices must be distinct")
        object.__setattr__(self, "vertices", _canonical(v))

    @property
    def k(self) -> int:
        return len(self.vertices) // 2

    @property
    def xs(self) -> tuple:
        return self.vertices[0::2]

    @property
    def ys(self) -> tuple:
        return self.vertices[1::2]

    def edge_list(self) -> list:
        """The 2k edges as (V1, V2) pairs: (x_i, y_i) and (x_{i+1}, y_i)."""
        xs, ys = self.xs, self.ys
        k = self.k
        out = []
        for i in range(k):
            out.append((xs[i], ys[i]))
            out.append((xs[(i + 1) % k], ys[i]))
        return out

    def contained_in(self, g: BiregularGraph) -> bool:
        return all(g.has_edge(*e) for e in self.edge_list())


def _canonical(v: tuple) -> tuple:
    xs, ys = list(v[0::2]), list(v[1::2])
    k = len(xs)
    s = xs.index(min(xs))
    forward = []
    backward = []
    for t in range(k):
        forward += [xs[(s + t) % k], ys[(s + t) % k]]
        backward += [xs[(s - t) % k], ys[(s - t - 1) % k]]
    return tuple(forward) if forward[1] <= backward[1] else tuple(backward)


@dataclass(frozen=True)
class SwitchingSpec:
    """Cycle plus auxiliary edge choices, shared by both directions.

    In the forward direction ``e`` and ``e_prime`` are existing edges to be
    deleted; in the backward direction they are the edges to be created.
    """

    alpha: Cycle
    e: tuple
    e_prime: tuple

    def __post_init__(self):
        k = self.alpha.k
        e = tuple((int(u), int(v)) for u, v in self.e)
        ep = tuple((int(u), int(v)) for u, v in self.e_prime)
        if len(e) != k or len(ep) != k:
            raise ValueError(f"need exactly k={k} edges in e and e_prime")
        object.__setattr__(self, "e", e)
        object.__setattr__(self, "e_prime", ep)

    def removed_forward(self) -> list:
        return self.alpha.edge_list() + list(self.e) + list(self.e_prime)

    def added_forward(self) -> list:
        xs, ys = self.alpha.xs, self.alpha.ys
        out = []
        for i in range(self.alpha.k):
            out.append((xs[i], self.e[i][1]))
            out.append((xs[i], self.e_prime[i][1]))
            out.append((self.e[i][0], ys[i]))
            out.append((self.e_prime[i][0], ys[i]))
        return out


ForwardSwitchingSpec = SwitchingSpec


def short_cycles(g: BiregularGraph, r: int, budget: int = SWITCH_BUDGET) -> list:
    """All simple cycles of length 2k for 2 <= k <= r, canonical, each once."""
    if r < 2:
        raise ValueError("r must be >= 2")
    out = []
    for k in range(2, r + 1):
        out.extend(Cycle(v) for v in enumerate_cycles(g, k, budget))
    return out


def apply_forward(g: BiregularGraph, spec: SwitchingSpec) -> BiregularGraph:
    """Delete alpha and the auxiliary edges, rewire, and validate the result."""
    xs, ys = spec.alpha.xs, spec.alpha.ys
    for edge in spec.alpha.edge_list():
        if not g.has_edge(*edge):
            raise EdgeMissing(f"cycle edge {edge} not in graph")
    for edge in list(spec.e) + list(spec.e_prime):
        if not g.has_edge(*edge):
            raise EdgeMissing(f"auxiliary edge {edge} not in graph")
    for i in range(spec.alpha.k):
        (u, v), (up, vp) = spec.e[i], spec.e_prime[i]
        if g.has_edge(u, ys[i]):
            raise PreconditionViolated(f"u_{i}={u} is adjacent to y_{i}={ys[i]}")
        if g.has_edge(up, ys[i]):
            raise PreconditionViolated(f"u'_{i}={up} is adjacent to y_{i}={ys[i]}")
        if g.has_edge(xs[i], v):
            raise PreconditionViolated(f"v_{i}={v} is adjacent to x_{i}={xs[i]}")
        if g.has_edge(xs[i], vp):
            raise PreconditionViolated(f"v'_{i}={vp} is adjacent to x_{i}={xs[i]}")
    removed = spec.removed_forward()
    if len(set(removed)) != len(removed):
        raise PreconditionViolated("the 4k edges to delete are not distinct")
    added = spec.added_forward()
    if len(set(added)) != len(added):
        raise PreconditionViolated("the 4k replacement edges collide")
    edges = (g.edge_set - set(removed)) | set(added)
    return BiregularGraph(n=g.n, m=g.m, d1=g.d1, d2=g.d2, edges=tuple(edges))


def apply_backward(g: BiregularGraph, spec: SwitchingSpec) -> BiregularGraph:
    """Consume the paths v_i x_i v'_i and u_i y_i u'_i, creating alpha."""
    xs, ys = spec.alpha.xs, spec.alpha.ys
    removed = spec.added_forward()  # the path edges
    created = spec.removed_forward()  # alpha plus (u_i, v_i), (u'_i, v'_i)
    for i in range(spec.alpha.k):
        if spec.e[i][1] == spec.e_prime[i][1]:
            raise PreconditionViolated(f"v_{i} = v'_{i}: not a path through x_{i}")
        if spec.e[i][0] == spec.e_prime[i][0]:
            raise PreconditionViolated(f"u_{i} = u'_{i}: not a path through y_{i}")
    for edge in removed:
        if not g.has_edge(*edge):
            raise EdgeMissing(f"path edge {edge} not in graph")
    if len(set(removed)) != len(removed):
        raise PreconditionViolated("the 4k path edges are not distinct")
    if len(set(created)) != len(created):
        raise PreconditionViolated("the 4k created edges collide")
    overlap = set(removed) & set(created)
    if overlap:
        # a degenerate rewiring (delete then re-create) would not invert to a
        # forward switching satisfying its adjacency preconditions
        raise PreconditionViolated(f"edge {sorted(overlap)[0]} both deleted and created")
    remaining = g.edge_set - set(removed)
    clash = next((e for e in created if e in remaining), None)
    if clash is not None:
        raise PreconditionViolated(f"created edge {clash} already present")
    return BiregularGraph(
        n=g.n, m=g.m, d1=g.d1, d2=g.d2, edges=tuple(remaining | set(created))
    )


# ---------------------------------------------------------------------------
# exhaustive counting of valid switchings
# ---------------------------------------------------------------------------


def _cycles_through_edge(adj1, adj2, a, b, rmax):
    """Canonical vertex tuples of simple cycles of length <= 2*rmax through
    edge (a, b), a in V1, b in V2, in the graph given by adjacency dicts."""

    found = []

    def walk(path_x, path_y, at_v1):
        # path alternates b -> x -> y -> ... ; closes when reaching `a`
        if at_v1:
            y = path_y[-1]
            for x in adj2[y]:
                if x == a and len(path_y) >= 2:
                    xs = [a] + path_x
                    found.append(_canonical(tuple(v for p in zip(xs, path_y) for v in p)))
                    continue
                if x == a or x in path_x:
                    continue
                if len(path_y) < rmax:
                    walk(path_x + [x], path_y, False)
        else:
            x = path_x[-1]
            for y in adj1[x]:
                if y in path_y:
                    continue
                walk(path_x, path_y + [y], True)

    # first V1 step away from the edge (a, b)
    for x in adj2[b]:
        if x != a:
            walk([x], [b], False)
    return found


def _modified_adjacency(g, removed, added):
    adj1 = {}
    adj2 = {}
    for i, j in list(removed) + list(added):
        if i not in adj1:
            adj1[i] = set(g.adjacency_left[i])
        if j not in adj2:
            adj2[j] = set(g.adjacency_right[j])
    for i, j in removed:
        adj1[i].discard(j)
        adj2[j].discard(i)
    for i, j in added:
        adj1[i].add(j)
        adj2[j].add(i)
    full1 = {i: adj1.get(i, set(g.adjacency_left[i])) for i in range(g.n)}
    full2 = {j: adj2.get(j, set(g.adjacency_right[j])) for j in range(g.m)}
    return full1, full2


def _creations_ok(g, removed, added, r, expect):
    """True iff the canonical forms of short cycles through added edges in the
    rewired graph equal exactly `expect` (a set of canonical vertex tuples)."""
    adj1, adj2 = _modified_adjacency(g, removed, added)
    seen = set()
    for a, b in added:
        for cyc in _cycles_through_edge(adj1, adj2, a, b, r):
            if cyc not in expect:
                return False
            seen.add(cyc)
    return seen == expect


def valid_switchings(
    g: BiregularGraph,
    alpha: Cycle,
    r: int,
    direction: str,
    budget: int = SWITCH_BUDGET,
) -> list:
    """One SwitchingSpec per valid rewiring, by exhaustive enumeration.

    direction="forward" requires alpha to be a cycle of g and enumerates
    switchings deleting it; direction="backward" takes any cycle of the
    complete bipartite host and enumerates switchings creating it.
    Switchings performing the same rewiring are identified (this subsumes
    relabelings of alpha under rotation and inversion).
    """
    if direction not in ("forward", "backward"):
        raise ValueError("direction must be 'forward' or 'backward'")
    if alpha.k > r:
        raise ValueError("alpha is longer than the short-cycle horizon")
    shorts = short_cycles(g, r, budget)
    cycle_edges = {}  # edge -> set of canonical cycles through it
    for c in shorts:
        for e in c.edge_list():
            cycle_edges.setdefault(e, set()).add(c.vertices)
    if direction == "forward":
        return _enumerate_forward(g, alpha, r, cycle_edges, budget)
    return _enumerate_backward(g, alpha, r, cycle_edges, budget)


def count_valid_switchings(
    g: BiregularGraph,
    alpha: Cycle,
    r: int,
    direction: str,
    budget: int = SWITCH_BUDGET,
) -> int:
    """Number of valid switchings for alpha (see valid_switchings)."""
    return len(valid_switchings(g, alpha, r, direction, budget))


def _distinct_tuples(options, key, budget_state):
    """All ways to pick one edge per index with pairwise-distinct key(edge)."""
    k = len(options)
    out = []

    def rec(i, acc, used):
        budget_state[0] += 1
        if budget_state[0] > budget_state[1]:
            raise TooLarge(f"switching enumeration exceeded budget {budget_state[1]}")
        if i == k:
            out.append(tuple(acc))
            return
        for edge in options[i]:
            kk = key(edge)
            if kk in used:
                continue
            rec(i + 1, acc + [edge], used | {kk})

    rec(0, [], frozenset())
    return out


def _enumerate_forward(g, alpha, r, cycle_edges, budget):
    if not alpha.contained_in(g):
        raise EdgeMissing("alpha is not a cycle of the graph")
    alpha_key = alpha.vertices
    # every cycle sharing an edge with alpha would also be destroyed
    for e in alpha.edge_list():
        if cycle_edges.get(e, set()) - {alpha_key}:
            return []
    xs, ys = alpha.xs, alpha.ys
    k = alpha.k
    free_edges = [e for e in g.edges if e not in cycle_edges]
    options = []
    for i in range(k):
        nx = set(g.adjacency_left[xs[i]])
        ny = set(g.adjacency_right[ys[i]])
        options.append([(u, v) for (u, v) in free_edges if u not in ny and v not in nx])
    budget_state = [0, budget]
    e_tuples = _distinct_tuples(options, key=lambda e: e[0], budget_state=budget_state)
    ep_tuples = _distinct_tuples(options, key=lambda e: e[1], budget_state=budget_state)
    alpha_removed = alpha.edge_list()
    seen = {}
    for et in e_tuples:
        et_set = set(et)
        for ept in ep_tuples:
            budget_state[0] += 1
            if budget_state[0] > budget_state[1]:
                raise TooLarge(f"switching enumeration exceeded budget {budget}")
            if et_set & set(ept):
                continue
            removed = alpha_removed + list(et) + list(ept)
            added = []
            for i in range(k):
                added += [(xs[i], et[i][1]), (xs[i], ept[i][1]), (et[i][0], ys[i]), (ept[i][0], ys[i])]
            if len(set(added)) != 4 * k:
                continue
            if _creations_ok(g, removed, added, r, expect=set()):
                key = (frozenset(removed), frozenset(added))
                seen.setdefault(key, SwitchingSpec(alpha=alpha, e=et, e_prime=ept))
    return list(seen.values())


def _enumerate_backward(g, alpha, r, cycle_edges, budget):
    xs, ys = alpha.xs, alpha.ys
    k = alpha.k
    # paths v_i x_i v'_i: ordered pairs of distinct neighbours of x_i whose
    # edges lie on no short cycle (they get deleted)
    v_opts, u_opts = [], []
    for i in range(k):
        vs = [v for v in g.adjacency_left[xs[i]] if (xs[i], v) not in cycle_edges]
        us = [u for u in g.adjacency_right[ys[i]] if (u, ys[i]) not in cycle_edges]
        v_opts.append([(v, vp) for v in vs for vp in vs if v != vp])
        u_opts.append([(u, up) for u in us for up in us if u != up])
    alpha_created = alpha.edge_list()
    expect = {alpha.vertices}
    seen = {}
    counter = 0

    def pairs(level, acc):
        nonlocal counter
        if level == k:
            yield tuple(acc)
            return
        for vv in v_opts[level]:
            for uu in u_opts[level]:
                counter += 1
                if counter > budget:
                    raise TooLarge(f"switching enumeration exceeded budget {budget}")
                yield from pairs(level + 1, acc + [(vv, uu)])

    for choice in pairs(0, []):
        removed = []
        created = list(alpha_created)
        for i in range(k):
            (v, vp), (u, up) = choice[i]
            removed += [(xs[i], v), (xs[i], vp), (u, ys[i]), (up, ys[i])]
            created += [(u, v), (up, vp)]
        if len(set(removed)) != 4 * k or len(set(created)) != 4 * k:
            continue
        removed_set = set(removed)
        if any(e in removed_set for e in created):
            continue  # degenerate delete-then-recreate rewiring
        if any(e in g.edge_set for e in created):
            continue
        if _creations_ok(g, removed, created, r, expect=expect):
            key = (frozenset(removed), frozenset(created))
            e = tuple((choice[i][1][0], choice[i][0][0]) for i in range(k))
            ep = tuple((choice[i][1][1], choice[i][0][1]) for i in range(k))
            seen.setdefault(key, SwitchingSpec(alpha=alpha, e=e, e_prime=ep))
    return list(seen.values())


def forward_bound(n, m, d1, d2, k) -> int:
    """[n]_k [m]_k d1^k d2^k."""
    out = 1
    for t in range(k):
        out *= (n - t) * (m - t)
    return out * (d1 * d2) ** k


def backward_bound(d1, d2, k) -> int:
    """(d1 (d1-1) d2 (d2-1))^k."""
    return (d1 * (d1 - 1) * d2 * (d2 - 1)) ** k
