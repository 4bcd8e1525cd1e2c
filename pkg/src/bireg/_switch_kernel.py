"""Inner loop of the double-edge-swap chain.

The kernel consumes a pre-drawn block of edge-index proposals so that the
chain is bit-reproducible whether or not the numba-compiled path is used.
Each proposal picks two edge slots (a, b); the swap replaces edges
(u[a], v[a]), (u[b], v[b]) by (u[a], v[b]), (u[b], v[a]) and is rejected if
it would collapse a vertex pair or create a parallel edge.
"""

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a soft dependency
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(f):
            return f

        if args and callable(args[0]):
            return args[0]
        return wrap


@njit(cache=True, nogil=True)
def run_swaps(u, v, present, prop_a, prop_b):
    """Apply a block of swap proposals in place; return the number accepted."""
    accepted = 0
    for t in range(prop_a.shape[0]):
        a = prop_a[t]
        b = prop_b[t]
        if a == b:
            continue
        ua, va = u[a], v[a]
        ub, vb = u[b], v[b]
        if ua == ub or va == vb:
            continue
        if present[ua, vb] or present[ub, va]:
            continue
        present[ua, va] = False
        present[ub, vb] = False
        present[ua, vb] = True
        present[ub, va] = True
        v[a] = vb
        v[b] = va
        accepted += 1
    return accepted
