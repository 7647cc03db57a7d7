"""Pure-Python kernels; reference semantics for the compiled ``_kernels`` twin.

All arrays are small-integer numpy arrays produced by
:class:`topogs.choice.ProfileSpace`; nothing here touches big integers.
"""
from __future__ import annotations

import numpy as np


def monotonic_violation(values, profile_orders, improves):
    """Smallest ``(p, q)`` by rank with ``q`` an ``f(p)``-improvement of ``p``
    and ``f(q) != f(p)``; ``(-1, -1)`` if ``f`` is monotonic."""
    values = values.tolist()
    orders = profile_orders.tolist()
    imp = improves.tolist()
    size = len(values)
    for p in range(size):
        a = values[p]
        op = orders[p]
        for q in range(size):
            if values[q] == a:
                continue
            oq = orders[q]
            for l in range(len(op)):
                if not imp[op[l]][oq[l]][a]:
                    break
            else:
                return p, q
    return -1, -1


def manipulation_witness(values, profile_orders, positions):
    """Smallest ``(p, voter, misreport)`` where the misreport strictly helps the
    voter under the true order; ``(-1, -1, -1)`` if ``f`` is strategy-proof."""
    values = values.tolist()
    orders = profile_orders.tolist()
    pos = positions.tolist()
    n_orders = len(pos)
    size = len(values)
    N = len(orders[0]) if size else 0
    for p in range(size):
        honest = values[p]
        op = orders[p]
        for l in range(N):
            stride = n_orders ** (N - 1 - l)
            base = p - op[l] * stride
            truth = pos[op[l]]
            for m in range(n_orders):
                lie = values[base + m * stride]
                if truth[lie] < truth[honest]:
                    return p, l, m
    return -1, -1, -1


def improvement_lists(profile_orders, improves, n):
    """CSR adjacency of coordinatewise improvements.

    ``up_idx[up_ptr[p*n+a]:up_ptr[p*n+a+1]]`` lists the ``q != p`` that are
    ``a``-improvements of ``p``; ``down`` is the transpose relation.
    """
    orders = profile_orders.tolist()
    imp = improves.tolist()
    size = len(orders)
    up = [[] for _ in range(size * n)]
    down = [[] for _ in range(size * n)]
    for p in range(size):
        op = orders[p]
        for q in range(size):
            if q == p:
                continue
            oq = orders[q]
            for a in range(n):
                if all(imp[op[l]][oq[l]][a] for l in range(len(op))):
                    up[p * n + a].append(q)
                    down[q * n + a].append(p)

    def csr(lists):
        ptr = np.zeros(len(lists) + 1, dtype=np.int64)
        ptr[1:] = np.cumsum([len(x) for x in lists])
        idx = np.array([q for x in lists for q in x], dtype=np.int32)
        return ptr, idx

    return csr(up) + csr(down)


def monotone_completions(n, forced, up_ptr, up_idx, down_ptr, down_idx, max_nodes):
    """Backtracking over tables in profile-rank order.

    ``forced[p] >= 0`` pre-assigns a value.  An assignment ``f(p) = v`` is
    rejected when it conflicts with an assigned ``q`` in either direction of
    the improvement relation.  Returns ``(solutions, nodes, complete)``;
    ``complete`` is False when ``max_nodes`` ran out.
    """
    forced = forced.tolist()
    up_ptr, up_idx = up_ptr.tolist(), up_idx.tolist()
    down_ptr, down_idx = down_ptr.tolist(), down_idx.tolist()
    size = len(forced)
    f = list(forced)
    solutions = []
    nodes = 0

    def consistent(p, v):
        for b in range(n):
            if b == v:
                continue
            for k in range(down_ptr[p * n + b], down_ptr[p * n + b + 1]):
                if f[down_idx[k]] == b:
                    return False
        for k in range(up_ptr[p * n + v], up_ptr[p * n + v + 1]):
            w = f[up_idx[k]]
            if w >= 0 and w != v:
                return False
        return True

    # forced entries must agree among themselves
    for p in range(size):
        if forced[p] >= 0:
            f[p] = -1
            ok = consistent(p, forced[p])
            f[p] = forced[p]
            if not ok:
                return [], 0, True

    def search(p):
        nonlocal nodes
        while p < size and forced[p] >= 0:
            p += 1
        if p == size:
            solutions.append(np.array(f, dtype=np.int32))
            return True
        for v in range(n):
            nodes += 1
            if nodes > max_nodes:
                return False
            if consistent(p, v):
                f[p] = v
                if not search(p + 1):
                    return False
                f[p] = -1
        return True

    complete = search(0)
    return solutions, nodes, complete
