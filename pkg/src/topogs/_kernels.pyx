# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twin of :mod:`topogs._kernels_py`; same signatures and results."""
import numpy as np
cimport numpy as cnp

cnp.import_array()


def monotonic_violation(const int[::1] values, const int[:, ::1] profile_orders,
                        const unsigned char[:, :, ::1] improves):
    cdef Py_ssize_t size = values.shape[0]
    cdef Py_ssize_t N = profile_orders.shape[1]
    cdef Py_ssize_t p, q, l
    cdef int a
    cdef bint ok
    for p in range(size):
        a = values[p]
        for q in range(size):
            if values[q] == a:
                continue
            ok = True
            for l in range(N):
                if not improves[profile_orders[p, l], profile_orders[q, l], a]:
                    ok = False
                    break
            if ok:
                return int(p), int(q)
    return -1, -1


def manipulation_witness(const int[::1] values, const int[:, ::1] profile_orders,
                         const int[:, ::1] positions):
    cdef Py_ssize_t size = values.shape[0]
    cdef Py_ssize_t N = profile_orders.shape[1]
    cdef Py_ssize_t n_orders = positions.shape[0]
    cdef Py_ssize_t p, l, m, stride, base, k
    cdef int honest, lie, ol
    for p in range(size):
        honest = values[p]
        for l in range(N):
            stride = 1
            for k in range(N - 1 - l):
                stride *= n_orders
            ol = profile_orders[p, l]
            base = p - ol * stride
            for m in range(n_orders):
                lie = values[base + m * stride]
                if positions[ol, lie] < positions[ol, honest]:
                    return int(p), int(l), int(m)
    return -1, -1, -1


def improvement_lists(const int[:, ::1] profile_orders,
                      const unsigned char[:, :, ::1] improves, int n):
    cdef Py_ssize_t size = profile_orders.shape[0]
    cdef Py_ssize_t N = profile_orders.shape[1]
    cdef Py_ssize_t p, q, l, a, k
    cdef bint ok
    cdef cnp.int64_t[::1] up_cnt = np.zeros(size * n + 1, dtype=np.int64)
    cdef cnp.int64_t[::1] down_cnt = np.zeros(size * n + 1, dtype=np.int64)
    # two passes: count, then fill
    for p in range(size):
        for q in range(size):
            if q == p:
                continue
            for a in range(n):
                ok = True
                for l in range(N):
                    if not improves[profile_orders[p, l], profile_orders[q, l], a]:
                        ok = False
                        break
                if ok:
                    up_cnt[p * n + a + 1] += 1
                    down_cnt[q * n + a + 1] += 1
    up_ptr_np = np.cumsum(np.asarray(up_cnt))
    down_ptr_np = np.cumsum(np.asarray(down_cnt))
    cdef cnp.int64_t[::1] up_ptr = up_ptr_np
    cdef cnp.int64_t[::1] down_ptr = down_ptr_np
    up_idx_np = np.empty(up_ptr_np[-1], dtype=np.int32)
    down_idx_np = np.empty(down_ptr_np[-1], dtype=np.int32)
    cdef int[::1] up_idx = up_idx_np
    cdef int[::1] down_idx = down_idx_np
    cdef cnp.int64_t[::1] up_fill = up_ptr_np[:-1].copy()
    cdef cnp.int64_t[::1] down_fill = down_ptr_np[:-1].copy()
    for p in range(size):
        for q in range(size):
            if q == p:
                continue
            for a in range(n):
                ok = True
                for l in range(N):
                    if not improves[profile_orders[p, l], profile_orders[q, l], a]:
                        ok = False
                        break
                if ok:
                    k = p * n + a
                    up_idx[up_fill[k]] = <int>q
                    up_fill[k] += 1
                    k = q * n + a
                    down_idx[down_fill[k]] = <int>p
                    down_fill[k] += 1
    return up_ptr_np, up_idx_np, down_ptr_np, down_idx_np


cdef bint _consistent(int p, int v, int n, int[::1] f,
                      const cnp.int64_t[::1] up_ptr, const int[::1] up_idx,
                      const cnp.int64_t[::1] down_ptr, const int[::1] down_idx):
    cdef int b, w
    cdef Py_ssize_t k
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


def monotone_completions(int n, const int[::1] forced,
                         const cnp.int64_t[::1] up_ptr, const int[::1] up_idx,
                         const cnp.int64_t[::1] down_ptr, const int[::1] down_idx,
                         long long max_nodes):
    cdef Py_ssize_t size = forced.shape[0]
    f_np = np.array(forced, dtype=np.int32)
    cdef int[::1] f = f_np
    cdef Py_ssize_t p
    cdef int v
    cdef bint ok
    for p in range(size):
        if forced[p] >= 0:
            f[p] = -1
            ok = _consistent(<int>p, forced[p], n, f, up_ptr, up_idx, down_ptr, down_idx)
            f[p] = forced[p]
            if not ok:
                return [], 0, True

    # explicit stack: choice[p] is the last value tried at free position p
    choice_np = np.full(size + 1, -1, dtype=np.int32)
    cdef int[::1] choice = choice_np
    solutions = []
    cdef long long nodes = 0
    cdef Py_ssize_t depth = 0
    cdef bint descending = True
    while True:
        if descending:
            while depth < size and forced[depth] >= 0:
                depth += 1
            if depth == size:
                solutions.append(f_np.copy())
                descending = False
                depth -= 1
                continue
            choice[depth] = -1
        else:
            # back up past forced positions
            while depth >= 0 and forced[depth] >= 0:
                depth -= 1
            if depth < 0:
                return solutions, int(nodes), True
            f[depth] = -1
        v = choice[depth] + 1
        while v < n:
            nodes += 1
            if nodes > max_nodes:
                return solutions, int(nodes), False
            if _consistent(<int>depth, v, n, f, up_ptr, up_idx, down_ptr, down_idx):
                break
            v += 1
        if v < n:
            choice[depth] = v
            f[depth] = v
            depth += 1
            descending = True
        else:
            choice[depth] = -1
            depth -= 1
            descending = False
