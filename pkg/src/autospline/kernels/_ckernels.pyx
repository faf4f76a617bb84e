# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled automaton kernels; same contracts as ``_pykernels``."""
from array import array

from libc.stdlib cimport malloc, free, qsort
from libc.stdint cimport int64_t, uint64_t

from ._pykernels import StateBudgetExceeded


cdef int _cmp_i64(const void *a, const void *b) noexcept nogil:
    cdef int64_t x = (<const int64_t *>a)[0]
    cdef int64_t y = (<const int64_t *>b)[0]
    return (x > y) - (x < y)


cdef inline int64_t[::1] _i64(obj):
    if isinstance(obj, array) and obj.typecode == "q":
        return obj
    return array("q", obj)


def subset_construction(Py_ssize_t n_states, offsets, lets, tgts, initial, Py_ssize_t budget):
    cdef int64_t[::1] off = _i64(offsets)
    cdef int64_t[::1] lt = _i64(lets)
    cdef int64_t[::1] tg = _i64(tgts)
    cdef Py_ssize_t n_edges = lt.shape[0]
    cdef int64_t *buf = <int64_t *>malloc((n_edges + 1) * sizeof(int64_t))
    if buf == NULL:
        raise MemoryError()
    cdef int64_t width = n_states if n_states > 0 else 1
    cdef Py_ssize_t i, m, e, j, k
    cdef int64_t s, a, prev_t, t
    start = tuple(sorted(set(initial)))
    index = {start: 0}
    subsets = [start]
    d_offsets = array("q", [0])
    d_lets = array("q")
    d_tgts = array("q")
    try:
        i = 0
        while i < len(subsets):
            m = 0
            for s in subsets[i]:
                for e in range(off[s], off[s + 1]):
                    buf[m] = lt[e] * width + tg[e]
                    m += 1
            qsort(buf, m, sizeof(int64_t), _cmp_i64)
            j = 0
            while j < m:
                a = buf[j] // width
                members = []
                prev_t = -1
                k = j
                while k < m and buf[k] // width == a:
                    t = buf[k] % width
                    if t != prev_t:
                        members.append(t)
                        prev_t = t
                    k += 1
                key = tuple(members)
                target = index.get(key)
                if target is None:
                    if len(subsets) >= budget:
                        raise StateBudgetExceeded(
                            f"determinization exceeded the state budget of {budget}")
                    target = len(subsets)
                    index[key] = target
                    subsets.append(key)
                d_lets.append(a)
                d_tgts.append(target)
                j = k
            d_offsets.append(len(d_lets))
            i += 1
    finally:
        free(buf)
    return subsets, d_offsets, d_lets, d_tgts


cdef inline uint64_t _mix(uint64_t h, uint64_t x) noexcept nogil:
    h ^= x + <uint64_t>0x9E3779B97F4A7C15 + (h << 6) + (h >> 2)
    h *= <uint64_t>0xBF58476D1CE4E5B9
    return h ^ (h >> 31)


cdef bint _same_row(int64_t[::1] off, int64_t[::1] lt, int64_t[::1] tg,
                    int64_t[::1] cls, Py_ssize_t s, Py_ssize_t r) noexcept:
    cdef Py_ssize_t e, f
    if cls[s] != cls[r]:
        return False
    if off[s + 1] - off[s] != off[r + 1] - off[r]:
        return False
    f = off[r]
    for e in range(off[s], off[s + 1]):
        if lt[e] != lt[f] or cls[tg[e]] != cls[tg[f]]:
            return False
        f += 1
    return True


def moore_partition(Py_ssize_t n_states, offsets, lets, tgts, accepting):
    cdef int64_t[::1] off = _i64(offsets)
    cdef int64_t[::1] lt = _i64(lets)
    cdef int64_t[::1] tg = _i64(tgts)
    cdef int64_t[::1] cls = array("q", [1 if accepting[s] else 0 for s in range(n_states)])
    cdef int64_t[::1] new = array("q", [0]) * n_states if n_states else array("q")
    cdef Py_ssize_t s, e, count, n_new
    cdef uint64_t h
    count = len(set(cls)) if n_states else 0
    while True:
        groups = {}
        n_new = 0
        for s in range(n_states):
            h = <uint64_t>cls[s]
            for e in range(off[s], off[s + 1]):
                h = _mix(h, <uint64_t>lt[e])
                h = _mix(h, <uint64_t>cls[tg[e]])
            bucket = groups.get(h)
            if bucket is None:
                groups[h] = [(s, n_new)]
                new[s] = n_new
                n_new += 1
                continue
            for rep, label in bucket:
                if _same_row(off, lt, tg, cls, s, rep):
                    new[s] = label
                    break
            else:
                bucket.append((s, n_new))
                new[s] = n_new
                n_new += 1
        cls[:] = new
        if n_new == count:
            return list(cls)
        count = n_new


def live_states(Py_ssize_t n_states, offsets, tgts, initial, accepting):
    cdef int64_t[::1] off = _i64(offsets)
    cdef int64_t[::1] tg = _i64(tgts)
    cdef Py_ssize_t n_edges = tg.shape[0]
    cdef Py_ssize_t s, e, t, top
    cdef int64_t[::1] stack = array("q", [0]) * (n_states + 1)
    cdef unsigned char[::1] fwd = bytearray(n_states)
    cdef unsigned char[::1] bwd = bytearray(n_states)
    cdef int64_t[::1] roff = array("q", [0]) * (n_states + 1)
    cdef int64_t[::1] rsrc = array("q", [0]) * (n_edges + 1)
    cdef int64_t[::1] fill = array("q", [0]) * (n_states + 1)

    top = 0
    for s in initial:
        if not fwd[s]:
            fwd[s] = 1
            stack[top] = s
            top += 1
    while top:
        top -= 1
        s = stack[top]
        for e in range(off[s], off[s + 1]):
            t = tg[e]
            if not fwd[t]:
                fwd[t] = 1
                stack[top] = t
                top += 1

    for e in range(n_edges):
        roff[tg[e] + 1] += 1
    for s in range(n_states):
        roff[s + 1] += roff[s]
    for s in range(n_states):
        for e in range(off[s], off[s + 1]):
            t = tg[e]
            rsrc[roff[t] + fill[t]] = s
            fill[t] += 1

    top = 0
    for s in range(n_states):
        if accepting[s]:
            bwd[s] = 1
            stack[top] = s
            top += 1
    while top:
        top -= 1
        s = stack[top]
        for e in range(roff[s], roff[s + 1]):
            t = rsrc[e]
            if not bwd[t]:
                bwd[t] = 1
                stack[top] = t
                top += 1
    return [bool(fwd[s] and bwd[s]) for s in range(n_states)]
