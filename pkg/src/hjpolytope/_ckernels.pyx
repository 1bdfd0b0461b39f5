# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled versions of the kernels in ``_pykernels``.

Exact arithmetic stays on Python integers (coordinates routinely exceed 200
bits); what is compiled away is the interpreter overhead of the loops.  The
hitting-set search runs on native 64-bit masks and defers to the Python
version above 64 vertices.
"""
from libc.stdint cimport uint64_t
from libc.stdlib cimport malloc, free

from . import _pykernels


cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil


def bareiss_det(m):
    cdef Py_ssize_t n = len(m), k, i, j
    cdef list a = [list(r) for r in m]
    cdef list rowk, rowi
    cdef int sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        rowk = a[k]
        akk = rowk[k]
        for i in range(k + 1, n):
            rowi = a[i]
            aik = rowi[k]
            for j in range(k + 1, n):
                rowi[j] = (akk * rowi[j] - aik * rowk[j]) // prev
        prev = akk
    if n == 0:
        return 1
    return sign * a[n - 1][n - 1]


cdef list _reduce_row(list v, list pivots):
    cdef Py_ssize_t t, j, ncols = len(v)
    cdef Py_ssize_t c
    cdef list row
    prev = 1
    for t in range(len(pivots)):
        row, c = pivots[t]
        p = row[c]
        vc = v[c]
        if vc:
            for j in range(ncols):
                v[j] = (p * v[j] - vc * row[j]) // prev
        elif p != prev:
            for j in range(ncols):
                v[j] = (p * v[j]) // prev
        prev = p
    return v


cdef Py_ssize_t _first_nonzero(list v):
    cdef Py_ssize_t j
    for j in range(len(v)):
        if v[j]:
            return j
    return -1


def bareiss_rank(m):
    cdef list pivots = []
    cdef list v
    cdef Py_ssize_t c
    for r in m:
        v = _reduce_row(list(r), pivots)
        c = _first_nonzero(v)
        if c >= 0:
            pivots.append((v, c))
    return len(pivots)


cdef list _back_substitute(list pivots, Py_ssize_t ncols):
    cdef Py_ssize_t t, j, c, f = -1
    cdef list row
    cdef list x = [0] * ncols
    cdef set used = set()
    for t in range(len(pivots)):
        used.add(pivots[t][1])
    for j in range(ncols):
        if j not in used:
            f = j
            break
    row, c = pivots[len(pivots) - 1]
    x[f] = row[c]
    for t in range(len(pivots) - 1, -1, -1):
        row, c = pivots[t]
        s = 0
        for j in range(c + 1, ncols):
            if x[j] and row[j]:
                s += row[j] * x[j]
        x[c] = -s // row[c]
    return x


def nullspace_vector(m):
    cdef Py_ssize_t ncols = len(m[0]), c
    cdef list pivots = []
    cdef list v
    for r in m:
        v = _reduce_row(list(r), pivots)
        c = _first_nonzero(v)
        if c < 0:
            return None
        pivots.append((v, c))
    if len(pivots) != ncols - 1:
        return None
    return _back_substitute(pivots, ncols)


cdef class _FacetSearch:
    cdef list rows
    cdef Py_ssize_t npts, d, ncols, lo, hi
    cdef list pivot_stack
    cdef dict seen
    cdef public list order
    cdef public list normals
    cdef public bint degenerate

    def __init__(self, rows, Py_ssize_t d, Py_ssize_t lo, Py_ssize_t hi):
        self.rows = [list(r) for r in rows]
        self.npts = len(rows)
        self.d = d
        self.ncols = d + 1
        self.lo = lo
        self.hi = hi
        self.pivot_stack = []
        self.seen = {}
        self.order = []
        self.normals = []
        self.degenerate = False

    cdef void _leaf(self):
        cdef list x = _back_substitute(self.pivot_stack, self.ncols)
        cdef bint pos = False, neg = False, done = True
        cdef list zeros = []
        cdef list rq
        cdef Py_ssize_t q, j
        for q in range(self.npts):
            rq = self.rows[q]
            s = 0
            for j in range(self.ncols):
                s += x[j] * rq[j]
            if s > 0:
                if neg:
                    done = False
                    break
                pos = True
            elif s < 0:
                if pos:
                    done = False
                    break
                neg = True
            else:
                zeros.append(q)
        if not done:
            return
        if not (pos or neg):
            self.degenerate = True
            return
        key = tuple(zeros)
        if key not in self.seen:
            self.seen[key] = len(self.order)
            self.order.append(key)
            self.normals.append(tuple(x) if pos else tuple([-a for a in x]))

    cdef void visit(self, Py_ssize_t start, Py_ssize_t depth):
        cdef Py_ssize_t i, c
        cdef list v
        for i in range(start, self.npts - (self.d - depth) + 1):
            if depth == 0 and not (self.lo <= i < self.hi):
                continue
            v = _reduce_row(list(self.rows[i]), self.pivot_stack)
            c = _first_nonzero(v)
            if c < 0:
                continue
            self.pivot_stack.append((v, c))
            if depth + 1 < self.d:
                self.visit(i + 1, depth + 1)
            else:
                self._leaf()
            self.pivot_stack.pop()


def enumerate_facets(rows, d, first_lo=0, first_hi=None):
    if first_hi is None:
        first_hi = len(rows)
    search = _FacetSearch(rows, d, first_lo, first_hi)
    search.visit(0, 0)
    return search.order, search.normals, search.degenerate


# -- hitting sets on native masks -------------------------------------------


cdef inline int _pc(uint64_t x) nogil:
    return __builtin_popcountll(x)


cdef int _packing(uint64_t* edges, Py_ssize_t m, uint64_t forb, int* sizes) nogil:
    cdef Py_ssize_t k
    cdef int s, maxs = 0, count = 0
    cdef uint64_t used = 0, a
    for k in range(m):
        s = _pc(edges[k] & ~forb)
        if s == 0:
            return -1
        sizes[k] = s
        if s > maxs:
            maxs = s
    # stable order by available size, ties by position
    for s in range(1, maxs + 1):
        for k in range(m):
            if sizes[k] == s:
                a = edges[k] & ~forb
                if not (a & used):
                    used |= a
                    count += 1
    return count


cdef struct _HS:
    uint64_t* buf
    int* sizes
    Py_ssize_t m
    int best_size
    uint64_t best_mask
    long long nodes
    long long check_every
    bint aborted


cdef void _search(_HS* st, Py_ssize_t off, Py_ssize_t cnt, uint64_t chosen,
                  int size, uint64_t forb, object expired):
    cdef Py_ssize_t k, nxt, ncnt
    cdef int lb, n, pick_n
    cdef uint64_t pick, a, f, rest, low, e
    if st.aborted:
        return
    st.nodes += 1
    if expired is not None and st.nodes % st.check_every == 0:
        if expired():
            st.aborted = True
            return
    if cnt == 0:
        if size < st.best_size:
            st.best_size = size
            st.best_mask = chosen
        return
    lb = _packing(st.buf + off, cnt, forb, st.sizes)
    if lb < 0 or size + lb >= st.best_size:
        return
    pick = st.buf[off] & ~forb
    pick_n = _pc(pick)
    for k in range(cnt):
        a = st.buf[off + k] & ~forb
        n = _pc(a)
        if n < pick_n:
            pick = a
            pick_n = n
    f = forb
    rest = pick
    nxt = off + cnt
    while rest:
        low = rest & (~rest + 1)
        rest ^= low
        ncnt = 0
        for k in range(cnt):
            e = st.buf[off + k]
            if not (e & low):
                st.buf[nxt + ncnt] = e
                ncnt += 1
        _search(st, nxt, ncnt, chosen | low, size + 1, f, expired)
        f |= low


def hitting_set(nverts, edges, expired=None, check_every=1024):
    if nverts > 64:
        return _pykernels.hitting_set(nverts, edges, expired, check_every)
    best_size, best_mask = _pykernels.greedy_hitting_set(nverts, edges)
    root_lb = _pykernels._packing_bound(edges, 0)
    if root_lb >= best_size or not edges:
        return best_size, best_mask, True, best_size
    cdef Py_ssize_t m = len(edges), k
    cdef _HS st
    # each level of the search stores at most m edges; depth < best_size
    st.buf = <uint64_t*> malloc(sizeof(uint64_t) * m * (best_size + 2))
    st.sizes = <int*> malloc(sizeof(int) * m)
    if st.buf == NULL or st.sizes == NULL:
        free(st.buf)
        free(st.sizes)
        raise MemoryError()
    try:
        for k in range(m):
            st.buf[k] = <uint64_t> edges[k]
        st.m = m
        st.best_size = best_size
        st.best_mask = <uint64_t> best_mask
        st.nodes = 0
        st.check_every = check_every
        st.aborted = False
        _search(&st, 0, m, 0, 0, 0, expired)
        exact = not st.aborted
        size = st.best_size
        mask = int(st.best_mask)
    finally:
        free(st.buf)
        free(st.sizes)
    return size, mask, exact, size if exact else root_lb
