"""Reference (pure Python) implementations of the hot kernels.

``_ckernels.pyx`` mirrors every function here with identical results; the
test-suite runs both against each other whenever the extension is built.
All matrices are lists of rows of Python ints.
"""
from __future__ import annotations


def bareiss_det(m):
    n = len(m)
    a = [list(r) for r in m]
    sign = 1
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
        akk = a[k][k]
        rowk = a[k]
        for i in range(k + 1, n):
            rowi = a[i]
            aik = rowi[k]
            for j in range(k + 1, n):
                rowi[j] = (akk * rowi[j] - aik * rowk[j]) // prev
        prev = akk
    return sign * a[n - 1][n - 1] if n else 1


def _reduce_row(v, pivots):
    """Bring a new row through the Bareiss steps of ``pivots``.

    ``pivots`` holds (reduced_row, pivot_column) pairs in elimination order;
    the returned row is what fraction-free elimination would have produced.
    """
    prev = 1
    for row, c in pivots:
        p = row[c]
        vc = v[c]
        if vc:
            v = [(p * x - vc * y) // prev for x, y in zip(v, row)]
        elif p != prev:
            v = [(p * x) // prev for x in v]
        prev = p
    return v


def _first_nonzero(v):
    for j, x in enumerate(v):
        if x:
            return j
    return -1


def bareiss_rank(m):
    pivots = []
    for r in m:
        v = _reduce_row(list(r), pivots)
        c = _first_nonzero(v)
        if c >= 0:
            pivots.append((v, c))
    return len(pivots)


def _back_substitute(pivots, ncols):
    """Integer null vector of an echelon system with one free column."""
    used = {c for _, c in pivots}
    free = [j for j in range(ncols) if j not in used]
    f = free[0]
    x = [0] * ncols
    x[f] = pivots[-1][0][pivots[-1][1]]
    for row, c in reversed(pivots):
        s = 0
        for j in range(c + 1, ncols):
            if x[j] and row[j]:
                s += row[j] * x[j]
        x[c] = -s // row[c]
    return x


def nullspace_vector(m):
    """Integer generator of the null space of a k x (k+1) matrix of rank k."""
    ncols = len(m[0])
    pivots = []
    for r in m:
        v = _reduce_row(list(r), pivots)
        c = _first_nonzero(v)
        if c < 0:
            return None
        pivots.append((v, c))
    if len(pivots) != ncols - 1:
        return None
    return _back_substitute(pivots, ncols)


def enumerate_facets(rows, d, first_lo=0, first_hi=None):
    """Brute-force facet search over ``d``-subsets of homogeneous integer rows.

    ``rows[i]`` is ``(L*p_i, L)`` for a common positive scale L.  Only subsets
    whose smallest index lies in ``[first_lo, first_hi)`` are visited.  Returns
    ``(zero_sets, normals, degenerate)`` in order of first discovery, where a
    zero set is the sorted tuple of indices on a supporting hyperplane.
    ``degenerate`` is True if some hyperplane contained every point.
    """
    npts = len(rows)
    ncols = d + 1
    if first_hi is None:
        first_hi = npts
    seen = {}
    normals = []
    order = []
    degenerate = False
    chosen = [0] * d
    pivot_stack = []

    def visit(start, depth):
        nonlocal degenerate
        for i in range(start, npts - (d - depth) + 1):
            if depth == 0 and not (first_lo <= i < first_hi):
                continue
            v = _reduce_row(list(rows[i]), pivot_stack)
            c = _first_nonzero(v)
            if c < 0:
                continue
            chosen[depth] = i
            pivot_stack.append((v, c))
            if depth + 1 < d:
                visit(i + 1, depth + 1)
            else:
                x = _back_substitute(pivot_stack, ncols)
                pos = neg = False
                zeros = []
                for q in range(npts):
                    s = 0
                    for a, b in zip(x, rows[q]):
                        s += a * b
                    if s > 0:
                        if neg:
                            break
                        pos = True
                    elif s < 0:
                        if pos:
                            break
                        neg = True
                    else:
                        zeros.append(q)
                else:
                    if not (pos or neg):
                        degenerate = True
                    else:
                        key = tuple(zeros)
                        if key not in seen:
                            seen[key] = len(order)
                            order.append(key)
                            normals.append(tuple(x) if pos else tuple(-a for a in x))
            pivot_stack.pop()

    visit(0, 0)
    return order, normals, degenerate


# -- hitting sets on bitmasks -----------------------------------------------


def _popcount(x):
    return bin(x).count("1")


def _packing_bound(edges, forb):
    """Size of a greedy family of pairwise-disjoint edges (-1 if infeasible)."""
    avail = [e & ~forb for e in edges]
    sizes = [_popcount(a) for a in avail]
    if sizes and min(sizes) == 0:
        return -1
    used = 0
    count = 0
    for k in sorted(range(len(avail)), key=sizes.__getitem__):
        if not avail[k] & used:
            used |= avail[k]
            count += 1
    return count


def greedy_hitting_set(nverts, edges):
    chosen = 0
    size = 0
    uncovered = list(edges)
    while uncovered:
        best_v, best_c = -1, 0
        for v in range(nverts):
            bit = 1 << v
            c = 0
            for e in uncovered:
                if e & bit:
                    c += 1
            if c > best_c:
                best_v, best_c = v, c
        chosen |= 1 << best_v
        size += 1
        uncovered = [e for e in uncovered if not (e >> best_v) & 1]
    return size, chosen


def hitting_set(nverts, edges, expired=None, check_every=1024):
    """Minimum hitting set by branch and bound.

    Returns ``(size, mask, exact, lower_bound)``.  ``expired`` is an optional
    zero-argument callable polled every ``check_every`` nodes; once it returns
    True the search stops and the incumbent is reported as inexact.
    """
    best_size, best_mask = greedy_hitting_set(nverts, edges)
    root_lb = _packing_bound(edges, 0)
    if root_lb >= best_size or not edges:
        return best_size, best_mask, True, best_size
    state = {"size": best_size, "mask": best_mask, "nodes": 0, "aborted": False}

    def search(chosen, size, uncovered, forb):
        if state["aborted"]:
            return
        state["nodes"] += 1
        if expired is not None and state["nodes"] % check_every == 0 and expired():
            state["aborted"] = True
            return
        if not uncovered:
            if size < state["size"]:
                state["size"], state["mask"] = size, chosen
            return
        lb = _packing_bound(uncovered, forb)
        if lb < 0 or size + lb >= state["size"]:
            return
        pick = uncovered[0] & ~forb
        pick_n = _popcount(pick)
        for e in uncovered:
            a = e & ~forb
            n = _popcount(a)
            if n < pick_n:
                pick, pick_n = a, n
        f = forb
        rest = pick
        while rest:
            low = rest & -rest
            rest ^= low
            search(chosen | low, size + 1, [e for e in uncovered if not e & low], f)
            f |= low

    search(0, 0, list(edges), 0)
    exact = not state["aborted"]
    return state["size"], state["mask"], exact, state["size"] if exact else root_lb
