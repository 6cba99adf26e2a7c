"""Compiled (numba) core for the 2-d branch-and-bound subset search.

Mirrors the pure-numpy search in ``solver._Search`` decision for decision:
the same accept-first depth-first order, the same incremental LB1/LB2
updates, and arithmetic in the same operation order, so the returned value
(and visited tree) is bit-identical to the reference implementation -- only
faster.  The recursion is unrolled into an explicit stack so the kernel
stays in nopython mode throughout.
"""

from __future__ import annotations

import time

import numpy as np
from numba import njit, objmode

__all__ = ["search_2d"]

_TIME_CHECK_MASK = 0x3FFF  # re-read the clock every 16384 nodes


@njit(cache=True)
def _leaf_value_2d(xs, ys):
    """Star discrepancy of a 2-d set, same scan order as the numpy sweep."""
    n = xs.shape[0]
    gx = np.unique(xs)
    gy = np.unique(ys)
    nx = gx.shape[0]
    ny = gy.shape[0]
    nx_bar = nx if gx[nx - 1] == 1.0 else nx + 1
    ny_bar = ny if gy[ny - 1] == 1.0 else ny + 1

    y_rank = np.searchsorted(gy, ys)
    order = np.argsort(xs, kind="mergesort")

    best = -np.inf
    counts = np.zeros(ny, dtype=np.int64)
    pos = 0
    for xi in range(nx_bar):
        x = gx[xi] if xi < nx else 1.0
        while pos < n and xs[order[pos]] < x:
            counts[y_rank[order[pos]]] += 1
            pos += 1
        below = 0
        for r in range(ny_bar):
            y = gy[r] if r < ny else 1.0
            d = x * y - below / n
            if d > best:
                best = d
            if r < ny:
                below += counts[r]

    for r in range(ny):
        counts[r] = 0
    pos = 0
    for xi in range(nx):
        x = gx[xi]
        while pos < n and xs[order[pos]] <= x:
            counts[y_rank[order[pos]]] += 1
            pos += 1
        covered = 0
        for r in range(ny):
            covered += counts[r]
            d = covered / n - x * gy[r]
            if d > best:
                best = d
    return best


@njit(cache=True)
def _accept_bounds(k, a, acc0, acc1, px, py, last0, last1,
                   vals0, vals1, suf, m, lb1, lb2):
    """Bounds after pushing point k (0-based grid indices px, py); ``a`` is
    the accepted count including the new point.  ``suf`` is the open-count
    slice for the undecided suffix starting after point k."""
    new_lb1 = lb1
    new_lb2 = lb2
    vpx = vals0[px]

    # LB1, corners on the x = px slab: y over accepted values, py, and 1.0
    for t in range(a + 1):
        if t < a - 1:
            y = acc1[t]
        elif t == a - 1:
            y = py
        else:
            y = last1
        da = 0
        for i in range(a - 1):
            if acc1[i] < y:
                da += 1
        tot = da + suf[px, y]
        if tot > m:
            tot = m
        eta = vpx * vals1[y] - tot / m
        if eta > new_lb1:
            new_lb1 = eta

    # LB1, corners on the y = py slab: x over previous values and 1.0
    for t in range(a):
        x = acc0[t] if t < a - 1 else last0
        da = 0
        for i in range(a - 1):
            if acc1[i] < py and acc0[i] < x:
                da += 1
        tot = da + suf[x, py]
        if tot > m:
            tot = m
        eta = vals0[x] * vals1[py] - tot / m
        if eta > new_lb1:
            new_lb1 = eta

    # LB2, corners on the x = px slab: y over accepted values and py
    for t in range(a):
        y = acc1[t] if t < a - 1 else py
        dbar = 1 if y >= py else 0
        for i in range(a - 1):
            if acc1[i] <= y:
                dbar += 1
        v = dbar / m - vpx * vals1[y]
        if v > new_lb2:
            new_lb2 = v

    # LB2, corners on the y = py slab: x over previous values
    for t in range(a - 1):
        x = acc0[t]
        dbar = 0
        for i in range(a - 1):
            if acc1[i] <= py and acc0[i] <= x:
                dbar += 1
        v = dbar / m - vals0[x] * vals1[py]
        if v > new_lb2:
            new_lb2 = v

    return new_lb1, new_lb2


@njit(cache=True)
def _reject_bounds(a, acc0, acc1, px, py, last0, last1,
                   vals0, vals1, suf, m, lb1):
    """LB1 after rejecting a point; only closed-grid corners strictly
    dominating it matter, and those have first coordinate 1.0."""
    if px >= last0:
        return lb1
    new_lb1 = lb1
    v0 = vals0[last0]
    for t in range(a + 1):
        y = acc1[t] if t < a else last1
        if y <= py:
            continue
        da = 0
        for i in range(a):
            if acc0[i] < last0 and acc1[i] < y:
                da += 1
        tot = da + suf[last0, y]
        if tot > m:
            tot = m
        eta = v0 * vals1[y] - tot / m
        if eta > new_lb1:
            new_lb1 = eta
    return new_lb1


@njit(cache=True)
def search_2d(xs, ys, pidx0, pidx1, vals0, vals1, open_suffix,
              m, ub0, lb1_root, node_cap, deadline):
    """Run the full accept/reject search; returns
    (ub, found, incumbent, nodes, prunes, aborted)."""
    n = xs.shape[0]
    last0 = vals0.shape[0] - 1
    last1 = vals1.shape[0] - 1

    acc = np.empty(m, dtype=np.int64)       # accepted point indices (0-based)
    acc0 = np.empty(m, dtype=np.int64)      # their grid indices per axis
    acc1 = np.empty(m, dtype=np.int64)
    sub_x = np.empty(m, dtype=np.float64)   # leaf scratch
    sub_y = np.empty(m, dtype=np.float64)
    incumbent = np.empty(m, dtype=np.int64)
    found = False
    ub = ub0

    # explicit stack: one frame per pending node
    cap = 2 * n + 4
    st_k = np.empty(cap, dtype=np.int64)     # 1-based point index to decide
    st_lb1 = np.empty(cap, dtype=np.float64)
    st_lb2 = np.empty(cap, dtype=np.float64)
    st_stage = np.empty(cap, dtype=np.int8)  # 0 enter, 1 after-accept, 2 after-reject

    top = 0
    st_k[0] = 1
    st_lb1[0] = lb1_root
    st_lb2[0] = 0.0
    st_stage[0] = 0
    a = 0
    nodes = 0
    prunes = 0
    aborted = False

    while top >= 0:
        stage = st_stage[top]
        k = st_k[top]
        if stage == 0:
            nodes += 1
            if node_cap >= 0 and nodes >= node_cap:
                aborted = True
                break
            if deadline > 0.0 and (nodes & _TIME_CHECK_MASK) == 0:
                with objmode(now="f8"):
                    now = time.perf_counter()
                if now > deadline:
                    aborted = True
                    break
            if a == m:
                for i in range(m):
                    sub_x[i] = xs[acc[i]]
                    sub_y[i] = ys[acc[i]]
                val = _leaf_value_2d(sub_x, sub_y)
                if val < ub:
                    ub = val
                    found = True
                    for i in range(m):
                        incumbent[i] = acc[i]
                top -= 1
                continue
            if k > n or a + (n - k + 1) < m:
                top -= 1
                continue
            lb1 = st_lb1[top]
            lb2 = st_lb2[top]
            if max(lb1, lb2) > ub:
                prunes += 1
                top -= 1
                continue
            # accept point k
            acc[a] = k - 1
            acc0[a] = pidx0[k - 1]
            acc1[a] = pidx1[k - 1]
            a += 1
            lb1a, lb2a = _accept_bounds(
                k, a, acc0, acc1, acc0[a - 1], acc1[a - 1], last0, last1,
                vals0, vals1, open_suffix[k + 1], m, lb1, lb2)
            st_stage[top] = 1
            top += 1
            st_k[top] = k + 1
            st_lb1[top] = lb1a
            st_lb2[top] = lb2a
            st_stage[top] = 0
        elif stage == 1:
            a -= 1
            lb1r = _reject_bounds(
                a, acc0, acc1, pidx0[k - 1], pidx1[k - 1], last0, last1,
                vals0, vals1, open_suffix[k + 1], m, st_lb1[top])
            st_stage[top] = 2
            top += 1
            st_k[top] = k + 1
            st_lb1[top] = lb1r
            st_lb2[top] = st_lb2[top - 1]
            st_stage[top] = 0
        else:
            top -= 1

    return ub, found, incumbent, nodes, prunes, aborted
