"""Subset-selection solvers for the star discrepancy.

Given an n-point set P and a target size m, find the m-subset minimizing the
star discrepancy of the chosen points.  Four strategies:

  * ``brute_force_subset``   -- enumerate all C(n, m) subsets (oracle).
  * ``random_subset_search`` -- best of a budget of uniform random subsets.
  * ``greedy_subset``        -- grow the subset one point at a time, always
    taking the candidate whose inclusion yields the smallest discrepancy.
  * ``bb_subset``            -- exact depth-first branch and bound with two
    incremental lower bounds.

The branch and bound keeps three stacks (accepted / rejected / undecided) and
consumes undecided points in ascending first-coordinate order, so the
undecided set is always a suffix of the sorted order.  This makes the
open-box counts D(q, P_N) precomputable for every suffix and every corner of
the full grid (``precompute_suffix_counts``), and lets both lower bounds be
updated incrementally:

  LB1 over the closed grid of the accepted points:
      eta(q) = vol(q) - min(m, D(q, P_A) + D(q, P_N)) / m
  LB2 over the open grid of the accepted points:
      Dbar(q, P_A) / m - vol(q)

Accepting a point only adds corners on its own coordinate slabs; rejecting a
point only affects closed-grid corners strictly dominating it (which all have
first coordinate 1), and leaves LB2 unchanged.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass, field

import numpy as np

from .geometry import (
    PointSet,
    _sweep_2d,
    star_discrepancy,
    star_discrepancy_grid,
)

__all__ = [
    "SubsetSelection",
    "CountTensor",
    "brute_force_subset",
    "random_subset_search",
    "greedy_subset",
    "local_search_subset",
    "precompute_suffix_counts",
    "lb1_scratch",
    "lb2_scratch",
    "bb_subset",
]


class CapExceededError(RuntimeError):
    """A configured resource cap (subset count, memory) was exceeded."""


@dataclass(frozen=True)
class SubsetSelection:
    chosen: tuple          # sorted indices into the (normalized) point set
    m: int
    value: float           # exact star discrepancy of the chosen subset
    status: str            # "optimal" | "best_found" | "heuristic"
    stats: dict = field(default_factory=dict)


def _subset_value(ps: PointSet, indices) -> float:
    return star_discrepancy(ps.subset(indices)).value


def _empty_selection(stats=None) -> SubsetSelection:
    # m = 0: the supremum over boxes with zero points is the unit volume
    return SubsetSelection(chosen=(), m=0, value=1.0, status="optimal",
                           stats=stats or {})


def brute_force_subset(ps: PointSet, m: int, cap: int = 10**7) -> SubsetSelection:
    """Provably optimal subset by exhaustive enumeration.

    Ties are broken toward the lexicographically smallest index tuple, which
    is the enumeration order of ``itertools.combinations``.
    """
    n = ps.n
    if m > n:
        raise ValueError(f"m={m} exceeds n={n}")
    if m == 0:
        return _empty_selection()
    total = math.comb(n, m)
    if total > cap:
        raise CapExceededError(f"C({n},{m}) = {total} exceeds cap {cap}")
    t0 = time.perf_counter()
    best = None
    best_val = math.inf
    for combo in itertools.combinations(range(n), m):
        v = _subset_value(ps, combo)
        if v < best_val:
            best_val = v
            best = combo
    stats = {"evals": total, "wall_ms": (time.perf_counter() - t0) * 1e3}
    return SubsetSelection(chosen=tuple(best), m=m, value=best_val,
                           status="optimal", stats=stats)


def random_subset_search(ps: PointSet, m: int, budget: int, seed: int,
                         time_limit: float | None = None) -> SubsetSelection:
    """Best of ``budget`` uniformly random m-subsets (deterministic per seed)."""
    n = ps.n
    if m > n:
        raise ValueError(f"m={m} exceeds n={n}")
    if budget < 1:
        raise ValueError("budget must be >= 1")
    if m == 0:
        return _empty_selection()
    rng = np.random.Generator(np.random.PCG64(seed))
    t0 = time.perf_counter()
    best = None
    best_val = math.inf
    evals = 0
    for _ in range(budget):
        combo = np.sort(rng.choice(n, size=m, replace=False))
        v = _subset_value(ps, combo)
        evals += 1
        if v < best_val:
            best_val = v
            best = tuple(int(i) for i in combo)
        if time_limit is not None and time.perf_counter() - t0 > time_limit:
            break
    stats = {"evals": evals, "wall_ms": (time.perf_counter() - t0) * 1e3}
    return SubsetSelection(chosen=best, m=m, value=best_val,
                           status="heuristic", stats=stats)


def greedy_subset(ps: PointSet, m: int) -> SubsetSelection:
    """Grow the subset m times, each step adding the candidate point whose
    inclusion minimizes the discrepancy of the enlarged selection (ties to
    the smallest index).  The running value is not monotone in m."""
    n = ps.n
    if m > n:
        raise ValueError(f"m={m} exceeds n={n}")
    if m == 0:
        return _empty_selection()
    t0 = time.perf_counter()
    chosen: list[int] = []
    remaining = list(range(n))
    value = 1.0
    evals = 0
    for _ in range(m):
        best_i = None
        best_val = math.inf
        for i in remaining:
            v = _subset_value(ps, chosen + [i])
            evals += 1
            if v < best_val:
                best_val = v
                best_i = i
        chosen.append(best_i)
        remaining.remove(best_i)
        value = best_val
    stats = {"evals": evals, "wall_ms": (time.perf_counter() - t0) * 1e3}
    return SubsetSelection(chosen=tuple(sorted(chosen)), m=m, value=value,
                           status="heuristic", stats=stats)


def local_search_subset(ps: PointSet, start: SubsetSelection,
                        max_rounds: int = 100) -> SubsetSelection:
    """Best-improvement swap descent from a feasible selection.

    Each round tries every (chosen, unchosen) exchange and applies the one
    with the largest decrease; stops at a local optimum (no swap improves).
    """
    n, m = ps.n, start.m
    if m == 0 or m == n:
        return start
    t0 = time.perf_counter()
    chosen = list(start.chosen)
    value = start.value
    evals = 0
    for _ in range(max_rounds):
        out_pool = [i for i in range(n) if i not in set(chosen)]
        best_swap = None
        best_val = value
        for si, i in enumerate(chosen):
            for j in out_pool:
                trial = chosen[:si] + [j] + chosen[si + 1:]
                v = _subset_value(ps, trial)
                evals += 1
                if v < best_val:
                    best_val = v
                    best_swap = (si, j)
        if best_swap is None:
            break
        chosen[best_swap[0]] = best_swap[1]
        value = best_val
    stats = {"evals": evals, "wall_ms": (time.perf_counter() - t0) * 1e3}
    return SubsetSelection(chosen=tuple(sorted(chosen)), m=m, value=value,
                           status="heuristic", stats=stats)


# ---------------------------------------------------------------------------
# suffix count tensor and lower bounds

@dataclass(frozen=True)
class CountTensor:
    """Open/closed box counts of every sorted-order suffix at every corner
    of the full closed grid of P.

    ``open_suffix[k]`` holds D(q, {p_k, ..., p_n}) for the 1-based suffix
    start k in [1 .. n+1]; slice n+1 is identically zero.  ``point_idx[i]``
    gives the per-axis grid index of point p_i (0-based point index).
    """

    axes: tuple                 # per-axis sorted values, 1.0 appended
    point_idx: np.ndarray       # (n, d) int
    open_suffix: np.ndarray     # (n+2, *grid_shape) int32
    closed_suffix: np.ndarray   # (n+2, *grid_shape) int32


def precompute_suffix_counts(ps: PointSet, max_cells: int = 5 * 10**7) -> CountTensor:
    """Build the suffix count tensor backward from the empty suffix."""
    n, d = ps.n, ps.dim
    axes = []
    for j in range(d):
        vals = np.unique(ps.coords[:, j])
        if vals[-1] != 1.0:
            vals = np.append(vals, 1.0)
        axes.append(vals)
    shape = tuple(ax.size for ax in axes)
    cells = (n + 2) * int(np.prod(shape))
    if cells > max_cells:
        raise CapExceededError(
            f"suffix tensor needs {cells} cells, cap is {max_cells}")

    point_idx = np.column_stack(
        [np.searchsorted(axes[j], ps.coords[:, j]) for j in range(d)]
    )
    open_suffix = np.zeros((n + 2,) + shape, dtype=np.int32)
    closed_suffix = np.zeros((n + 2,) + shape, dtype=np.int32)
    for k in range(n, 0, -1):
        p = ps.coords[k - 1]
        open_ind = np.ones(shape, dtype=np.int32)
        closed_ind = np.ones(shape, dtype=np.int32)
        for j in range(d):
            sl = [None] * d
            sl[j] = slice(None)
            open_ind = open_ind * (axes[j] > p[j])[tuple(sl)]
            closed_ind = closed_ind * (axes[j] >= p[j])[tuple(sl)]
        open_suffix[k] = open_suffix[k + 1] + open_ind
        closed_suffix[k] = closed_suffix[k + 1] + closed_ind
    return CountTensor(axes=tuple(axes), point_idx=point_idx,
                       open_suffix=open_suffix, closed_suffix=closed_suffix)


def lb2_scratch(accepted: PointSet, m: int) -> float:
    """From-scratch LB2: max over the open grid of the accepted points of
    Dbar(q, P_A)/m - vol(q), clamped below at 0."""
    if accepted.n == 0:
        return 0.0
    axes = [np.unique(accepted.coords[:, j]) for j in range(accepted.dim)]
    best = 0.0
    for corner in itertools.product(*axes):
        q = np.array(corner)
        dbar = int(np.count_nonzero(np.all(accepted.coords <= q, axis=1)))
        lam = 1.0
        for c in corner:
            lam = lam * float(c)
        v = dbar / m - lam
        if v > best:
            best = v
    return best


def lb1_scratch(accepted: PointSet, undecided: PointSet, m: int) -> float:
    """From-scratch LB1: max over the closed grid of the accepted points of
    eta(q) = vol(q) - min(m, D(q, P_A) + D(q, P_N))/m, clamped at 0.

    The closed grid of an empty accepted set is the single corner (1,...,1).
    """
    d = undecided.dim if accepted.n == 0 else accepted.dim
    if accepted.n == 0:
        axes = [np.array([1.0])] * d
    else:
        axes = []
        for j in range(d):
            vals = np.unique(accepted.coords[:, j])
            if vals[-1] != 1.0:
                vals = np.append(vals, 1.0)
            axes.append(vals)
    best = 0.0
    for corner in itertools.product(*axes):
        q = np.array(corner)
        da = int(np.count_nonzero(np.all(accepted.coords < q, axis=1))) if accepted.n else 0
        dn = int(np.count_nonzero(np.all(undecided.coords < q, axis=1))) if undecided.n else 0
        lam = 1.0
        for c in corner:
            lam = lam * float(c)
        v = lam - min(m, da + dn) / m
        if v > best:
            best = v
    return best


# ---------------------------------------------------------------------------
# branch and bound

class _Search:
    """Mutable state of one bb_subset call (single-threaded)."""

    def __init__(self, ps: PointSet, m: int, tensor: CountTensor,
                 ub: float, incumbent, time_limit, node_cap):
        self.ps = ps
        self.coords = ps.coords
        self.n, self.d = ps.n, ps.dim
        self.m = m
        self.tensor = tensor
        self.axes = tensor.axes
        self.last = [ax.size - 1 for ax in tensor.axes]  # index of 1.0
        self.pidx = tensor.point_idx
        self.ub = ub
        self.incumbent = incumbent
        self.time_limit = time_limit
        self.node_cap = node_cap
        self.t0 = time.perf_counter()
        self.nodes = 0
        self.prunes = 0
        self.aborted = False
        # accepted stack: point indices and per-axis sorted index lists
        self.acc: list[int] = []
        self.acc_idx = np.empty((m, ps.dim), dtype=np.intp)

    def out_of_budget(self) -> bool:
        if self.node_cap is not None and self.nodes >= self.node_cap:
            return True
        if self.time_limit is not None and \
                time.perf_counter() - self.t0 > self.time_limit:
            return True
        return False

    # -- corner utilities (all in grid-index space) --

    def _eta_max(self, corners: np.ndarray, k_next: int, acc_rows: np.ndarray) -> float:
        """max eta over the given corners with undecided suffix starting at
        k_next (1-based) and the given accepted index rows."""
        if corners.size == 0:
            return -math.inf
        lam = np.ones(len(corners))
        for j in range(self.d):
            lam = lam * self.axes[j][corners[:, j]]
        if len(acc_rows):
            da = np.count_nonzero(
                np.all(acc_rows[None, :, :] < corners[:, None, :], axis=2), axis=1)
        else:
            da = np.zeros(len(corners), dtype=np.intp)
        dn = self.tensor.open_suffix[k_next][tuple(corners.T)]
        eta = lam - np.minimum(self.m, da + dn) / self.m
        return float(eta.max())

    def _dbar_max(self, corners: np.ndarray, acc_rows: np.ndarray) -> float:
        if corners.size == 0:
            return -math.inf
        lam = np.ones(len(corners))
        for j in range(self.d):
            lam = lam * self.axes[j][corners[:, j]]
        dbar = np.count_nonzero(
            np.all(acc_rows[None, :, :] <= corners[:, None, :], axis=2), axis=1)
        return float((dbar / self.m - lam).max())

    def _axis_lists(self, with_one: bool) -> list[list[int]]:
        """Per-axis sorted accepted grid indices, optionally with the 1.0 index."""
        out = []
        for j in range(self.d):
            vals = sorted({int(self.acc_idx[i, j]) for i in range(len(self.acc))})
            if with_one and (not vals or vals[-1] != self.last[j]):
                vals.append(self.last[j])
            out.append(vals)
        return out

    def _new_corner_block(self, p_row, lists_old, lists_new, fixed_axis) -> np.ndarray:
        """Corners with coordinate ``fixed_axis`` pinned to the new point's
        value, earlier axes over the old lists, later axes over the new."""
        per_axis = []
        for j in range(self.d):
            if j == fixed_axis:
                per_axis.append([int(p_row[j])])
            elif j < fixed_axis:
                per_axis.append(lists_old[j])
            else:
                per_axis.append(lists_new[j])
        combos = list(itertools.product(*per_axis))
        return np.array(combos, dtype=np.intp).reshape(len(combos), self.d)

    # -- d = 2 fast path: accepted first-axis indices are already sorted
    # (points are consumed in ascending first-coordinate order), so every
    # dominance count is a searchsorted over small index arrays --

    def accept_bounds_2d(self, k: int, lb1: float, lb2: float):
        a = len(self.acc)  # includes p
        m = self.m
        px, py = int(self.pidx[k - 1, 0]), int(self.pidx[k - 1, 1])
        prev0 = self.acc_idx[:a - 1, 0]
        prev1 = self.acc_idx[:a - 1, 1]
        prev1_sorted = np.sort(prev1)
        vals0, vals1 = self.axes
        suf = self.tensor.open_suffix[k + 1]
        vpx = vals0[px]

        # closed-grid corners on p's slabs (duplicate corners are harmless
        # under max, so the concatenations are not deduplicated)
        ybar = np.concatenate([prev1, (py, self.last[1])])
        da = prev1_sorted.searchsorted(ybar, side="left")
        eta = vpx * vals1[ybar] - np.minimum(m, da + suf[px, ybar]) / m
        new_lb1 = max(lb1, float(eta.max()))

        xbar = np.concatenate([prev0, (self.last[0],)])
        x0m = prev0[prev1 < py]
        da = x0m.searchsorted(xbar, side="left")
        eta = vals0[xbar] * vals1[py] - np.minimum(m, da + suf[xbar, py]) / m
        new_lb1 = max(new_lb1, float(eta.max()))

        # open-grid corners on p's slabs
        yop = np.concatenate([prev1, (py,)])
        dbar = prev1_sorted.searchsorted(yop, side="right") + (yop >= py)
        val = dbar / m - vpx * vals1[yop]
        new_lb2 = max(lb2, float(val.max()))
        if a > 1:
            x0m = prev0[prev1 <= py]
            dbar = x0m.searchsorted(prev0, side="right")
            val = dbar / m - vals0[prev0] * vals1[py]
            new_lb2 = max(new_lb2, float(val.max()))
        return new_lb1, new_lb2

    def reject_bounds_2d(self, k: int, lb1: float) -> float:
        px, py = int(self.pidx[k - 1, 0]), int(self.pidx[k - 1, 1])
        last0, last1 = self.last
        if px >= last0:
            return lb1
        a = len(self.acc)
        prev0 = self.acc_idx[:a, 0]
        prev1 = self.acc_idx[:a, 1]
        ybar = np.concatenate([prev1, (last1,)])
        ybar = ybar[ybar > py]
        if ybar.size == 0:
            return lb1
        m = self.m
        suf = self.tensor.open_suffix[k + 1]
        # accepted points below the x = 1 slab, counted per y threshold
        cnt0 = int(prev0.searchsorted(last0, side="left"))
        sub1 = np.sort(prev1[:cnt0])
        da = sub1.searchsorted(ybar, side="left")
        eta = self.axes[0][last0] * self.axes[1][ybar] \
            - np.minimum(m, da + suf[last0, ybar]) / m
        return max(lb1, float(eta.max()))

    def accept_bounds(self, k: int, lb1: float, lb2: float):
        """Bounds after accepting point k-1 (0-based); the point is already
        pushed on the accepted stack."""
        p_row = self.pidx[k - 1]
        a = len(self.acc)  # includes p
        acc_rows = self.acc_idx[:a]

        # closed-grid corners introduced by p; the old lists drop p's value
        # unless another accepted point or the 1.0 sentinel shares it
        lists_bar_new = self._axis_lists(with_one=True)
        lists_bar_old = []
        for j, lst in enumerate(lists_bar_new):
            others = {int(self.acc_idx[i, j]) for i in range(a - 1)}
            keep = [v for v in lst if v in others or v == self.last[j]]
            lists_bar_old.append(keep)

        new_lb1 = lb1
        for j in range(self.d):
            block = self._new_corner_block(p_row, lists_bar_old, lists_bar_new, j)
            v = self._eta_max(block, k + 1, acc_rows)
            if v > new_lb1:
                new_lb1 = v

        # open-grid corners introduced by p
        lists_new = [sorted({int(self.acc_idx[i, j]) for i in range(a)})
                     for j in range(self.d)]
        lists_old = [sorted({int(self.acc_idx[i, j]) for i in range(a - 1)})
                     for j in range(self.d)]
        new_lb2 = lb2
        for j in range(self.d):
            block = self._new_corner_block(p_row, lists_old, lists_new, j)
            if block.size:
                v = self._dbar_max(block, acc_rows)
                if v > new_lb2:
                    new_lb2 = v
        return new_lb1, new_lb2

    def reject_bounds(self, k: int, lb1: float) -> float:
        """LB1 after rejecting point k-1 (0-based); LB2 is unchanged."""
        p_row = self.pidx[k - 1]
        a = len(self.acc)
        if a == 0:
            # closed grid of the empty accepted set is {(1,...,1)}
            corner = np.array([self.last], dtype=np.intp)
            if np.all(p_row < corner[0]):
                v = self._eta_max(corner, k + 1, self.acc_idx[:0])
                return max(lb1, v)
            return lb1
        lists_bar = self._axis_lists(with_one=True)
        # corners strictly dominating p: first axis is forced to 1.0
        if p_row[0] >= self.last[0]:
            return lb1
        per_axis = [[self.last[0]]]
        for j in range(1, self.d):
            per_axis.append([v for v in lists_bar[j] if v > p_row[j]])
        combos = list(itertools.product(*per_axis))
        if not combos:
            return lb1
        block = np.array(combos, dtype=np.intp)
        v = self._eta_max(block, k + 1, self.acc_idx[:a])
        return max(lb1, v)

    # -- the recursion (Algorithm: accept-first depth-first search) --

    def run(self, k: int, lb1: float, lb2: float):
        self.nodes += 1
        if self.out_of_budget():
            self.aborted = True
            return
        a = len(self.acc)
        if a == self.m:
            sub = sorted(self.acc)
            val = self._leaf_value(sub)
            if val < self.ub:
                self.ub = val
                self.incumbent = tuple(sub)
            return
        if k > self.n or a + (self.n - k + 1) < self.m:
            return
        if max(lb1, lb2) > self.ub:
            self.prunes += 1
            return

        # accept p_k
        self.acc.append(k - 1)
        self.acc_idx[a] = self.pidx[k - 1]
        if self.d == 2:
            lb1a, lb2a = self.accept_bounds_2d(k, lb1, lb2)
        else:
            lb1a, lb2a = self.accept_bounds(k, lb1, lb2)
        self.run(k + 1, lb1a, lb2a)
        self.acc.pop()

        # reject p_k
        if self.aborted:
            return
        if self.d == 2:
            lb1r = self.reject_bounds_2d(k, lb1)
        else:
            lb1r = self.reject_bounds(k, lb1)
        self.run(k + 1, lb1r, lb2)

    def _leaf_value(self, indices) -> float:
        if self.d == 2:
            value, _, _ = _sweep_2d(self.coords[indices, 0], self.coords[indices, 1])
            return value
        return star_discrepancy_grid(self.ps.subset(indices)).value


def bb_subset(ps: PointSet, m: int, time_limit: float | None = None,
              initial_ub: float | None = None, node_cap: int | None = None,
              max_cells: int = 5 * 10**7,
              use_compiled: bool = True) -> SubsetSelection:
    """Exact branch and bound over accept/reject decisions in sorted order.

    The incumbent is seeded with the greedy subset (value and indices), so a
    timed-out search still returns a concrete feasible selection.  Status is
    ``optimal`` only when the search tree was exhausted within the limits.

    For d = 2 the search runs in a compiled kernel that visits the same tree
    and produces the same floats as the reference implementation; pass
    ``use_compiled=False`` to force the reference path.
    """
    n = ps.n
    if m > n:
        raise ValueError(f"m={m} exceeds n={n}")
    if m == 0:
        return _empty_selection()
    ps = ps.normalize_order()
    if m == n:
        val = star_discrepancy(ps).value
        return SubsetSelection(chosen=tuple(range(n)), m=m, value=val,
                               status="optimal",
                               stats={"nodes": 0, "prunes": 0, "wall_ms": 0.0})
    t0 = time.perf_counter()
    if initial_ub is None:
        warm = local_search_subset(ps, greedy_subset(ps, m))
        ub, incumbent = warm.value, warm.chosen
    else:
        ub, incumbent = initial_ub, None

    tensor = precompute_suffix_counts(ps, max_cells=max_cells)

    if use_compiled and ps.dim == 2:
        try:
            from . import _bb2d
        except ImportError:
            pass
        else:
            return _bb_subset_compiled(ps, m, tensor, ub, incumbent,
                                       time_limit, node_cap, t0, _bb2d)

    search = _Search(ps, m, tensor, ub, incumbent, time_limit, node_cap)

    # root bounds: LB2 of an empty selection is 0; LB1 is eta at (1,...,1)
    root_corner = np.array([search.last], dtype=np.intp)
    lb1_root = max(0.0, search._eta_max(root_corner, 1, search.acc_idx[:0]))
    search.run(1, lb1_root, 0.0)

    status = "best_found" if search.aborted else "optimal"
    stats = {"nodes": search.nodes, "prunes": search.prunes,
             "wall_ms": (time.perf_counter() - t0) * 1e3}
    if search.incumbent is None:
        # no feasible subset visited before abort; fall back to greedy
        warm = greedy_subset(ps, m)
        return SubsetSelection(chosen=warm.chosen, m=m, value=warm.value,
                               status="best_found", stats=stats)
    value = search.ub
    return SubsetSelection(chosen=tuple(sorted(search.incumbent)), m=m,
                           value=value, status=status, stats=stats)


def _bb_subset_compiled(ps, m, tensor, ub, incumbent, time_limit, node_cap,
                        t0, _bb2d) -> SubsetSelection:
    """Marshal the search state into flat arrays for the compiled kernel."""
    vals0, vals1 = (np.ascontiguousarray(ax) for ax in tensor.axes)
    pidx0 = np.ascontiguousarray(tensor.point_idx[:, 0], dtype=np.int64)
    pidx1 = np.ascontiguousarray(tensor.point_idx[:, 1], dtype=np.int64)
    xs = np.ascontiguousarray(ps.coords[:, 0])
    ys = np.ascontiguousarray(ps.coords[:, 1])
    last0, last1 = vals0.size - 1, vals1.size - 1
    lam = (1.0 * vals0[last0]) * vals1[last1]
    dn = int(tensor.open_suffix[1][last0, last1])
    lb1_root = max(0.0, lam - min(m, dn) / m)
    deadline = -1.0 if time_limit is None else time.perf_counter() + time_limit
    cap = -1 if node_cap is None else node_cap
    val, found, inc, nodes, prunes, aborted = _bb2d.search_2d(
        xs, ys, pidx0, pidx1, vals0, vals1, tensor.open_suffix,
        m, ub, lb1_root, cap, deadline)
    status = "best_found" if aborted else "optimal"
    stats = {"nodes": int(nodes), "prunes": int(prunes),
             "wall_ms": (time.perf_counter() - t0) * 1e3}
    if found:
        chosen = tuple(sorted(int(i) for i in inc))
    elif incumbent is not None:
        chosen = tuple(sorted(incumbent))
    else:
        warm = greedy_subset(ps, m)
        return SubsetSelection(chosen=warm.chosen, m=m, value=warm.value,
                               status="best_found", stats=stats)
    return SubsetSelection(chosen=chosen, m=m, value=float(val),
                           status=status, stats=stats)
