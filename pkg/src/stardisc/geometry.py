"""Exact L-infinity star discrepancy evaluation.

The star discrepancy of a point set P in [0,1]^d is the largest absolute
deviation between the volume of an anchored box and the fraction of points
it contains.  The supremum over all boxes is attained on the finite grid
built from the point coordinates (with 1.0 appended per axis), which turns
the evaluation into a discrete maximization:

    d*(P) = max( max_{q in closed grid} delta(q),
                 max_{q in open grid}   delta_bar(q) )

where delta(q) = vol(q) - D(q)/n counts points in the half-open box [0,q)
and delta_bar(q) = Dbar(q)/n - vol(q) counts points in the closed box [0,q].

Three evaluators are provided:

  * ``star_discrepancy_grid``  -- full grid enumeration, any dimension
    (practical for d <= 4 and a few hundred points).
  * ``star_discrepancy_2d``    -- O(n^2) coordinate sweep for d = 2,
    bit-identical to the grid evaluator.
  * ``star_discrepancy_1d``    -- sorted-coordinate formula for d = 1.

All functions are pure; ``PointSet`` is immutable after construction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "PointSet",
    "LocalDiscrepancy",
    "DiscrepancyResult",
    "open_count",
    "closed_count",
    "local_discrepancy",
    "grid",
    "star_discrepancy",
    "star_discrepancy_grid",
    "star_discrepancy_2d",
    "star_discrepancy_1d",
    "read_point_file",
    "write_point_file",
]


class DimensionMismatchError(ValueError):
    """Test point and point set do not share the same dimension."""


class EmptyPointSetError(ValueError):
    """Operation requires a nonempty point set."""


@dataclass(frozen=True)
class PointSet:
    """Ordered list of points in [0,1]^d.

    ``coords`` is an (n, d) float64 array; rows are points.  The instance is
    immutable: the backing array is copied and marked read-only.
    """

    coords: np.ndarray
    label: str = ""

    def __post_init__(self):
        arr = np.array(self.coords, dtype=np.float64, copy=True)
        if arr.ndim != 2:
            raise ValueError(f"coords must be a 2-d array, got shape {arr.shape}")
        if arr.shape[1] < 1:
            raise ValueError("dimension must be >= 1")
        if arr.size and (arr.min() < 0.0 or arr.max() > 1.0):
            raise ValueError("all coordinates must lie in [0, 1]")
        arr.setflags(write=False)
        object.__setattr__(self, "coords", arr)

    @property
    def n(self) -> int:
        return self.coords.shape[0]

    @property
    def dim(self) -> int:
        return self.coords.shape[1]

    def __len__(self) -> int:
        return self.n

    def normalize_order(self) -> "PointSet":
        """Sort points by first coordinate, ties broken by later coordinates."""
        order = np.lexsort(self.coords.T[::-1])
        return PointSet(self.coords[order], label=self.label)

    def subset(self, indices) -> "PointSet":
        idx = np.asarray(list(indices), dtype=np.intp)
        return PointSet(self.coords[idx], label=self.label)

    def with_point(self, point) -> "PointSet":
        row = np.asarray(point, dtype=np.float64).reshape(1, -1)
        return PointSet(np.vstack([self.coords, row]), label=self.label)


@dataclass(frozen=True)
class LocalDiscrepancy:
    """Signed deviations at a single test corner q."""

    q: tuple
    delta: float        # open-box deviation: vol(q) - D(q)/n
    delta_bar: float    # closed-box deviation: Dbar(q)/n - vol(q)

    @property
    def max(self) -> float:
        return max(self.delta, self.delta_bar)


@dataclass(frozen=True)
class DiscrepancyResult:
    value: float
    witness: tuple
    witness_kind: str  # "open" (delta) or "closed" (delta_bar)


def _check_dims(q, ps: PointSet) -> np.ndarray:
    q = np.asarray(q, dtype=np.float64).reshape(-1)
    if q.shape[0] != ps.dim:
        raise DimensionMismatchError(
            f"test point has dimension {q.shape[0]}, point set has {ps.dim}"
        )
    return q


def volume(q) -> float:
    """Volume of the anchored box [0, q], multiplied left to right."""
    v = 1.0
    for c in q:
        v = v * float(c)
    return v


def open_count(q, ps: PointSet) -> int:
    """Number of points of ``ps`` inside the half-open box [0, q)."""
    qa = _check_dims(q, ps)
    if ps.n == 0:
        return 0
    return int(np.count_nonzero(np.all(ps.coords < qa, axis=1)))


def closed_count(q, ps: PointSet) -> int:
    """Number of points of ``ps`` inside the closed box [0, q]."""
    qa = _check_dims(q, ps)
    if ps.n == 0:
        return 0
    return int(np.count_nonzero(np.all(ps.coords <= qa, axis=1)))


def local_discrepancy(q, ps: PointSet) -> LocalDiscrepancy:
    """Open and closed deviations of the counting measure at corner q."""
    if ps.n == 0:
        raise EmptyPointSetError("local discrepancy of an empty set is undefined")
    qa = _check_dims(q, ps)
    lam = volume(qa)
    n = ps.n
    return LocalDiscrepancy(
        q=tuple(qa),
        delta=lam - open_count(qa, ps) / n,
        delta_bar=closed_count(qa, ps) / n - lam,
    )


def grid(ps: PointSet, closed: bool = False) -> list[np.ndarray]:
    """Per-axis sorted distinct coordinate values.

    With ``closed=True`` the value 1.0 is appended to every axis (the grid of
    P union {(1,...,1)}), which is the candidate set for the open-box side.
    """
    if ps.n == 0:
        raise EmptyPointSetError("grid of an empty set is undefined")
    axes = []
    for j in range(ps.dim):
        vals = np.unique(ps.coords[:, j])
        if closed and (vals.size == 0 or vals[-1] != 1.0):
            vals = np.append(vals, 1.0)
        axes.append(vals)
    return axes


def _axis_volumes(axes) -> np.ndarray:
    """Tensor of box volumes over the grid, multiplied in axis order."""
    lam = axes[0].copy()
    for ax in axes[1:]:
        lam = np.multiply.outer(lam, ax)
    return lam


def _grid_open_counts(axes, coords: np.ndarray) -> np.ndarray:
    """D(q, P) for every grid corner q, via per-axis strict dominance."""
    d = len(axes)
    masks = [axes[j][:, None] > coords[None, :, j] for j in range(d)]
    letters = "abcefghijk"
    spec = ",".join(f"{letters[j]}z" for j in range(d)) + "->" + letters[:d]
    return np.einsum(spec, *[m.astype(np.int64) for m in masks])


def _grid_closed_counts(axes, coords: np.ndarray) -> np.ndarray:
    d = len(axes)
    masks = [axes[j][:, None] >= coords[None, :, j] for j in range(d)]
    letters = "abcefghijk"
    spec = ",".join(f"{letters[j]}z" for j in range(d)) + "->" + letters[:d]
    return np.einsum(spec, *[m.astype(np.int64) for m in masks])


def _lex_argmax(arr: np.ndarray):
    """Index tuple of the first maximum in row-major (lexicographic) order."""
    flat = int(np.argmax(arr))
    return np.unravel_index(flat, arr.shape)


def star_discrepancy_grid(ps: PointSet) -> DiscrepancyResult:
    """Exact star discrepancy by full grid enumeration (any dimension).

    The witness is the lexicographically smallest maximizing grid corner;
    open-box witnesses take precedence over closed-box ones on ties.
    """
    if ps.n == 0:
        raise EmptyPointSetError("star discrepancy of an empty set is undefined")
    n = ps.n
    closed_axes = grid(ps, closed=True)
    open_axes = grid(ps, closed=False)

    lam_bar = _axis_volumes(closed_axes)
    delta = lam_bar - _grid_open_counts(closed_axes, ps.coords) / n
    idx = _lex_argmax(delta)
    best = float(delta[idx])
    witness = tuple(float(closed_axes[j][idx[j]]) for j in range(ps.dim))
    kind = "open"

    lam = _axis_volumes(open_axes)
    delta_bar = _grid_closed_counts(open_axes, ps.coords) / n - lam
    idx2 = _lex_argmax(delta_bar)
    if float(delta_bar[idx2]) > best:
        best = float(delta_bar[idx2])
        witness = tuple(float(open_axes[j][idx2[j]]) for j in range(ps.dim))
        kind = "closed"

    return DiscrepancyResult(value=best, witness=witness, witness_kind=kind)


def star_discrepancy_2d(ps: PointSet) -> DiscrepancyResult:
    """Exact star discrepancy for d = 2 via an O(n^2) sweep.

    Sweeps x thresholds in increasing order, maintaining the subset of points
    below the threshold, and scans the y grid with prefix counts.  Produces
    the same binary float value and witness as ``star_discrepancy_grid``.
    """
    if ps.dim != 2:
        raise DimensionMismatchError("star_discrepancy_2d requires dimension 2")
    if ps.n == 0:
        raise EmptyPointSetError("star discrepancy of an empty set is undefined")
    value, wit, kind = _sweep_2d(ps.coords[:, 0], ps.coords[:, 1])
    return DiscrepancyResult(value=value, witness=wit, witness_kind=kind)


def _sweep_2d(xs: np.ndarray, ys: np.ndarray):
    """Core of the 2-d sweep on raw coordinate arrays."""
    n = xs.shape[0]
    gx = np.unique(xs)
    gy = np.unique(ys)
    gx_bar = np.append(gx, 1.0) if gx[-1] != 1.0 else gx
    gy_bar = np.append(gy, 1.0) if gy[-1] != 1.0 else gy

    # Rank each point's y among the open y-grid values.
    y_rank = np.searchsorted(gy, ys)

    # Open side: for each x in the closed x grid, count points with px < x
    # per y-cell, then prefix-sum along the y scan.
    best = -np.inf
    wit = (0.0, 0.0)
    ny = gy_bar.size
    # counts[r] = number of included points whose y equals gy[r]
    counts = np.zeros(gy.size, dtype=np.int64)
    order = np.argsort(xs, kind="stable")
    pos = 0
    for x in gx_bar:
        while pos < n and xs[order[pos]] < x:
            counts[y_rank[order[pos]]] += 1
            pos += 1
        below = 0
        for r in range(ny):
            y = gy_bar[r]
            # points strictly below y: all included points in cells < r
            d = x * y - below / n
            if d > best:
                best = d
                wit = (float(x), float(y))
            if r < gy.size:
                below += counts[r]
    kind = "open"

    # Closed side: points with px <= x and py <= y, over the open grid.
    counts = np.zeros(gy.size, dtype=np.int64)
    pos = 0
    best_bar = -np.inf
    wit_bar = (0.0, 0.0)
    for x in gx:
        while pos < n and xs[order[pos]] <= x:
            counts[y_rank[order[pos]]] += 1
            pos += 1
        covered = 0
        for r in range(gy.size):
            covered += counts[r]
            d = covered / n - x * gy[r]
            if d > best_bar:
                best_bar = d
                wit_bar = (float(x), float(gy[r]))
    if best_bar > best:
        best = best_bar
        wit = wit_bar
        kind = "closed"

    return float(best), wit, kind


def star_discrepancy_1d(ps: PointSet) -> DiscrepancyResult:
    """Exact star discrepancy for d = 1.

    Equivalent to Niederreiter's sorted-coordinate formula
    1/(2n) + max_i |p_(i) - (2i-1)/(2n)|, evaluated here as the per-point
    deviations delta(p_i) = p_i - (i-1)/n, delta_bar(p_i) = i/n - p_i (plus
    the corner q = 1) so the reported value is exactly a local discrepancy
    at the reported witness.
    """
    if ps.dim != 1:
        raise DimensionMismatchError("star_discrepancy_1d requires dimension 1")
    if ps.n == 0:
        raise EmptyPointSetError("star discrepancy of an empty set is undefined")
    n = ps.n
    p = np.sort(ps.coords[:, 0])

    best = -np.inf
    wit = 1.0
    kind = "open"
    # open side over the closed grid {p_i} union {1}
    lo = np.searchsorted(p, p, side="left")  # points strictly below p_i
    for i in range(n):
        d = p[i] - lo[i] / n
        if d > best:
            best = d
            wit = float(p[i])
    d = 1.0 - np.searchsorted(p, 1.0, side="left") / n
    if d > best:
        best = d
        wit = 1.0
    # closed side over {p_i}
    hi = np.searchsorted(p, p, side="right")
    for i in range(n):
        d = hi[i] / n - p[i]
        if d > best:
            best = d
            wit = float(p[i])
            kind = "closed"
    return DiscrepancyResult(value=float(best), witness=(wit,), witness_kind=kind)


def star_discrepancy(ps: PointSet) -> DiscrepancyResult:
    """Dispatch to the fastest exact evaluator for the dimension of ``ps``."""
    if ps.dim == 1:
        return star_discrepancy_1d(ps)
    if ps.dim == 2:
        return star_discrepancy_2d(ps)
    return star_discrepancy_grid(ps)


# ---------------------------------------------------------------------------
# Point-set text format: first line "d n", then n lines of d coordinates.
# Lines starting with '#' are comments.

def write_point_file(ps: PointSet, path) -> None:
    with open(path, "w") as fh:
        fh.write(f"{ps.dim} {ps.n}\n")
        for row in ps.coords:
            fh.write(" ".join(f"{c:.17g}" for c in row) + "\n")


def read_point_file(path) -> PointSet:
    with open(path) as fh:
        lines = [ln.strip() for ln in fh if ln.strip() and not ln.startswith("#")]
    if not lines:
        raise ValueError(f"{path}: empty point file")
    header = lines[0].split()
    if len(header) != 2:
        raise ValueError(f"{path}: malformed header {lines[0]!r}")
    d, n = int(header[0]), int(header[1])
    if len(lines) - 1 != n:
        raise ValueError(f"{path}: expected {n} points, found {len(lines) - 1}")
    rows = []
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != d:
            raise ValueError(f"{path}: expected {d} coordinates, got {ln!r}")
        rows.append([float(x) for x in parts])
    return PointSet(np.array(rows, dtype=np.float64).reshape(n, d))
