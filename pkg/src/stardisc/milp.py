"""Mixed-integer model for the subset-selection problem, LP-file export,
and verification of external solver output.

One binary variable x_i per point (1 if selected), one continuous z that the
constraints force to be at least the star discrepancy of the selection:

    min z
    z + (1/m) * sum_{l in Delta(corner)}    x_l >= h(corner)   closed-grid corners
    z - (1/m) * sum_{l in Delta_bar(corner)} x_l >= -h(corner)  open-grid corners
    sum x_i = m

where h is the volume of the anchored box at the corner, Delta the strictly
dominated point indices and Delta_bar the weakly dominated ones.  Using the
full grid of P (rather than the grid of the selected subset) is lossless:
rounding any corner to the subset grid can only increase the deviation.

Solving is delegated to an external MILP solver fed with the exported LP
file; ``read_solution_file`` and ``verify_solution`` close the loop.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .geometry import PointSet, star_discrepancy, volume

__all__ = [
    "MilpModel",
    "MilpSolution",
    "VerificationReport",
    "grid_corner",
    "index_sets",
    "build_model",
    "write_lp",
    "read_lp",
    "read_solution_file",
    "verify_solution",
    "min_feasible_z",
]


class ModelSizeError(ValueError):
    """Model construction refused (dimension too large)."""


@dataclass(frozen=True)
class Row:
    name: str
    sense: str            # ">=" or "="
    rhs: float
    terms: tuple          # ((var_name, coeff), ...)


@dataclass(frozen=True)
class MilpModel:
    n: int
    m: int
    d: int
    rows: tuple           # of Row
    grid_meta: dict       # row name -> {"corner": index tuple, "h": float, "side": ...}


@dataclass(frozen=True)
class MilpSolution:
    objective: float
    x: tuple              # 0/1 per point, length n
    solver_status: str = "unknown"   # "optimal" | "feasible" | "unknown"


@dataclass(frozen=True)
class VerificationReport:
    objective: float
    recomputed: float
    abs_error: float
    ok: bool
    chosen: tuple
    integrality_gap: float | None = None


def _sorted_axes(ps: PointSet) -> list[np.ndarray]:
    return [np.sort(ps.coords[:, j]) for j in range(ps.dim)]


def grid_corner(ps: PointSet, index):
    """Grid point of the closed grid at a 1-based index tuple, and its box
    volume.  Index n+1 on an axis selects the coordinate 1.0."""
    axes = _sorted_axes(ps)
    n, d = ps.n, ps.dim
    index = tuple(index)
    if len(index) != d:
        raise ValueError(f"index tuple must have {d} entries")
    coords = []
    for j, i in enumerate(index):
        if not 1 <= i <= n + 1:
            raise IndexError(f"axis {j}: index {i} out of range [1..{n + 1}]")
        coords.append(1.0 if i == n + 1 else float(axes[j][i - 1]))
    return tuple(coords), volume(coords)


def index_sets(ps: PointSet, corner):
    """Point indices strictly / weakly dominated by the corner (0-based)."""
    q = np.asarray(corner, dtype=np.float64)
    strict = np.nonzero(np.all(ps.coords < q, axis=1))[0]
    weak = np.nonzero(np.all(ps.coords <= q, axis=1))[0]
    return [int(i) for i in strict], [int(i) for i in weak]


def build_model(ps: PointSet, m: int) -> MilpModel:
    """Rows for every closed-grid corner (open-box side), every open-grid
    corner (closed-box side), and the cardinality constraint:
    (n+1)^d + n^d + 1 rows in total."""
    n, d = ps.n, ps.dim
    if d >= 4:
        raise ModelSizeError(
            f"refusing d={d}: the model has (n+1)^d rows and its memory "
            "footprint grows too fast beyond three dimensions")
    if m > n:
        raise ValueError(f"m={m} exceeds n={n}")
    axes = _sorted_axes(ps)
    inv = 1.0 / m
    rows = []
    grid_meta = {}
    k = 0
    seen = set()
    for index in itertools.product(range(1, n + 2), repeat=d):
        corner = tuple(
            1.0 if i == n + 1 else float(axes[j][i - 1])
            for j, i in enumerate(index))
        if corner in seen:     # duplicate coordinates collapse to one row
            continue
        seen.add(corner)
        h = volume(corner)
        strict, _ = index_sets(ps, corner)
        k += 1
        name = f"c{k}"
        terms = (("z", 1.0),) + tuple((f"x{l + 1}", inv) for l in strict)
        rows.append(Row(name=name, sense=">=", rhs=h, terms=terms))
        grid_meta[name] = {"corner": index, "h": h, "side": "open"}
    seen = set()
    for index in itertools.product(range(1, n + 1), repeat=d):
        corner = tuple(float(axes[j][i - 1]) for j, i in enumerate(index))
        if corner in seen:
            continue
        seen.add(corner)
        h = volume(corner)
        _, weak = index_sets(ps, corner)
        k += 1
        name = f"c{k}"
        terms = (("z", 1.0),) + tuple((f"x{l + 1}", -inv) for l in weak)
        rows.append(Row(name=name, sense=">=", rhs=-h, terms=terms))
        grid_meta[name] = {"corner": index, "h": h, "side": "closed"}
    k += 1
    card = Row(name=f"c{k}", sense="=", rhs=float(m),
               terms=tuple((f"x{i + 1}", 1.0) for i in range(n)))
    rows.append(card)
    return MilpModel(n=n, m=m, d=d, rows=tuple(rows), grid_meta=grid_meta)


def _fmt(c: float) -> str:
    return f"{c:.17g}"


def write_lp(model: MilpModel, sink) -> None:
    """CPLEX-LP-dialect text; byte-stable for identical models.

    ``sink`` is a writable text file object or a path.
    """
    if hasattr(sink, "write"):
        _write_lp(model, sink)
    else:
        with open(sink, "w") as fh:
            _write_lp(model, fh)


def _write_lp(model: MilpModel, fh) -> None:
    fh.write("Minimize\n obj: z\n")
    fh.write("Subject To\n")
    for row in model.rows:
        parts = []
        for var, coeff in row.terms:
            if not parts:
                parts.append(f"{_fmt(coeff)} {var}" if coeff != 1.0 else var)
            elif coeff < 0:
                parts.append(f"- {_fmt(-coeff)} {var}")
            else:
                parts.append(f"+ {var}" if coeff == 1.0 else f"+ {_fmt(coeff)} {var}")
        fh.write(f" {row.name}: {' '.join(parts)} {row.sense} {_fmt(row.rhs)}\n")
    fh.write("Bounds\n z >= 0\n")
    fh.write("Binaries\n")
    fh.write(" " + " ".join(f"x{i + 1}" for i in range(model.n)) + "\n")
    fh.write("End\n")


def read_lp(source):
    """Round-trip reader for the dialect emitted by ``write_lp``.

    Returns (rows, binaries); used to check export fidelity.
    """
    if hasattr(source, "read"):
        text = source.read()
    else:
        with open(source) as fh:
            text = fh.read()
    lines = [ln.rstrip() for ln in text.splitlines()]
    rows = []
    binaries = []
    section = None
    for ln in lines:
        stripped = ln.strip()
        if stripped in ("Minimize", "Subject To", "Bounds", "Binaries", "End"):
            section = stripped
            continue
        if section == "Subject To":
            name, body = stripped.split(":", 1)
            for sense in (">=", "<=", "="):
                if f" {sense} " in body:
                    lhs, rhs = body.rsplit(f" {sense} ", 1)
                    break
            terms = []
            sign = 1.0
            pending_coeff = None
            for tok in lhs.split():
                if tok == "+":
                    sign = 1.0
                elif tok == "-":
                    sign = -1.0
                else:
                    try:
                        pending = float(tok)
                    except ValueError:
                        coeff = sign if pending_coeff is None else sign * pending_coeff
                        terms.append((tok, coeff))
                        sign = 1.0
                        pending_coeff = None
                    else:
                        pending_coeff = pending
            rows.append(Row(name=name.strip(), sense=sense, rhs=float(rhs),
                            terms=tuple(terms)))
        elif section == "Binaries" and stripped:
            binaries.extend(stripped.split())
    return rows, binaries


def read_solution_file(source) -> MilpSolution:
    """Parse the generic solution format: ``<var> <value>`` lines plus an
    ``objective <value>`` line; missing variables default to 0."""
    if hasattr(source, "read"):
        lines = source.read().splitlines()
    else:
        with open(source) as fh:
            lines = fh.read().splitlines()
    objective = None
    values = {}
    status = "unknown"
    for ln in lines:
        parts = ln.split()
        if not parts or parts[0].startswith("#"):
            continue
        if parts[0] == "objective":
            objective = float(parts[1])
        elif parts[0] == "status":
            status = parts[1]
        else:
            values[parts[0]] = float(parts[1])
    if objective is None:
        raise ValueError("solution file lacks an 'objective' line")
    indices = [int(k[1:]) for k in values if k[0] == "x" and k[1:].isdigit()]
    top = max(indices, default=0)
    xs = tuple(int(round(values.get(f"x{i}", 0.0))) for i in range(1, top + 1))
    return MilpSolution(objective=objective, x=xs, solver_status=status)


def min_feasible_z(model: MilpModel, x) -> float:
    """Smallest z satisfying all rows for a fixed 0/1 assignment.

    Each discrepancy row bounds z from below by h - (count in Delta)/m or
    (count in Delta_bar)/m - h; the counts are divided by m directly so the
    result is bit-identical to the geometric evaluation of the subset.
    """
    x = tuple(int(v) for v in x)
    best = 0.0
    m = model.m
    for row in model.rows:
        if row.sense == "=":
            continue
        cnt = sum(x[int(var[1:]) - 1] for var, _ in row.terms if var != "z")
        meta = model.grid_meta[row.name]
        if meta["side"] == "open":
            z = meta["h"] - cnt / m
        else:
            z = cnt / m - meta["h"]
        if z > best:
            best = z
    return best


def verify_solution(ps: PointSet, m: int, sol: MilpSolution,
                    tolerance: float = 1e-6,
                    relaxation_objective: float | None = None) -> VerificationReport:
    """Recompute the discrepancy of the selected subset and compare with the
    solver objective; optionally report the integrality gap against a given
    LP-relaxation objective."""
    if len(sol.x) > ps.n:
        raise ValueError(f"solution has {len(sol.x)} variables, expected {ps.n}")
    x = sol.x + (0,) * (ps.n - len(sol.x))   # omitted variables are 0
    chosen = tuple(i for i, v in enumerate(x) if v)
    if len(chosen) != m:
        raise ValueError(f"solution selects {len(chosen)} points, expected {m}")
    recomputed = star_discrepancy(ps.subset(chosen)).value
    err = abs(sol.objective - recomputed)
    gap = None
    if relaxation_objective is not None and relaxation_objective > 0:
        gap = sol.objective / relaxation_objective
    return VerificationReport(objective=sol.objective, recomputed=recomputed,
                              abs_error=err, ok=err <= tolerance,
                              chosen=chosen, integrality_gap=gap)
