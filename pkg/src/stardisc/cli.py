"""Command-line harness: generate point sets, evaluate discrepancies, run
subset-selection solvers, export MILP models, and sweep experiments to CSV.

Exit codes: 0 success, 2 usage error, 3 input error, 4 resource cap exceeded.
"""

from __future__ import annotations

import csv
import json
import sys

import click

from .generators import GENERATOR_KINDS, GeneratorSpec, InvalidSpecError, generate
from .geometry import (
    DimensionMismatchError,
    star_discrepancy,
    star_discrepancy_1d,
    star_discrepancy_2d,
    star_discrepancy_grid,
    read_point_file,
    write_point_file,
)
from .milp import ModelSizeError, build_model, write_lp
from .solver import (
    CapExceededError,
    bb_subset,
    brute_force_subset,
    greedy_subset,
    random_subset_search,
)

EXIT_INPUT = 3
EXIT_CAP = 4

CSV_HEADER = ["generator", "seed", "d", "n", "m", "solver", "value",
              "status", "nodes", "wall_ms"]


def _fail(code: int, message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def parse_duration(text: str) -> float:
    """Seconds from '90', '90s', '1500ms', or '2m'."""
    text = text.strip()
    try:
        if text.endswith("ms"):
            return float(text[:-2]) / 1e3
        if text.endswith("s"):
            return float(text[:-1])
        if text.endswith("m"):
            return float(text[:-1]) * 60.0
        return float(text)
    except ValueError:
        raise click.BadParameter(f"cannot parse duration {text!r}")


def _load_points(path):
    try:
        return read_point_file(path)
    except (OSError, ValueError) as exc:
        _fail(EXIT_INPUT, str(exc))


def _record(generator, seed, ps, m, solver, sel):
    return {
        "generator": generator,
        "seed": seed,
        "d": ps.dim,
        "n": ps.n,
        "m": m,
        "solver": solver,
        "value": sel.value,
        "status": sel.status,
        "nodes": sel.stats.get("nodes", sel.stats.get("evals", 0)),
        "wall_ms": sel.stats.get("wall_ms", 0.0),
        "chosen": list(sel.chosen),
    }


def _csv_row(rec):
    return [rec["generator"], "" if rec["seed"] is None else rec["seed"],
            rec["d"], rec["n"], rec["m"], rec["solver"],
            f"{rec['value']:.4f}", rec["status"], rec["nodes"],
            f"{rec['wall_ms']:.1f}"]


@click.group()
def main():
    """Star-discrepancy toolkit: generators, evaluators, subset solvers."""


@main.command()
@click.option("--kind", required=True, type=click.Choice(GENERATOR_KINDS))
@click.option("--n", "count", required=True, type=int)
@click.option("--d", "dim", type=int, default=2, show_default=True)
@click.option("--seed", type=int, default=None)
@click.option("--out", type=click.Path(dir_okay=False), default=None,
              help="Output point file (default: stdout).")
def gen(kind, count, dim, seed, out):
    """Generate a point set and write it in the point-file format."""
    try:
        ps = generate(GeneratorSpec(kind=kind, dim=dim, count=count, seed=seed))
    except InvalidSpecError as exc:
        _fail(EXIT_INPUT, str(exc))
    if out is None:
        click.echo(f"{ps.dim} {ps.n}")
        for row in ps.coords:
            click.echo(" ".join(f"{c:.17g}" for c in row))
    else:
        write_point_file(ps, out)


@main.command()
@click.option("--in", "path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--method", type=click.Choice(["auto", "grid", "sweep2d", "nied1d"]),
              default="auto", show_default=True)
def disc(path, method):
    """Exact star discrepancy of a point file."""
    ps = _load_points(path)
    try:
        if method == "grid":
            res = star_discrepancy_grid(ps)
        elif method == "sweep2d":
            res = star_discrepancy_2d(ps)
        elif method == "nied1d":
            res = star_discrepancy_1d(ps)
        else:
            res = star_discrepancy(ps)
    except DimensionMismatchError as exc:
        _fail(EXIT_INPUT, str(exc))
    wit = ",".join(f"{c:g}" for c in res.witness)
    click.echo(f"{res.value:g} witness=({wit}) kind={res.witness_kind}")


def _run_solver(ps, m, solver, time_limit, seed, budget, node_cap):
    if m > ps.n:
        _fail(EXIT_INPUT, f"m={m} exceeds n={ps.n}")
    try:
        if solver == "bb":
            return bb_subset(ps, m, time_limit=time_limit, node_cap=node_cap)
        if solver == "greedy":
            return greedy_subset(ps, m)
        if solver == "random":
            return random_subset_search(ps, m, budget=budget,
                                        seed=0 if seed is None else seed,
                                        time_limit=time_limit)
        if solver == "brute":
            return brute_force_subset(ps, m)
    except CapExceededError as exc:
        _fail(EXIT_CAP, str(exc))
    raise click.UsageError(f"unknown solver {solver!r}")


@main.command()
@click.option("--in", "path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--m", "m", required=True, type=int)
@click.option("--solver", type=click.Choice(["bb", "greedy", "random", "brute"]),
              default="bb", show_default=True)
@click.option("--time-limit", default="60s", show_default=True)
@click.option("--seed", type=int, default=None)
@click.option("--budget", type=int, default=1000, show_default=True,
              help="Evaluation budget for the random solver.")
@click.option("--node-cap", type=int, default=None)
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]),
              default="json", show_default=True)
def subset(path, m, solver, time_limit, seed, budget, node_cap, fmt):
    """Select the m-point subset minimizing the star discrepancy."""
    ps = _load_points(path)
    limit = parse_duration(time_limit)
    sel = _run_solver(ps.normalize_order(), m, solver, limit, seed, budget, node_cap)
    rec = _record("file", seed, ps, m, solver, sel)
    if fmt == "json":
        click.echo(json.dumps(rec))
    else:
        writer = csv.writer(sys.stdout)
        writer.writerow(CSV_HEADER)
        writer.writerow(_csv_row(rec))


@main.command("lp-export")
@click.option("--in", "path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--m", "m", required=True, type=int)
@click.option("--out", required=True, type=click.Path(dir_okay=False))
def lp_export(path, m, out):
    """Write the subset-selection MILP in LP format."""
    ps = _load_points(path)
    try:
        model = build_model(ps, m)
    except ModelSizeError as exc:
        _fail(EXIT_CAP, str(exc))
    except ValueError as exc:
        _fail(EXIT_INPUT, str(exc))
    write_lp(model, out)
    click.echo(f"wrote {len(model.rows)} rows to {out}")


@main.command()
@click.option("--gens", required=True,
              help="Comma-separated generator kinds.")
@click.option("--d", "dim", type=int, default=2, show_default=True)
@click.option("--m", "ms", type=int, multiple=True, required=True)
@click.option("--nmax", type=int, required=True)
@click.option("--solvers", default="greedy,random,bb", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True,
              help="Seed for random generators and the random solver.")
@click.option("--time-limit", default="60s", show_default=True)
@click.option("--budget", type=int, default=1000, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None,
              help="CSV output path (default: stdout).")
def experiment(gens, dim, ms, nmax, solvers, seed, time_limit, budget, out):
    """Sweep (generator, m, n, solver) grids; one CSV row per combination.

    For each m the instance sizes are n = m+20, m+40, ... up to --nmax.
    """
    gen_list = [g for g in gens.split(",") if g]
    solver_list = [s for s in solvers.split(",") if s]
    for g in gen_list:
        if g not in GENERATOR_KINDS:
            raise click.UsageError(f"unknown generator {g!r}")
    for s in solver_list:
        if s not in ("bb", "greedy", "random", "brute"):
            raise click.UsageError(f"unknown solver {s!r}")
    limit = parse_duration(time_limit)
    sink = open(out, "w", newline="") if out else sys.stdout
    try:
        writer = csv.writer(sink)
        writer.writerow(CSV_HEADER)
        for g in gen_list:
            needs_seed = g in ("uniform", "ilhs")
            for m in sorted(ms):
                for n in range(m + 20, nmax + 1, 20):
                    spec = GeneratorSpec(kind=g, dim=dim, count=n,
                                         seed=seed if needs_seed else None)
                    try:
                        ps = generate(spec).normalize_order()
                    except InvalidSpecError as exc:
                        _fail(EXIT_INPUT, str(exc))
                    for s in solver_list:
                        sel = _run_solver(ps, m, s, limit, seed, budget, None)
                        rec = _record(g, spec.seed, ps, m, s, sel)
                        writer.writerow(_csv_row(rec))
                        sink.flush()
    finally:
        if out:
            sink.close()


if __name__ == "__main__":
    main()
