import io
import itertools

import numpy as np
import pytest

from stardisc.geometry import PointSet, star_discrepancy
from stardisc.milp import (
    MilpSolution,
    ModelSizeError,
    build_model,
    grid_corner,
    index_sets,
    min_feasible_z,
    read_lp,
    read_solution_file,
    verify_solution,
    write_lp,
)

EX1 = PointSet([[0.1, 0.4], [0.2, 0.9], [0.7, 0.6], [0.8, 0.7]])
FIVE_1D = PointSet([[1 / 6], [1 / 4], [1 / 2], [3 / 4], [5 / 6]])


def rand_ps(seed, n, d):
    rng = np.random.Generator(np.random.PCG64(seed))
    return PointSet(rng.random((n, d)))


class TestGridCorner:
    def test_one_based_indexing(self):
        corner, h = grid_corner(EX1, (1, 1))
        assert corner == (0.1, 0.4)
        assert h == pytest.approx(0.04)

    def test_index_n_plus_one_is_one(self):
        corner, h = grid_corner(EX1, (5, 5))
        assert corner == (1.0, 1.0)
        assert h == 1.0

    def test_out_of_range(self):
        with pytest.raises(IndexError):
            grid_corner(EX1, (0, 1))
        with pytest.raises(IndexError):
            grid_corner(EX1, (6, 1))


class TestIndexSets:
    def test_strict_vs_weak(self):
        strict, weak = index_sets(EX1, (0.7, 0.6))
        assert strict == [0]
        assert weak == [0, 2]

    def test_corner_one(self):
        strict, weak = index_sets(EX1, (1.0, 1.0))
        assert strict == [0, 1, 2, 3]
        assert weak == [0, 1, 2, 3]


class TestBuildModel:
    def test_row_count_formula(self):
        for seed, n, d in ((0, 5, 1), (1, 4, 2), (2, 3, 3)):
            ps = rand_ps(seed, n, d)
            model = build_model(ps, 2)
            assert len(model.rows) == (n + 1) ** d + n ** d + 1

    def test_refuses_high_dimension(self):
        with pytest.raises(ModelSizeError):
            build_model(rand_ps(0, 4, 4), 2)

    def test_m_exceeds_n(self):
        with pytest.raises(ValueError):
            build_model(EX1, 5)

    def test_corner_one_row(self):
        # the (1,...,1) open-side row reads z >= 1 - (1/m) sum x over all
        # strictly interior points
        model = build_model(EX1, 2)
        row = next(r for r in model.rows
                   if model.grid_meta.get(r.name, {}).get("h") == 1.0
                   and model.grid_meta[r.name]["side"] == "open")
        assert row.rhs == 1.0
        xvars = [v for v, _ in row.terms if v != "z"]
        assert sorted(xvars) == ["x1", "x2", "x3", "x4"]
        assert all(c == 0.5 for v, c in row.terms if v != "z")

    def test_cardinality_row(self):
        model = build_model(EX1, 3)
        card = model.rows[-1]
        assert card.sense == "=" and card.rhs == 3.0
        assert len(card.terms) == 4


class TestSemantics:
    @pytest.mark.parametrize("seed,n,d", [(3, 6, 1), (4, 5, 2), (5, 8, 2), (6, 4, 3)])
    def test_min_feasible_z_equals_discrepancy(self, seed, n, d):
        ps = rand_ps(seed, n, d)
        for m in range(1, n + 1):
            model = build_model(ps, m)
            for combo in itertools.combinations(range(n), m):
                x = [1 if i in combo else 0 for i in range(n)]
                z = min_feasible_z(model, x)
                d_star = star_discrepancy(ps.subset(combo)).value
                assert z == d_star  # exact, no tolerance

    def test_model_optimum_matches_brute_force(self):
        from stardisc.solver import brute_force_subset
        ps = rand_ps(7, 7, 2)
        m = 3
        model = build_model(ps, m)
        best = min(
            min_feasible_z(model, [1 if i in c else 0 for i in range(7)])
            for c in itertools.combinations(range(7), m))
        assert best == brute_force_subset(ps, m).value


class TestLpFile:
    def test_layout(self):
        model = build_model(EX1, 2)
        buf = io.StringIO()
        write_lp(model, buf)
        text = buf.getvalue()
        assert text.startswith("Minimize\n obj: z\nSubject To\n")
        assert "Bounds\n z >= 0\n" in text
        assert "Binaries\n x1 x2 x3 x4\n" in text
        assert text.endswith("End\n")

    def test_byte_stable(self):
        a, b = io.StringIO(), io.StringIO()
        write_lp(build_model(EX1, 2), a)
        write_lp(build_model(EX1, 2), b)
        assert a.getvalue() == b.getvalue()

    def test_round_trip(self):
        model = build_model(FIVE_1D, 3)
        buf = io.StringIO()
        write_lp(model, buf)
        rows, binaries = read_lp(io.StringIO(buf.getvalue()))
        assert binaries == [f"x{i}" for i in range(1, 6)]
        assert len(rows) == len(model.rows)
        for got, want in zip(rows, model.rows):
            assert got.name == want.name
            assert got.sense == want.sense
            assert got.rhs == want.rhs
            assert got.terms == want.terms

    def test_file_output(self, tmp_path):
        path = tmp_path / "model.lp"
        write_lp(build_model(EX1, 2), path)
        rows, _ = read_lp(path)
        assert rows[-1].sense == "="


class TestSolutionVerification:
    def test_hand_built_1d_optimum(self):
        # brute-force optimum for m=3 is {1/6, 1/2, 5/6} with value 1/6
        sol = MilpSolution(objective=1 / 6, x=(1, 0, 1, 0, 1))
        report = verify_solution(FIVE_1D, 3, sol)
        assert report.ok
        assert abs(report.objective - 1 / 6) <= 1e-12

    def test_all_ones_m_equals_n(self):
        val = star_discrepancy(EX1).value
        sol = MilpSolution(objective=val, x=(1, 1, 1, 1))
        report = verify_solution(EX1, 4, sol)
        assert report.ok and report.recomputed == val

    def test_wrong_objective_flagged(self):
        sol = MilpSolution(objective=0.5, x=(1, 0, 1, 0, 1))
        report = verify_solution(FIVE_1D, 3, sol)
        assert not report.ok

    def test_cardinality_violation(self):
        sol = MilpSolution(objective=0.2, x=(1, 1, 0, 0, 0))
        with pytest.raises(ValueError):
            verify_solution(FIVE_1D, 3, sol)

    def test_integrality_gap(self):
        sol = MilpSolution(objective=0.25, x=(0, 1, 0, 1, 0))
        report = verify_solution(FIVE_1D, 2, sol, relaxation_objective=0.25)
        assert report.integrality_gap == pytest.approx(1.0)

    def test_read_solution_file(self, tmp_path):
        path = tmp_path / "sol.txt"
        path.write_text("# solver output\nobjective 0.25\nstatus optimal\n"
                        "z 0.25\nx2 1\nx4 1.0\nx1 0\nx3 0\nx5 0\n")
        sol = read_solution_file(path)
        assert sol.objective == 0.25
        assert sol.x == (0, 1, 0, 1, 0)
        assert sol.solver_status == "optimal"

    def test_solution_file_requires_objective(self, tmp_path):
        path = tmp_path / "sol.txt"
        path.write_text("x1 1\n")
        with pytest.raises(ValueError):
            read_solution_file(path)
