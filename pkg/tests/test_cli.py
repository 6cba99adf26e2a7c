import csv
import io
import json

import numpy as np
import pytest
from click.testing import CliRunner

from stardisc.cli import main, parse_duration
from stardisc.geometry import PointSet, read_point_file, write_point_file

EX1 = PointSet([[0.1, 0.4], [0.2, 0.9], [0.7, 0.6], [0.8, 0.7]])

CSV_HEADER = "generator,seed,d,n,m,solver,value,status,nodes,wall_ms"


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def ex1_file(tmp_path):
    path = tmp_path / "ex1.txt"
    write_point_file(EX1, path)
    return str(path)


class TestParseDuration:
    def test_units(self):
        assert parse_duration("90") == 90.0
        assert parse_duration("90s") == 90.0
        assert parse_duration("1500ms") == 1.5
        assert parse_duration("2m") == 120.0

    def test_bad(self):
        import click
        with pytest.raises(click.BadParameter):
            parse_duration("soon")


class TestGen:
    def test_fibonacci_file(self, runner, tmp_path):
        out = tmp_path / "f40.txt"
        res = runner.invoke(main, ["gen", "--kind", "fibonacci", "--n", "40",
                                   "--out", str(out)])
        assert res.exit_code == 0
        ps = read_point_file(out)
        assert ps.n == 40 and ps.dim == 2

    def test_uniform_reproducible(self, runner, tmp_path):
        a, b = tmp_path / "a.txt", tmp_path / "b.txt"
        for path in (a, b):
            res = runner.invoke(main, ["gen", "--kind", "uniform", "--d", "2",
                                       "--n", "100", "--seed", "7",
                                       "--out", str(path)])
            assert res.exit_code == 0
        assert a.read_text() == b.read_text()

    def test_halton_stdout_shape(self, runner):
        res = runner.invoke(main, ["gen", "--kind", "halton", "--d", "3",
                                   "--n", "10"])
        assert res.exit_code == 0
        lines = res.output.strip().splitlines()
        assert lines[0] == "3 10"
        assert len(lines) == 11
        assert all(len(ln.split()) == 3 for ln in lines[1:])

    def test_invalid_spec(self, runner):
        res = runner.invoke(main, ["gen", "--kind", "fibonacci", "--n", "10",
                                   "--d", "3"])
        assert res.exit_code == 3

    def test_missing_required_is_usage_error(self, runner):
        res = runner.invoke(main, ["gen", "--kind", "halton"])
        assert res.exit_code == 2


class TestDisc:
    def test_example_output(self, runner, ex1_file):
        res = runner.invoke(main, ["disc", "--in", ex1_file])
        assert res.exit_code == 0
        assert res.output.strip() == "0.4 witness=(1,0.4) kind=open"

    def test_single_point(self, runner, tmp_path):
        path = tmp_path / "p.txt"
        write_point_file(PointSet([[0.5, 0.5]]), path)
        res = runner.invoke(main, ["disc", "--in", str(path)])
        assert res.output.startswith("0.75 ")

    def test_method_mismatch(self, runner, tmp_path):
        path = tmp_path / "p3.txt"
        write_point_file(PointSet([[0.5, 0.5, 0.5]]), path)
        res = runner.invoke(main, ["disc", "--in", str(path),
                                   "--method", "sweep2d"])
        assert res.exit_code == 3
        assert "error" in res.output or "error" in (res.stderr or "")

    def test_malformed_file(self, runner, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("2 5\n0.1 0.2\n")
        res = runner.invoke(main, ["disc", "--in", str(path)])
        assert res.exit_code == 3


class TestSubset:
    def test_json_record(self, runner, ex1_file):
        res = runner.invoke(main, ["subset", "--in", ex1_file, "--m", "2",
                                   "--solver", "brute"])
        assert res.exit_code == 0
        rec = json.loads(res.output)
        assert rec["n"] == 4 and rec["m"] == 2
        assert rec["solver"] == "brute"
        assert rec["status"] == "optimal"
        assert len(rec["chosen"]) == 2

    def test_bb_equals_brute(self, runner, tmp_path):
        rng = np.random.Generator(np.random.PCG64(5))
        path = tmp_path / "r.txt"
        write_point_file(PointSet(rng.random((12, 2))), path)
        vals = {}
        for solver in ("bb", "brute"):
            res = runner.invoke(main, ["subset", "--in", str(path), "--m", "5",
                                       "--solver", solver])
            vals[solver] = json.loads(res.output)["value"]
        assert vals["bb"] == vals["brute"]

    def test_m_zero(self, runner, ex1_file):
        res = runner.invoke(main, ["subset", "--in", ex1_file, "--m", "0"])
        rec = json.loads(res.output)
        assert rec["value"] == 1.0 and rec["chosen"] == []

    def test_m_exceeds_n(self, runner, ex1_file):
        res = runner.invoke(main, ["subset", "--in", ex1_file, "--m", "9"])
        assert res.exit_code == 3

    def test_csv_format(self, runner, ex1_file):
        res = runner.invoke(main, ["subset", "--in", ex1_file, "--m", "2",
                                   "--solver", "greedy", "--format", "csv"])
        lines = res.output.strip().splitlines()
        assert lines[0] == CSV_HEADER
        row = lines[1].split(",")
        assert row[5] == "greedy"
        float(row[6])  # value parses

    def test_brute_cap_exit_code(self, runner, tmp_path):
        rng = np.random.Generator(np.random.PCG64(0))
        path = tmp_path / "big.txt"
        write_point_file(PointSet(rng.random((40, 2))), path)
        res = runner.invoke(main, ["subset", "--in", str(path), "--m", "20",
                                   "--solver", "brute"])
        assert res.exit_code == 4


class TestLpExport:
    def test_export(self, runner, ex1_file, tmp_path):
        out = tmp_path / "m.lp"
        res = runner.invoke(main, ["lp-export", "--in", ex1_file, "--m", "2",
                                   "--out", str(out)])
        assert res.exit_code == 0
        text = out.read_text()
        assert text.startswith("Minimize\n obj: z\n")
        # (n+1)^d + n^d + 1 rows for n=4, d=2
        assert "c42:" in text and "c43:" not in text

    def test_high_dim_refused(self, runner, tmp_path):
        path = tmp_path / "p4.txt"
        write_point_file(PointSet(np.full((3, 4), 0.5)), path)
        res = runner.invoke(main, ["lp-export", "--in", str(path), "--m", "2",
                                   "--out", str(tmp_path / "x.lp")])
        assert res.exit_code == 4


class TestExperiment:
    def test_header_only_when_no_rows(self, runner):
        res = runner.invoke(main, ["experiment", "--gens", "fibonacci",
                                   "--m", "20", "--nmax", "30",
                                   "--solvers", "greedy"])
        lines = res.output.strip().splitlines()
        assert lines == [CSV_HEADER]

    def test_sweep_rows(self, runner, tmp_path):
        out = tmp_path / "table.csv"
        res = runner.invoke(main, [
            "experiment", "--gens", "fibonacci", "--d", "2", "--m", "5",
            "--nmax", "45", "--solvers", "greedy,bb", "--out", str(out)])
        assert res.exit_code == 0
        with open(out) as fh:
            rows = list(csv.DictReader(fh))
        # n in {25, 45}, two solvers -> 4 rows
        assert len(rows) == 4
        assert [r["n"] for r in rows] == ["25", "25", "45", "45"]
        for r in rows:
            assert r["generator"] == "fibonacci"
            assert r["m"] == "5"

    def test_solver_dominance_in_output(self, runner):
        res = runner.invoke(main, [
            "experiment", "--gens", "halton", "--d", "2", "--m", "4",
            "--nmax", "24", "--solvers", "greedy,random,bb", "--seed", "1"])
        rows = list(csv.DictReader(io.StringIO(res.output)))
        by_solver = {r["solver"]: r for r in rows}
        assert by_solver["bb"]["status"] == "optimal"
        bb_val = float(by_solver["bb"]["value"])
        assert float(by_solver["greedy"]["value"]) >= bb_val - 1e-9
        assert float(by_solver["random"]["value"]) >= bb_val - 1e-9

    def test_unknown_generator(self, runner):
        res = runner.invoke(main, ["experiment", "--gens", "nope", "--m", "5",
                                   "--nmax", "30"])
        assert res.exit_code == 2
