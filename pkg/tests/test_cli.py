from __future__ import annotations

import json
import math
import subprocess
import sys

import pytest

from fpdms.cli import main
from fpdms.families import read_sweep_csv


def run(argv, capsys):
    try:
        code = main(argv)
    except SystemExit as exc:  # argparse usage errors
        code = exc.code
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def equilateral(write_json):
    d = math.log(2)
    return write_json("eq.json", {"n": 3, "d": [[0, d, d], [d, 0, d], [d, d, 0]]})


class TestMagnitude:
    def test_equilateral_json(self, equilateral, capsys):
        code, out, _ = run(["magnitude", equilateral, "--format", "json"], capsys)
        assert code == 0
        rep = json.loads(out)
        for v in rep["magnitude"].values():
            assert v == pytest.approx(1.5, abs=1e-12)
        assert rep["agree"]

    def test_random(self, capsys):
        code, out, _ = run(["magnitude", "--random", "6", "--seed", "3", "--format", "csv"], capsys)
        assert code == 0
        assert out.splitlines()[0] == "route,value" and len(out.splitlines()) == 4

    def test_point_config(self, write_json, capsys):
        p = write_json("y.json", {"dim": 2, "points": [[0, 0], [1, 0]]})
        code, out, _ = run(["magnitude", p, "--format", "json"], capsys)
        assert code == 0
        assert json.loads(out)["magnitude"]["circumradius"] == pytest.approx(4 / 3)

    def test_right_triangle_invalid(self, write_json, capsys):
        p = write_json("r.json", {"dim": 2, "points": [[0, 0], [1, 0], [0, 1]]})
        assert run(["magnitude", p], capsys)[0] == 3

    def test_not_a_metric(self, write_json, capsys):
        p = write_json("m.json", {"n": 3, "d": [[0, 1, 3], [1, 0, 1], [3, 1, 0]]})
        assert run(["magnitude", p], capsys)[0] == 3

    def test_not_pd(self, write_json, capsys):
        k = [[0, 2, 2, 1, 1], [2, 0, 2, 1, 1], [2, 2, 0, 1, 1], [1, 1, 1, 0, 2], [1, 1, 1, 2, 0]]
        p = write_json("k.json", {"n": 5, "d": [[0.01 * x for x in row] for row in k]})
        code, _, err = run(["magnitude", p], capsys)
        assert code == 3 and "NotPositiveDefinite" in err

    @pytest.mark.parametrize("content", ["{", '{"n": 1}', '{"n": 1, "d": [[NaN]]}'])
    def test_malformed(self, tmp_path, content, capsys):
        p = tmp_path / "bad.json"
        p.write_text(content)
        assert run(["magnitude", str(p)], capsys)[0] == 2

    def test_missing_file(self, tmp_path, capsys):
        assert run(["magnitude", str(tmp_path / "nope.json")], capsys)[0] == 2

    def test_tight_tolerance_disagrees(self, capsys):
        code, out, _ = run(["magnitude", "--random", "8", "--tol", "1e-300"], capsys)
        assert code == 4 and "DISAGREE" in out

    def test_out_file(self, equilateral, tmp_path, capsys):
        target = tmp_path / "rep.json"
        code, out, _ = run(["magnitude", equilateral, "--format", "json", "--out", str(target)], capsys)
        assert code == 0 and out == ""
        assert json.loads(target.read_text())["n"] == 3

    def test_deterministic_bytes(self, capsys):
        a = run(["magnitude", "--random", "5", "--seed", "9", "--format", "json"], capsys)[1]
        b = run(["magnitude", "--random", "5", "--seed", "9", "--format", "json"], capsys)[1]
        assert a == b


class TestGH:
    def test_singleton_vs_pair(self, write_json, capsys):
        a = write_json("a.json", {"n": 1, "d": [[0]]})
        b = write_json("b.json", {"n": 2, "d": [[0, 2], [2, 0]]})
        code, out, _ = run(["gh", "--a", a, "--b", b, "--format", "json"], capsys)
        assert code == 0 and json.loads(out)["gh_distance"] == 1.0

    def test_budget(self, write_json, capsys):
        n = 7
        d = [[abs(i - j) for j in range(n)] for i in range(n)]
        a = write_json("a.json", {"n": n, "d": d})
        assert run(["gh", "--a", a, "--b", a], capsys)[0] == 5
        assert run(["gh", "--a", a, "--b", a, "--max-size", "7"], capsys)[0] == 0


class TestSweep:
    def test_csv_reparses(self, capsys):
        code, out, _ = run(["sweep", "--family", "T30", "--t-grid", "4:8", "--format", "csv"], capsys)
        assert code == 0
        rows = read_sweep_csv(out)
        assert [r["t"] for r in rows] == [2.0**-j for j in range(4, 9)]

    def test_text_summary(self, capsys):
        code, out, _ = run(["sweep", "--family", "T21", "--t-grid", "0.1,0.01"], capsys)
        assert code == 0
        assert out.splitlines()[-1].startswith("# T21 limit")

    def test_json_limit(self, capsys):
        code, out, _ = run(["sweep", "--family", "T4", "--variant", "repaired", "--t-grid", "4:6", "--format", "json"], capsys)
        assert code == 0
        assert json.loads(out)["summary"]["limit_solver_extrapolated"] == pytest.approx(7 / 9, abs=1e-6)

    def test_cos_s(self, capsys):
        code, out, _ = run(["sweep", "--family", "T30", "--cos-s", "0.15", "--t-grid", "5:6", "--format", "json"], capsys)
        assert code == 0 and json.loads(out)["summary"]["cos_s"] == pytest.approx(0.15)

    def test_empty_grid(self, capsys):
        assert run(["sweep", "--family", "T21", "--t-grid", ""], capsys)[0] == 1

    def test_increasing_grid(self, capsys):
        assert run(["sweep", "--family", "T21", "--t-grid", "0.01,0.1"], capsys)[0] == 1

    def test_constraint(self, capsys):
        assert run(["sweep", "--family", "T4", "--s", "2"], capsys)[0] == 6
        assert run(["sweep", "--family", "T30", "--rho", "0.9"], capsys)[0] == 6

    def test_cos_s_outside_range(self, capsys):
        assert run(["sweep", "--family", "T30", "--cos-s", "0.3"], capsys)[0] == 6

    def test_unknown_family(self, capsys):
        assert run(["sweep", "--family", "T9"], capsys)[0] == 1

    def test_byte_identical_reruns(self, capsys):
        argv = ["sweep", "--family", "T111", "--preset", "certified", "--t-grid", "4:9", "--format", "csv"]
        assert run(argv, capsys)[1] == run(argv, capsys)[1]


class TestAudit:
    def test_t30_json(self, capsys):
        code, out, _ = run(["audit", "--family", "T30", "--format", "json"], capsys)
        assert code == 0
        rep = json.loads(out)
        assert not rep["expansions_ok"]
        assert rep["closed_form"]["verdict"] == "leading-order-match"

    def test_t4_text(self, capsys):
        code, out, _ = run(["audit", "--family", "T4"], capsys)
        assert code == 0 and "mismatch" in out

    def test_csv(self, capsys):
        code, out, _ = run(["audit", "--family", "T21", "--preset", "certified", "--format", "csv"], capsys)
        assert code == 0 and out.startswith("kind,item,printed,computed,error,status")


class TestCluster:
    def test_epsilon(self, write_json, capsys):
        p = write_json("x.json", {"n": 3, "d": [[0, 0.01, 1], [0.01, 0, 0.99], [1, 0.99, 0]]})
        code, out, _ = run(["cluster", p, "--epsilon", "0.1", "--format", "json"], capsys)
        assert code == 0 and json.loads(out)["cluster_type"] == [1, 0]

    def test_not_clustered(self, write_json, capsys):
        p = write_json("x.json", {"n": 3, "d": [[0, 0.08, 0.16], [0.08, 0, 0.08], [0.16, 0.08, 0]]})
        assert run(["cluster", p, "--epsilon", "0.1"], capsys)[0] == 8

    def test_needs_epsilon(self, write_json, capsys):
        p = write_json("x.json", {"n": 1, "d": [[0]]})
        assert run(["cluster", p], capsys)[0] == 1


def test_no_command(capsys):
    assert run([], capsys)[0] == 1


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "fpdms.cli", "magnitude", "--random", "3"], capture_output=True, text=True)
    assert res.returncode == 0 and "routes agree" in res.stdout
