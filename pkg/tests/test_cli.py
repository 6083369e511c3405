import csv
import io
import json
import subprocess
import sys

import pytest

from pseudoknot.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def csv_rows(text):
    return list(csv.DictReader(io.StringIO(text)))


class TestCount:
    def test_table_row(self, capsys):
        code, out, _ = run(capsys, "count", "--k", "3", "--sigma", "3", "--lambda", "4", "--n-max", "24")
        assert code == 0
        assert out.splitlines()[0] == "n,count"
        assert out.endswith("24,15562\n")

    def test_series_method_agrees(self, capsys):
        args = ["count", "--k", "4", "--sigma", "5", "--lambda", "4", "--n-max", "30"]
        _, formula, _ = run(capsys, *args)
        _, series, _ = run(capsys, *args, "--method", "series")
        assert formula == series

    def test_per_h(self, capsys):
        code, out, _ = run(
            capsys, "count", "--k", "3", "--sigma", "3", "--lambda", "4",
            "--n-max", "9", "--n-min", "9", "--per-h",
        )
        assert code == 0
        rows = {(r["h"], r["count"]) for r in csv_rows(out)}
        assert ("0", "1") in rows and ("3", "1") in rows

    def test_lambda2(self, capsys):
        _, out, _ = run(capsys, "count", "--k", "3", "--lambda", "2", "--n-max", "6")
        assert out.endswith("6,36\n")
        _, out2, _ = run(capsys, "count", "--k", "3", "--sigma", "2", "--lambda", "2", "--n-max", "6")
        assert csv_rows(out2)[0] == {"n": "0", "count": "1"}

    def test_json_matches_csv(self, capsys):
        args = ["count", "--k", "3", "--sigma", "4", "--lambda", "4", "--n-max", "20"]
        _, c, _ = run(capsys, *args)
        _, j, _ = run(capsys, *args, "--format", "json")
        doc = json.loads(j)
        assert [(str(r["n"]), str(r["count"])) for r in doc["rows"]] == [
            (r["n"], r["count"]) for r in csv_rows(c)
        ]

    @pytest.mark.parametrize(
        "argv",
        [
            ["count", "--k", "3", "--sigma", "2", "--lambda", "4", "--n-max", "5"],
            ["count", "--k", "1", "--sigma", "3", "--lambda", "4", "--n-max", "5"],
            ["count", "--k", "3", "--sigma", "3", "--lambda", "4", "--n-max", "5", "--n-min", "6"],
            ["count", "--k", "3", "--lambda", "2", "--n-max", "5", "--per-h"],
            ["count", "--k", "3", "--sigma", "3", "--lambda", "4", "--n-max", "5",
             "--per-h", "--method", "series"],
        ],
    )
    def test_bad_flags(self, capsys, argv):
        code, out, err = run(capsys, *argv)
        assert code == 2 and out == "" and err

    def test_argparse_errors_exit_2(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["count", "--k", "3", "--lambda", "3", "--n-max", "5"])
        assert exc.value.code == 2


class TestSeries:
    def test_csv(self, capsys):
        code, out, _ = run(capsys, "series", "--k", "3", "--sigma", "3", "--order", "12")
        assert code == 0
        rows = csv_rows(out)
        assert [r["coefficient"] for r in rows][8:] == ["1", "2", "4", "8", "15"]

    def test_dump(self, capsys):
        _, out, _ = run(capsys, "series", "--k", "3", "--sigma", "3", "--order", "4", "--format", "dump")
        assert out.splitlines()[0] == "# order=4 recipe=k4sigma-k3-sigma3"
        assert out.splitlines()[1] == "0\t1/1"

    def test_bad_order(self, capsys):
        assert run(capsys, "series", "--k", "3", "--sigma", "3", "--order", "0")[0] == 2


class TestGrowth:
    def test_row(self, capsys):
        code, out, _ = run(capsys, "growth", "--kind", "k4sigma", "--k", "3", "--sigma", "3")
        assert code == 0
        (row,) = csv_rows(out)
        assert abs(float(row["rate"]) - 2.0348) <= 5e-4
        assert row["dominance_verified"] == "true"
        assert list(row) == ["k", "sigma", "lambda", "gamma", "rate", "dominance_verified", "residual"]

    def test_json_matches_csv(self, capsys):
        args = ["growth", "--kind", "k21", "--k", "3"]
        _, c, _ = run(capsys, *args)
        _, j, _ = run(capsys, *args, "--format", "json")
        (row,) = csv_rows(c)
        (doc,) = json.loads(j)
        assert float(row["rate"]) == doc["rate"]
        assert float(row["gamma"]) == doc["gamma"]

    @pytest.mark.parametrize(
        "argv",
        [
            ["growth", "--kind", "k4sigma", "--k", "3"],
            ["growth", "--kind", "k21", "--k", "3", "--tol", "0"],
            ["growth", "--kind", "k41", "--k", "2"],
        ],
    )
    def test_errors(self, capsys, argv):
        assert run(capsys, *argv)[0] == 2


class TestClassify:
    def test_stack(self, capsys, tmp_path):
        path = tmp_path / "d.txt"
        path.write_text("n=9\n1 9\n2 8\n3 7\n")
        code, out, _ = run(capsys, "classify", "--in", str(path))
        assert code == 0
        lines = out.splitlines()
        assert lines[:2] == ["n,arcs,k,lambda,sigma", "9,3,2,4,3"]
        assert "1,3,1-9;2-8;3-7" in lines
        assert lines[-2:] == ["n=5", "1 5"]

    def test_json(self, capsys, tmp_path):
        path = tmp_path / "d.txt"
        path.write_text("n=4\n")
        _, out, _ = run(capsys, "classify", "--in", str(path), "--format", "json")
        doc = json.loads(out)
        assert doc["lambda"] is None and doc["sigma"] is None and doc["k"] == 2

    def test_missing_or_bad_file(self, capsys, tmp_path):
        assert run(capsys, "classify", "--in", str(tmp_path / "nope"))[0] == 2
        bad = tmp_path / "bad.txt"
        bad.write_text("n=3\n1 4\n")
        assert run(capsys, "classify", "--in", str(bad))[0] == 2


class TestOracle:
    def test_count(self, capsys):
        code, out, _ = run(capsys, "oracle", "--k", "3", "--sigma", "3", "--lambda", "4", "--n", "12")
        assert code == 0 and out.endswith("12,15\n")

    def test_per_h(self, capsys):
        _, out, _ = run(
            capsys, "oracle", "--k", "3", "--sigma", "3", "--lambda", "4", "--n", "9", "--per-h"
        )
        assert out.splitlines()[1:] == ["9,0,1", "9,3,1"]

    def test_size_refused(self, capsys, monkeypatch):
        assert run(capsys, "oracle", "--k", "3", "--n", "17")[0] == 3
        monkeypatch.setenv("PSEUDOKNOT_ORACLE_MAX", "6")
        assert run(capsys, "oracle", "--k", "3", "--n", "7")[0] == 3

    def test_bad_class(self, capsys):
        assert run(capsys, "oracle", "--k", "1", "--n", "5")[0] == 2


class TestVerify:
    def test_T000(self, capsys):
        code, out, err = run(capsys, "verify", "--table", "T000")
        assert code == 0
        assert all(r["ok"] == "true" for r in csv_rows(out))
        assert "34/34" in err

    def test_mismatch_exits_1(self, capsys, monkeypatch):
        from pseudoknot import golden

        data = json.loads(json.dumps(golden.load_golden()))
        data["T000"]["entries"][0]["value"] += 1
        monkeypatch.setattr(golden, "load_golden", lambda: data)
        code, out, _ = run(capsys, "verify", "--table", "T000")
        assert code == 1
        assert sum(r["ok"] == "false" for r in csv_rows(out)) == 1


def test_deterministic(capsys):
    args = ["count", "--k", "5", "--sigma", "3", "--lambda", "4", "--n-max", "40", "--format", "json"]
    assert run(capsys, *args) == run(capsys, *args)


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "pseudoknot", "count", "--k", "3", "--sigma", "3",
         "--lambda", "4", "--n-max", "10"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout.endswith("10,4\n")
