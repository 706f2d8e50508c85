import json
import subprocess
import sys

import pytest

from qorbit import __version__
from qorbit.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out.strip() else None), err


def test_verify_cell(capsys):
    code, rep, _ = run(capsys, "verify", "--series", "B", "--rank", "2", "--r", "1")
    assert code == EXIT_OK and rep["passed"]
    assert rep["version"] == __version__
    assert rep["config"]["r"] == "1"
    ids = {c["id"] for c in rep["checks"]}
    assert {"yb", "2.8", "2.36", "3.13", "3.14"} <= ids


def test_verify_only(capsys):
    code, rep, _ = run(capsys, "verify", "--series", "C", "--rank", "1", "--only", "2.36")
    assert code == EXIT_OK
    (chk,) = rep["checks"]
    assert chk["values"]
    assert "(t^16+1)/(t^8)" in chk["values"].values()


def test_verify_all_cells_dedup(capsys):
    code, rep, _ = run(capsys, "verify", "--series", "B", "--rank", "2", "--only", "yb,3.13")
    assert code == EXIT_OK
    ids = [(c["id"], c["r"]) for c in rep["checks"]]
    assert ids.count(("yb", None)) == 1
    assert {r for i, r in ids if i == "3.13"} == {"1", "2"}


def test_algebra(capsys):
    code, rep, _ = run(capsys, "algebra", "--series", "C", "--rank", "1", "--r", "1/2", "--deg", "3", "--lemma", "3.4")
    assert code == EXIT_OK
    assert rep["lemmas"][0]["status"] == "pass"


def test_module(capsys):
    code, rep, _ = run(capsys, "module", "--series", "C", "--rank", "1", "--r", "1/2", "--sigma", "1")
    assert code == EXIT_OK
    assert rep["dimension"] == 2 and rep["passed"]
    assert all(v == "pass" for v in rep["checks"].values())


def test_module_dump(capsys):
    code, rep, _ = run(capsys, "module", "--series", "B", "--rank", "1", "--r", "1", "--sigma", "1/2", "--dump")
    assert code == EXIT_OK
    assert rep["operators"]


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "--series", "B", "--rank", "0"],
        ["verify", "--series", "B", "--rank", "2", "--r", "3/2"],
        ["verify", "--series", "B", "--rank", "2", "--only", "9.99"],
        ["algebra", "--series", "C", "--rank", "1", "--r", "1/2", "--deg", "-1"],
        ["algebra", "--series", "C", "--rank", "1", "--r", "1/2", "--lemma", "7.7"],
        ["module", "--series", "C", "--rank", "1", "--r", "1/2", "--sigma", "1/3"],
        ["module", "--series", "C", "--rank", "1", "--r", "1/2", "--sigma", "1/2"],
    ],
)
def test_usage_errors(capsys, argv):
    code, rep, err = run(capsys, *argv)
    assert code == EXIT_USAGE
    assert rep is None and "error" in err


def test_argparse_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--series", "X", "--rank", "1"])
    assert exc.value.code == EXIT_USAGE


def test_forced_inadmissible(capsys):
    code, rep, err = run(
        capsys, "module", "--series", "C", "--rank", "1", "--r", "1/2", "--sigma", "5/4", "--force"
    )
    assert code == EXIT_FAIL
    assert "module did not close" in rep["error"]
    assert rep["passed"] is False


def test_output_and_csv(capsys, tmp_path):
    out, table = tmp_path / "r.json", tmp_path / "r.csv"
    code = main(["verify", "--series", "C", "--rank", "1", "--r", "1/2", "-o", str(out), "--csv", str(table)])
    assert code == EXIT_OK
    assert capsys.readouterr().out == ""
    assert json.loads(out.read_text())["passed"]
    lines = table.read_text().splitlines()
    assert lines[0] == "check,status,residual_entry_count"
    assert all(line.split(",")[1] == "pass" for line in lines[1:])


def test_deterministic(tmp_path):
    argv = ["verify", "--series", "D", "--rank", "2", "--r", "1/2", "--seed", "7"]
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    main(argv + ["-o", str(a)])
    main(argv + ["-o", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "qorbit", "verify", "--series", "C", "--rank", "1", "--only", "yb"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["passed"]
