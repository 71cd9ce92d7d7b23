import json

import pytest

from hcpadic.cli import main, parse_lambda, render_table
from hcpadic.solve import SolveReport
from hcpadic.oracle import OracleReport

from conftest import GOLDEN, run_cli


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("argv,golden", [
    (["table", "existence", "--kmax", "10", "--pmax", "200"], "table_existence.txt"),
    (["table", "periodic", "--kmax", "10"], "table_periodic.txt"),
    (["table", "existence", "--kmax", "10", "--format", "json"], "table_existence.json"),
    (["solve", "ti", "--p", "7", "--k", "3", "--lambda", "8", "--precision", "8"], "solve_ti_p7_k3.txt"),
])
def test_golden(capsys, argv, golden):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    assert out == (GOLDEN / golden).read_text()


def test_empty_row_renders_dash(capsys):
    code, out, _ = run(capsys, "table", "existence", "--kmax", "1")
    assert out.splitlines() == ["k\tp", "1\t-"]
    assert render_table({3: []}) == "k\tp\n3\t-"


def test_solve_ti_digits(capsys):
    code, out, _ = run(capsys, "solve", "ti", "--p", "3", "--k", "2", "--lambda", "13",
                       "--precision", "12", "--format", "json")
    rep = json.loads(out)
    assert code == 0
    assert rep["solutions"][0]["residues"][0] % 9 == 4
    assert rep["solutions"][0]["precision"] == 12


def test_solve_periodic_k2(capsys):
    code, out, _ = run(capsys, "solve", "periodic", "--p", "3", "--k", "2", "--lambda", "13", "--format", "json")
    rep = json.loads(out)
    assert code == 0
    assert [r % 27 for r in rep["solutions"][0]["residues"]] == [19, 16]


def test_solve_periodic_by_digits(capsys):
    code, out, _ = run(capsys, "solve", "periodic", "--p", "3", "--k", "2", "--lambda", "digits:1,1,1",
                       "--format", "json")
    assert code == 0
    assert [r % 27 for r in json.loads(out)["solutions"][0]["residues"]] == [19, 16]


@pytest.mark.parametrize("argv", [
    ["solve", "ti", "--p", "3", "--k", "4", "--lambda", "4"],
    ["solve", "periodic", "--p", "3", "--k", "2", "--lambda", "4"],
    ["solve", "periodic", "--p", "3", "--k", "8", "--lambda", "4"],
])
def test_gate_failures_exit_2(capsys, argv):
    assert run(capsys, *argv)[0] == 2


@pytest.mark.parametrize("argv", [
    ["solve", "ti", "--p", "3", "--k", "2"],
    ["solve", "ti", "--p", "3", "--k", "2", "--lambda", "13", "--J", "3"],
    ["solve", "ti", "--p", "3", "--k", "2", "--lambda", "2"],
    ["solve", "ti", "--p", "3", "--k", "2", "--lambda", "x/y"],
    ["solve", "ti", "--p", "3", "--k", "2", "--lambda", "1,5"],
    ["solve", "ti", "--p", "4", "--k", "2", "--lambda", "13"],
    ["solve", "ti", "--p", "3", "--k", "2", "--J", "1"],
    ["solve", "ti", "--p", "3", "--k", "2", "--lambda", "13", "--precision", "7"],
    ["solve", "bogus"],
])
def test_bad_input_exit_4(capsys, argv):
    with pytest.raises(SystemExit) if argv[1] == "bogus" else _nullcontext() as exc:
        code = main(argv)
    if argv[1] == "bogus":
        assert exc.value.code == 4
    else:
        assert code == 4
    assert capsys.readouterr().out == ""


class _nullcontext:
    def __enter__(self):
        return None

    def __exit__(self, *a):
        return False


def test_coupling_input(capsys):
    code, out, _ = run(capsys, "solve", "ti", "--p", "3", "--k", "2", "--J", "3", "--format", "json")
    assert code == 0


def test_precision_env_var():
    res = run_cli("solve", "ti", "--p", "3", "--k", "2", "--lambda", "13", "--format", "json",
                  env={"HCPADIC_PRECISION": "10"})
    assert res.returncode == 0
    assert json.loads(res.stdout)["solutions"][0]["precision"] == 10
    bad = run_cli("solve", "ti", "--p", "3", "--k", "2", "--lambda", "13", env={"HCPADIC_PRECISION": "3"})
    assert bad.returncode == 4 and bad.stdout == ""


def test_oracle_compat_ti(capsys):
    code, out, _ = run(capsys, "oracle", "compat", "--p", "3", "--k", "2", "--lambda", "13", "--n", "2",
                       "--boundary", "ti", "--format", "json")
    rep = json.loads(out)
    assert code == 0 and rep["min_deviation_valuation"] == "inf"


def test_oracle_compat_const_fails(capsys):
    code, out, _ = run(capsys, "oracle", "compat", "--p", "3", "--k", "2", "--lambda", "13", "--n", "2",
                       "--boundary", "const", "--z", "1")
    assert code == 1 and "FAILS" in out


def test_oracle_norms(capsys):
    code, out, _ = run(capsys, "oracle", "norms", "--p", "7", "--k", "3", "--lambda", "8", "--n", "1",
                       "--format", "json")
    rep = json.loads(out)
    assert code == 0 and rep["mu_norm_range"] == ["1", "1"]


def test_oracle_count_reports_true_count(capsys):
    # the closed form claims 513; the admissible count on V_2 is 189
    code, out, _ = run(capsys, "oracle", "count", "--k", "2", "--n", "2", "--format", "json")
    rep = json.loads(out)
    assert rep["dp_count"] == rep["enumerated_count"] == 189
    assert rep["closed_form_count"] == 513
    assert code == 1


def test_oracle_count_star(capsys):
    code, out, _ = run(capsys, "oracle", "count", "--k", "3", "--n", "1")
    assert code == 0


def test_oracle_cap_exit_5(capsys):
    code, out, err = run(capsys, "oracle", "norms", "--p", "3", "--k", "2", "--lambda", "13", "--n", "4")
    assert code == 5 and out == "" and "cap" in err


def test_oracle_boundary_gate_failure(capsys):
    code, out, _ = run(capsys, "oracle", "compat", "--p", "3", "--k", "4", "--lambda", "4", "--n", "1")
    assert code == 2 and out == ""


@pytest.mark.parametrize("argv", [
    ["solve", "ti", "--p", "3", "--k", "2", "--lambda", "13"],
    ["solve", "periodic", "--p", "7", "--k", "9", "--lambda", "8", "--precision", "10"],
    ["solve", "periodic", "--p", "3", "--k", "2", "--lambda", "4"],
])
def test_solve_json_idempotent(capsys, argv):
    _, out, _ = run(capsys, *argv, "--format", "json")
    rep = SolveReport.from_json(json.loads(out))
    assert json.dumps(rep.to_json(), indent=2, sort_keys=True) + "\n" == out


@pytest.mark.parametrize("argv", [
    ["oracle", "count", "--k", "3", "--n", "2", "--p", "7"],
    ["oracle", "compat", "--p", "3", "--k", "2", "--lambda", "13", "--n", "2", "--boundary", "periodic"],
])
def test_oracle_json_idempotent(capsys, argv):
    _, out, _ = run(capsys, *argv, "--format", "json")
    rep = OracleReport.from_json(json.loads(out))
    assert rep.dumps() + "\n" == out


def test_parse_lambda_digits():
    x = parse_lambda("digits:1,1,1", 3, 10)
    assert x.residue(10) == 13
    assert parse_lambda("1,1,1", 3, 10).residue(3) == 13
    assert parse_lambda("13/1", 3, 10).residue(3) == 13


def test_module_entry_point():
    res = run_cli("table", "periodic", "--kmax", "3")
    assert res.returncode == 0
    assert res.stdout.splitlines()[-1] == "3\t-"
