import csv
import io
import json
import math
import subprocess
import sys

import pytest

from stefan_hbim import cli, hbim

import oracles


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_solve_p3(capsys):
    code, out, _ = run(capsys, "solve", "--method", "p3", "--ste", "1", "--bi", "1")
    assert code == 0
    doc = json.loads(out)
    assert set(doc) == {"method", "ste", "bi", "xi", "A", "B", "polynomial_residual"}
    assert 0 < doc["xi"] < math.sqrt(3)
    assert doc["polynomial_residual"] <= 1e-10
    assert doc["xi"] == pytest.approx(oracles.approx_xi("p3", 1.0, 1.0), abs=1e-9)


def test_solve_limit_closed_form(capsys):
    code, out, _ = run(capsys, "solve", "--method", "p1", "--ste", "4", "--limit")
    doc = json.loads(out)
    assert code == 0 and doc["bi"] == "inf"
    assert doc["xi"] == pytest.approx(1.060660, abs=1e-6)
    assert doc["A"] == 0.5 and doc["B"] == 0.5


def test_solve_twelve_significant_digits(capsys):
    _, out, _ = run(capsys, "solve", "--method", "exact", "--ste", "1", "--bi", "3")
    assert '"xi": 0.' in out
    xi_text = out.split('"xi": ')[1].split(",")[0]
    assert len(xi_text.replace("0.", "", 1).lstrip("0")) <= 12


def test_solve_csv(capsys):
    code, out, _ = run(capsys, "solve", "--method", "p2", "--ste", "1", "--bi", "1", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and rows[0]["method"] == "P2"


def test_solve_ice_preset(capsys):
    code, out, _ = run(capsys, "solve", "--method", "exact", "--preset", "ice")
    doc = json.loads(out)
    assert code == 0 and doc["bi"] == 80.0
    assert doc["xi"] == pytest.approx(0.1217697325, rel=1e-9)


@pytest.mark.parametrize(
    "argv,field",
    [
        (["solve", "--method", "exact", "--ste", "-1", "--bi", "1"], "ste"),
        (["solve", "--method", "p1", "--ste", "1", "--bi", "0"], "bi"),
        (["solve", "--method", "p1", "--ste", "1", "--bi", "1", "--limit"], "bi"),
        (["solve", "--method", "p1", "--ste", "1"], "bi"),
        (["solve", "--ste", "1", "--bi", "1"], "method"),
        (["table", "--preset", "nope"], "preset"),
        (["table", "--preset", "ice"], "t"),
        (["sweep"], "ste"),
        (["sweep", "--ste", "1", "--points", "1"], "points"),
    ],
)
def test_usage_errors_exit_2(capsys, argv, field):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert field in err


def test_bad_choice_exits_2(capsys):
    with pytest.raises(SystemExit) as info:
        cli.main(["solve", "--method", "p9", "--ste", "1", "--bi", "1"])
    assert info.value.code == 2


def test_table1(capsys):
    code, out, _ = run(capsys, "table", "--preset", "ice-table1")
    lines = out.splitlines()
    assert code == 0
    assert lines[0] == "x,E_abs_T1,E_abs_T2,E_abs_T3,E_abs_T4"
    assert len(lines) == 12
    first = lines[1].split(",")
    assert first[0] == "0.000000"
    assert float(first[3]) == pytest.approx(0.000581, abs=5e-5)
    assert all(len(v.split(".")[1]) == 6 for v in first)


def test_table2_row_range(capsys):
    _, out, _ = run(capsys, "table", "--preset", "ice-table2")
    xs = [row.split(",")[0] for row in out.splitlines()[1:]]
    assert len(xs) == 11 and xs[0] == "0.000820" and xs[-1] == "0.000830"


def test_table_json_matches_csv(capsys):
    _, csv_out, _ = run(capsys, "table", "--preset", "ice-table1")
    _, json_out, _ = run(capsys, "table", "--preset", "ice-table1", "--format", "json")
    csv_rows = [{k: float(v) for k, v in r.items()} for r in csv.DictReader(io.StringIO(csv_out))]
    assert json.loads(json_out)["rows"] == csv_rows


def test_table_explicit_positions(capsys):
    code, out, _ = run(capsys, "table", "--preset", "ice", "--t", "10", "--positions", "0,0.0001")
    assert code == 0 and len(out.splitlines()) == 3


def test_table_from_config_physical(capsys, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({
        "physical": {"conductivity_k": 1, "density_rho": 1, "specific_heat_c": 1,
                     "latent_heat_lambda": 1, "transfer_h": 1, "theta_inf": 1},
        "t": 1.0, "positions": [0.0, 0.5, 5.0],
    }))
    code, out, _ = run(capsys, "table", "--config", str(cfg))
    assert code == 0
    assert out.splitlines()[-1] == "5.000000,0.000000,0.000000,0.000000,0.000000"


def test_config_flags_win(capsys, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"method": "p2", "ste": 2.0, "bi": 5.0}))
    _, out, _ = run(capsys, "solve", "--config", str(cfg), "--ste", "1")
    doc = json.loads(out)
    assert doc["method"] == "P2" and doc["ste"] == 1.0 and doc["bi"] == 5.0


def test_config_unknown_key(capsys, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"stee": 1}))
    code, _, err = run(capsys, "solve", "--config", str(cfg))
    assert code == 2 and "stee" in err


SWEEP = ["sweep", "--ste", "1e-3", "--bi-min", "0.1", "--bi-max", "1e6", "--points", "63", "--log"]


def _parse_sweep(out):
    lines = out.splitlines()
    assert lines[0] == "bi,e_rel_p1,e_rel_p2,e_rel_p3,e_rel_p4"
    assert lines[-1].startswith("# limit: ")
    rows = [[float(v) for v in line.split(",")] for line in lines[1:-1]]
    limit = [float(v) for v in lines[-1][len("# limit: "):].split(",")]
    return rows, limit


def test_sweep_rows_and_limit(capsys):
    code, out, _ = run(capsys, *SWEEP)
    rows, limit = _parse_sweep(out)
    assert code == 0 and len(rows) == 63 and len(limit) == 4
    assert rows[0][0] == 0.1 and rows[-1][0] == 1e6
    assert all(abs(a - b) <= 1e-4 for a, b in zip(rows[-1][1:], limit))


def test_sweep_p4_worse_than_p2(capsys):
    _, out, _ = run(capsys, *SWEEP)
    rows, _ = _parse_sweep(out)
    assert all(r[4] > r[2] for r in rows)


def test_sweep_ste10_best_is_p1_or_p2(capsys):
    _, out, _ = run(capsys, "sweep", "--ste", "10", "--bi-min", "0.1", "--bi-max", "1e6", "--points", "63", "--log")
    rows, _ = _parse_sweep(out)
    best = [min(range(1, 5), key=lambda j: r[j]) for r in rows]
    assert sum(b in (1, 2) for b in best) / len(best) >= 0.95


def test_sweep_byte_stable(capsys, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    run(capsys, *SWEEP, "--out", str(a))
    run(capsys, *SWEEP, "--out", str(b))
    assert a.read_bytes() == b.read_bytes()
    assert b"\r" not in a.read_bytes()


def test_sweep_default_grid_and_json(capsys):
    code, out, _ = run(capsys, "sweep", "--ste", "1", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and len(doc["rows"]) == 63
    assert set(doc["limit"]) == {"e_rel_p1", "e_rel_p2", "e_rel_p3", "e_rel_p4"}


def test_verify_quick(capsys):
    code, out, _ = run(capsys, "verify", "--quick")
    assert code == 0
    assert all(line.startswith(("PASS", "OK")) for line in out.splitlines())


def test_verify_full(capsys):
    code, out, _ = run(capsys, "verify")
    lines = out.splitlines()
    assert code == 0
    assert lines[-1].startswith("OK")
    assert any("(36/36)" in line for line in lines)


def test_verify_fault_injection(capsys, monkeypatch):
    real = hbim.polynomial_coefficients

    def flipped(scheme, ste, bi):
        c = list(real(scheme, ste, bi))
        c[0] = -c[0]
        return tuple(c)

    monkeypatch.setattr(hbim, "polynomial_coefficients", flipped)
    code, out, _ = run(capsys, "verify", "--quick")
    assert code == 1
    assert any(line.startswith("FAIL endpoint-sign") for line in out.splitlines())


def test_module_entry_point_exit_codes():
    ok = subprocess.run([sys.executable, "-m", "stefan_hbim", "solve", "--method", "p4", "--ste", "1", "--bi", "1"],
                        capture_output=True, text=True)
    assert ok.returncode == 0 and json.loads(ok.stdout)["method"] == "P4"
    bad = subprocess.run([sys.executable, "-m", "stefan_hbim", "solve", "--method", "exact", "--ste", "-1", "--bi", "1"],
                         capture_output=True, text=True)
    assert bad.returncode == 2 and "ste" in bad.stderr
