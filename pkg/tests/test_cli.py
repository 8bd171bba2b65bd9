import csv
import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from chiralnet.cli import main
from chiralnet.report import SCHEMA_VERSION

ROOT = Path(__file__).resolve().parents[1]


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    return code, json.loads(out), err


def assert_envelope(payload, command):
    assert payload["schema_version"] == SCHEMA_VERSION
    assert payload["command"] == command
    for r in payload["reports"]:
        assert set(r) >= {"name", "pass", "measured", "tolerance", "anchor"}
        assert r["anchor"]
    assert payload["passed"] == all(r["pass"] for r in payload["reports"])


# ---------------------------------------------------------------- character


def test_character_order_40(capsys):
    code, payload, _ = run_json(capsys, "character", "--order", "40")
    assert code == 0
    assert_envelope(payload, "character")
    table = {(r["t2"], r["z"]): r["coeff"] for r in payload["coefficients"]}
    assert table[(1, 1)] == 1 and table[(2, 0)] == 1
    assert payload["partitions"][:6] == [1, 1, 2, 3, 5, 7]


def test_character_order_0(capsys):
    code, payload, _ = run_json(capsys, "character", "--order", "0")
    assert code == 0
    assert payload["coefficients"] == [{"t": "0", "t2": 0, "z": 0, "coeff": 1}]


def test_character_corrupted(capsys):
    code, payload, err = run_json(capsys, "character", "--order", "40", "--corrupt", "4,0,1")
    assert code == 1
    assert "z^0 t^2" in payload["reports"][0]["measured"]
    assert "[FAIL]" in err


@pytest.mark.parametrize("argv", [["--order", "81"], ["--order", "-1"], ["--corrupt", "1,2"]])
def test_character_usage_errors(capsys, argv):
    code, _, err = run(capsys, "character", *argv)
    assert code == 2 and err.startswith("error:")


def test_character_csv(capsys):
    code, out, _ = run(capsys, "character", "--order", "2", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and rows[0] == {"t": "0", "t2": "0", "z": "0", "coeff": "1"}


# ---------------------------------------------------------------- fock


def test_fock_default(capsys):
    code, payload, _ = run_json(capsys, "fock-check", "--emax", "12")
    assert code == 0 and payload["basis_size"] == 96
    assert_envelope(payload, "fock-check")
    names = {r["name"].split("[")[0] for r in payload["reports"]}
    assert {"car", "current_algebra", "field_current", "energy_bound", "twist", "character_trace"} <= names


def test_fock_vacuum_only(capsys):
    code, payload, _ = run_json(capsys, "fock-check", "--emax", "0")
    assert code == 0 and payload["basis_size"] == 1 and payload["passed"]


def test_fock_pair(capsys):
    code, payload, _ = run_json(capsys, "fock-check", "--emax", "12", "--pair", "1,-1")
    assert code == 0 and len(payload["reports"]) == 1


@pytest.mark.parametrize("argv", [["--emax", "17"], ["--emax", "2", "--pair", "3,3"], ["--pair", "a,b"]])
def test_fock_usage_errors(capsys, argv):
    assert run(capsys, "fock-check", *argv)[0] == 2


# ---------------------------------------------------------------- inner


def test_inner_exponential(capsys):
    code, payload, _ = run_json(capsys, "inner-check", "--phi", "exp:kappa=1,theta=0")
    assert code == 0 and payload["functional_equation_residual"] < 1e-12
    assert_envelope(payload, "inner-check")


def test_inner_blaschke(capsys):
    code, payload, _ = run_json(capsys, "inner-check", "--phi", "blaschke:0+1i")
    assert code == 0 and payload["functional_equation_residual"] > 1e-3
    by_name = {r["name"]: r for r in payload["reports"]}
    assert by_name["lw_matrix"]["pass"]


def test_inner_identity(capsys):
    code, payload, _ = run_json(capsys, "inner-check", "--phi", "exp:kappa=0,theta=0")
    assert code == 0 and payload["passed"]


def test_inner_parse_error(capsys):
    code, _, err = run(capsys, "inner-check", "--phi", "blaschke:1+1i;oops")
    assert code == 2 and "'oops'" in err and "position" in err


def test_inner_coarse_grid_fails(capsys):
    code, payload, _ = run_json(capsys, "inner-check", "--phi", "blaschke:0+1i", "--grid", "64")
    assert code == 1
    assert any(r["measured"] == "grid too coarse" for r in payload["reports"])


# ---------------------------------------------------------------- production / scatter


def test_production_exponential(capsys):
    code, payload, _ = run_json(capsys, "production", "--phi", "exp:kappa=2", "--s", "0.1:10:50")
    assert code == 0
    table = payload["production"]["table"]
    assert len(table) == 50
    assert max(abs(r["abs_phi_tilde"] - 1) for r in table) < 1e-6
    assert not payload["production"]["production"]


def test_production_blaschke(capsys):
    code, payload, err = run_json(capsys, "production", "--phi", "blaschke:0+1i", "--s", "0.1:10:50")
    assert code == 0 and payload["production"]["production"]
    assert "production flagged: True" in err


def test_production_identity(capsys):
    code, payload, _ = run_json(capsys, "production", "--phi", "exp:kappa=0,theta=0", "--s", "0.1:10:5")
    assert code == 0
    assert all(abs(r["re_phi_tilde"] - 1) < 1e-14 for r in payload["production"]["table"])


def test_production_csv_files(capsys, tmp_path):
    out = tmp_path / "curve.csv"
    code, _, _ = run(capsys, "production", "--phi", "blaschke:0+1i", "--s", "0.5:2:4", "--format", "csv", "--out", str(out))
    assert code == 0
    rows = list(csv.DictReader(out.open()))
    assert list(rows[0]) == ["s", "re_phi_tilde", "im_phi_tilde", "abs_phi_tilde", "abs2_phi_tilde"]
    assert len(rows) == 4
    sidecar = json.loads(out.with_suffix(".json").read_text())
    assert sidecar["command"] == "production"


def test_production_nonconvergence_exit_3(capsys):
    code, _, err = run(capsys, "production", "--phi", "blaschke:0+0.001i", "--s", "100:100:1", "--tol", "1e-15")
    assert code == 3 and "non-convergence" in err


@pytest.mark.parametrize("s", ["0:1:3", "1:2", "a:b:c", "2:1:3"])
def test_production_bad_range(capsys, s):
    assert run(capsys, "production", "--phi", "exp:kappa=1", "--s", s)[0] == 2


def test_scatter_raw(capsys):
    code, payload, _ = run_json(capsys, "scatter", "--phi", "blaschke:0+1i", "--pq", "1,1", "--s", "1:1:1")
    assert code == 0
    pp = payload["phi_prime"]
    assert abs(complex(pp["re"], pp["im"]) - (-0.28989115236965 + 0.95420510290338j)) < 1e-6
    assert payload["lw_invariance_residual"] > 1e-2


def test_scatter_bad_pq(capsys):
    assert run(capsys, "scatter", "--phi", "exp:kappa=1", "--pq=-1,2")[0] == 2


# ---------------------------------------------------------------- report-all


def test_report_all_default_config(capsys):
    code, payload, err = run_json(capsys, "report-all", "--config", str(ROOT / "configs" / "default.toml"))
    assert code == 0
    assert_envelope(payload, "report-all")
    assert len(payload["reports"]) == 13
    assert err.count("[PASS]") == 13


def test_report_all_negative_control(capsys, tmp_path):
    cfg = tmp_path / "bad.toml"
    cfg.write_text('[scatter]\nelastic = ["blaschke:0+1i"]\n')
    code, payload, _ = run_json(capsys, "report-all", "--config", str(cfg))
    assert code == 1
    failed = {r["name"] for r in payload["reports"] if not r["pass"]}
    assert failed


@pytest.mark.parametrize(
    "text",
    ["", "[fock]\nemax = 99\n", "[nonsense]\nx = 1\n", "[fock]\nemx = 4\n", "[scatter]\ns = 'zzz'\n", "not toml ["],
)
def test_report_all_bad_configs(capsys, tmp_path, text):
    cfg = tmp_path / "c.toml"
    cfg.write_text(text)
    assert run(capsys, "report-all", "--config", str(cfg))[0] == 2


def test_report_all_missing_config(capsys, tmp_path):
    assert run(capsys, "report-all", "--config", str(tmp_path / "nope.toml"))[0] == 2


def test_flags_override_config(capsys, tmp_path):
    cfg = tmp_path / "c.toml"
    cfg.write_text("[character]\norder = 10\n")
    code, payload, _ = run_json(capsys, "report-all", "--config", str(cfg), "--order", "12", "--emax", "14")
    assert code == 0
    assert payload["params"]["config"]["character"]["order"] == 12
    assert payload["params"]["config"]["fock"]["emax"] == 14


def test_emax_too_small_for_ranges(capsys):
    code, _, err = run(capsys, "report-all", "--emax", "8")
    assert code == 2 and "too small" in err


# ---------------------------------------------------------------- determinism / entry point


def test_json_bit_identical(tmp_path):
    outs = []
    for k in range(2):
        path = tmp_path / f"r{k}.json"
        subprocess.run(
            [sys.executable, "-m", "chiralnet", "production", "--phi", "blaschke:0+1i;2+0.5i", "--s", "0.1:10:8", "--out", str(path)],
            check=True, capture_output=True,
        )
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]


def test_module_entry_point_usage():
    proc = subprocess.run([sys.executable, "-m", "chiralnet"], capture_output=True, text=True)
    assert proc.returncode == 2
