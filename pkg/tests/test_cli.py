"""End-to-end tests of the batch front end, run in-process via ``run``."""

from __future__ import annotations

import json
import math

import pytest

from speclab.cli import run

SQRT2 = math.sqrt(2.0)
TWO_SQRT2 = repr(2.0 * SQRT2)  # exact decimal form of the singular beta


def run_cli(capsys, argv):
    rc = run(argv)
    captured = capsys.readouterr()
    return rc, captured.out, captured.err


# ---------------------------------------------------------------------------
# single-point runs, exact rendering


def test_mu_single_json_exact(capsys):
    rc, out, _ = run_cli(capsys, ["mu", "--alpha", "1", "--beta", "1"])
    assert rc == 0
    assert out == (
        '{"mu1": %s, "mu2": %s}\n' % (f"{SQRT2:.15g}", f"{SQRT2 / 4.0:.15g}")
    )


def test_mu_divergent_branch_rendered_as_string(capsys):
    rc, out, _ = run_cli(capsys, ["mu", "--alpha", "0", "--beta", "1"])
    assert rc == 0
    row = json.loads(out)
    assert row["mu1"] == "inf"
    assert row["mu2"] == pytest.approx(SQRT2 / 4.0)


def test_classify_csv_exact(capsys):
    rc, out, _ = run_cli(
        capsys, ["classify", "--alpha", "1", "--beta", "1", "--format", "csv"]
    )
    assert rc == 0
    header, row, tail = out.split("\n")
    assert tail == ""
    assert header == "kind,branch1,mu1,kind1,branch2,mu2,kind2"
    assert row == (
        f"Subcritical,Branch1,{SQRT2:.15g},Subcritical,"
        f"Branch2,{SQRT2 / 4.0:.15g},Supercritical"
    )


def test_surface_gamma_zero(capsys):
    rc, out, _ = run_cli(capsys, ["surface", "--beta", "1"])
    assert rc == 0
    assert json.loads(out)["alpha_c"] == pytest.approx(SQRT2, abs=1e-12)


def test_identity_check_residual_small(capsys):
    rc, out, _ = run_cli(
        capsys,
        ["identity-check", "--mu", "1.5", "--lambda", "0.3",
         "--lambda-im", "0.1", "--size", "256"],
    )
    assert rc == 0
    row = json.loads(out)
    assert row["lambda_re"] == 0.3 and row["lambda_im"] == 0.1
    assert row["residual"] < 1e-9
    assert row["max_interior_residual"] < 1e-12


def test_h_spectrum_known_eigenvalue(capsys):
    rc, out, _ = run_cli(capsys, ["h-spectrum", "--alpha", "1", "--beta", "0"])
    assert rc == 0
    row = json.loads(out)
    assert row["count"] == 1
    assert row["eigenvalues"][0] == pytest.approx(0.47541226430548, abs=1e-9)
    assert row["method_agreement"] < 1e-6


def test_jacobi_spectrum_counting_symmetric(capsys):
    rc, out, _ = run_cli(
        capsys,
        ["jacobi-spectrum", "--family", "counting", "--epsilon", "1",
         "--size", "128", "--lo", "-0.5", "--hi", "0.5"],
    )
    assert rc == 0
    row = json.loads(out)
    eigs = row["eigenvalues"]
    assert row["count"] == len(eigs)
    assert eigs == sorted(eigs)
    # counting operators have spectra symmetric about zero
    for lo_val, hi_val in zip(eigs, reversed(eigs)):
        assert lo_val == pytest.approx(-hi_val, abs=1e-9)


def test_csv_list_cells_use_semicolons(capsys):
    rc, out, _ = run_cli(
        capsys,
        ["jacobi-spectrum", "--family", "counting", "--epsilon", "1",
         "--size", "64", "--lo", "-0.4", "--hi", "0.4", "--format", "csv"],
    )
    assert rc == 0
    header, row, _ = out.split("\n")
    cells = row.split(",")
    assert header.split(",") == ["family", "size", "lo", "hi", "count", "eigenvalues"]
    count = int(cells[4])
    assert count >= 1
    assert len(cells[5].split(";")) == count


def test_forms_test_seeded_and_clean(capsys):
    argv = ["forms-test", "--alpha", "1", "--beta", "0",
            "--trials", "50", "--seed", "7"]
    rc1, out1, _ = run_cli(capsys, argv)
    rc2, out2, _ = run_cli(capsys, argv)
    assert rc1 == rc2 == 0
    assert out1 == out2
    row = json.loads(out1)
    assert row["c"] == pytest.approx(1.0 - 1.0 / SQRT2, rel=1e-12)
    assert row["violations"] == 0
    assert row["min_margin"] > 0.0


# ---------------------------------------------------------------------------
# sweeps


def test_sweep_workers_byte_identical(capsys):
    base = ["mu", "--beta", "1", "--grid", "alpha:0.5:2:7"]
    rc1, out1, _ = run_cli(capsys, base + ["--workers", "1"])
    rc4, out4, _ = run_cli(capsys, base + ["--workers", "4"])
    assert rc1 == rc4 == 0
    assert out1 == out4
    rows = json.loads(out1)
    assert len(rows) == 7
    assert all(r["status"] == "ok" for r in rows)


def test_sweep_env_workers_override(capsys, monkeypatch):
    base = ["mu", "--beta", "1", "--grid", "alpha:0.5:2:5", "--workers", "1"]
    rc1, out1, _ = run_cli(capsys, base)
    monkeypatch.setenv("SPECLAB_WORKERS", "3")
    rc3, out3, _ = run_cli(capsys, base)
    assert rc1 == rc3 == 0
    assert out1 == out3


def test_sweep_rows_in_input_order(capsys):
    rc, out, _ = run_cli(
        capsys,
        ["surface", "--grid", "beta:0.5:2:4", "--format", "csv", "--workers", "2"],
    )
    assert rc == 0
    lines = out.strip().split("\n")
    assert lines[0] == "beta,alpha_c,status"
    betas = [float(line.split(",")[0]) for line in lines[1:]]
    assert betas == [0.5, 1.0, 1.5, 2.0]
    for line in lines[1:]:
        assert float(line.split(",")[1]) == pytest.approx(SQRT2, abs=1e-12)
        assert line.endswith(",ok")


def test_sweep_singular_point_gets_status_row(capsys):
    rc, out, _ = run_cli(
        capsys,
        ["surface", "--gamma-re", "1",
         "--grid", f"beta:{TWO_SQRT2}:4:2"],
    )
    assert rc == 0  # one good point keeps the run alive
    rows = json.loads(out)
    assert rows[0]["status"] == "SingularFormulaError"
    assert "alpha_c" not in rows[0]
    assert rows[1]["status"] == "ok"


def test_sweep_all_points_failing_exits_3(capsys):
    rc, out, err = run_cli(
        capsys,
        ["surface", "--gamma-re", "1",
         "--grid", f"beta:{TWO_SQRT2}:{TWO_SQRT2}:1"],
    )
    assert rc == 3
    assert "all sweep points failed" in err
    rows = json.loads(out)
    assert rows[0]["status"] == "SingularFormulaError"


def test_count_sweep_monotone_in_epsilon(capsys):
    rc, out, _ = run_cli(
        capsys,
        ["count", "--alpha", "1", "--beta", "0",
         "--grid", "epsilon:0.4:0.02:4", "--format", "csv"],
    )
    assert rc == 0
    lines = out.strip().split("\n")
    assert lines[0] == "epsilon,count,status"
    counts = [int(line.split(",")[1]) for line in lines[1:]]
    # epsilon decreases along the grid, so the counts may only grow
    assert counts == sorted(counts)


# ---------------------------------------------------------------------------
# config file, output file, svg


def test_config_defaults_and_flag_precedence(capsys, tmp_path):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"alpha": 5.0, "beta": 1.0}))
    rc, from_cfg, _ = run_cli(capsys, ["mu", "--config", str(cfg)])
    rc2, overridden, _ = run_cli(
        capsys, ["mu", "--config", str(cfg), "--alpha", "1"]
    )
    assert rc == rc2 == 0
    assert json.loads(from_cfg)["mu1"] != json.loads(overridden)["mu1"]
    rc3, direct, _ = run_cli(capsys, ["mu", "--alpha", "1", "--beta", "1"])
    assert overridden == direct


def test_config_lambda_alias(capsys, tmp_path):
    cfg = tmp_path / "id.json"
    cfg.write_text(json.dumps({"lambda": 0.25, "mu": 1.5, "size": 128}))
    rc, out, _ = run_cli(capsys, ["identity-check", "--config", str(cfg)])
    assert rc == 0
    row = json.loads(out)
    assert row["lambda_re"] == 0.25
    assert row["size"] == 128


def test_output_file_matches_stdout(capsys, tmp_path):
    argv = ["classify", "--alpha", "1", "--beta", "1", "--format", "csv"]
    rc, stdout_text, _ = run_cli(capsys, argv)
    target = tmp_path / "out.csv"
    rc2, silent, _ = run_cli(capsys, argv + ["--output", str(target)])
    assert rc == rc2 == 0
    assert silent == ""
    assert target.read_text() == stdout_text


def test_transition_scan_svg(capsys, tmp_path):
    svg = tmp_path / "scan.svg"
    rc, out, _ = run_cli(
        capsys,
        ["transition-scan", "--mu", "1.5", "--sizes", "64,128",
         "--lo", "-1", "--hi", "1", "--svg", str(svg)],
    )
    assert rc == 0
    rows = json.loads(out)
    assert [r["size"] for r in rows] == [64, 128]
    text = svg.read_text()
    assert text.startswith("<svg ") and text.rstrip().endswith("</svg>")
    assert "polyline" in text


# ---------------------------------------------------------------------------
# failure modes


def test_single_invalid_params_exit_2(capsys):
    rc, out, err = run_cli(capsys, ["surface", "--beta", "-1"])
    assert rc == 2
    assert out == ""
    assert err.startswith("speclab: ")


def test_unknown_command_raises_argparse_exit(capsys):
    with pytest.raises(SystemExit) as exc:
        run(["no-such-command"])
    assert exc.value.code == 2


def test_grid_variable_not_used_by_command(capsys):
    rc, _, err = run_cli(capsys, ["mu", "--grid", "mu:1:2:3"])
    assert rc == 2
    assert "does not use grid variable" in err


def test_grid_malformed_spec(capsys):
    rc, _, err = run_cli(capsys, ["mu", "--grid", "alpha:0:1"])
    assert rc == 2
    assert "grid must look like" in err


def test_grid_unknown_variable(capsys):
    rc, _, err = run_cli(capsys, ["mu", "--grid", "bogus:0:1:4"])
    assert rc == 2
    assert "grid variable" in err


def test_log_grid_rejects_nonpositive_endpoints(capsys):
    rc, _, err = run_cli(capsys, ["mu", "--grid", "alpha:-1:1:4:log"])
    assert rc == 2
    assert "log grids" in err
