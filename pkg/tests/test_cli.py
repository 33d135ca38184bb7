"""Command-line interface: runs, layer solves, slope reports, exit codes."""

import json

import numpy as np
import pytest
from click.testing import CliRunner

from knudsen.cli import main

TINY_NUMERICS = {"kinetic_h": 0.05, "kinetic_dt": 0.0025,
                 "limit_h": 0.1, "limit_dt": 0.01,
                 "v_max": 8.0, "velocity_resolution": 10,
                 "spectral_order": 8}


@pytest.fixture()
def runner():
    return CliRunner()


def write_config(tmp_path, **entries):
    data = {"t_end": 0.05, "numerics": TINY_NUMERICS, **entries}
    path = tmp_path / "config.json"
    path.write_text(json.dumps(data))
    return str(path)


def test_run_with_config_file(tmp_path, runner):
    config = write_config(tmp_path, test=4, eps=[0.5], seed=7)
    out = tmp_path / "out"
    result = runner.invoke(main, ["run", "--test", "4", "--out", str(out),
                                  "--config", config])
    assert result.exit_code == 0, result.output
    assert "experiment 4" in result.output
    assert "D_rho=" in result.output
    for name in ("limit.csv", "report.csv", "meta.json",
                 "reference_eps_0.5.csv"):
        assert (out / name).exists(), name
    meta = json.loads((out / "meta.json").read_text())
    assert meta["seed"] == 7          # config seed survives absent --seed
    assert meta["config"]["out_dir"] == str(out)


def test_run_flag_overrides(tmp_path, runner):
    config = write_config(tmp_path, test="custom",
                          reference_state=[1.0, 1.0, 1.0], amplitude=0.5,
                          eps=[0.5])
    out = tmp_path / "out"
    result = runner.invoke(main, ["run", "--test", "custom",
                                  "--out", str(out), "--config", config,
                                  "--eps", "1/2 1/4", "--seed", "3"])
    assert result.exit_code == 0, result.output
    eps = np.loadtxt(out / "report.csv", delimiter=",", skiprows=1,
                     ndmin=2)[:, 0]
    np.testing.assert_allclose(eps, [0.5, 0.25])
    meta = json.loads((out / "meta.json").read_text())
    assert meta["seed"] == 3
    assert "slopes" in result.output


def test_run_rejects_unknown_test(tmp_path, runner):
    result = runner.invoke(main, ["run", "--test", "9",
                                  "--out", str(tmp_path / "x")])
    assert result.exit_code != 0
    assert "test" in result.output


def test_run_rejects_bad_config_key(tmp_path, runner):
    config = tmp_path / "bad.json"
    config.write_text(json.dumps({"test": 1, "epz": [0.5]}))
    result = runner.invoke(main, ["run", "--test", "1",
                                  "--out", str(tmp_path / "x"),
                                  "--config", str(config)])
    assert result.exit_code != 0
    assert "epz" in result.output


def test_run_experiment_five_runs_both_presets(tmp_path, runner):
    config = write_config(tmp_path, test=5, eps=[0.5])
    out = tmp_path / "five"
    result = runner.invoke(main, ["run", "--test", "5", "--out", str(out),
                                  "--config", config])
    assert result.exit_code == 0, result.output
    assert (out / "small" / "report.csv").exists()
    assert (out / "large" / "report.csv").exists()
    assert "(small)" in result.output and "(large)" in result.output


def test_run_experiment_five_single_variant(tmp_path, runner):
    config = write_config(tmp_path, test=5, eps=[0.5])
    out = tmp_path / "five-large"
    result = runner.invoke(main, ["run", "--test", "5", "--out", str(out),
                                  "--config", config, "--variant", "large"])
    assert result.exit_code == 0, result.output
    assert (out / "report.csv").exists()
    assert not (out / "large").exists()


def layer_solve_args(tmp_path, inflow_data, extra=()):
    inflow = tmp_path / "inflow.json"
    inflow.write_text(json.dumps(inflow_data))
    return ["layer-solve", "--rho", "1", "--u", "1", "--T", "1",
            "--order", "8", "--inflow", str(inflow), *extra]


def parse_xi(output):
    values = {}
    for line in output.splitlines():
        if line.startswith("xi["):
            name = line.split("[")[1].split("]")[0]
            values[name] = float(line.split("=")[1])
    return values


def test_layer_solve_mode_inflow(tmp_path, runner):
    result = runner.invoke(main,
                           layer_solve_args(tmp_path, {"modes": {"2": 0.3}}))
    assert result.exit_code == 0, result.output
    xi = parse_xi(result.output)
    assert set(xi) == {"zero", "plus", "minus"}
    assert all(np.isfinite(v) for v in xi.values())


def test_layer_solve_sampled_inflow_and_trace(tmp_path, runner):
    v = np.linspace(-6.0, 6.0, 121)
    data = {"v": v.tolist(),
            "values": (0.2 * np.exp(-((v - 1.0) ** 2))).tolist()}
    trace_path = tmp_path / "trace.csv"
    result = runner.invoke(
        main, layer_solve_args(tmp_path, data,
                               extra=["--trace-out", str(trace_path)]))
    assert result.exit_code == 0, result.output
    lines = trace_path.read_text().splitlines()
    assert lines[0] == "v,value"
    assert len(lines) == 1 + 801
    rows = np.loadtxt(trace_path, delimiter=",", skiprows=1)
    assert np.all(np.isfinite(rows))


def test_layer_solve_rejects_malformed_inflow(tmp_path, runner):
    result = runner.invoke(main,
                           layer_solve_args(tmp_path, {"wrong": [1, 2]}))
    assert result.exit_code != 0
    assert "inflow" in result.output


def test_convergence_subcommand(tmp_path, runner):
    report = tmp_path / "report.csv"
    eps = np.array([0.5, 0.25, 0.125])
    with open(report, "w") as handle:
        handle.write("eps,D_rho,D_u,D_T\n")
        for e in eps:
            handle.write(f"{e},{0.3 * e},{0.2 * e ** 2},{0.1 * e}\n")
    result = runner.invoke(main, ["convergence", "--report", str(report)])
    assert result.exit_code == 0, result.output
    assert "D_rho slope: 1.0000" in result.output
    assert "D_u slope: 2.0000" in result.output


def test_convergence_rejects_missing_file(tmp_path, runner):
    result = runner.invoke(main, ["convergence", "--report",
                                  str(tmp_path / "nope.csv")])
    assert result.exit_code != 0


def test_convergence_rejects_malformed_report(tmp_path, runner):
    path = tmp_path / "junk.csv"
    path.write_text("a,b\n1,2\n")
    result = runner.invoke(main, ["convergence", "--report", str(path)])
    assert result.exit_code != 0
