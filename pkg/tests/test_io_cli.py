import json
import math
import subprocess
import sys

import numpy as np
import pytest

import nlks.cli as cli
from nlks import (
    ConfigurationError,
    PropertyReport,
    RunConfig,
    SolverParams,
    alpha_sweep,
    attractor_distances,
    integrate,
    load_config,
    random_field,
    read_norms,
    to_real,
    write_norms,
)
from nlks import io
from nlks.analysis import PropertyCheck

HEADER = "t,l2,h1,h2,linf,mean"


def write_cfg(tmp_path, data, name="cfg.json"):
    p = tmp_path / name
    p.write_text(json.dumps(data))
    return p


FAST = {
    "domain": {"grid_size": 128},
    "solver": {"t_end": 5.0},
    "sweep": {"t_end": 3.0},
    "attractor": {"t_transient": 5.0, "t_sample": 10.0, "snapshot_every": 10},
    "properties": {"count": 20},
}


# ---- configuration


def test_default_config():
    cfg = load_config(None)
    assert cfg.domain.half_length == pytest.approx(16 * math.pi)
    assert cfg.domain.grid_size == 512 and cfg.solver.dt == 0.05
    assert cfg.sweep.alphas == [1e-2, 1e-3, 1e-4]
    assert cfg.attractor.alphas == [1e-1, 1e-2, 1e-3]


def test_config_round_trip(tmp_path):
    cfg = RunConfig.from_dict(FAST)
    again = load_config(write_cfg(tmp_path, cfg.to_dict()))
    assert again == cfg


@pytest.mark.parametrize(
    "data",
    [
        {"bogus": {}},
        {"solver": {"alfa": 0.1}},
        {"solver": []},
        {"solver": {"dt": -1}},
        {"domain": {"grid_size": 7}},
        {"sweep": {"alphas": []}},
        {"sweep": {"alphas": [0.1, -0.1]}},
        {"properties": {"count": 0}},
        {"attractor": {"stride": 0}},
        [],
    ],
)
def test_bad_config(data):
    with pytest.raises(ConfigurationError):
        RunConfig.from_dict(data)


def test_unreadable_config(tmp_path):
    with pytest.raises(ConfigurationError):
        load_config(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ConfigurationError):
        load_config(bad)


# ---- file formats


def test_norms_csv_round_trip(tmp_path, u0):
    s = integrate(u0, SolverParams(alpha=0.01, t_end=5))
    path = tmp_path / "n.csv"
    write_norms(s, path)
    assert path.read_text().splitlines()[0] == HEADER
    assert read_norms(path) == s


def test_norms_csv_rejects_bad_header():
    with pytest.raises(ConfigurationError):
        io.parse_norms("t,l2\n0,1\n")


def test_snapshot_round_trip(tmp_path, u0):
    path = tmp_path / "s.csv"
    io.write_snapshot(path, 1.25, u0, 0.01)
    lines = path.read_text().splitlines()
    assert lines[0].startswith("#") and lines[1] == "x,u"
    meta, x, u = io.read_snapshot(path)
    assert meta == {"t": 1.25, "alpha": 0.01, "half_length": u0.domain.half_length, "grid_size": 512}
    assert np.array_equal(x, u0.domain.x)
    assert np.array_equal(u, to_real(u0).values)


def test_nonfinite_floats_encoded():
    text = io.dumps({"a": math.inf, "b": [math.nan, -math.inf, 1.5], "c": np.float64(2.0)})
    d = json.loads(text)
    assert d == {"a": "inf", "b": ["nan", "-inf", 1.5], "c": 2.0}
    assert float(d["a"]) == math.inf


def test_convergence_report_round_trip(tmp_path, u0):
    rep = alpha_sweep(u0, [1e-2, 1e-3, 0.0, 1e-4], SolverParams(t_end=2, snapshot_every=1))
    path = tmp_path / "r.json"
    io.write_report(io.convergence_to_dict(rep), path)
    back = io.convergence_from_dict(io.read_report(path))
    assert back == rep


def test_attractor_report_round_trip(tmp_path, u0):
    p = SolverParams(snapshot_every=10)
    rep = attractor_distances(u0, [0.1], p, 5, 10, use_fields=True)
    text = io.dumps(io.attractor_to_dict(rep))
    back = io.attractor_from_dict(json.loads(text))
    assert back.alphas == rep.alphas and back.distances == rep.distances
    for a, s in rep.samples.items():
        assert np.array_equal(back.samples[a].points, s.points)
        assert np.array_equal(back.samples[a].fields, s.fields)
        assert np.array_equal(back.samples[a].times, s.times)


# ---- command line


def run(argv):
    return cli.main([str(a) for a in argv])


def test_simulate_default_config(tmp_path):
    assert run(["simulate", "--out", tmp_path]) == 0
    assert (tmp_path / "norms.csv").read_text().splitlines()[0] == HEADER
    meta = json.loads((tmp_path / "norms.meta.json").read_text())
    assert meta["command"] == "simulate" and meta["config"]["solver"]["t_end"] == 100.0


def test_simulate_alpha_zero_matches_library(tmp_path):
    cfg = write_cfg(tmp_path, FAST)
    assert run(["simulate", "--config", cfg, "--alpha", 0, "--out", tmp_path]) == 0
    c = RunConfig.from_dict(FAST)
    ref = integrate(c.initial_field(), c.solver_params().replace(alpha=0.0))
    assert read_norms(tmp_path / "norms.csv") == ref


def test_simulate_zero_horizon(tmp_path, u0):
    assert run(["simulate", "--t-end", 0, "--out", tmp_path]) == 0
    s = read_norms(tmp_path / "norms.csv")
    assert len(s) == 1 and s.times[0] == 0.0
    assert s == integrate(u0, SolverParams(t_end=0.0))


def test_simulate_seed_and_snapshots(tmp_path):
    cfg = write_cfg(tmp_path, FAST)
    assert run(["simulate", "--config", cfg, "--seed", 5, "--snapshots", "--out", tmp_path]) == 0
    snaps = sorted((tmp_path / "snapshots").glob("*.csv"))
    assert len(snaps) == 11
    meta, _, u = io.read_snapshot(snaps[0])
    expected = to_real(random_field(RunConfig.from_dict(FAST).domain_config(), 5)).values
    assert meta["t"] == 0.0 and np.array_equal(u, expected)


def test_simulate_blow_up_exit_2(tmp_path, capsys):
    cfg = write_cfg(tmp_path, {"domain": {"grid_size": 128}, "initial": {"amplitude": 300.0},
                               "solver": {"dt": 1.0, "t_end": 50}})
    assert run(["simulate", "--config", cfg, "--out", tmp_path]) == 2
    assert "blow-up" in capsys.readouterr().err


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["nonsense"],
        ["simulate", "--alpha", "abc"],
        ["simulate", "--alpha", "-1"],
        ["simulate", "--alpha", "0.1", "--alpha", "0.2"],
        ["properties", "--count", "0"],
        ["properties", "--alpha", "0.1"],
        ["sweep", "--config", "/nonexistent/cfg.json"],
    ],
)
def test_usage_errors_exit_1(argv, tmp_path, capsys):
    assert run(argv + ["--out", tmp_path] if argv else argv) == 1
    assert capsys.readouterr().err


def test_properties_pass(tmp_path, capsys):
    assert run(["properties", "--count", 100, "--out", tmp_path]) == 0
    rep = json.loads((tmp_path / "properties.json").read_text())
    assert rep["passed"] and rep["count"] == 100
    assert len(capsys.readouterr().out.splitlines()) == 8


def test_properties_minimal_grid(tmp_path):
    cfg = write_cfg(tmp_path, {"properties": {"grid_size": 8, "count": 100}})
    assert run(["properties", "--config", cfg, "--out", tmp_path]) == 0


def test_properties_failure_exit_3(tmp_path, monkeypatch):
    def failing(seed, count, domain):
        return PropertyReport(count, domain, (PropertyCheck("agmon", "inequality", 1.5, 2, 1.0),))

    monkeypatch.setattr(cli, "check_inequalities", failing)
    assert run(["properties", "--out", tmp_path]) == 3


def test_sweep_report(tmp_path):
    cfg = write_cfg(tmp_path, FAST)
    out1, out2 = tmp_path / "a", tmp_path / "b"
    assert run(["sweep", "--config", cfg, "--out", out1]) == 0
    assert run(["sweep", "--config", cfg, "--out", out2]) == 0
    body = (out1 / "sweep.json").read_bytes()
    assert body == (out2 / "sweep.json").read_bytes()
    rep = json.loads(body)
    assert len(rep["sup_w"]) == 3 and isinstance(rep["slope"], float)


def test_sweep_grid_with_zero(tmp_path):
    cfg = write_cfg(tmp_path, FAST)
    args = ["sweep", "--config", cfg, "--out", tmp_path]
    for a in (1e-2, 0, 1e-3, 1e-4):
        args += ["--alpha", a]
    assert run(args) == 0
    rep = io.convergence_from_dict(io.read_report(tmp_path / "sweep.json"))
    assert rep.alphas[-1] == 0.0 and rep.sup_w[-1] == 0.0 and rep.excluded == [0.0]


def test_sweep_failure_exit_2(tmp_path, monkeypatch):
    def broken(u0, alphas, params, t_max_check, workers):
        return io.ConvergenceReport([], [], None, None, None, [], [], {}, {0.1: "blow-up at t=1"})

    monkeypatch.setattr(cli, "alpha_sweep", broken)
    assert run(["sweep", "--out", tmp_path]) == 2
    assert io.read_report(tmp_path / "sweep.json")["failed"] == [{"alpha": 0.1, "error": "blow-up at t=1"}]


def test_attractor_cli(tmp_path):
    cfg = write_cfg(tmp_path, FAST)
    assert run(["attractor", "--config", cfg, "--alpha", 0, "--out", tmp_path]) == 0
    assert io.read_report(tmp_path / "attractor.json")["distances"] == [0.0]
    assert run(["attractor", "--config", cfg, "--alpha", 0.1, "--alpha", 0.1, "--out", tmp_path]) == 0
    d = io.read_report(tmp_path / "attractor.json")["distances"]
    assert d[0] == d[1] > 0


def test_thread_env(monkeypatch):
    monkeypatch.delenv("NLKS_THREADS", raising=False)
    assert cli._threads(3) == 3
    monkeypatch.setenv("NLKS_THREADS", "1")
    assert cli._threads(3) == 1
    for bad in ("0", "x"):
        monkeypatch.setenv("NLKS_THREADS", bad)
        with pytest.raises(ConfigurationError):
            cli._threads(3)


def test_bad_thread_env_exit_1(tmp_path, monkeypatch):
    monkeypatch.setenv("NLKS_THREADS", "many")
    assert run(["sweep", "--config", write_cfg(tmp_path, FAST), "--out", tmp_path]) == 1


def test_module_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "nlks", "properties", "--count", "5", "--out", str(tmp_path)],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert "PASS" in proc.stdout
