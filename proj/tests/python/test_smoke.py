import json
import math
import os
import subprocess

import pytest

import rsstoa


def ring_context(radius=100.0, seed=3, noise=True):
    signal = rsstoa.SignalParams()
    if not noise:
        signal.sigma_rss = 0.0
        signal.sigma_toa = 0.0
    scenario = rsstoa.make_ring_scenario(rsstoa.Position2D(0.0, 0.0), radius, 4, signal)
    ms = rsstoa.sample_measurements(scenario, seed)
    return scenario, rsstoa.ObjectiveContext.from_scenario(scenario, ms)


def truth(signal):
    return rsstoa.ParamVector.from_tau(0.0, 0.0, signal.p0_true, signal.tau_true)


def test_model_values():
    a = rsstoa.Position2D(0.0, 0.0)
    b = rsstoa.Position2D(3.0, 4.0)
    assert rsstoa.distance(a, b) == 5.0
    assert rsstoa.rss_mean(a, rsstoa.Position2D(10.0, 0.0), -60.0, 3.0) == pytest.approx(-90.0)
    assert rsstoa.toa_mean(a, rsstoa.Position2D(150.0, 0.0), 0.0) == 150.0 / rsstoa.SPEED_OF_LIGHT
    assert rsstoa.weight(10.0) == 0.0
    assert rsstoa.weight(100.0) == pytest.approx(3e-3)


def test_sampling_is_deterministic():
    scenario, _ = ring_context()
    assert rsstoa.sample_measurements(scenario, 7) == rsstoa.sample_measurements(scenario, 7)
    assert rsstoa.sample_measurements(scenario, 7) != rsstoa.sample_measurements(scenario, 8)


def test_cost_zero_at_truth_without_noise():
    scenario, ctx = ring_context(noise=False)
    t = truth(scenario.signal)
    assert rsstoa.cost(t, ctx) == pytest.approx(0.0, abs=1e-12)
    assert all(abs(g) < 1e-9 for g in rsstoa.cost_gradient(t, ctx))


def test_grid_search_recovers_truth():
    scenario, ctx = ring_context(noise=False)
    spec = rsstoa.GridSpec()
    spec.center = truth(scenario.signal)
    spec.half_span = rsstoa.ParamVector(10.0, 10.0, 1.0, 10.0)
    spec.interval = rsstoa.ParamVector(1.0, 1.0, 0.5, 5.0)
    res = rsstoa.grid_search(ctx, spec)
    assert res.evaluations == 21 * 21 * 5 * 5
    assert res.estimate.x == pytest.approx(0.0, abs=1e-9)
    assert res.estimate.y == pytest.approx(0.0, abs=1e-9)


def test_gradient_descent_and_pso_reduce_cost():
    scenario, ctx = ring_context()
    init = rsstoa.offset_init(scenario.target)
    gd = rsstoa.GdConfig()
    gd.init = init
    res = rsstoa.gradient_descent(ctx, gd)
    assert res.cost <= rsstoa.cost(init, ctx)
    assert res.evaluations > 0

    cfg = rsstoa.PsoConfig()
    cfg.max_iters = 30
    cfg.swarm_size = 20
    cfg.lower = rsstoa.ParamVector(-100.0, -100.0, -63.0, 1325.0)
    cfg.upper = rsstoa.ParamVector(100.0, 100.0, -57.0, 1375.0)
    cfg.seed = 11
    a = rsstoa.pso(ctx, cfg)
    assert a == rsstoa.pso(ctx, cfg)
    assert a.evaluations == 20 + 30 * 20
    costs = [p.cost for p in a.trajectory]
    assert costs == sorted(costs, reverse=True)


def test_errors_map_to_python_exceptions():
    _, ctx = ring_context()
    spec = rsstoa.GridSpec()
    spec.half_span = rsstoa.ParamVector(1.0, 1.0, 1.0, 1.0)
    spec.interval = rsstoa.ParamVector(5.0, 1.0, 1.0, 1.0)
    with pytest.raises(rsstoa.EmptyGridError):
        rsstoa.grid_search(ctx, spec)
    with pytest.raises(rsstoa.Error):
        rsstoa.make_ring_scenario(rsstoa.Position2D(0.0, 0.0), 0.0, 4)
    with pytest.raises(rsstoa.ConfigError):
        rsstoa.ExperimentConfig.from_json('{"scenario": {"trails_per_radius": 3}}')


def test_metrics():
    errs = [float(i) for i in range(1, 11)]
    assert rsstoa.percentile(errs, 80) == 8.0
    assert rsstoa.percentile(errs, 95) == 10.0
    assert rsstoa.rmse([3.0, 4.0]) == pytest.approx(math.sqrt(12.5))
    assert rsstoa.cdf_points([2.0, 1.0]) == [(1.0, 0.5), (2.0, 1.0)]


def test_small_experiment():
    cfg = rsstoa.ExperimentConfig()
    cfg.radii = [50.0]
    cfg.trials_per_radius = 3
    cfg.warmup = False
    cfg.solvers.enabled = [rsstoa.SolverKind.gd, rsstoa.SolverKind.pso]
    cfg.solvers.pso.max_iters = 10
    cfg.solvers.pso.swarm_size = 10
    report = rsstoa.run_experiment(cfg)
    assert len(report.trials) == 3
    assert [s.solver for s in report.summaries] == cfg.solvers.enabled
    assert report.errors_csv().splitlines()[0] == "solver,radius,trial,seed,error_m,evaluations"
    again = rsstoa.ExperimentConfig.from_json(cfg.to_json())
    assert again.to_json() == cfg.to_json()


@pytest.mark.skipif("RSSTOA_CLI" not in os.environ, reason="CLI binary path not provided")
def test_cli_scenario_then_solve(tmp_path):
    cli = os.environ["RSSTOA_CLI"]
    fixture = tmp_path / "scenario.json"
    subprocess.run([cli, "scenario", "--out", str(fixture), "--seed", "5"], check=True)
    assert json.loads(fixture.read_text())["format"] == "rsstoa-scenario/1"
    out = subprocess.run([cli, "solve", "--measurements", str(fixture), "--solver", "grid"],
                         check=True, capture_output=True, text=True).stdout
    assert "x_m" in out and "error_m" in out
    bad = subprocess.run([cli, "solve", "--measurements", str(tmp_path / "missing.json")],
                         capture_output=True, text=True)
    assert bad.returncode == 2
