#!/usr/bin/env python3
"""
Tests for harness/experiment.py, harness/bench.py and the output writers
"""

import os
import pickle
import sys

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from core.model import AlgoParams, DimensionMismatchError
from engine.runner import ProbeConfig
from harness.bench import bench_linear_scaling, operation_counts
from harness.experiment import (
    ExperimentConfig,
    RealizationError,
    iterations_to_cross,
    mse_curve,
    run_experiment,
    run_realization,
    run_realizations,
    zero_estimator_check,
)
from output.csv_writer import read_csv
from output.table import render_summary
from scenarios.generator import ScenarioConfig, generate_ground_truth, ground_truth_timeline
from thresholding.bridge import BridgeHalf
from thresholding.hard import Hard


def small_config(tmp_path, name="run.csv", **overrides):
    scenario = ScenarioConfig(L=16, K_star=2, sigma2=0.01, N=overrides.pop("N", 40), seed=11)
    algo = AlgoParams(K=3, q=3, rule=overrides.pop("rule", Hard()))
    fields = dict(realizations=3, output_path=str(tmp_path / name), workers=1)
    fields.update(overrides)
    return ExperimentConfig(scenario=scenario, algo=algo, **fields)


def test_mse_curve_examples():
    truth = np.array([[1.0, 0.0], [1.0, 0.0]])
    assert_array_equal(mse_curve([truth, truth], truth), [0.0, 0.0])
    assert_allclose(mse_curve([np.zeros((1, 2))], np.array([[1.0, 0.0]])), [0.5])


def test_mse_curve_with_one_truth_per_run():
    truths = [np.array([[2.0, 0.0]]), np.array([[0.0, 4.0]])]
    runs = [np.zeros((1, 2)), np.zeros((1, 2))]
    assert_allclose(mse_curve(runs, truths), [(4.0 + 16.0) / 4.0])


def test_mse_curve_length_mismatch():
    with pytest.raises(DimensionMismatchError):
        mse_curve([np.zeros((3, 2))], np.zeros((2, 2)))


def test_zero_estimator_matches_truth_energy():
    cfg = ScenarioConfig(L=32, K_star=5, sigma2=0.1, N=10, seed=2, change_at=4, change_count=2)
    timeline = ground_truth_timeline(cfg, generate_ground_truth(cfg))
    zero_estimator_check(timeline)
    assert_allclose(mse_curve([np.zeros_like(timeline)], timeline), np.sum(timeline ** 2, axis=1) / 32)


def test_iterations_to_cross():
    mse = np.array([0.5, 0.2, 0.05, 0.02, 0.005])
    assert iterations_to_cross(mse, (0.1, 0.01, 0.001)) == {0.1: 3, 0.01: 5, 0.001: None}


def test_empty_stream_writes_header_only(tmp_path):
    cfg = small_config(tmp_path, N=0, probes=ProbeConfig(sparsity=True))
    summary = run_experiment(cfg)
    lines = (tmp_path / "run.csv").read_text(encoding="utf-8").split("\n")
    data = [line for line in lines if line and not line.startswith("#")]
    assert data == ["iteration,mse,sparsity"]
    assert np.isnan(summary.final_mse)


def test_csv_layout(tmp_path):
    cfg = small_config(tmp_path, probes=ProbeConfig(slab_distance=True, sparsity=True))
    summary = run_experiment(cfg)
    raw = (tmp_path / "run.csv").read_bytes()
    assert b"\r" not in raw
    text = raw.decode("utf-8")
    assert "# format_version=1\n" in text
    assert "# generator=Philox\n" in text
    assert "# seed=11\n" in text
    assert "# rule=hard:adaptive=true\n" in text

    frame = read_csv(tmp_path / "run.csv")
    assert list(frame.columns) == ["iteration", "mse", "slab_distance", "sparsity"]
    assert list(frame["iteration"]) == list(range(1, 41))
    # 17 significant digits read back bit-exact
    assert_array_equal(frame["mse"].to_numpy(), summary.frame["mse"].to_numpy())
    assert frame["sparsity"].max() <= 3


def test_csv_is_deterministic(tmp_path):
    first = small_config(tmp_path, "a.csv", probes=ProbeConfig(sparsity=True))
    second = small_config(tmp_path, "b.csv", probes=ProbeConfig(sparsity=True))
    run_experiment(first)
    run_experiment(second)
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()


def test_worker_pool_does_not_change_output(tmp_path):
    run_experiment(small_config(tmp_path, "serial.csv", workers=1))
    run_experiment(small_config(tmp_path, "pool.csv", workers=2))
    assert (tmp_path / "serial.csv").read_bytes() == (tmp_path / "pool.csv").read_bytes()


def test_change_note_in_metadata(tmp_path):
    scenario = ScenarioConfig(L=16, K_star=2, sigma2=0.01, N=20, seed=1, change_at=10, change_count=2)
    cfg = ExperimentConfig(
        scenario=scenario,
        algo=AlgoParams(K=4, q=2, rule=Hard()),
        realizations=1,
        output_path=str(tmp_path / "change.csv"),
        workers=1,
    )
    run_experiment(cfg)
    assert "# note=abrupt change applied to direct coefficients of a*" in (tmp_path / "change.csv").read_text()


def test_realizations_use_derived_seeds(tmp_path):
    cfg = small_config(tmp_path)
    results = run_realizations(cfg)
    assert [r.index for r in results] == [0, 1, 2]
    again = run_realization(cfg, 1)
    assert_array_equal(again.squared_error, results[1].squared_error)
    assert not np.array_equal(results[0].squared_error, results[1].squared_error)


def test_realization_errors_carry_the_index(tmp_path):
    cfg = small_config(tmp_path, probes=ProbeConfig(omega_distance=True))
    cfg = ExperimentConfig(
        scenario=ScenarioConfig(L=128, K_star=2, sigma2=0.01, N=3, seed=0),
        algo=cfg.algo,
        realizations=2,
        probes=cfg.probes,
        output_path=cfg.output_path,
        workers=1,
    )
    with pytest.raises(RealizationError) as info:
        run_experiment(cfg)
    assert info.value.realization == 0
    assert "omega-distance" in str(info.value)


def test_realization_error_survives_pickling():
    err = pickle.loads(pickle.dumps(RealizationError(4, "boom")))
    assert err.realization == 4
    assert str(err) == "realization 4: boom"


def test_experiment_config_validation(tmp_path):
    with pytest.raises(ValueError):
        small_config(tmp_path, realizations=0)
    with pytest.raises(ValueError):
        small_config(tmp_path, rule=BridgeHalf(p=14))


def test_summary_table(tmp_path):
    cfg = small_config(tmp_path)
    summary = run_experiment(cfg, write=False)
    text = render_summary(cfg, summary)
    assert "Final MSE" in text
    assert "0.001" in text
    assert not (tmp_path / "run.csv").exists()


def test_operation_counts():
    hard = operation_counts("hard", 1024, 100, 390)
    assert hard == {"multiplications": 392 * 1024 + 102 * 390, "divisions": 2, "powers": 0, "sorting": "O(L)"}
    bridge = operation_counts("bridge", 1024, 100, 390, P=10)
    assert bridge["multiplications"] == 392 * 1024 + 112 * 390 + 121
    assert bridge["divisions"] == 13
    assert bridge["powers"] == 31
    scad = operation_counts("scad", 1024, 100, 390, e2=0)
    assert scad["multiplications"] == 391 * 1024 + 1026 * 390 + 924
    assert scad["divisions"] == 925
    with pytest.raises(ValueError):
        operation_counts("soft", 1024, 100, 390)


def test_bench_rows(tmp_path):
    cfg = small_config(tmp_path, N=30)
    frame = bench_linear_scaling(cfg, [16, 32])
    assert list(frame["L"]) == [16, 32]
    assert (frame["ns_per_iteration"] > 0).all()
    assert list(frame["model_multiplications"]) == [
        operation_counts("hard", 16, 3, 3)["multiplications"],
        operation_counts("hard", 32, 3, 3)["multiplications"],
    ]


def test_bench_scales_sparsity_with_dimension(tmp_path):
    frame = bench_linear_scaling(small_config(tmp_path, N=20), [20, 40], sparsity_ratio=0.1)
    assert list(frame["K"]) == [2, 4]


def test_bench_needs_ascending_dims(tmp_path):
    cfg = small_config(tmp_path, N=30)
    with pytest.raises(ValueError):
        bench_linear_scaling(cfg, [64])
    with pytest.raises(ValueError):
        bench_linear_scaling(cfg, [64, 32])
