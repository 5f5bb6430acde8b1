# harness/experiment.py
"""
Monte-Carlo experiments: tau independent realizations of a scenario, APGT
run on each, MSE and probe curves reduced in realization order and written
as one CSV.
"""

import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
import pandas as pd

import config
from core.model import AlgoParams, DimensionMismatchError
from engine.runner import ProbeConfig, run
from output.csv_writer import write_csv
from output.table import render_summary
from scenarios.generator import (
    ScenarioConfig,
    default_epsilons,
    generate_ground_truth,
    generate_stream,
    generator_name,
    ground_truth_timeline,
)

logger = logging.getLogger(__name__)
logger.setLevel(logging.INFO)
handler = logging.StreamHandler()
formatter = logging.Formatter('[%(filename)s:%(lineno)d] %(levelname)s: %(message)s')
handler.setFormatter(formatter)
logger.addHandler(handler)

# probe column -> reduction over realizations
AGGREGATORS = {
    "slab_distance": np.mean,
    "omega_distance": np.mean,
    "sparsity": np.max,
    "theta_gap": np.max,
}

CHANGE_NOTE = "abrupt change applied to direct coefficients of a*"


class RealizationError(RuntimeError):
    """An error raised while running one realization."""

    def __init__(self, realization: int, message: str):
        super().__init__(realization, message)
        self.realization = realization
        self.message = message

    def __str__(self):
        return f"realization {self.realization}: {self.message}"


@dataclass(frozen=True)
class ExperimentConfig:
    scenario: ScenarioConfig
    algo: AlgoParams
    eps_multiplier: float = config.EPS_MULT
    realizations: int = config.REALIZATIONS
    probes: ProbeConfig = ProbeConfig()
    output_path: str = config.OUT
    workers: Optional[int] = config.WORKERS
    thresholds: tuple = (0.1, 0.01, 0.001)

    def __post_init__(self):
        if self.realizations < 1:
            raise ValueError(f"realizations must be >= 1, got {self.realizations}")
        if self.eps_multiplier < 0:
            raise ValueError(f"eps multiplier must be >= 0, got {self.eps_multiplier}")
        if self.workers is not None and self.workers < 1:
            raise ValueError(f"workers must be >= 1, got {self.workers}")
        if any(t <= 0 for t in self.thresholds):
            raise ValueError(f"MSE thresholds must be positive, got {self.thresholds}")
        self.algo.validate(self.scenario.L)
        object.__setattr__(self, "thresholds", tuple(float(t) for t in self.thresholds))

    def echo(self) -> list[tuple[str, str]]:
        """Settings that determine the CSV contents, keyed like the CLI flags."""
        s, a = self.scenario, self.algo
        return [
            ("dim", str(s.L)),
            ("sparsity-true", str(s.K_star)),
            ("noise-var", repr(float(s.sigma2))),
            ("iters", str(s.N)),
            ("change-at", "" if s.change_at is None else str(s.change_at)),
            ("change-count", str(s.change_count)),
            ("sparsity-est", str(a.K)),
            ("window", str(a.q)),
            ("rule", a.rule.token()),
            ("eps-prime", repr(float(a.eps_prime))),
            ("mu-scale", repr(float(a.mu_scale))),
            ("delta", repr(float(a.delta))),
            ("eps-mult", repr(float(self.eps_multiplier))),
            ("realizations", str(self.realizations)),
            ("probes", ",".join(self.probes.names())),
        ]


@dataclass
class RealizationResult:
    index: int
    squared_error: np.ndarray
    probes: dict = field(default_factory=dict)
    seconds: float = 0.0


@dataclass
class ExperimentSummary:
    final_mse: float
    crossings: dict
    seconds_per_iteration: float
    frame: pd.DataFrame
    path: Optional[str] = None


def squared_error_curve(estimates, truth) -> np.ndarray:
    """||a*(n) - a_n||^2 for every n of one realization."""
    est = np.asarray(estimates, dtype=float)
    truth = np.asarray(truth, dtype=float)
    if est.shape[0] == 0 and truth.shape[0] == 0:
        return np.zeros(0)
    if est.shape != truth.shape or est.ndim != 2:
        raise DimensionMismatchError(f"estimates {est.shape} do not match ground truth {truth.shape}")
    diff = truth - est
    return np.einsum("ij,ij->i", diff, diff)


def aggregate_mse(curves: Sequence[np.ndarray], L: int) -> np.ndarray:
    """(1 / (tau L)) times the sum of per-realization squared-error curves."""
    if not curves:
        raise ValueError("need at least one realization")
    lengths = {len(c) for c in curves}
    if len(lengths) != 1:
        raise DimensionMismatchError(f"realizations have different lengths: {sorted(lengths)}")
    return np.sum(np.stack(curves), axis=0) / (len(curves) * L)


def mse_curve(runs, a_star_timeline) -> np.ndarray:
    """
    MSE_n over tau runs.

    Args:
        runs: tau sequences of estimates, each of shape (N, L)
        a_star_timeline: ground truth per n, either one (N, L) array shared
            by every run or one such array per run

    Returns:
        Array of N MSE values
    """
    runs = list(runs)
    if not runs:
        raise ValueError("need at least one run")
    shared = np.ndim(a_star_timeline) == 2 or len(a_star_timeline) == 0
    truths = [a_star_timeline] * len(runs) if shared else list(a_star_timeline)
    if len(truths) != len(runs):
        raise DimensionMismatchError(f"{len(runs)} runs but {len(truths)} ground-truth timelines")

    curves = [squared_error_curve(est, truth) for est, truth in zip(runs, truths)]
    L = np.asarray(truths[0], dtype=float).shape[-1] if np.size(truths[0]) else 1
    return aggregate_mse(curves, L)


def zero_estimator_check(truth: np.ndarray, tol: float = 1e-12) -> None:
    """The zero estimator's squared error must equal ||a*(n)||^2."""
    if truth.shape[0] == 0:
        return
    curve = squared_error_curve(np.zeros_like(truth), truth)
    analytic = np.sum(truth ** 2, axis=1)
    if not np.allclose(curve, analytic, rtol=tol, atol=0.0):
        raise ArithmeticError("zero-estimator MSE does not match ||a*||^2")


def run_realization(cfg: ExperimentConfig, index: int) -> RealizationResult:
    """One realization: fresh a*, stream and APGT run under seed + index."""
    try:
        scenario = cfg.scenario.realization(index)
        a_star = generate_ground_truth(scenario)
        stream = generate_stream(scenario, a_star)
        epsilons = default_epsilons(scenario, cfg.eps_multiplier)
        truth = ground_truth_timeline(scenario, a_star)
        zero_estimator_check(truth)

        start = time.perf_counter()
        reports = run(None, stream, epsilons, cfg.algo, cfg.probes)
        seconds = time.perf_counter() - start

        estimates = np.array([r.a_next for r in reports]).reshape(len(reports), scenario.L)
        probes = {
            col: np.array([r.probes[col] for r in reports], dtype=float)
            for col in cfg.probes.columns()
        }
        return RealizationResult(index, squared_error_curve(estimates, truth), probes, seconds)
    except RealizationError:
        raise
    except Exception as e:
        raise RealizationError(index, f"{type(e).__name__}: {e}") from e


def run_realizations(cfg: ExperimentConfig) -> list[RealizationResult]:
    """Every realization, in realization order (process pool when workers > 1)."""
    indices = range(cfg.realizations)
    workers = min(cfg.workers or os.cpu_count() or 1, cfg.realizations)
    if workers == 1:
        return [run_realization(cfg, i) for i in indices]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        # map keeps realization order
        return list(pool.map(run_realization, [cfg] * cfg.realizations, indices))


def iterations_to_cross(mse: np.ndarray, thresholds: Sequence[float]) -> dict:
    """First 1-based iteration with MSE <= threshold, None if never reached."""
    out = {}
    for t in thresholds:
        hits = np.flatnonzero(mse <= t)
        out[t] = int(hits[0]) + 1 if hits.size else None
    return out


def build_frame(mse: np.ndarray, probes: ProbeConfig, results: list[RealizationResult]) -> pd.DataFrame:
    data = {"iteration": np.arange(1, mse.shape[0] + 1, dtype=np.int64), "mse": mse}
    for col in probes.columns():
        curves = np.stack([r.probes[col] for r in results])
        data[col] = AGGREGATORS[col](curves, axis=0)
    return pd.DataFrame(data, columns=["iteration", "mse"] + probes.columns())


def experiment_metadata(cfg: ExperimentConfig) -> list[tuple[str, str]]:
    meta = list(cfg.echo())
    meta.append(("seed", str(cfg.scenario.seed)))
    meta.append(("realization-seeds", "seed + realization index"))
    meta.append(("generator", generator_name()))
    if cfg.scenario.change_at is not None:
        meta.append(("note", CHANGE_NOTE))
    return meta


def run_experiment(cfg: ExperimentConfig, write: bool = True) -> ExperimentSummary:
    """Run every realization, reduce in realization order and write the CSV."""
    s = cfg.scenario
    logger.info(
        f"🔄 Running {cfg.realizations} realizations: L={s.L}, K*={s.K_star}, N={s.N}, "
        f"rule={cfg.algo.rule.token()}, K={cfg.algo.K}, q={cfg.algo.q}"
    )
    results = run_realizations(cfg)

    mse = aggregate_mse([r.squared_error for r in results], s.L)
    frame = build_frame(mse, cfg.probes, results)
    total_iterations = cfg.realizations * s.N
    seconds = sum(r.seconds for r in results)
    summary = ExperimentSummary(
        final_mse=float(mse[-1]) if mse.size else float("nan"),
        crossings=iterations_to_cross(mse, cfg.thresholds),
        seconds_per_iteration=seconds / total_iterations if total_iterations else float("nan"),
        frame=frame,
    )

    if write:
        summary.path = str(write_csv(cfg.output_path, frame, experiment_metadata(cfg)))
    render_summary(cfg, summary)
    return summary
