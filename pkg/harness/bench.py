# harness/bench.py
"""
Per-iteration cost of APGT as the dimension grows, plus the worst-case
operation counts of the adaptive-threshold variants.
"""

import logging
import time
from dataclasses import replace
from typing import Optional, Sequence

import numpy as np
import pandas as pd

from engine.apgt import ApgtState, step
from harness.experiment import ExperimentConfig
from output.table import render_bench
from scenarios.generator import default_epsilons, generate_ground_truth, generate_stream

logger = logging.getLogger(__name__)
logger.setLevel(logging.INFO)
handler = logging.StreamHandler()
formatter = logging.Formatter('[%(filename)s:%(lineno)d] %(levelname)s: %(message)s')
handler.setFormatter(formatter)
logger.addHandler(handler)

WARMUP_FRACTION = 0.1


def operation_counts(rule: str, L: int, K: int, q: int, P: int = 0, e1: int = 1, e2: int = 1) -> dict:
    """
    Worst-case operations per iteration for the adaptive-threshold variants.

    Args:
        rule: "hard", "bridge" or "scad"
        L, K, q: dimension, sparsity estimate, window length
        P: extra components of the bridge rule
        e1: 1 for equal weights, 2 otherwise
        e2: 1 for arbitrary ||u_n||, 0 for unit-norm inputs

    Returns:
        {"multiplications": ..., "divisions": ..., "powers": ..., "sorting": "O(L)"}

    Examples:
        >>> operation_counts("hard", 1024, 100, 390)["multiplications"]
        441188
    """
    if e1 not in (1, 2) or e2 not in (0, 1):
        raise ValueError(f"e1 must be 1 or 2 and e2 0 or 1, got e1={e1}, e2={e2}")
    base = (q * e1 + e2 + 1) * L
    if rule == "hard":
        mults, divs, powers = base + (K + e1 + 1) * q, e2 + 1, 0
    elif rule == "bridge":
        mults, divs, powers = base + (K + P + e1 + 1) * q + 12 * P + 1, P + e2 + 2, 3 * P + 1
    elif rule == "scad":
        mults, divs, powers = base + (L + e1 + 1) * q + (L - K), L - K + e2 + 1, 0
    else:
        raise ValueError(f"no operation-count model for rule '{rule}'")
    return {"multiplications": mults, "divisions": divs, "powers": powers, "sorting": "O(L)"}


def time_iterations(cfg: ExperimentConfig) -> np.ndarray:
    """Wall time of every APGT step of realization 0, in nanoseconds."""
    scenario = cfg.scenario
    a_star = generate_ground_truth(scenario)
    stream = generate_stream(scenario, a_star)
    epsilons = default_epsilons(scenario, cfg.eps_multiplier)

    state = ApgtState.initial(scenario.L, cfg.algo)
    timings = np.empty(len(stream), dtype=np.int64)
    for i, (sample, eps) in enumerate(zip(stream, epsilons)):
        t0 = time.perf_counter_ns()
        state, _ = step(state, sample, float(eps))
        timings[i] = time.perf_counter_ns() - t0
    return timings


def _config_for(base: ExperimentConfig, L: int, sparsity_ratio: Optional[float]) -> ExperimentConfig:
    scenario, algo = base.scenario, base.algo
    if sparsity_ratio is not None:
        K = max(1, int(round(L * sparsity_ratio)))
        scenario = replace(scenario, L=L, K_star=K)
        algo = replace(algo, K=K)
    else:
        scenario = replace(scenario, L=L)
    return replace(base, scenario=scenario, algo=algo, realizations=1)


def bench_linear_scaling(
    base_cfg: ExperimentConfig,
    dims: Sequence[int],
    sparsity_ratio: Optional[float] = None,
) -> pd.DataFrame:
    """
    Median ns per iteration for each L in ``dims`` (first 10% of steps excluded).

    With ``sparsity_ratio`` both K* and K are set to round(ratio * L);
    otherwise they stay fixed.
    """
    dims = [int(d) for d in dims]
    if len(dims) < 2:
        raise ValueError(f"need at least two dimensions to compare, got {dims}")
    if any(b <= a for a, b in zip(dims, dims[1:])):
        raise ValueError(f"dims must be strictly ascending, got {dims}")
    if base_cfg.scenario.N < 2:
        raise ValueError("benchmark needs at least two iterations")

    rows = []
    for L in dims:
        cfg = _config_for(base_cfg, L, sparsity_ratio)
        logger.info(f"🔄 Timing L={L} over {cfg.scenario.N} iterations")
        timings = time_iterations(cfg)
        skip = int(len(timings) * WARMUP_FRACTION)
        row = {"L": L, "K": cfg.algo.K, "ns_per_iteration": float(np.median(timings[skip:]))}
        rule = cfg.algo.rule.name
        if rule in ("hard", "bridge", "scad"):
            counts = operation_counts(rule, L, cfg.algo.K, cfg.algo.q, getattr(cfg.algo.rule, "p", 0))
            row["model_multiplications"] = counts["multiplications"]
        rows.append(row)

    frame = pd.DataFrame(rows)
    frame["ratio"] = frame["ns_per_iteration"] / frame["ns_per_iteration"].shift(1)
    render_bench(frame)
    return frame
