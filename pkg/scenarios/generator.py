# scenarios/generator.py
"""
Synthetic compressed-sensing streams: Gaussian sensing vectors, a sparse
ground truth, additive white Gaussian noise and an optional abrupt change
of the unknown vector.

Randomness comes from numpy's Philox generator keyed by (seed, purpose), so
the ground truth, the stream and the change event are independent draws
that stay reproducible on their own.
"""

from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

import config
from core.model import DimensionMismatchError, Sample, as_vector

TRUTH_STREAM = 0
SAMPLE_STREAM = 1
CHANGE_STREAM = 2


class ScenarioError(ValueError):
    """The scenario cannot be generated as configured."""


@dataclass(frozen=True)
class ScenarioConfig:
    L: int
    K_star: int
    sigma2: float
    N: int
    seed: int = 0
    change_at: Optional[int] = None
    change_count: int = 0

    def __post_init__(self):
        if self.L < 2:
            raise ScenarioError(f"dimension L must be >= 2, got {self.L}")
        if not 1 <= self.K_star <= self.L:
            raise ScenarioError(f"K_star must lie in [1, {self.L}], got {self.K_star}")
        if self.sigma2 < 0:
            raise ScenarioError(f"noise variance must be >= 0, got {self.sigma2}")
        if self.N < 0:
            raise ScenarioError(f"stream length must be >= 0, got {self.N}")
        if self.seed < 0:
            raise ScenarioError(f"seed must be >= 0, got {self.seed}")
        if self.change_count < 0:
            raise ScenarioError(f"change_count must be >= 0, got {self.change_count}")
        if self.change_at is not None and not 0 <= self.change_at < self.N:
            raise ScenarioError(f"change_at must lie in [0, {self.N}), got {self.change_at}")
        if self.change_at is not None and self.change_count > self.L - self.K_star:
            raise ScenarioError(
                f"change_count={self.change_count} exceeds the {self.L - self.K_star} zero coordinates of a*"
            )

    @property
    def sigma(self) -> float:
        return float(np.sqrt(self.sigma2))

    def realization(self, index: int) -> "ScenarioConfig":
        """Config of realization ``index`` (seed + index)."""
        return replace(self, seed=self.seed + index)


def make_rng(seed: int, purpose: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, purpose])))


def generator_name() -> str:
    return config.RNG_NAME


def generate_ground_truth(cfg: ScenarioConfig) -> np.ndarray:
    """Exactly K_star standard-normal nonzeros at uniformly random positions."""
    rng = make_rng(cfg.seed, TRUTH_STREAM)
    positions = rng.choice(cfg.L, size=cfg.K_star, replace=False)
    a_star = np.zeros(cfg.L)
    a_star[positions] = rng.standard_normal(cfg.K_star)
    return a_star


def apply_change(cfg: ScenarioConfig, a_star) -> np.ndarray:
    """The unknown vector after the change event: change_count zero coordinates become nonzero."""
    a_star = as_vector(a_star, "a_star")
    zeros = np.flatnonzero(a_star == 0)
    if cfg.change_count > zeros.size:
        raise ScenarioError(
            f"change_count={cfg.change_count} exceeds the {zeros.size} zero coordinates available"
        )
    rng = make_rng(cfg.seed, CHANGE_STREAM)
    changed = a_star.copy()
    picks = rng.choice(zeros, size=cfg.change_count, replace=False)
    changed[picks] = rng.standard_normal(cfg.change_count)
    return changed


def ground_truth_timeline(cfg: ScenarioConfig, a_star) -> np.ndarray:
    """(N, L) array whose row n is the vector that generated sample n."""
    a_star = as_vector(a_star, "a_star")
    timeline = np.tile(a_star, (cfg.N, 1))
    if cfg.change_at is not None:
        timeline[cfg.change_at:] = apply_change(cfg, a_star)
    return timeline


def generate_stream(cfg: ScenarioConfig, a_star) -> list[Sample]:
    """y_n = u_n^T a*(n) + v_n with u_n ~ N(0, I) and v_n ~ N(0, sigma2)."""
    a_star = as_vector(a_star, "a_star")
    if a_star.shape[0] != cfg.L:
        raise DimensionMismatchError(f"a_star has length {a_star.shape[0]}, expected {cfg.L}")
    rng = make_rng(cfg.seed, SAMPLE_STREAM)
    U = rng.standard_normal((cfg.N, cfg.L))
    noise = cfg.sigma * rng.standard_normal(cfg.N)

    y = U @ a_star
    if cfg.change_at is not None:
        after = apply_change(cfg, a_star)
        y[cfg.change_at:] = U[cfg.change_at:] @ after
    y = y + noise
    return [Sample(U[n], y[n], n) for n in range(cfg.N)]


def default_epsilons(cfg: ScenarioConfig, multiplier: float = config.EPS_MULT) -> np.ndarray:
    """Constant hyperslab half-widths multiplier * sigma."""
    if multiplier < 0:
        raise ScenarioError(f"epsilon multiplier must be >= 0, got {multiplier}")
    return np.full(cfg.N, multiplier * cfg.sigma)
