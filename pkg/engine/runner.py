# engine/runner.py

from dataclasses import dataclass, replace
from typing import ClassVar, Iterable, Optional, Sequence

import numpy as np

import config
from core.model import AlgoParams, DimensionMismatchError, Sample
from engine.apgt import ApgtState, StepReport, advance, push_sample
from engine.oracles import probe_omega_distance, step_theta_form
from projections.hyperslab import distance_hyperslab


@dataclass(frozen=True)
class ProbeConfig:
    """Per-iteration quantities recorded next to the MSE."""
    slab_distance: bool = False
    omega_distance: bool = False
    sparsity: bool = False
    theta_equivalence: bool = False

    # probe name -> (attribute, CSV column)
    NAMES: ClassVar[dict] = {
        "slab-distance": ("slab_distance", "slab_distance"),
        "omega-distance": ("omega_distance", "omega_distance"),
        "sparsity": ("sparsity", "sparsity"),
        "theta-equivalence": ("theta_equivalence", "theta_gap"),
    }

    @classmethod
    def from_names(cls, names: Iterable[str]) -> "ProbeConfig":
        flags = {}
        for name in names:
            key = name.strip().lower()
            if not key:
                continue
            if key == "mse":
                continue  # always recorded
            if key not in cls.NAMES:
                raise ValueError(f"unknown probe '{name}', expected one of {sorted(cls.NAMES)}")
            flags[cls.NAMES[key][0]] = True
        return cls(**flags)

    def names(self) -> list[str]:
        return [name for name, (attr, _) in self.NAMES.items() if getattr(self, attr)]

    def columns(self) -> list[str]:
        return [col for attr, col in self.NAMES.values() if getattr(self, attr)]


def run(
    initial: Optional[np.ndarray],
    stream: Sequence[Sample],
    epsilons: Sequence[float],
    params: AlgoParams,
    probes: ProbeConfig = ProbeConfig(),
) -> list[StepReport]:
    """Fold ``step`` over the stream starting from ``initial`` (zero vector when None)."""
    eps = np.asarray(epsilons, dtype=float).reshape(-1)
    if eps.shape[0] != len(stream):
        raise DimensionMismatchError(f"{len(stream)} samples but {eps.shape[0]} epsilons")
    if not stream:
        return []

    L = stream[0].dim
    state = ApgtState.initial(L, params, initial)
    reports = []
    for sample, epsilon_n in zip(stream, eps):
        pushed = push_sample(state, sample, float(epsilon_n))
        state, report = advance(pushed)
        values = {}
        if probes.slab_distance:
            values["slab_distance"] = distance_hyperslab(pushed.a, pushed.window[-1])
        if probes.sparsity:
            values["sparsity"] = float(np.count_nonzero(report.a_next))
        if probes.theta_equivalence:
            values["theta_gap"] = float(np.linalg.norm(report.a_next - step_theta_form(pushed)))
        if probes.omega_distance:
            values["omega_distance"] = probe_omega_distance(
                pushed, config.OMEGA_PROBE_MAX_DIM, config.OMEGA_PROBE_MAX_WINDOW
            )
        reports.append(replace(report, probes=values) if values else report)
    return reports
