# thresholding/scad.py

from dataclasses import dataclass

import numpy as np

from thresholding.base import ShrinkageRule, as_output
from thresholding.support import GtContext


def shrink_scad(tau, ctx: GtContext, alpha: float, delta: float):
    """Modified SCAD rule.

    Zones (lambda = ctx.lambda_n):
        [0, lambda]          -> 0
        (lambda, 2 lambda]   -> sign * (|tau| - lambda - delta)+
        (2 lambda, alpha lambda] -> sign * (((alpha-1)|tau| - alpha lambda)/(alpha-2) - delta)+
        above alpha lambda   -> sign * (|tau| - delta)+
    The last zone only exists with a fixed lambda below xi_K / alpha.
    """
    if alpha <= 2:
        raise ValueError(f"SCAD alpha must be > 2, got {alpha}")
    lam = ctx.lambda_n
    t = np.asarray(tau, dtype=float)
    mag = np.abs(t)

    linear = mag - lam - delta
    transition = ((alpha - 1.0) * mag - alpha * lam) / (alpha - 2.0) - delta
    keep = mag - delta

    shrunk = np.select(
        [mag <= lam, mag <= 2.0 * lam, mag <= alpha * lam],
        [np.zeros_like(mag), linear, transition],
        default=keep,
    )
    out = np.sign(t) * np.maximum(shrunk, 0.0)
    return as_output(out, tau)


@dataclass(frozen=True)
class Scad(ShrinkageRule):
    name = "scad"
    lam: float = 0.0
    alpha: float = 3.7
    adaptive: bool = True

    def __post_init__(self):
        if self.alpha <= 2:
            raise ValueError(f"SCAD alpha must be > 2, got {self.alpha}")

    def shrink(self, tau, ctx, delta):
        return shrink_scad(tau, ctx, self.alpha, delta)

    def lambda_at(self, xi_K):
        # alpha * lambda_n = xi_K closes the keep zone
        return xi_K / self.alpha

    def params(self):
        return {"alpha": repr(float(self.alpha)), **super().params()}
