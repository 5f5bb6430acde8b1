# thresholding/hard.py

from dataclasses import dataclass

import numpy as np

from thresholding.base import ShrinkageRule, as_output
from thresholding.support import GtContext


def shrink_hard(tau, ctx: GtContext, delta: float):
    """Modified hard thresholding: kill below min{lambda, xi_K}, else subtract delta."""
    t = np.asarray(tau, dtype=float)
    mag = np.abs(t)
    cut = min(ctx.lambda_n, ctx.xi_K)
    out = np.where(mag <= cut, 0.0, np.sign(t) * np.maximum(mag - delta, 0.0))
    return as_output(out, tau)


@dataclass(frozen=True)
class Hard(ShrinkageRule):
    name = "hard"
    lam: float = 0.0
    adaptive: bool = True

    def shrink(self, tau, ctx, delta):
        return shrink_hard(tau, ctx, delta)

    def lambda_at(self, xi_K):
        # lambda_n = xi^(K) zeroes every component outside J
        return xi_K
