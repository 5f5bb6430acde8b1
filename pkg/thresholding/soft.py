# thresholding/soft.py

from dataclasses import dataclass

import numpy as np

from thresholding.base import ShrinkageRule, as_output


def shrink_soft(tau, lam: float, delta: float):
    t = np.asarray(tau, dtype=float)
    out = np.sign(t) * np.maximum(np.abs(t) - lam - delta, 0.0)
    return as_output(out, tau)


@dataclass(frozen=True)
class Soft(ShrinkageRule):
    """Soft thresholding, the PLSTO of the l1 penalty."""
    name = "soft"
    lam: float = 0.0
    adaptive: bool = True

    def shrink(self, tau, ctx, delta):
        return shrink_soft(tau, ctx.lambda_n, delta)

    def lambda_at(self, xi_K):
        # same choice as hard: exactly L-K components end up zero
        return xi_K
