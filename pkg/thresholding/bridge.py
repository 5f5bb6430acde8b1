# thresholding/bridge.py

from dataclasses import dataclass

import numpy as np

from thresholding.base import ShrinkageRule, as_output
from thresholding.support import GtContext, xi_value
from utils.cubic import largest_real_root

ROOT_TOLERANCE = 1e-10


class BridgeRootError(ArithmeticError):
    """The bridge equation has no acceptable root for a (lambda, tau) pair that should have one."""


def c_bt(lam: float, gamma: float = 0.5) -> float:
    """Discontinuity boundary of the bridge (l_gamma) thresholding rule.

    For gamma = 0.5 this reduces to 3 * (lambda / 4) ** (2/3).
    """
    if lam <= 0:
        raise ValueError(f"c_bt needs lambda > 0, got {lam}")
    if not 0.0 < gamma < 1.0:
        raise ValueError(f"c_bt needs gamma in (0, 1), got {gamma}")
    base = -1.0 / (lam * gamma * (gamma - 1.0))
    return base ** (1.0 / (gamma - 2.0)) + lam * gamma * base ** ((gamma - 1.0) / (gamma - 2.0))


def bridge_magnitude(mag, lam: float) -> np.ndarray:
    """Solve z + (lambda/2) z^(-1/2) = |tau| for z > 0.

    With s = sqrt(z) this is the largest root of s^3 - |tau| s + lambda/2 = 0.
    Requires |tau| >= c_bt(lambda) (any |tau| > 0 when lambda = 0).
    """
    mag = np.asarray(mag, dtype=float)
    if mag.size == 0:
        return mag.copy()
    s = largest_real_root(-mag, lam / 2.0, boundary_tol=1e-12)
    if np.any(s <= 0):
        bad = mag[s <= 0]
        raise BridgeRootError(f"no positive bridge root for |tau|={bad[0]!r}, lambda={lam!r}")
    z = s * s
    residual = np.abs(z + 0.5 * lam / s - mag)
    if np.any(residual > ROOT_TOLERANCE * np.maximum(mag, 1.0)):
        worst = int(np.argmax(residual))
        raise BridgeRootError(
            f"bridge root residual {residual.flat[worst]:.3e} for |tau|={mag.flat[worst]!r}, lambda={lam!r}"
        )
    return z


def shrink_bridge_half(tau, ctx: GtContext, delta: float):
    """Modified bridge (l_0.5) thresholding.

    Fixed lambda: zero below c_bt(lambda), else sign * (z_bar - delta)+.
    Adaptive lambda (ctx.xi_KP set): zero iff |tau| <= xi^(K+P), which keeps
    at most P shrunk components next to the K kept ones.
    """
    lam = ctx.lambda_n
    t = np.asarray(tau, dtype=float)
    mag = np.abs(t)

    if ctx.xi_KP is not None:
        zero = mag <= ctx.xi_KP
    else:
        # below c_bt the penalized problem has no positive stationary point
        cut = c_bt(lam) if lam > 0 else 0.0
        zero = (mag < cut) | (mag == 0.0)

    out = np.zeros_like(mag)
    live = ~zero
    if np.any(live):
        z_bar = bridge_magnitude(mag[live], lam)
        out[live] = np.sign(t[live]) * np.maximum(z_bar - delta, 0.0)
    return as_output(out, tau)


@dataclass(frozen=True)
class BridgeHalf(ShrinkageRule):
    """Bridge thresholding with gamma = 0.5; ``p`` extra components are shrunk in adaptive mode."""
    name = "bridge"
    lam: float = 0.0
    p: int = 10
    adaptive: bool = True

    def __post_init__(self):
        if self.p < 1:
            raise ValueError(f"bridge P must be >= 1, got {self.p}")

    def validate(self, L, K):
        super().validate(L, K)
        if not 1 <= self.p <= L - K:
            raise ValueError(f"bridge P must lie in [1, {L - K}] for L={L}, K={K}, got {self.p}")

    def shrink(self, tau, ctx, delta):
        return shrink_bridge_half(tau, ctx, delta)

    def adaptive_lambda(self, x, K):
        # c_bt(lambda_n) = xi^(K+P), solved in closed form
        L = np.asarray(x).shape[0]
        if K + self.p > L:
            raise ValueError(f"K + P = {K + self.p} exceeds L = {L}")
        return 4.0 * (xi_value(x, K + self.p) / 3.0) ** 1.5

    def context(self, x, J, xi_K, K):
        if not self.adaptive:
            return super().context(x, J, xi_K, K)
        xi_KP = xi_value(x, K + self.p)
        return GtContext(xi_K=xi_K, lambda_n=4.0 * (xi_KP / 3.0) ** 1.5, J=J, xi_KP=xi_KP)

    def params(self):
        return {"p": str(self.p), **super().params()}
