# thresholding/base.py

from abc import ABC, abstractmethod
from typing import ClassVar

import numpy as np

from core.model import SupportTuple
from thresholding.support import GtContext, xi_value


def as_output(result: np.ndarray, tau):
    """Scalars in, float out; arrays in, arrays out."""
    if np.ndim(tau) == 0:
        return float(result)
    return result


class ShrinkageRule(ABC):
    """A ``shr`` function for the generalized thresholding operator.

    Concrete rules are frozen dataclasses with at least ``lam`` and
    ``adaptive`` fields. New rules (MC+, garrote, ...) only need ``shrink``
    and ``lambda_at``; rules whose lambda_n needs more than xi_K override
    ``adaptive_lambda`` and ``context``.
    """

    name: ClassVar[str] = ""
    lam: float
    adaptive: bool

    @abstractmethod
    def shrink(self, tau, ctx: GtContext, delta: float):
        """Apply the rule to the components outside the kept support."""

    def lambda_at(self, xi_K: float) -> float:
        """Adaptive lambda_n as a function of xi_K."""
        raise NotImplementedError(f"{self.name}: no adaptive lambda from xi_K")

    def adaptive_lambda(self, x: np.ndarray, K: int) -> float:
        """lambda_n recomputed from the current vector."""
        return self.lambda_at(xi_value(x, K))

    def validate(self, L: int, K: int):
        if self.lam < 0:
            raise ValueError(f"{self.name}: lambda must be >= 0, got {self.lam}")

    def context(self, x: np.ndarray, J: SupportTuple, xi_K: float, K: int) -> GtContext:
        lambda_n = self.lambda_at(xi_K) if self.adaptive else self.lam
        return GtContext(xi_K=xi_K, lambda_n=lambda_n, J=J)

    def params(self) -> dict:
        """Rule parameters as written in a rule token."""
        out = {"adaptive": "true" if self.adaptive else "false"}
        if not self.adaptive:
            out["lambda"] = repr(float(self.lam))
        return out

    def token(self) -> str:
        body = ",".join(f"{k}={v}" for k, v in self.params().items())
        return f"{self.name}:{body}"
