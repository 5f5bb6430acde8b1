# thresholding/support.py

from dataclasses import dataclass
from typing import Optional

import numpy as np

from core.model import SupportTuple, as_vector


def _check_k(K: int, L: int):
    if not 1 <= K <= L:
        raise ValueError(f"K must lie in [1, {L}], got {K}")


def _kth_largest(mags: np.ndarray, K: int) -> float:
    # partial selection keeps this O(L)
    L = mags.shape[0]
    return float(np.partition(mags, L - K)[L - K])


def top_k_with_xi(x: np.ndarray, K: int) -> tuple[SupportTuple, float]:
    """(J_x^(K), xi_x^(K)) for a float vector x with 1 <= K <= len(x)."""
    L = x.shape[0]
    mags = np.abs(x)
    xi = _kth_largest(mags, K)
    above = np.flatnonzero(mags > xi)
    ties = np.flatnonzero(mags == xi)[: K - above.size]
    return SupportTuple.from_sorted(np.sort(np.concatenate([above, ties])), L), xi


def top_k_support(x, K: int) -> SupportTuple:
    """Indices of the K largest-magnitude components of x.

    Ties at the K-th magnitude go to the smallest indices. The result is
    ascending and deterministic.
    """
    x = as_vector(x, "x")
    _check_k(K, x.shape[0])
    return top_k_with_xi(x, K)[0]


def xi_value(x, K: int) -> float:
    """Smallest magnitude among the K largest (xi_x^(K))."""
    x = as_vector(x, "x")
    _check_k(K, x.shape[0])
    return _kth_largest(np.abs(x), K)


@dataclass(frozen=True, eq=False)
class GtContext:
    """What one GT application saw: kept support J, xi values and lambda_n.

    ``xi_KP`` is only set for the adaptive bridge rule.
    """
    xi_K: float
    lambda_n: float
    J: SupportTuple
    xi_KP: Optional[float] = None

    def __post_init__(self):
        if self.xi_KP is not None and self.xi_KP > self.xi_K:
            raise ValueError(f"xi_KP={self.xi_KP} exceeds xi_K={self.xi_K}")
