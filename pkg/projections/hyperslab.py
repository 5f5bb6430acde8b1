# projections/hyperslab.py

import numpy as np

from core.model import Hyperslab, as_vector, check_length


def _prepare(a, S: Hyperslab) -> np.ndarray:
    a = as_vector(a, "a")
    check_length(a, S.dim, "a")
    return a


def projection_coefficient(residual: float, S: Hyperslab) -> float:
    """Scalar c with P_S(a) = a + c * u, given residual = u^T a - y."""
    if residual > S.epsilon:
        return (S.epsilon - residual) / S.norm_sq
    if residual < -S.epsilon:
        return (-S.epsilon - residual) / S.norm_sq
    return 0.0


def project_hyperslab(a, S: Hyperslab) -> np.ndarray:
    """Metric projection of a onto S; a is returned unchanged (as a copy) when inside."""
    a = _prepare(a, S)
    c = projection_coefficient(S.residual(a), S)
    if c == 0.0:
        return a.copy()
    return a + c * S.u


def distance_hyperslab(a, S: Hyperslab) -> float:
    """d(a, S) = max{0, |u^T a - y| - epsilon} / ||u||."""
    a = _prepare(a, S)
    excess = abs(S.residual(a)) - S.epsilon
    return max(0.0, excess) / np.sqrt(S.norm_sq)


def is_active(a, S: Hyperslab) -> bool:
    """True iff a lies strictly outside S (the boundary is inside)."""
    a = _prepare(a, S)
    return abs(S.residual(a)) > S.epsilon
