# engine/oracles.py
"""
Independent checks on APGT steps.

- ``step_theta_form``: the same update written as a relaxed subgradient
  projection on the convex function
      Theta_n(a) = (1/L_n) sum_i w_i d(a_n, S_i) d(a, S_i),
  built from per-slab distances and projections only.
- ``probe_omega_distance``: d(a_n, Omega_n) where
  Omega_n = M_J(a_n) intersected with every active slab. An LP certifies
  the set is nonempty, then the least-distance problem
      min ||x||  s.t.  G x >= h
  is solved exactly through its NNLS dual (Lawson-Hanson) and polished on
  the constraints it found active.
"""

import logging

import numpy as np
from scipy.optimize import linprog, nnls

from core.model import SupportTuple, as_vector
from engine.apgt import ApgtState
from projections.hyperslab import distance_hyperslab, is_active, project_hyperslab
from thresholding.gt import apply_gt
from thresholding.support import top_k_support

logger = logging.getLogger(__name__)
logger.setLevel(logging.INFO)
handler = logging.StreamHandler()
formatter = logging.Formatter('[%(filename)s:%(lineno)d] %(levelname)s: %(message)s')
handler.setFormatter(formatter)
logger.addHandler(handler)

# slab violation accepted in the least-distance answer, relative to the bound scale
FEASIBILITY_TOL = 1e-9


class OracleConvergenceError(RuntimeError):
    """The least-distance oracle could not produce a feasible answer."""


def theta_form_pre_image(state: ApgtState) -> np.ndarray:
    """The vector handed to T_GT, built through the subgradient-projection form.

    The window must already hold S_n.
    """
    if not state.window:
        raise ValueError("theta form needs a populated window")
    a = state.a
    active = [s for s in state.window if is_active(a, s)]
    if not active:
        return a.copy()

    w = 1.0 / len(active)
    dists = np.array([distance_hyperslab(a, s) for s in active])
    L_n = w * dists.sum()
    theta = w * float(dists @ dists) / L_n
    subgrad = sum(w * (a - project_hyperslab(a, s)) for s in active) / L_n
    norm_sq = float(subgrad @ subgrad)
    if norm_sq == 0.0:
        return a.copy()

    # lambda_n = mu_n / M_n
    lam = state.params.mu_scale
    return a - lam * (theta / norm_sq) * subgrad


def step_theta_form(state: ApgtState) -> np.ndarray:
    """a_n+1 through the subgradient-projection form (window must hold S_n)."""
    return apply_gt(theta_form_pre_image(state), state.params)[0]


def omega_set(state: ApgtState) -> tuple[SupportTuple, list]:
    """(J_{a_n}^(K), active slabs) describing Omega_n."""
    J = top_k_support(state.a, state.params.K)
    slabs = [s for s in state.window if is_active(state.a, s)]
    return J, slabs


def _feasible(U: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> bool:
    k = U.shape[1]
    res = linprog(
        c=np.zeros(k),
        A_ub=np.vstack([U, -U]),
        b_ub=np.concatenate([hi, -lo]),
        bounds=[(None, None)] * k,
        method="highs",
    )
    if res.status == 0:
        return True
    if res.status == 2:
        return False
    raise OracleConvergenceError(f"feasibility LP ended with status {res.status}: {res.message}")


def _least_distance(G: np.ndarray, h: np.ndarray) -> np.ndarray:
    """Minimum-norm x with G x >= h."""
    scale = max(1.0, float(np.max(np.abs(h))))
    E = np.vstack([G.T, h[None, :] / scale])
    f = np.zeros(E.shape[0])
    f[-1] = 1.0
    try:
        u, _ = nnls(E, f, maxiter=50 * E.shape[1])
    except RuntimeError as e:
        raise OracleConvergenceError(f"NNLS dual did not terminate: {e}") from e
    r = E @ u - f
    if abs(r[-1]) <= np.finfo(float).eps:
        raise OracleConvergenceError("NNLS dual reports no feasible point")
    x = -scale * r[:-1] / r[-1]

    tol = FEASIBILITY_TOL * scale
    active = u > 0
    if np.any(active):
        polished = np.linalg.lstsq(G[active], h[active], rcond=None)[0]
        if np.all(G @ polished >= h - tol):
            return polished
    if np.all(G @ x >= h - tol):
        return x
    raise OracleConvergenceError(f"least-distance answer violates a slab by {float(np.max(h - G @ x)):.3e}")


def distance_to_omega(point, indices, slabs, check_feasible: bool = True) -> float:
    """Distance from point to M_indices intersected with every slab; inf if empty.

    Pass ``check_feasible=False`` only when the set is already known to be nonempty.
    """
    point = as_vector(point, "point")
    idx = np.asarray(indices, dtype=np.intp)
    inside = np.zeros(point.shape[0], dtype=bool)
    inside[idx] = True
    outside_sq = float(point[~inside] @ point[~inside])

    if not slabs:
        return float(np.sqrt(outside_sq))

    lo = np.array([s.y - s.epsilon for s in slabs])
    hi = np.array([s.y + s.epsilon for s in slabs])
    if idx.size == 0:
        # Omega is {0} or empty
        return float(np.sqrt(outside_sq)) if np.all((lo <= 0) & (hi >= 0)) else float("inf")

    U = np.stack([s.u[idx] for s in slabs])
    if check_feasible and not _feasible(U, lo, hi):
        return float("inf")
    # b = c + x inside the subspace: lo <= U (c + x) <= hi
    c = point[idx]
    Uc = U @ c
    x = _least_distance(np.vstack([U, -U]), np.concatenate([lo - Uc, Uc - hi]))
    return float(np.sqrt(outside_sq + float(x @ x)))


def probe_omega_distance(state: ApgtState, max_dim: int = 64, max_window: int = 8) -> float:
    """d(a_n, Omega_n); inf when the oracle certifies Omega_n is empty."""
    if state.L > max_dim or state.params.q > max_window:
        raise ValueError(
            f"omega-distance probe is limited to L <= {max_dim}, q <= {max_window} "
            f"(got L={state.L}, q={state.params.q})"
        )
    J, slabs = omega_set(state)
    try:
        return distance_to_omega(state.a, J.indices, slabs)
    except OracleConvergenceError as e:
        logger.error(f"❌ Omega oracle failed at n={state.n}: {e}")
        raise
