# engine/apgt.py
"""
Adaptive projection-based generalized thresholding (APGT).

One step, for the window of the last q hyperslabs:

    I_n  = slabs of the window that a_n violates
    P_i  = projection of a_n onto slab i, uniform weights w_i = 1/|I_n|
    M_n  = sum w_i ||P_i - a_n||^2 / ||sum w_i P_i - a_n||^2   (1 if the denominator vanishes)
    a_n+1 = T_GT(a_n + mu_n (sum w_i P_i - a_n)),   mu_n = mu_scale * M_n
    a_n+1 = T_GT(a_n)                                when I_n is empty

States are immutable: ``step`` takes a state and returns a new one. The
window is also kept stacked row-wise (``WindowStack``) so a step runs on
whole arrays; pushing a slab copies the stack rather than editing it.
"""

from dataclasses import dataclass, field

import numpy as np

from core.model import AlgoParams, Hyperslab, Sample, as_vector, check_length
from thresholding.gt import threshold
from thresholding.support import GtContext

# ||sum w_i P_i - a_n|| at or below this counts as zero
DEGENERATE_NORM = 1e-14


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=float, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class WindowStack:
    """Window slabs stacked oldest first.

    ``U`` is (m, L); ``meta`` is (3, m) with rows y, epsilon and ||u||^2.
    """
    U: np.ndarray
    meta: np.ndarray

    def __post_init__(self):
        self.U.setflags(write=False)
        self.meta.setflags(write=False)

    @property
    def y(self) -> np.ndarray:
        return self.meta[0]

    @property
    def eps(self) -> np.ndarray:
        return self.meta[1]

    @property
    def norm_sq(self) -> np.ndarray:
        return self.meta[2]

    @classmethod
    def from_slabs(cls, window, L: int) -> "WindowStack":
        if not window:
            return cls(np.empty((0, L)), np.empty((3, 0)))
        return cls(
            np.stack([s.u for s in window]),
            np.array([[s.y for s in window], [s.epsilon for s in window], [s.norm_sq for s in window]]),
        )

    def push(self, slab: Hyperslab, q: int) -> "WindowStack":
        """A new stack with ``slab`` appended and only the newest q rows kept."""
        drop = max(0, self.meta.shape[1] + 1 - q)
        column = np.array([[slab.y], [slab.epsilon], [slab.norm_sq]])
        return WindowStack(
            np.concatenate((self.U[drop:], slab.u[None, :])),
            np.concatenate((self.meta[:, drop:], column), axis=1),
        )


@dataclass(frozen=True, eq=False)
class ApgtState:
    """Estimate a_n, the sliding window (oldest first) and the run parameters.

    ``window_start`` is the time index of ``window[0]``. ``stack`` is derived
    from ``window`` and never passed in.
    """
    a: np.ndarray
    params: AlgoParams
    window: tuple = ()
    n: int = 0
    window_start: int = 0
    stack: WindowStack = field(default=None, init=False, repr=False)

    def __post_init__(self):
        a = as_vector(self.a, "a")
        self.params.validate(a.shape[0])
        if len(self.window) > self.params.q:
            raise ValueError(f"window holds {len(self.window)} slabs, q={self.params.q}")
        for slab in self.window:
            check_length(slab.u, a.shape[0], "slab u")
        object.__setattr__(self, "a", _frozen(a))
        object.__setattr__(self, "window", tuple(self.window))
        object.__setattr__(self, "stack", WindowStack.from_slabs(self.window, a.shape[0]))

    @classmethod
    def initial(cls, L: int, params: AlgoParams, a0=None) -> "ApgtState":
        a = np.zeros(L) if a0 is None else a0
        return cls(a=a, params=params)

    def evolve(self, **changes) -> "ApgtState":
        """Copy with ``changes`` applied; the caller keeps every field consistent."""
        new = object.__new__(ApgtState)
        new.__dict__.update(self.__dict__, **changes)
        return new

    @property
    def L(self) -> int:
        return self.a.shape[0]

    @property
    def window_indices(self) -> range:
        return range(self.window_start, self.window_start + len(self.window))


@dataclass(frozen=True, eq=False)
class StepReport:
    """Everything one step computed.

    ``active`` holds time indices of the violated slabs, ``pre_gt`` the
    vector handed to T_GT. ``probes`` is filled by the runner.
    """
    n: int
    active: tuple
    weights: np.ndarray
    Mn: float
    mu: float
    aggregate: np.ndarray
    pre_gt: np.ndarray
    a_next: np.ndarray
    ctx: GtContext
    probes: dict = field(default_factory=dict)


def push_sample(state: ApgtState, sample: Sample, epsilon_n: float) -> ApgtState:
    """Append S_n[eps_n] to the window, evicting the oldest slab when full."""
    check_length(sample.u, state.L, "sample u")
    slab = Hyperslab.from_sample(sample, epsilon_n)
    q = state.params.q
    window = (state.window + (slab,))[-q:]
    return state.evolve(
        window=window,
        window_start=state.n - len(window) + 1,
        stack=state.stack.push(slab, q),
    )


def window_residuals(a: np.ndarray, U: np.ndarray, y: np.ndarray) -> np.ndarray:
    """u_i^T a - y_i for every slab; only the support of a is touched when a is sparse."""
    supp = np.flatnonzero(a)
    if 2 * supp.size < a.shape[0]:
        return U[:, supp] @ a[supp] - y
    return U @ a - y


def active_set(state: ApgtState) -> tuple:
    """Time indices of the window slabs that a_n lies strictly outside of."""
    stack = state.stack
    res = window_residuals(state.a, stack.U, stack.y)
    return tuple((np.flatnonzero(np.abs(res) > stack.eps) + state.window_start).tolist())


def _bound_from_moments(spread: float, gap: np.ndarray) -> float:
    # spread = sum w_i ||P_i - a||^2, gap = sum w_i P_i - a
    den = float(gap @ gap)
    if np.sqrt(den) <= DEGENERATE_NORM:
        return 1.0
    return spread / den


def extrapolation_Mn(a, projections, weights) -> float:
    """Extrapolation bound M_n >= 1 for the weighted projection aggregate."""
    a = as_vector(a, "a")
    P = np.atleast_2d(np.asarray(projections, dtype=float))
    w = as_vector(weights, "weights")
    if P.shape[0] == 0 or P.shape[0] != w.shape[0]:
        raise ValueError(f"need matching, non-empty projections and weights, got {P.shape[0]} and {w.shape[0]}")
    if np.any(w < 0) or abs(w.sum() - 1.0) > 1e-12:
        raise ValueError("weights must be non-negative and sum to 1")
    check_length(P[0], a.shape[0], "projection")

    diffs = P - a
    return _bound_from_moments(float(w @ np.einsum("ij,ij->i", diffs, diffs)), w @ diffs)


def advance(pushed: ApgtState) -> tuple[ApgtState, StepReport]:
    """Compute a_n+1 from a state whose window already holds S_n."""
    params = pushed.params
    a = pushed.a
    stack = pushed.stack
    res = window_residuals(a, stack.U, stack.y)
    hit = np.flatnonzero(np.abs(res) > stack.eps)

    if hit.size:
        r = res[hit]
        eps = stack.eps[hit]
        # P_i = a + coef_i u_i, so ||P_i - a||^2 = coef_i^2 ||u_i||^2
        coef = np.where(r > 0, eps - r, -eps - r) / stack.norm_sq[hit]
        weights = np.full(hit.size, 1.0 / hit.size)
        mixing = np.zeros(stack.meta.shape[1])
        mixing[hit] = weights * coef
        gap = mixing @ stack.U
        Mn = _bound_from_moments(float(weights @ (coef * coef * stack.norm_sq[hit])), gap)
        mu = params.mu_scale * Mn
        aggregate = a + gap
        pre_gt = a + mu * gap
    else:
        weights = np.empty(0)
        Mn = 1.0
        mu = params.mu_scale
        aggregate = a.copy()
        pre_gt = a.copy()

    a_next, ctx = threshold(pre_gt, params)
    a_next.setflags(write=False)
    report = StepReport(
        n=pushed.n,
        active=tuple((hit + pushed.window_start).tolist()),
        weights=weights,
        Mn=Mn,
        mu=mu,
        aggregate=aggregate,
        pre_gt=pre_gt,
        a_next=a_next,
        ctx=ctx,
    )
    return pushed.evolve(a=a_next, n=pushed.n + 1), report


def step(state: ApgtState, new_sample: Sample, epsilon_n: float) -> tuple[ApgtState, StepReport]:
    """Consume one sample: push its hyperslab, then move to a_n+1."""
    return advance(push_sample(state, new_sample, epsilon_n))
