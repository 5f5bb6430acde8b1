# core/model.py
"""
Observation model and shared value types: samples, hyperslabs, support
tuples and the algorithm parameter bundle.

Vectors are float64 numpy arrays. Support indices are 0-based internally;
``SupportTuple.one_based()`` gives the form used in reports.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np

if TYPE_CHECKING:
    from thresholding.base import ShrinkageRule


class DimensionMismatchError(ValueError):
    """Raised when two vectors (or a vector and a dimension) disagree in length."""


def as_vector(a, name: str = "vector") -> np.ndarray:
    """Return ``a`` as a 1-d float64 array."""
    arr = np.asarray(a, dtype=float)
    if arr.ndim != 1:
        raise DimensionMismatchError(f"{name} must be 1-d, got shape {arr.shape}")
    return arr


def check_length(a: np.ndarray, L: int, name: str = "vector"):
    if a.shape[0] != L:
        raise DimensionMismatchError(f"{name} has length {a.shape[0]}, expected {L}")


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=float, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Sample:
    """One training pair (u_n, y_n) observed at time n."""
    u: np.ndarray
    y: float
    n: int = 0

    def __post_init__(self):
        u = as_vector(self.u, "u")
        if u.shape[0] < 2:
            raise DimensionMismatchError("input vector length must be at least 2")
        if not np.any(u):
            raise ValueError("input vector u must have a nonzero component")
        if self.n < 0:
            raise ValueError("time index must be non-negative")
        object.__setattr__(self, "u", _frozen(u))
        object.__setattr__(self, "y", float(self.y))

    @property
    def dim(self) -> int:
        return self.u.shape[0]


@dataclass(frozen=True, eq=False)
class Hyperslab:
    """The closed set {a : |u^T a - y| <= epsilon}.

    ``norm_sq`` caches ||u||^2 once per slab.
    """
    u: np.ndarray
    y: float
    epsilon: float
    norm_sq: float = field(init=False)

    def __post_init__(self):
        u = as_vector(self.u, "u")
        if self.epsilon < 0:
            raise ValueError(f"hyperslab tolerance must be >= 0, got {self.epsilon}")
        norm_sq = float(u @ u)
        if norm_sq == 0.0:
            raise ValueError("hyperslab needs a nonzero u vector")
        object.__setattr__(self, "u", _frozen(u))
        object.__setattr__(self, "y", float(self.y))
        object.__setattr__(self, "epsilon", float(self.epsilon))
        object.__setattr__(self, "norm_sq", norm_sq)

    @classmethod
    def from_sample(cls, sample: Sample, epsilon: float) -> "Hyperslab":
        if epsilon < 0:
            raise ValueError(f"hyperslab tolerance must be >= 0, got {epsilon}")
        # Sample already holds a frozen, nonzero u
        slab = object.__new__(cls)
        slab.__dict__.update(u=sample.u, y=sample.y, epsilon=float(epsilon), norm_sq=float(sample.u @ sample.u))
        return slab

    @property
    def dim(self) -> int:
        return self.u.shape[0]

    def residual(self, a: np.ndarray) -> float:
        """u^T a - y."""
        return float(self.u @ a) - self.y

    def contains(self, a) -> bool:
        a = as_vector(a)
        check_length(a, self.dim)
        return abs(self.residual(a)) <= self.epsilon


@dataclass(frozen=True, eq=False)
class SupportTuple:
    """Strictly ascending index tuple J identifying the coordinate subspace M_J.

    The empty tuple (K = 0) is allowed and is the support of the zero vector.
    """
    indices: np.ndarray
    L: int

    def __post_init__(self):
        idx = np.asarray(self.indices, dtype=np.intp).reshape(-1)
        if self.L < 1:
            raise ValueError(f"ambient dimension must be positive, got {self.L}")
        if idx.size > self.L:
            raise ValueError(f"support of size {idx.size} exceeds dimension {self.L}")
        if idx.size and (idx[0] < 0 or idx[-1] >= self.L):
            raise ValueError(f"support indices out of range for dimension {self.L}")
        if idx.size > 1 and np.any(np.diff(idx) <= 0):
            raise ValueError("support indices must be strictly ascending")
        idx = idx.copy()
        idx.setflags(write=False)
        object.__setattr__(self, "indices", idx)

    @classmethod
    def from_one_based(cls, indices, L: int) -> "SupportTuple":
        return cls(np.asarray(indices, dtype=np.intp) - 1, L)

    @classmethod
    def from_sorted(cls, indices: np.ndarray, L: int) -> "SupportTuple":
        """Wrap indices that are already strictly ascending and inside [0, L)."""
        idx = np.asarray(indices, dtype=np.intp)
        idx.setflags(write=False)
        support = object.__new__(cls)
        support.__dict__.update(indices=idx, L=L)
        return support

    @property
    def K(self) -> int:
        return int(self.indices.size)

    def one_based(self) -> tuple[int, ...]:
        return tuple(int(i) + 1 for i in self.indices)

    def mask(self) -> np.ndarray:
        m = np.zeros(self.L, dtype=bool)
        m[self.indices] = True
        return m

    def issubset(self, other: "SupportTuple") -> bool:
        return bool(np.all(np.isin(self.indices, other.indices)))

    def __eq__(self, other):
        if not isinstance(other, SupportTuple):
            return NotImplemented
        return self.L == other.L and np.array_equal(self.indices, other.indices)

    def __hash__(self):
        return hash((self.L, self.one_based()))

    def __len__(self):
        return self.K

    def __repr__(self):
        return f"SupportTuple{self.one_based()}"


def in_subspace(a, J: SupportTuple) -> bool:
    """True iff every component of ``a`` outside J is exactly zero."""
    a = as_vector(a)
    check_length(a, J.L)
    outside = ~J.mask()
    return not np.any(a[outside])


def support(a) -> SupportTuple:
    """Indices of all exactly-nonzero components, ascending."""
    a = as_vector(a)
    return SupportTuple(np.flatnonzero(a), a.shape[0])


@dataclass(frozen=True)
class AlgoParams:
    """Parameters of one APGT run.

    K: target sparsity, q: window length, eps_prime: relaxation floor,
    mu_scale: mu_n = mu_scale * M_n, delta: strict-shrinkage margin.
    """
    K: int
    q: int
    rule: "ShrinkageRule"
    eps_prime: float = 0.1
    mu_scale: float = 1.0
    delta: float = 1e-6

    def __post_init__(self):
        if self.K < 1:
            raise ValueError(f"K must be >= 1, got {self.K}")
        if self.q < 1:
            raise ValueError(f"window q must be >= 1, got {self.q}")
        if not 0.0 < self.eps_prime <= 1.0:
            raise ValueError(f"eps_prime must lie in (0, 1], got {self.eps_prime}")
        if not self.eps_prime <= self.mu_scale <= 2.0 - self.eps_prime:
            raise ValueError(
                f"mu_scale must lie in [{self.eps_prime}, {2.0 - self.eps_prime}], got {self.mu_scale}"
            )
        if self.delta <= 0:
            raise ValueError(f"delta must be > 0, got {self.delta}")

    def validate(self, L: int):
        """Checks that need the ambient dimension."""
        if L < 2:
            raise DimensionMismatchError(f"ambient dimension must be >= 2, got {L}")
        if not 1 <= self.K <= L - 1:
            raise ValueError(f"K must lie in [1, {L - 1}] for L={L}, got {self.K}")
        self.rule.validate(L, self.K)
