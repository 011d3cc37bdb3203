"""Smoothed negative-L1 haplotype cost on the sphere.

With A = P_Omega(M) the sampled read matrix and a_i its rows, the cost is

    f(x) = -sum_i sqrt((a_i . x)^2 + eps),    eps > 0,

a smooth surrogate of -||A x||_1 whose minimizers over the sphere align
with the haplotype direction.  The module provides the Euclidean gradient

    Grad f(x) = -sum_i a_i (a_i . x) ((a_i . x)^2 + eps)^{-1/2},

the Riemannian gradient (I - x x^T) Grad f(x), a matrix-free Riemannian
Hessian-vector product

    Hess f(x)[xi] = (I - x x^T) H_E(x) xi - (x . Grad f(x)) xi,
    H_E(x) = -sum_i eps a_i a_i^T ((a_i . x)^2 + eps)^{-3/2},

and the Lipschitz-style diagnostic constants bounding gradient and
Hessian growth.  Heavy lifting goes through ``haprtr.kernels``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable, NamedTuple

import numpy as np

from . import kernels
from .errors import DimensionMismatchError, ParameterError
from .geometry import TangentVector, UnitVector, project_tangent

__all__ = [
    "DEFAULT_EPSILON",
    "ReadMatrix",
    "DiagnosticConstants",
    "HaplotypeObjective",
    "masked_row_dot",
    "cost",
    "euclidean_grad",
    "riemannian_grad",
    "hess_vec",
    "diagnostic_constants",
]

#: Default smoothing level: keeps the Hessian bound finite while staying
#: within m * sqrt(eps) = m * 1e-3 of the exact L1 objective.
DEFAULT_EPSILON = 1e-6


def check_epsilon(eps) -> float:
    eps = float(eps)
    if not np.isfinite(eps) or eps <= 0.0:
        raise ParameterError(f"epsilon must be a positive finite real, got {eps!r}")
    return eps


@dataclass(frozen=True, eq=False)
class ReadMatrix:
    """Observed SNP matrix: +-1 entries plus a boolean observation mask.

    Consumers never read unobserved entries; every numeric path goes
    through ``sampled``, where they are exactly zero.
    """

    entries: np.ndarray
    mask: np.ndarray

    def __post_init__(self):
        entries = np.asarray(self.entries)
        mask = np.asarray(self.mask, dtype=bool)
        if entries.ndim != 2:
            raise DimensionMismatchError(f"entries must be 2-D, got shape {entries.shape}")
        if mask.shape != entries.shape:
            raise DimensionMismatchError(
                f"mask shape {mask.shape} does not match entries shape {entries.shape}"
            )
        m, n = entries.shape
        if m < 1 or n < 2:
            raise DimensionMismatchError(f"need m >= 1 and n >= 2, got {m}x{n}")
        if not np.isin(entries, (-1, 1)).all():
            raise ValueError("entries must be +1 or -1")
        entries = entries.astype(np.int8, copy=True)
        entries.flags.writeable = False
        mask = mask.copy()
        mask.flags.writeable = False
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "mask", mask)

    @property
    def m(self) -> int:
        return self.entries.shape[0]

    @property
    def n(self) -> int:
        return self.entries.shape[1]

    @property
    def num_observed(self) -> int:
        return int(self.mask.sum())

    @cached_property
    def sampled(self) -> np.ndarray:
        """Dense P_Omega(M): observed entries pass through, the rest are 0."""
        a = np.ascontiguousarray(np.where(self.mask, self.entries, 0), dtype=np.float64)
        a.flags.writeable = False
        return a

    @cached_property
    def row_observed(self) -> np.ndarray:
        """Observations per row; equals ||a_i||_2^2 for +-1 entries."""
        counts = self.mask.sum(axis=1)
        counts.flags.writeable = False
        return counts


class DiagnosticConstants(NamedTuple):
    """Bound constants for the smoothed cost on a given read matrix.

    beta bounds the gradient's Lipschitz modulus (scales as 1/sqrt(eps)),
    beta_hess bounds the Hessian operator norm (scales as 1/eps), and
    beta_radial is the eps-free radial Lipschitz coefficient.
    """

    beta: float
    beta_hess: float
    beta_radial: float


def _check_point(M: ReadMatrix, x: UnitVector):
    if x.n != M.n:
        raise DimensionMismatchError(f"point has length {x.n}, matrix has {M.n} columns")


def masked_row_dot(M: ReadMatrix, i: int, x: UnitVector) -> float:
    """Observed-entry dot product of row i with x; 0 for fully masked rows."""
    if not 0 <= i < M.m:
        raise IndexError(f"row index {i} out of range for {M.m} rows")
    _check_point(M, x)
    return float(M.sampled[i] @ x.coords)


def cost(M: ReadMatrix, eps, x: UnitVector) -> float:
    """f(x) = -sum_i sqrt((a_i . x)^2 + eps); always <= -m sqrt(eps)."""
    eps = check_epsilon(eps)
    _check_point(M, x)
    f, _ = kernels.cost(M.sampled, x.coords, eps)
    return f


def euclidean_grad(M: ReadMatrix, eps, x: UnitVector) -> np.ndarray:
    """Gradient of the cost in the ambient space R^n."""
    eps = check_epsilon(eps)
    _check_point(M, x)
    _, _, g = kernels.cost_grad(M.sampled, x.coords, eps)
    return g


def riemannian_grad(M: ReadMatrix, eps, x: UnitVector) -> TangentVector:
    """Tangent-space gradient (I - x x^T) Grad f(x)."""
    return project_tangent(x, euclidean_grad(M, eps, x))


def hess_vec(M: ReadMatrix, eps, x: UnitVector, xi: TangentVector) -> TangentVector:
    """Riemannian Hessian-vector product at x applied to tangent xi."""
    eps = check_epsilon(eps)
    _check_point(M, x)
    if not (xi.base is x or xi.base == x):
        raise DimensionMismatchError("tangent vector is not rooted at the evaluation point")
    A = M.sampled
    _, r, g = kernels.cost_grad(A, x.coords, eps)
    he = kernels.hess_apply(A, r, xi.dir, eps)
    return project_tangent(x, he - float(x.coords @ g) * xi.dir)


def diagnostic_constants(M: ReadMatrix, eps) -> DiagnosticConstants:
    """Evaluate the three bound constants for this matrix and smoothing."""
    eps = check_epsilon(eps)
    k = M.row_observed.astype(np.float64)
    total = float(k.sum())
    n = float(M.n)
    beta = n * total / np.sqrt(eps)
    beta_hess = (n * n / eps) * total * total
    beta_radial = float((k ** 1.5 + k).sum())
    return DiagnosticConstants(float(beta), float(beta_hess), beta_radial)


class HaplotypeObjective:
    """Bundles a read matrix with a smoothing level and caches per-point work.

    The trust-region solver evaluates the cost, the gradient, and many
    Hessian products at the same iterate; the cache keys on point object
    identity so all of those share one residual pass.  Two slots cover the
    solver's current-iterate/candidate access pattern.
    """

    def __init__(self, reads: ReadMatrix, epsilon=DEFAULT_EPSILON):
        self.reads = reads
        self.epsilon = check_epsilon(epsilon)
        self._A = reads.sampled
        self._cache: list = []

    def _state(self, x: UnitVector) -> dict:
        for i, (point, state) in enumerate(self._cache):
            if point is x:
                if i:
                    self._cache.insert(0, self._cache.pop(i))
                return state
        state = {}
        self._cache.insert(0, (x, state))
        del self._cache[2:]
        return state

    def _ensure_grad(self, x: UnitVector) -> dict:
        state = self._state(x)
        if "egrad" not in state:
            f, r, g = kernels.cost_grad(self._A, x.coords, self.epsilon)
            state["f"] = f
            state["r"] = r
            state["egrad"] = g
            state["x_dot_egrad"] = float(x.coords @ g)
        return state

    def cost(self, x: UnitVector) -> float:
        state = self._state(x)
        if "f" not in state:
            f, r = kernels.cost(self._A, x.coords, self.epsilon)
            state["f"] = f
            state["r"] = r
        return state["f"]

    def euclidean_grad(self, x: UnitVector) -> np.ndarray:
        return self._ensure_grad(x)["egrad"]

    def riemannian_grad(self, x: UnitVector) -> TangentVector:
        state = self._ensure_grad(x)
        if "grad" not in state:
            state["grad"] = project_tangent(x, state["egrad"])
        return state["grad"]

    def hess_vec(self, x: UnitVector, xi: TangentVector) -> TangentVector:
        state = self._ensure_grad(x)
        he = kernels.hess_apply(self._A, state["r"], xi.dir, self.epsilon)
        return project_tangent(x, he - state["x_dot_egrad"] * xi.dir)

    def oracles(self) -> tuple[Callable, Callable, Callable]:
        """(cost, gradient, Hessian-product) triple for the solver."""
        return self.cost, self.riemannian_grad, self.hess_vec

    def diagnostic_constants(self) -> DiagnosticConstants:
        return diagnostic_constants(self.reads, self.epsilon)
