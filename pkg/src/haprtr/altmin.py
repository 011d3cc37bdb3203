"""Alternating least-squares rank-one completion baseline.

Fits u v^T to the observed entries by alternating exact coordinate-wise
least-squares updates

    u_i <- (sum_{j in Omega_i} M_ij v_j) / (sum_{j in Omega_i} v_j^2),
    v_j <- (sum_{i in Omega_j} M_ij u_i) / (sum_{i in Omega_j} u_i^2),

each of which cannot increase the masked residual ||P(M) - P(u v^T)||_F.
The decoded haplotype is sign(v) with the +1 convention at zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInputError, ParameterError
from .objective import ReadMatrix
from .pipeline import Haplotype

__all__ = ["AltMinConfig", "AltMinResult", "altmin_rank1"]


@dataclass(frozen=True)
class AltMinConfig:
    max_sweeps: int = 100
    tol: float = 1e-8
    seed: int = 0

    def __post_init__(self):
        if self.max_sweeps < 1:
            raise ParameterError(f"max_sweeps must be at least 1, got {self.max_sweeps}")
        if not (self.tol > 0.0):
            raise ParameterError(f"tol must be positive, got {self.tol}")
        if self.seed < 0:
            raise ParameterError(f"seed must be non-negative, got {self.seed}")


@dataclass(frozen=True, eq=False)
class AltMinResult:
    u: np.ndarray
    v: np.ndarray
    haplotype: Haplotype
    sweeps: int
    residual: float
    #: Masked residual after the initial factors and after every half-sweep.
    residual_history: tuple[float, ...]
    stalled_updates: int


def _masked_residual(A: np.ndarray, mask: np.ndarray, u: np.ndarray, v: np.ndarray) -> float:
    return float(np.linalg.norm((A - np.outer(u, v)) * mask))


def altmin_rank1(M: ReadMatrix, cfg: AltMinConfig | None = None) -> AltMinResult:
    """Alternate u- and v-updates until the residual change drops below tol.

    v starts uniform on the sphere (seeded); u starts at zero, so the first
    u-update defines it and the pre-sweep residual baseline is ||P(M)||_F.
    Convergence is checked after every half-sweep.  Coordinates whose
    update denominator is zero (rows or columns without observations) are
    left unchanged for that sweep and counted in ``stalled_updates``.
    """
    if cfg is None:
        cfg = AltMinConfig()
    if M.num_observed == 0:
        raise DegenerateInputError("matrix has no observed entries")

    A = M.sampled
    mask = M.mask.astype(np.float64)

    rng = np.random.default_rng(np.random.SeedSequence(cfg.seed))
    v = rng.standard_normal(M.n)
    v /= np.linalg.norm(v)
    u = np.zeros(M.m)

    stalled = 0
    sweeps = 0
    residual = _masked_residual(A, mask, u, v)
    history = [residual]

    def half_sweep_done(new_residual: float) -> bool:
        nonlocal residual
        done = abs(residual - new_residual) < cfg.tol
        residual = new_residual
        history.append(new_residual)
        return done

    for _ in range(cfg.max_sweeps):
        sweeps += 1

        den_u = mask @ (v * v)
        live = den_u > 0.0
        stalled += int((~live).sum())
        u = np.where(live, np.divide(A @ v, den_u, out=np.zeros_like(u), where=live), u)
        if half_sweep_done(_masked_residual(A, mask, u, v)):
            break

        den_v = mask.T @ (u * u)
        live = den_v > 0.0
        stalled += int((~live).sum())
        v = np.where(live, np.divide(A.T @ u, den_v, out=np.zeros_like(v), where=live), v)
        if half_sweep_done(_masked_residual(A, mask, u, v)):
            break

    est = Haplotype(np.where(v >= 0.0, 1, -1).astype(np.int8))
    return AltMinResult(
        u=u,
        v=v,
        haplotype=est,
        sweeps=sweeps,
        residual=residual,
        residual_history=tuple(history),
        stalled_updates=stalled,
    )
