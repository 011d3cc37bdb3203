"""Solver drivers registered with the harness.

Each driver maps a read matrix to a decoded haplotype plus run statistics.
"rtr" runs the trust-region solver with a small number of restarts, keeping
the attempt with the lowest MEC (restarts need no ground truth, and MEC 0
cannot be improved, so it short-circuits).  "altmin" runs the alternating
least-squares baseline once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import TYPE_CHECKING

import numpy as np

from .altmin import AltMinConfig, altmin_rank1
from .errors import ParameterError
from .geometry import UnitVector, random_unit
from .objective import DEFAULT_EPSILON, HaplotypeObjective, ReadMatrix
from .pipeline import Haplotype, decode, mec
from .seeding import splitmix64
from .trustregion import RtrConfig, rtr_minimize

if TYPE_CHECKING:
    from .config_io import ExperimentConfig

__all__ = [
    "SolveOutcome",
    "spectral_initial_point",
    "solve_with_rtr",
    "solve_with_altmin",
    "METHODS",
    "run_method",
]

DEFAULT_RTR_ATTEMPTS = 3


@dataclass(frozen=True)
class SolveOutcome:
    haplotype: Haplotype
    mec: int
    iterations: int
    grad_norm: float
    attempts: int


def spectral_initial_point(reads: ReadMatrix) -> UnitVector:
    """Leading right-singular direction of the sampled matrix."""
    _, _, vt = np.linalg.svd(reads.sampled, full_matrices=False)
    return UnitVector.normalized(vt[0])


def solve_with_rtr(
    reads: ReadMatrix,
    cfg: RtrConfig | None = None,
    *,
    epsilon: float = DEFAULT_EPSILON,
    attempts: int = DEFAULT_RTR_ATTEMPTS,
    seed: int | None = None,
) -> SolveOutcome:
    """Best-of-``attempts`` trust-region solve, ranked by MEC.

    Attempt k draws its starting point from a generator seeded with
    splitmix64(seed + k); with ``spectral_init`` the first attempt starts
    from the spectral direction instead.  ``iterations`` sums the outer
    iterations of every attempt actually run; ``grad_norm`` belongs to the
    winning attempt.
    """
    if cfg is None:
        cfg = RtrConfig()
    if attempts < 1:
        raise ParameterError(f"attempts must be at least 1, got {attempts}")
    seed = cfg.seed if seed is None else seed
    if seed < 0:
        raise ParameterError(f"seed must be non-negative, got {seed}")

    objective = HaplotypeObjective(reads, epsilon)
    oracles = objective.oracles()

    best: SolveOutcome | None = None
    total_iterations = 0
    for attempt in range(attempts):
        if attempt == 0 and cfg.spectral_init:
            x0 = spectral_initial_point(reads)
        else:
            rng = np.random.default_rng(splitmix64(seed + attempt))
            x0 = random_unit(reads.n, rng)
        x_star, trace = rtr_minimize(oracles, x0, cfg)
        total_iterations += len(trace)
        est = decode(x_star)
        score = mec(reads, est)
        if best is None or score < best.mec:
            best = SolveOutcome(
                haplotype=est,
                mec=score,
                iterations=total_iterations,
                grad_norm=trace.final_grad_norm,
                attempts=attempt + 1,
            )
        if best.mec == 0:
            break
    return replace(best, iterations=total_iterations)


def solve_with_altmin(
    reads: ReadMatrix,
    cfg: AltMinConfig | None = None,
    *,
    seed: int | None = None,
) -> SolveOutcome:
    if cfg is None:
        cfg = AltMinConfig()
    if seed is not None:
        cfg = replace(cfg, seed=seed)
    result = altmin_rank1(reads, cfg)
    return SolveOutcome(
        haplotype=result.haplotype,
        mec=mec(reads, result.haplotype),
        iterations=result.sweeps,
        grad_norm=math.nan,
        attempts=1,
    )


def _run_rtr(reads: ReadMatrix, cfg: "ExperimentConfig", seed: int) -> SolveOutcome:
    return solve_with_rtr(
        reads, cfg.solver, epsilon=cfg.epsilon, attempts=cfg.rtr_attempts, seed=seed
    )


def _run_altmin(reads: ReadMatrix, cfg: "ExperimentConfig", seed: int) -> SolveOutcome:
    return solve_with_altmin(reads, cfg.altmin, seed=seed)


METHODS = {
    "rtr": _run_rtr,
    "altmin": _run_altmin,
}


def run_method(name: str, reads: ReadMatrix, cfg: "ExperimentConfig", seed: int) -> SolveOutcome:
    try:
        driver = METHODS[name]
    except KeyError:
        registered = ", ".join(sorted(METHODS))
        raise ParameterError(f"unknown method {name!r}; registered methods: {registered}") from None
    return driver(reads, cfg, seed)
