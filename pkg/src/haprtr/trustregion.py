"""Riemannian trust-region solver on the sphere.

The outer loop minimizes a quadratic model of the cost in the tangent
space at the current iterate, inside a radius that grows and shrinks with
the model-fit ratio

    rho_k = (f(x_k) - f(R_x(eta_k))) / (mhat(0) - mhat(eta_k)),

and maps accepted steps back to the sphere with the normalization
retraction.  Subproblems are solved by Steihaug-Toint truncated conjugate
gradients, which delivers at least half of the Cauchy model decrease

    mhat(0) - mhat(eta) >= 1/2 ||g|| min(Delta, ||g|| / ||H||)

at every iteration; together with radius management this drives the
gradient norm to zero on smooth bounded costs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .errors import NumericFailureError, ParameterError
from .geometry import TangentVector, UnitVector, retract

__all__ = [
    "RtrConfig",
    "RtrIteration",
    "RtrTrace",
    "SubproblemResult",
    "solve_subproblem",
    "rtr_minimize",
]

# Relative floor below which a model decrease is treated as numerically
# zero and the step rejected, sidestepping a 0/0 in the rho ratio.
_MODEL_DECREASE_FLOOR = 1e-15


@dataclass(frozen=True)
class RtrConfig:
    """Trust-region parameters.

    Radius defaults are sized to the sphere (geodesic diameter pi); the
    acceptance threshold rho_prime must sit in [0, 0.25) and the initial
    radius strictly inside (0, delta_bar).  ``seed`` feeds initial-point
    sampling in the drivers; the solver itself draws no randomness.
    """

    delta_bar: float = math.pi
    delta0: float = math.pi / 8.0
    rho_prime: float = 0.1
    grad_tol: float = 1e-6
    max_outer: int = 500
    tcg_kappa: float = 0.1
    tcg_theta: float = 1.0
    seed: int = 0
    spectral_init: bool = False

    def __post_init__(self):
        if not (self.delta_bar > 0.0):
            raise ParameterError(f"delta_bar must be positive, got {self.delta_bar}")
        if not (0.0 < self.delta0 < self.delta_bar):
            raise ParameterError(
                f"delta0 must lie in (0, delta_bar), got {self.delta0} with delta_bar {self.delta_bar}"
            )
        if not (0.0 <= self.rho_prime < 0.25):
            raise ParameterError(f"rho_prime must lie in [0, 0.25), got {self.rho_prime}")
        if not (self.grad_tol > 0.0):
            raise ParameterError(f"grad_tol must be positive, got {self.grad_tol}")
        if self.max_outer < 1:
            raise ParameterError(f"max_outer must be at least 1, got {self.max_outer}")
        if not (0.0 < self.tcg_kappa < 1.0):
            raise ParameterError(f"tcg_kappa must lie in (0, 1), got {self.tcg_kappa}")
        if not (self.tcg_theta > 0.0):
            raise ParameterError(f"tcg_theta must be positive, got {self.tcg_theta}")


@dataclass(frozen=True)
class RtrIteration:
    """One outer iteration: model fit, radius, step, and tCG diagnostics."""

    f: float
    grad_norm: float
    rho: float
    delta: float
    step_norm: float
    model_decrease: float
    accepted: bool
    inner_iterations: int
    stop_reason: str


@dataclass
class RtrTrace:
    """Per-iteration history of a solver run."""

    iterations: list[RtrIteration] = field(default_factory=list)
    final_grad_norm: float = math.nan
    final_cost: float = math.nan
    converged: bool = False
    stop_reason: str = ""

    def __len__(self):
        return len(self.iterations)

    def accepted_costs(self) -> list[float]:
        """Cost at the start of each accepted iteration, plus the final cost."""
        values = [it.f for it in self.iterations if it.accepted]
        values.append(self.final_cost)
        return values


class SubproblemResult(NamedTuple):
    step: TangentVector
    model_decrease: float
    hit_boundary: bool
    inner_iterations: int
    stop_reason: str


def _boundary_tau(eta: np.ndarray, d: np.ndarray, delta: float) -> float:
    """Positive root of ||eta + tau d|| = delta (requires ||eta|| < delta)."""
    dd = float(d @ d)
    ed = float(eta @ d)
    ee = float(eta @ eta)
    disc = max(ed * ed + dd * (delta * delta - ee), 0.0)
    return (-ed + math.sqrt(disc)) / dd


def solve_subproblem(
    grad: TangentVector,
    hess_op: Callable[[TangentVector], TangentVector],
    delta: float,
    cfg: RtrConfig,
) -> SubproblemResult:
    """Steihaug-Toint truncated CG for the trust-region subproblem.

    Minimizes <g, eta> + 1/2 <H[eta], eta> over ||eta|| <= delta in the
    tangent space at ``grad.base``.  Stops on the residual target
    ||r_j|| <= ||r_0|| min(kappa, ||r_0||^theta), on negative curvature
    (step to the boundary), or when an iterate would leave the radius
    (clip to the boundary).  At most n - 1 inner iterations, the tangent
    space dimension.  A zero gradient returns the zero step.
    """
    if not (delta > 0.0):
        raise ParameterError(f"radius must be positive, got {delta}")
    x = grad.base
    g = grad.dir
    n = g.size

    apply_h = lambda arr: hess_op(TangentVector(x, arr)).dir  # noqa: E731

    eta = np.zeros(n)
    zero = SubproblemResult(TangentVector(x, eta), 0.0, False, 0, "zero gradient")
    g_norm = float(np.linalg.norm(g))
    if g_norm == 0.0:
        return zero

    target = g_norm * min(cfg.tcg_kappa, g_norm**cfg.tcg_theta)
    r = g.copy()
    d = -g
    rr = g_norm * g_norm
    hit_boundary = False
    reason = "max inner iterations"
    inner = 0

    for _ in range(max(1, n - 1)):
        inner += 1
        hd = apply_h(d)
        if not np.isfinite(hd).all():
            raise NumericFailureError("Hessian product is not finite")
        dhd = float(d @ hd)
        if dhd <= 0.0:
            eta = eta + _boundary_tau(eta, d, delta) * d
            hit_boundary = True
            reason = "negative curvature"
            break
        alpha = rr / dhd
        eta_next = eta + alpha * d
        if float(np.linalg.norm(eta_next)) >= delta:
            eta = eta + _boundary_tau(eta, d, delta) * d
            hit_boundary = True
            reason = "exceeded radius"
            break
        eta = eta_next
        r = r + alpha * hd
        rr_next = float(r @ r)
        if math.sqrt(rr_next) <= target:
            reason = "residual target"
            break
        d = -r + (rr_next / rr) * d
        rr = rr_next

    decrease = -(float(g @ eta) + 0.5 * float(eta @ apply_h(eta)))
    return SubproblemResult(TangentVector(x, eta), decrease, hit_boundary, inner, reason)


def _check_finite(value: float, k: int, what: str) -> float:
    if not math.isfinite(value):
        raise NumericFailureError(f"{what} is not finite", iteration=k)
    return value


def rtr_minimize(
    oracles: Sequence[Callable],
    x0: UnitVector,
    cfg: RtrConfig | None = None,
) -> tuple[UnitVector, RtrTrace]:
    """Trust-region minimization of a cost on the sphere.

    ``oracles`` is the triple (cost, gradient, Hessian-product): callables
    mapping point -> real, point -> TangentVector, and (point, tangent) ->
    TangentVector for one and the same cost.  Terminates when the gradient
    norm drops to ``cfg.grad_tol`` or after ``cfg.max_outer`` iterations,
    returning the last accepted iterate and the full trace.  Rejected
    steps (rho_k <= rho_prime, or a numerically zero model decrease) leave
    the iterate unchanged and shrink the radius.
    """
    if cfg is None:
        cfg = RtrConfig()
    cost_fn, grad_fn, hess_fn = oracles

    x = x0
    delta = cfg.delta0
    trace = RtrTrace()
    f_x = _check_finite(float(cost_fn(x)), 0, "cost")
    g_norm = math.inf

    for k in range(cfg.max_outer):
        grad = grad_fn(x)
        if not np.isfinite(grad.dir).all():
            raise NumericFailureError("gradient is not finite", iteration=k)
        g_norm = grad.norm
        if g_norm <= cfg.grad_tol:
            trace.converged = True
            trace.stop_reason = "grad_tol"
            break

        try:
            sub = solve_subproblem(grad, lambda t: hess_fn(x, t), delta, cfg)
        except NumericFailureError as exc:
            raise NumericFailureError(str(exc), iteration=k) from exc
        y = retract(x, sub.step)
        f_y = _check_finite(float(cost_fn(y)), k, "cost")

        if sub.model_decrease <= _MODEL_DECREASE_FLOOR * (1.0 + abs(f_x)):
            # Model decrease at rounding scale: never form the rho ratio.
            # Accept the (tiny) step only when the measured cost did not
            # increase, so progress through near-stationary regions stays
            # possible and accepted costs stay exactly nonincreasing.
            if f_y <= f_x:
                rho = 1.0
                accepted = True
            else:
                rho = -math.inf
                accepted = False
        else:
            rho = (f_x - f_y) / sub.model_decrease
            accepted = rho > cfg.rho_prime

        trace.iterations.append(
            RtrIteration(
                f=f_x,
                grad_norm=g_norm,
                rho=rho,
                delta=delta,
                step_norm=sub.step.norm,
                model_decrease=sub.model_decrease,
                accepted=accepted,
                inner_iterations=sub.inner_iterations,
                stop_reason=sub.stop_reason,
            )
        )

        if rho < 0.25:
            delta = 0.25 * delta
        elif rho > 0.75 and sub.hit_boundary:
            delta = min(2.0 * delta, cfg.delta_bar)

        if accepted:
            x = y
            f_x = f_y
    else:
        grad = grad_fn(x)
        g_norm = grad.norm
        trace.converged = g_norm <= cfg.grad_tol
        trace.stop_reason = "grad_tol" if trace.converged else "max_outer"

    trace.final_grad_norm = g_norm
    trace.final_cost = f_x
    return x, trace
