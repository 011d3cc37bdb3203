"""Experiment configuration: a flat ``key = value`` text format.

Lines are ``key = value``; blank lines and ``#`` comments are ignored.
Unknown and duplicate keys are errors.  Keys and defaults:

    m = 100                     rows (reads)
    n = 120                     columns (SNP sites)
    pd_grid = 0.3, 0.5, 0.7     observation probabilities
    err_grid = 0.35             error ratios |flipped| / |observed|
    trials = 20                 trials per grid cell
    base_seed = 1               root of the per-trial seed derivation
    methods = rtr, altmin       registered solver names
    epsilon = 1e-6              smoothing level of the objective
    timing = off                write real wall times into the CSV
    rtr_attempts = 3            restarts per rtr solve (best MEC kept)
    delta_bar = 3.14159...      rtr: max radius (default pi)
    delta0 = 0.39269...         rtr: initial radius (default pi/8)
    rho_prime = 0.1             rtr: acceptance threshold
    grad_tol = 1e-6             rtr: gradient-norm stopping tolerance
    max_outer = 500             rtr: outer iteration cap
    tcg_kappa = 0.1             rtr: tCG linear residual factor
    tcg_theta = 1.0             rtr: tCG superlinear residual exponent
    spectral_init = off         rtr: start attempt 0 from the spectral direction
    altmin_max_sweeps = 100     altmin: sweep cap
    altmin_tol = 1e-8           altmin: residual-change stopping tolerance
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .altmin import AltMinConfig
from .errors import ParameterError
from .methods import DEFAULT_RTR_ATTEMPTS, METHODS
from .objective import DEFAULT_EPSILON, check_epsilon
from .trustregion import RtrConfig

__all__ = ["ExperimentConfig", "parse_config", "read_config"]


@dataclass(frozen=True)
class ExperimentConfig:
    m: int = 100
    n: int = 120
    pd_grid: tuple[float, ...] = (0.3, 0.5, 0.7)
    err_grid: tuple[float, ...] = (0.35,)
    trials: int = 20
    base_seed: int = 1
    methods: tuple[str, ...] = ("rtr", "altmin")
    epsilon: float = DEFAULT_EPSILON
    timing: bool = False
    rtr_attempts: int = DEFAULT_RTR_ATTEMPTS
    solver: RtrConfig = field(default_factory=RtrConfig)
    altmin: AltMinConfig = field(default_factory=AltMinConfig)

    def __post_init__(self):
        if self.m < 1:
            raise ParameterError(f"m must be at least 1, got {self.m}")
        if self.n < 2:
            raise ParameterError(f"n must be at least 2, got {self.n}")
        if not self.pd_grid:
            raise ParameterError("pd_grid must not be empty")
        if not self.err_grid:
            raise ParameterError("err_grid must not be empty")
        for pd in self.pd_grid:
            if not 0.0 < pd <= 1.0:
                raise ParameterError(f"pd_grid values must lie in (0, 1], got {pd}")
        for err in self.err_grid:
            if not 0.0 <= err < 0.5:
                raise ParameterError(f"err_grid values must lie in [0, 0.5), got {err}")
        if self.trials < 1:
            raise ParameterError(f"trials must be at least 1, got {self.trials}")
        if not self.methods:
            raise ParameterError("methods must not be empty")
        for name in self.methods:
            if name not in METHODS:
                registered = ", ".join(sorted(METHODS))
                raise ParameterError(f"methods: unknown method {name!r}; registered: {registered}")
        check_epsilon(self.epsilon)
        if self.rtr_attempts < 1:
            raise ParameterError(f"rtr_attempts must be at least 1, got {self.rtr_attempts}")


def _parse_bool(key: str, value: str) -> bool:
    lowered = value.lower()
    if lowered in ("on", "true", "yes", "1"):
        return True
    if lowered in ("off", "false", "no", "0"):
        return False
    raise ParameterError(f"{key}: expected on/off, got {value!r}")


def _parse_float(key: str, value: str) -> float:
    try:
        return float(value)
    except ValueError:
        raise ParameterError(f"{key}: expected a real number, got {value!r}") from None


def _parse_int(key: str, value: str) -> int:
    try:
        return int(value)
    except ValueError:
        raise ParameterError(f"{key}: expected an integer, got {value!r}") from None


def _parse_float_list(key: str, value: str) -> tuple[float, ...]:
    parts = [p.strip() for p in value.split(",") if p.strip()]
    if not parts:
        raise ParameterError(f"{key}: expected a comma-separated list, got {value!r}")
    return tuple(_parse_float(key, p) for p in parts)


def _parse_name_list(key: str, value: str) -> tuple[str, ...]:
    parts = tuple(p.strip() for p in value.split(",") if p.strip())
    if not parts:
        raise ParameterError(f"{key}: expected a comma-separated list, got {value!r}")
    return parts


_TOP_KEYS = {
    "m": _parse_int,
    "n": _parse_int,
    "pd_grid": _parse_float_list,
    "err_grid": _parse_float_list,
    "trials": _parse_int,
    "base_seed": _parse_int,
    "methods": _parse_name_list,
    "epsilon": _parse_float,
    "timing": _parse_bool,
    "rtr_attempts": _parse_int,
}

_SOLVER_KEYS = {
    "delta_bar": _parse_float,
    "delta0": _parse_float,
    "rho_prime": _parse_float,
    "grad_tol": _parse_float,
    "max_outer": _parse_int,
    "tcg_kappa": _parse_float,
    "tcg_theta": _parse_float,
    "spectral_init": _parse_bool,
}

_ALTMIN_KEYS = {
    "altmin_max_sweeps": ("max_sweeps", _parse_int),
    "altmin_tol": ("tol", _parse_float),
}


def parse_config(text: str) -> ExperimentConfig:
    top: dict = {}
    solver: dict = {}
    altmin: dict = {}
    seen: set[str] = set()

    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParameterError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key in seen:
            raise ParameterError(f"line {lineno}: duplicate key {key!r}")
        seen.add(key)
        if key in _TOP_KEYS:
            top[key] = _TOP_KEYS[key](key, value)
        elif key in _SOLVER_KEYS:
            solver[key] = _SOLVER_KEYS[key](key, value)
        elif key in _ALTMIN_KEYS:
            name, parser = _ALTMIN_KEYS[key]
            altmin[name] = parser(key, value)
        else:
            raise ParameterError(f"line {lineno}: unknown configuration key {key!r}")

    return ExperimentConfig(
        solver=RtrConfig(**solver),
        altmin=AltMinConfig(**altmin),
        **top,
    )


def read_config(path) -> ExperimentConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())
