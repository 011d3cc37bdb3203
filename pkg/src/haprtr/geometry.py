"""Exact geometry of the unit sphere S^{n-1} embedded in R^n.

Points are unit vectors; tangent vectors at x are ambient vectors
orthogonal to x.  Geodesics are great-circle arcs, the retraction is the
cheap normalization map R_x(v) = (x + v)/||x + v||, and parallel transport
is the rotation in span{x, y}.  All operations are pure functions of
immutable values, safe for unrestricted concurrent use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import AntipodalError, BasePointMismatchError, DimensionMismatchError

__all__ = [
    "UnitVector",
    "TangentVector",
    "inner",
    "project_tangent",
    "geodesic",
    "exp_map",
    "retract",
    "transport",
    "dist",
    "random_unit",
    "random_tangent",
]

_NORM_TOL = 1e-12
_TANGENCY_TOL = 1e-10
_ANTIPODAL_TOL = 1e-10


def _as_vector(values, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1:
        raise DimensionMismatchError(f"{name} must be one-dimensional, got shape {arr.shape}")
    return arr


@dataclass(frozen=True, eq=False)
class UnitVector:
    """A point on S^{n-1}: a length-n vector (n >= 2) of unit Euclidean norm."""

    coords: np.ndarray

    def __post_init__(self):
        coords = _as_vector(self.coords, "coords").copy()
        if coords.size < 2:
            raise DimensionMismatchError("sphere points need dimension n >= 2")
        norm = float(np.linalg.norm(coords))
        if abs(norm - 1.0) > _NORM_TOL:
            raise ValueError(f"not a unit vector: | ||coords|| - 1 | = {abs(norm - 1.0):.3e}")
        coords.flags.writeable = False
        object.__setattr__(self, "coords", coords)

    @property
    def n(self) -> int:
        return self.coords.size

    @classmethod
    def normalized(cls, values) -> "UnitVector":
        """Construct by rescaling an arbitrary nonzero vector to unit norm."""
        arr = _as_vector(values, "values")
        norm = float(np.linalg.norm(arr))
        if norm == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return cls(arr / norm)

    def __eq__(self, other):
        if not isinstance(other, UnitVector):
            return NotImplemented
        return np.array_equal(self.coords, other.coords)

    def __repr__(self):
        return f"UnitVector({np.array2string(self.coords, threshold=8)})"


@dataclass(frozen=True, eq=False)
class TangentVector:
    """A vector in T_x S^{n-1}, carried together with its base point x.

    Construction re-projects the direction onto the tangent space (once)
    when it drifts past the tangency tolerance, so long solver runs do not
    die on accumulated rounding.
    """

    base: UnitVector
    dir: np.ndarray

    def __post_init__(self):
        if not isinstance(self.base, UnitVector):
            raise TypeError("base must be a UnitVector")
        d = _as_vector(self.dir, "dir").copy()
        x = self.base.coords
        if d.size != x.size:
            raise DimensionMismatchError(
                f"direction has length {d.size}, base point has length {x.size}"
            )
        drift = float(x @ d)
        if abs(drift) > _TANGENCY_TOL * (1.0 + float(np.linalg.norm(d))):
            d = d - drift * x
        d.flags.writeable = False
        object.__setattr__(self, "dir", d)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.dir))

    def __repr__(self):
        return f"TangentVector(base={self.base!r}, dir={np.array2string(self.dir, threshold=8)})"


def _require_same_base(v: TangentVector, x: UnitVector):
    if v.base is x or v.base == x:
        return
    raise BasePointMismatchError("tangent vector is not rooted at the given point")


def inner(u: TangentVector, v: TangentVector) -> float:
    """Riemannian inner product: the Euclidean dot product of the directions."""
    if u.dir.size != v.dir.size:
        raise DimensionMismatchError("tangent vectors have different lengths")
    if not (u.base is v.base or u.base == v.base):
        raise BasePointMismatchError("tangent vectors live at different base points")
    return float(u.dir @ v.dir)


def project_tangent(x: UnitVector, v) -> TangentVector:
    """Orthogonal projection (I - x x^T) v onto the tangent space at x."""
    v = _as_vector(v, "v")
    if v.size != x.n:
        raise DimensionMismatchError(f"vector has length {v.size}, point has length {x.n}")
    d = v - (x.coords @ v) * x.coords
    return TangentVector(x, d)


def geodesic(x: UnitVector, v: TangentVector, t: float) -> UnitVector:
    """Great-circle arc through x with initial velocity v, evaluated at time t.

    alpha(t) = x cos(||v|| t) + (v/||v||) sin(||v|| t); the zero-velocity
    curve is constant at x.
    """
    _require_same_base(v, x)
    speed = v.norm
    if speed == 0.0:
        return x
    angle = speed * float(t)
    y = x.coords * math.cos(angle) + (v.dir / speed) * math.sin(angle)
    return UnitVector.normalized(y)


def exp_map(x: UnitVector, v: TangentVector) -> UnitVector:
    """Exponential map: the geodesic with velocity v evaluated at time 1."""
    return geodesic(x, v, 1.0)


def retract(x: UnitVector, v: TangentVector) -> UnitVector:
    """First-order retraction R_x(v) = (x + v)/||x + v||.

    For tangent v, ||x + v||^2 = 1 + ||v||^2 >= 1, so the map is total.
    """
    _require_same_base(v, x)
    return UnitVector.normalized(x.coords + v.dir)


def transport(x: UnitVector, y: UnitVector, v: TangentVector) -> TangentVector:
    """Parallel transport of v from T_x to T_y along the minimizing geodesic.

    Uses the rotation in span{x, y} that carries x to y:

        P(v) = v - ((x + y) . v / (1 + x . y)) (x + y) + 2 (x . v) y

    which is exact, isometric, and undefined only at antipodes, where no
    unique minimizing geodesic exists.
    """
    _require_same_base(v, x)
    if x.n != y.n:
        raise DimensionMismatchError("points have different dimensions")
    w = x.coords + y.coords
    if float(np.linalg.norm(w)) <= _ANTIPODAL_TOL:
        raise AntipodalError("parallel transport between antipodal points is undefined")
    c = float(x.coords @ y.coords)
    d = v.dir - ((w @ v.dir) / (1.0 + c)) * w + 2.0 * float(x.coords @ v.dir) * y.coords
    return TangentVector(y, d)


def dist(x: UnitVector, y: UnitVector) -> float:
    """Geodesic (great-circle) distance arccos(x . y) in [0, pi]."""
    if x.n != y.n:
        raise DimensionMismatchError("points have different dimensions")
    return float(np.arccos(np.clip(x.coords @ y.coords, -1.0, 1.0)))


def random_unit(n: int, rng: np.random.Generator) -> UnitVector:
    """Uniform point on S^{n-1}: a normalized isotropic Gaussian sample."""
    while True:
        g = rng.standard_normal(n)
        if np.linalg.norm(g) > 0.0:
            return UnitVector.normalized(g)


def random_tangent(x: UnitVector, rng: np.random.Generator) -> TangentVector:
    """Tangent vector at x with isotropic Gaussian components in T_x."""
    return project_tangent(x, rng.standard_normal(x.n))
