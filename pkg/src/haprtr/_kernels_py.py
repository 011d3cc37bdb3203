"""NumPy implementations of the hot objective kernels.

``A`` is the dense sampled read matrix P_Omega(M) — observed entries are
+-1, unobserved entries are exactly 0 — as C-contiguous float64 of shape
(m, n).  The compiled twin in ``_kernels.pyx`` mirrors these signatures.
"""

import numpy as np


def residuals(A, x):
    """Masked row dot products r_i = A_i . x."""
    return A @ x


def cost(A, x, eps):
    """Smoothed negative-L1 cost -sum_i sqrt(r_i^2 + eps); returns (f, r)."""
    r = A @ x
    f = -float(np.sqrt(r * r + eps).sum())
    return f, r


def cost_grad(A, x, eps):
    """Cost and its Euclidean gradient -A^T (r / sqrt(r^2 + eps)).

    Returns (f, r, g) so callers can cache the residuals for Hessian
    products at the same point.
    """
    r = A @ x
    s = np.sqrt(r * r + eps)
    f = -float(s.sum())
    g = -(A.T @ (r / s))
    return f, r, g


def hess_apply(A, r, xi, eps):
    """Euclidean Hessian product -A^T (eps (A xi) / (r^2 + eps)^{3/2}).

    ``r`` must be the residual vector A x at the evaluation point.
    """
    w = A @ xi
    s = r * r + eps
    return -(A.T @ (eps * w / (s * np.sqrt(s))))
