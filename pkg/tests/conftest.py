"""Shared test helpers."""

import numpy as np
import pytest

from haprtr.geometry import TangentVector, random_tangent, random_unit


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def unit_tangent(x, generator):
    """Random tangent vector scaled to unit length."""
    t = random_tangent(x, generator)
    return TangentVector(x, t.dir / t.norm)


def brute_force_mec_min(reads):
    """Global MEC minimum by enumerating every sign vector.

    Independent of haprtr.pipeline.mec: counts disagreements directly on
    the raw entries and mask.  Only sensible for small n.
    """
    n = reads.n
    if n > 16:
        raise ValueError("enumeration oracle limited to n <= 16")
    entries = reads.entries
    mask = reads.mask
    best = None
    for bits in range(2**n):
        z = (((bits >> np.arange(n)) & 1) * 2 - 1).astype(np.int8)
        against = ((entries != z) & mask).sum(axis=1)
        against_neg = ((entries != -z) & mask).sum(axis=1)
        score = int(np.minimum(against, against_neg).sum())
        if best is None or score < best:
            best = score
    return best


def random_point_and_basis(n, generator):
    """A sphere point plus an orthonormal basis of its tangent space."""
    x = random_unit(n, generator)
    projector = np.eye(n) - np.outer(x.coords, x.coords)
    q, _ = np.linalg.qr(projector @ generator.standard_normal((n, n - 1)))
    return x, q
