"""Synthetic read-matrix generation, sign decoding, and scoring.

Instances follow the rank-one model M = c h^T with bipolar h (haplotype)
and c (chromosome membership per read), entrywise i.i.d. observation with
probability pd, and an exact fraction err of the observed entries flipped.
Scoring uses the sign-ambiguous Hamming distance (h and -h are the same
haplotype) and the minimum-error-correction count.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, ParameterError
from .geometry import UnitVector
from .objective import ReadMatrix

__all__ = [
    "Haplotype",
    "Instance",
    "generate_instance",
    "apply_sampling",
    "decode",
    "hd_ambiguous",
    "mec",
    "unrecoverable_sites",
]


@dataclass(frozen=True, eq=False)
class Haplotype:
    """A length-n vector of exactly +-1 sites."""

    sites: np.ndarray

    def __post_init__(self):
        sites = np.asarray(self.sites)
        if sites.ndim != 1:
            raise DimensionMismatchError(f"sites must be one-dimensional, got shape {sites.shape}")
        if not np.isin(sites, (-1, 1)).all():
            raise ValueError("haplotype sites must be +1 or -1")
        sites = sites.astype(np.int8, copy=True)
        sites.flags.writeable = False
        object.__setattr__(self, "sites", sites)

    def __len__(self):
        return self.sites.size

    def __eq__(self, other):
        if not isinstance(other, Haplotype):
            return NotImplemented
        return np.array_equal(self.sites, other.sites)

    def to_string(self) -> str:
        return "".join("+" if s > 0 else "-" for s in self.sites)

    @classmethod
    def from_string(cls, text: str) -> "Haplotype":
        bad = set(text) - {"+", "-"}
        if bad:
            raise ValueError(f"haplotype string may only contain '+' and '-', found {sorted(bad)}")
        return cls(np.array([1 if ch == "+" else -1 for ch in text], dtype=np.int8))


def _bipolar(values, name: str) -> np.ndarray:
    arr = np.asarray(values)
    if arr.ndim != 1:
        raise DimensionMismatchError(f"{name} must be one-dimensional")
    if not np.isin(arr, (-1, 1)).all():
        raise ValueError(f"{name} must contain only +1 and -1")
    arr = arr.astype(np.int8, copy=True)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class Instance:
    """One synthetic trial: ground truth, reads, and generation parameters."""

    truth_h: np.ndarray
    truth_c: np.ndarray
    reads: ReadMatrix
    pd: float
    err: float
    seed: int

    def __post_init__(self):
        truth_h = _bipolar(self.truth_h, "truth_h")
        truth_c = _bipolar(self.truth_c, "truth_c")
        if truth_h.size != self.reads.n:
            raise DimensionMismatchError("truth_h length does not match the read matrix")
        if truth_c.size != self.reads.m:
            raise DimensionMismatchError("truth_c length does not match the read matrix")
        clean = np.outer(truth_c, truth_h)
        flipped = int(((self.reads.entries != clean) & self.reads.mask).sum())
        expected = int(round(self.err * self.reads.num_observed))
        if flipped != expected:
            raise ValueError(
                f"reads are inconsistent with the stated error rate: "
                f"{flipped} flipped observed entries, expected {expected}"
            )
        object.__setattr__(self, "truth_h", truth_h)
        object.__setattr__(self, "truth_c", truth_c)

    @property
    def truth(self) -> Haplotype:
        return Haplotype(self.truth_h)


def generate_instance(m: int, n: int, pd: float, err: float, seed: int) -> Instance:
    """Draw one synthetic instance; fully determined by ``seed``.

    h and c are uniform bipolar vectors, each entry of c h^T is observed
    independently with probability pd, and exactly round(err * |observed|)
    observed entries (chosen uniformly without replacement) have their
    signs flipped.  Randomness comes from four independent substreams of
    ``SeedSequence(seed)``, spawned in the order (h, c, mask, flips), so
    trials parallelize without coordination.
    """
    if m < 1:
        raise ParameterError(f"m must be at least 1, got {m}")
    if n < 2:
        raise ParameterError(f"n must be at least 2, got {n}")
    if not 0.0 < pd <= 1.0:
        raise ParameterError(f"pd must lie in (0, 1], got {pd}")
    if not 0.0 <= err < 0.5:
        raise ParameterError(f"err must lie in [0, 0.5), got {err}")
    if seed < 0:
        raise ParameterError(f"seed must be non-negative, got {seed}")

    h_ss, c_ss, mask_ss, flip_ss = np.random.SeedSequence(seed).spawn(4)
    h_rng = np.random.default_rng(h_ss)
    c_rng = np.random.default_rng(c_ss)
    mask_rng = np.random.default_rng(mask_ss)
    flip_rng = np.random.default_rng(flip_ss)

    h = (2 * h_rng.integers(0, 2, size=n, dtype=np.int8) - 1).astype(np.int8)
    c = (2 * c_rng.integers(0, 2, size=m, dtype=np.int8) - 1).astype(np.int8)
    mask = mask_rng.random((m, n)) < pd

    entries = np.outer(c, h)
    observed = np.flatnonzero(mask.ravel())
    flips = int(round(err * observed.size))
    if flips:
        chosen = flip_rng.choice(observed.size, size=flips, replace=False)
        flat = entries.ravel()
        flat[observed[chosen]] *= -1

    reads = ReadMatrix(entries=entries, mask=mask)
    return Instance(truth_h=h, truth_c=c, reads=reads, pd=float(pd), err=float(err), seed=int(seed))


def apply_sampling(full, mask) -> np.ndarray:
    """P_Omega: observed entries pass through, unobserved become exactly 0."""
    full = np.asarray(full, dtype=np.float64)
    mask = np.asarray(mask, dtype=bool)
    if full.shape != mask.shape:
        raise DimensionMismatchError(f"matrix shape {full.shape} does not match mask shape {mask.shape}")
    return np.where(mask, full, 0.0)


def decode(x: UnitVector) -> Haplotype:
    """Entrywise sign of a sphere point, with sign(0) = +1."""
    return Haplotype(np.where(x.coords >= 0.0, 1, -1).astype(np.int8))


def hd_ambiguous(est: Haplotype, truth: Haplotype) -> int:
    """Hamming distance up to global sign: min(hd(est, truth), hd(est, -truth))."""
    if len(est) != len(truth):
        raise DimensionMismatchError("haplotypes have different lengths")
    d = int((est.sites != truth.sites).sum())
    return min(d, len(est) - d)


def mec(M: ReadMatrix, z: Haplotype) -> int:
    """Minimum error correction: per read the better of z and -z, summed.

    Counts observed entries that disagree with z (respectively -z) in each
    row and takes the row-wise minimum, so flipping that many entries
    makes every read consistent with the haplotype pair {z, -z}.
    """
    if len(z) != M.n:
        raise DimensionMismatchError(f"haplotype has length {len(z)}, matrix has {M.n} columns")
    against = (M.entries != z.sites[np.newaxis, :]) & M.mask
    against_neg = (M.entries != -z.sites[np.newaxis, :]) & M.mask
    return int(np.minimum(against.sum(axis=1), against_neg.sum(axis=1)).sum())


def unrecoverable_sites(M: ReadMatrix) -> int:
    """Number of columns with no observations; those sites carry no signal."""
    return int((~M.mask.any(axis=0)).sum())
