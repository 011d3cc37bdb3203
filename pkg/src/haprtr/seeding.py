"""Deterministic seed derivation for sweep trials.

``splitmix64`` is the 64-bit finalizer from SplitMix; it is a bijection on
64-bit words.  A trial seed is ``base_seed + splitmix64(packed indices)``
truncated to 63 bits, where the (pd index, err index, trial) triple is
packed injectively into one word, so distinct grid cells always get
distinct seeds regardless of execution order.  Per-method solver seeds
fold a CRC-32 of the method name into another splitmix64 round, keeping
the instance stream and each method's initialization stream independent.
"""

import zlib

_MASK63 = (1 << 63) - 1
_MASK64 = (1 << 64) - 1
_INDEX_BITS = 21
_INDEX_LIMIT = 1 << _INDEX_BITS


def splitmix64(value: int) -> int:
    z = (value + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def trial_seed(base_seed: int, pd_index: int, err_index: int, trial: int) -> int:
    """Seed for one (pd, err, trial) cell of a sweep."""
    for name, idx in (("pd_index", pd_index), ("err_index", err_index), ("trial", trial)):
        if not 0 <= idx < _INDEX_LIMIT:
            raise ValueError(f"{name} must lie in [0, {_INDEX_LIMIT}), got {idx}")
    packed = (pd_index << (2 * _INDEX_BITS)) | (err_index << _INDEX_BITS) | trial
    return (int(base_seed) + splitmix64(packed)) & _MASK63


def method_seed(seed: int, method: str) -> int:
    """Solver-initialization seed for one method within a trial."""
    return splitmix64((int(seed) ^ zlib.crc32(method.encode())) & _MASK64) & _MASK63
