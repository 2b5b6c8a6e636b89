"""Deterministic random streams.

Every random draw in the package flows from a root integer seed through a
named purpose string plus optional integer indices. Distinct purposes give
independent streams; the same (seed, purpose, indices) triple always gives
the same stream, on every platform.
"""

import hashlib

import numpy as np


def seed_sequence(seed, purpose, *indices):
    """SeedSequence for (seed, purpose, *indices)."""
    if not isinstance(seed, (int, np.integer)):
        raise TypeError(f"seed must be an int, got {type(seed).__name__}")
    digest = hashlib.sha256(purpose.encode("utf-8")).digest()
    key = [int.from_bytes(digest[i : i + 4], "little") for i in range(0, 16, 4)]
    key += [int(ix) & 0xFFFFFFFF for ix in indices]
    return np.random.SeedSequence(entropy=int(seed) & (2**64 - 1), spawn_key=tuple(key))


def derive_rng(seed, purpose, *indices):
    """PCG64 generator for (seed, purpose, *indices)."""
    return np.random.Generator(np.random.PCG64(seed_sequence(seed, purpose, *indices)))
