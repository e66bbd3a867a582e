"""Deterministic seed derivation.

Every random decision in the pipeline is keyed off one master seed plus a
path of component names / indices, so independent stages can be re-run (or
run in parallel) without sharing RNG state.  The derivation is a SHA-256
hash of the master seed and the path parts, which is stable across
processes and platforms (unlike Python's builtin ``hash``).
"""

from __future__ import annotations

import hashlib

import numpy as np

__all__ = ["child_seed", "child_rng"]

_SEED_BITS = 63  # keep seeds in the non-negative int64 range


def child_seed(master: int, *path: str | int) -> int:
    """Derive a child seed from ``master`` and a path like ("gen", 17)."""
    h = hashlib.sha256()
    h.update(str(int(master)).encode())
    for part in path:
        h.update(b"/")
        h.update(str(part).encode())
    return int.from_bytes(h.digest()[:8], "little") % (1 << _SEED_BITS)


def child_rng(master: int, *path: str | int) -> np.random.Generator:
    """Generator seeded by :func:`child_seed` of the same arguments."""
    return np.random.default_rng(child_seed(master, *path))
