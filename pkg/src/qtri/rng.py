"""Named, counter-based random substreams.

Every source of randomness in the package flows from one integer seed
through `substream`, so any component (a generator, one solver step, one
trial of a batch) can be replayed in isolation on any platform.
"""

from __future__ import annotations

import hashlib

import numpy as np

_MASK64 = (1 << 64) - 1


def _token(part: object) -> int:
    digest = hashlib.sha256(repr(part).encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def substream(seed: int, *path: object) -> np.random.Generator:
    """Independent Philox generator keyed by (seed, *path).

    Different paths never share a stream, and the same (seed, path) always
    reproduces the same bit sequence.
    """
    entropy = [int(seed) & _MASK64] + [_token(p) for p in path]
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(entropy)))


def derive_seed(seed: int, *path: object) -> int:
    """Stable 32-bit child seed for (seed, *path); hash() is salted, this is not."""
    mixed = hashlib.sha256(repr((int(seed),) + path).encode("utf-8")).digest()
    return int.from_bytes(mixed[:4], "big")
