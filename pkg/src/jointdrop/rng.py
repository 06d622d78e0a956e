"""Deterministic per-pair random streams.

Every augmenter draws from a stream that is a pure function of
(corpus seed, pair id), never from a shared sequential generator, so output
does not depend on worker count or scheduling order.
"""

from __future__ import annotations

import hashlib
import random

MAX_SEED = 2**64 - 1


def check_seed(seed: int) -> int:
    if not 0 <= seed <= MAX_SEED:
        raise ValueError(f"seed must fit in 64 unsigned bits, got {seed}")
    return seed


def pair_stream(seed: int, pair_id: int) -> random.Random:
    """Independent RNG for one sentence pair, stable across runs and platforms."""
    check_seed(seed)
    material = seed.to_bytes(8, "big") + pair_id.to_bytes(8, "big")
    digest = hashlib.sha256(material).digest()
    return random.Random(int.from_bytes(digest[:16], "big"))
