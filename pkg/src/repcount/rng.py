"""Counter-based random streams.

Every sampled quantity in the package draws from a Philox stream keyed by
(operation name, user seed, shard index).  Results are therefore
reproducible bit for bit at a fixed shard count, and shards are
statistically independent, so sampling work can be split across workers
and merged deterministically.
"""

import hashlib

import numpy as np


def stream(operation: str, seed: int, shard: int = 0) -> np.random.Generator:
    """Return the generator for (operation, seed, shard)."""
    tag = f"repcount:{operation}:{seed}:{shard}".encode()
    key = int.from_bytes(hashlib.sha256(tag).digest()[:16], "little")
    return np.random.Generator(np.random.Philox(key=key))
