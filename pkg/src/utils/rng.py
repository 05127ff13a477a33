# src/utils/rng.py

"""
Seeded, splittable random streams.

Every random draw in the package comes from a numpy Generator backed by the
counter-based Philox bit generator. A stream is keyed by the run seed plus a
tuple of integer keys (suite tag, row index, chunk index, ...), so the values a
consumer sees depend only on its keys and never on scheduling or on how many
other streams were created before it.
"""

from typing import List, Sequence

import numpy as np

SEED_MAX = 2**64 - 1


def validate_seed(seed: int) -> int:
    """Returns the seed as int, raising ValueError outside the unsigned 64-bit range."""
    seed = int(seed)
    if not 0 <= seed <= SEED_MAX:
        raise ValueError(f"Seed must be a 64-bit unsigned integer, got {seed}.")
    return seed


def _entropy(seed: int, keys: Sequence[int]) -> List[int]:
    # length-prefixed: SeedSequence pads with zeros, so (s, k) and (s, k, 0) would collide
    return [validate_seed(seed), len(keys), *(int(k) for k in keys)]


def substream(seed: int, *keys: int) -> np.random.Generator:
    """Independent Philox generator for (seed, *keys)."""
    entropy = _entropy(seed, keys)
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(entropy)))


def derive_seed(seed: int, *keys: int) -> int:
    """Derives a child 64-bit seed, used to hand a whole estimate its own seed."""
    state = np.random.SeedSequence(_entropy(seed, keys)).generate_state(1, dtype=np.uint64)
    return int(state[0])
