"""Seed derivation for order-independent random streams.

Every sampling operation draws from a generator keyed on
(master seed, purpose tag, indices), so concurrent callers never share a
stream and results do not depend on evaluation order or thread count.
"""

import numpy as np

# Purpose tags. Values are arbitrary but frozen: changing them changes
# every seeded result.
LABELS = 1
ADJACENCY = 2
FEATURE_NOISE = 3
TIEBREAK = 4
CV_SPLIT = 5
TRIAL = 6
PAIR_SAMPLE = 7
LINKPRED_PAIR = 8


def derive_rng(seed: int, purpose: int, *indices: int) -> np.random.Generator:
    """Return a Generator keyed on (seed, purpose, *indices)."""
    if seed < 0:
        raise ValueError(f"seed must be nonnegative, got {seed}")
    ss = np.random.SeedSequence(entropy=(int(seed), int(purpose), *map(int, indices)))
    return np.random.default_rng(ss)


def derive_seed(seed: int, purpose: int, *indices: int) -> int:
    """Derive a child integer seed, usable as a new master seed."""
    if seed < 0:
        raise ValueError(f"seed must be nonnegative, got {seed}")
    ss = np.random.SeedSequence(entropy=(int(seed), int(purpose), *map(int, indices)))
    return int(ss.generate_state(1, dtype=np.uint64)[0])
