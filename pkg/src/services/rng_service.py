# src/services/rng_service.py

import numpy as np

GOLDEN_GAMMA = 0x9E3779B97F4A7C15
MASK64 = (1 << 64) - 1


def splitmix64(value):
    """The splitmix64 finaliser; a bijection on 64-bit integers."""
    z = value & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def replicate_seed(root_seed, run_index):
    return splitmix64(root_seed + (run_index + 1) * GOLDEN_GAMMA)


class SeedStream:
    """Counter-keyed random streams for one run: one Generator per generation index."""

    def __init__(self, seed):
        self.seed = int(seed)

    def generation(self, t):
        return np.random.Generator(np.random.PCG64(np.random.SeedSequence(self.seed, spawn_key=(t,))))

    def replicate(self, run_index):
        return SeedStream(replicate_seed(self.seed, run_index))

    def __repr__(self):
        return f"SeedStream({self.seed})"
