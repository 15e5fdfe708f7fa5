"""Counter-based RNG streams for reproducible, schedule-independent draws.

Every random draw in the library comes from a Philox stream keyed by
(seed, iteration, block).  Philox is counter-based: element k of a stream
is a pure function of (key, k), so a worksite indexed (iteration, block,
element) always sees the same variate no matter how work is scheduled or
how many threads run.
"""

import numpy as np

# sampler block ids (one stream per sweep block)
BLOCK_Z = 0
BLOCK_SIGMA_EPS = 1
BLOCK_SIGMA = 2
BLOCK_COVARIATE = 0x100  # + j for the (tau, pi, beta) block of covariate j

# simulation block ids, disjoint from the sampler's
SIM_BETA = 0x10000  # + j
SIM_X = 0x20000
SIM_Z = 0x30000
SIM_NOISE = 0x40000
SIM_ZERO_MASK = 0x50000  # + j
SIM_SQUARE = 0x60000  # + j

_MASK64 = (1 << 64) - 1
_MASK32 = (1 << 32) - 1


def stream(seed, iteration=0, block=0):
    """Generator for the (seed, iteration, block) stream family.

    The 128-bit Philox key packs seed in the high 64 bits, iteration in
    the next 32, block in the low 32; draws within the stream are indexed
    by the Philox counter.
    """
    iteration = int(iteration)
    block = int(block)
    if iteration < 0 or block < 0:
        raise ValueError("iteration and block must be nonnegative")
    key = (
        ((int(seed) & _MASK64) << 64)
        | ((iteration & _MASK32) << 32)
        | (block & _MASK32)
    )
    return np.random.Generator(np.random.Philox(key=key))


def chain_seed(seed, chain_index):
    """Seed for chain `chain_index`; chains use consecutive seeds."""
    return (int(seed) + int(chain_index)) & _MASK64
