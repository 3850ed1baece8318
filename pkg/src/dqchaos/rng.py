"""Per-trajectory random streams.

Each trajectory gets its own generator derived from ``(seed, index)`` through
:class:`numpy.random.SeedSequence` spawn keys, so the stream of trajectory
``i`` never depends on how many other trajectories ran or in which order.
"""

import numpy as np

# Distinguishes stream families that share a user seed.
STREAM_QUANTUM = 0
STREAM_CLASSICAL = 1
STREAM_NOISE = 2


def trajectory_rng(seed, index=0, stream=STREAM_QUANTUM):
    """Return an independent PCG64 generator for one trajectory."""
    if seed < 0 or seed >= 2**64:
        raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed}")
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(stream), int(index)))
    return np.random.Generator(np.random.PCG64(ss))
