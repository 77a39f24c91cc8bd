"""Seeding helpers.

Every replica in a batch gets its own 32-bit seed for numba's per-thread
Mersenne Twister.  Seeds are an affine bijection of the replica index modulo
2**32, so no two replicas in a batch collide, and the result does not depend
on how replicas are scheduled across threads.
"""
import numpy as np
from numba import njit

_MASK32 = np.uint64(0xFFFFFFFF)


def as_generator(rng=None):
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def replica_seeds(rng, n):
    rng = as_generator(rng)
    a, b = rng.integers(0, 2**32, size=2, dtype=np.uint64)
    a |= np.uint64(1)
    i = np.arange(n, dtype=np.uint64)
    return ((a * i + b) & _MASK32).astype(np.uint32)


def open_uniform(rng, size=None):
    """Uniform draws on the open interval (0, 1)."""
    k = rng.integers(0, 2**53, size=size, dtype=np.int64)
    return (k + 0.5) * 2.0**-53


@njit(cache=True)
def splitmix64(x):
    x = x + np.uint64(0x9E3779B97F4A7C15)
    x = (x ^ (x >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    x = (x ^ (x >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return x ^ (x >> np.uint64(31))


@njit(cache=True)
def site_uniform(key, z):
    # |z| < 2**40 is far beyond any reachable lattice site
    h = splitmix64(np.uint64(key) ^ splitmix64(np.uint64(z + 1099511627776)))
    return (np.float64(h >> np.uint64(11)) + 0.5) * 1.1102230246251565e-16


@njit(cache=True)
def site_depth(key, z, alpha):
    """Pareto depth at site z, a pure function of (key, z)."""
    return site_uniform(key, z) ** (-1.0 / alpha)
