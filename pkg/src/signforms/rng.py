"""Counter-based deterministic randomness.

Every random object in this package is keyed by ``(seed, index)`` rather than
by consuming a shared stream.  Draw ``i`` therefore does not depend on whether
draws ``0..i-1`` were made, in what order, or on how many workers ran them.

The word generator is the splitmix64 finalizer: element ``i`` of the stream
keyed by ``s`` is ``finalize((s + (i+1)*GOLDEN) mod 2**64)``.  Sign bits come
from bit 63 of each word.  Continuous draws (starting points on l_p spheres)
use a numpy Philox generator keyed by a derived word; these are deterministic
for a fixed numpy environment.
"""

from __future__ import annotations

import math

import numpy as np

MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def _finalize(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * _MIX1) & MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & MASK64
    return z ^ (z >> 31)


def mix64(key: int, index: int) -> int:
    """Child key: element `index` of the stream keyed by `key`.

    Used to split one user seed into independent keys for draws, trials,
    restarts and coordinates.  Nest calls to derive deeper levels.
    """
    if index < 0:
        raise ValueError("index must be nonnegative")
    return _finalize((key + (index + 1) * _GOLDEN) & MASK64)


def words(key: int, start: int, count: int) -> np.ndarray:
    """uint64 stream words `start .. start+count-1` for `key`, vectorized.

    Matches mix64 word for word: words(key, i, 1)[0] == mix64(key, i).
    """
    if count < 0:
        raise ValueError("count must be nonnegative")
    idx = np.arange(start + 1, start + count + 1, dtype=np.uint64)
    z = np.uint64(key & MASK64) + idx * np.uint64(_GOLDEN)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
    return z ^ (z >> np.uint64(31))


def signs(key: int, start: int, count: int) -> np.ndarray:
    """int8 array of +-1 taken from bit 63 of the stream words."""
    bits = (words(key, start, count) >> np.uint64(63)).astype(np.int8)
    return (2 * bits - 1).astype(np.int8)


def lp_sphere_point(p: float, n: int, key: int) -> np.ndarray:
    """A point on the unit sphere of l_p in R^n, keyed by `key`.

    Finite p uses the generalized-Gaussian construction (Gamma(1/p)^(1/p)
    magnitudes with random signs, normalized); p = inf normalizes a uniform
    cube point by its max coordinate.
    """
    if n < 1:
        raise ValueError("n must be positive")
    gen = np.random.Generator(np.random.Philox(key=key & MASK64))
    if math.isinf(p):
        x = gen.uniform(-1.0, 1.0, n)
        m = float(np.max(np.abs(x)))
        if m == 0.0:
            x = np.ones(n)
            m = 1.0
        return x / m
    if p < 1.0:
        raise ValueError("p must be >= 1")
    mag = gen.standard_gamma(1.0 / p, n) ** (1.0 / p)
    sgn = np.where(gen.random(n) < 0.5, -1.0, 1.0)
    x = sgn * mag
    nrm = float(np.sum(np.abs(x) ** p) ** (1.0 / p))
    if nrm == 0.0 or not math.isfinite(nrm):
        x = np.zeros(n)
        x[0] = 1.0
        return x
    return x / nrm
