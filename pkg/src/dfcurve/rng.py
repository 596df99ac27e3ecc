"""Deterministic counter-based random numbers.

Every stochastic operation in this package draws from the same small
counter-based generator so outputs are bit-reproducible across platforms,
processes, and thread counts. The construction applies the SplitMix64
avalanche function to a keyed counter:

    key     = mix64(seed XOR mix64(stream XOR GOLDEN))
    word[i] = mix64((key + (i + 1) * GOLDEN) mod 2**64)

with GOLDEN = 0x9E3779B97F4A7C15 and

    mix64(z): z ^= z >> 30; z *= 0xBF58476D1CE4E5B9
              z ^= z >> 27; z *= 0x94D049BB133111EB
              z ^= z >> 31

all modulo 2**64. Any word is addressable directly by its counter, so
draws never depend on call order. Uniform doubles in [0, 1) take the top
53 bits of a word; standard normals combine two consecutive uniforms via
the Box-Muller transform.

The word and uniform streams are exact integer/IEEE arithmetic and thus
bit-identical on any platform or language implementing the recipe above;
normals additionally pass through libm log/cos and may differ in the
last ulp across C libraries (never across runs on one machine).

``stream`` separates independent substreams of one seed (noise field vs.
rain geometry vs. token jitter, for example) without seed arithmetic.
"""

from __future__ import annotations

import numpy as np

GOLDEN = 0x9E3779B97F4A7C15

_U64 = np.uint64
_MIX_A = _U64(0xBF58476D1CE4E5B9)
_MIX_B = _U64(0x94D049BB133111EB)
_GOLDEN = _U64(GOLDEN)


def _mix64(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> _U64(30))) * _MIX_A
    z = (z ^ (z >> _U64(27))) * _MIX_B
    return z ^ (z >> _U64(31))


def _key(seed: int, stream: int) -> np.uint64:
    s = _U64(int(seed) & 0xFFFFFFFFFFFFFFFF)
    t = _U64(int(stream) & 0xFFFFFFFFFFFFFFFF)
    return _mix64(s ^ _mix64(t ^ _GOLDEN))


def random_words(seed: int, stream: int, count: int, start: int = 0) -> np.ndarray:
    """Raw 64-bit words for counters start .. start+count-1."""
    if count < 0:
        raise ValueError("count must be >= 0")
    idx = np.arange(start + 1, start + count + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        return _mix64(_key(seed, stream) + idx * _GOLDEN)


def random_uniform(seed: int, stream: int, count: int, start: int = 0) -> np.ndarray:
    """Uniform doubles in [0, 1), one per counter."""
    words = random_words(seed, stream, count, start)
    return (words >> _U64(11)).astype(np.float64) * (2.0 ** -53)


def random_normal(seed: int, stream: int, count: int, start: int = 0) -> np.ndarray:
    """Standard normal doubles via Box-Muller on consecutive uniform pairs.

    Normal j consumes counters start+2j and start+2j+1, so disjoint
    (seed, stream, counter-range) triples never correlate.
    """
    if count < 0:
        raise ValueError("count must be >= 0")
    u = random_uniform(seed, stream, 2 * count, start)
    u1 = u[0::2]
    u2 = u[1::2]
    radius = np.sqrt(-2.0 * np.log1p(-u1))  # 1-u1 in (0,1] keeps the log finite
    return radius * np.cos(2.0 * np.pi * u2)
