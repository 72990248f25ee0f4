"""Counter-based random streams.

Draw number t of stream s under master seed m is a pure function
hash(m, s, t), so a walk's randomness does not depend on which worker runs
it, in what order, or how the walks are batched.  The hash is the SplitMix64
finalizer applied twice with two stream keys.  The scalar and the numpy
implementations below produce identical bits.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MASK = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB
_SALT = 0xD1B54A32D192ED03


def mix64(z: int) -> int:
    z &= MASK
    z = ((z ^ (z >> 30)) * _M1) & MASK
    z = ((z ^ (z >> 27)) * _M2) & MASK
    return z ^ (z >> 31)


def stream_key(master_seed: int, stream_index: int) -> tuple[int, int]:
    if stream_index < 0:
        raise ValueError("stream_index must be >= 0")
    a = mix64(master_seed)
    b = mix64((stream_index * GAMMA + _SALT) & MASK)
    return mix64(a ^ b), mix64(a + b + GAMMA)


def draw(k1: int, k2: int, t: int) -> int:
    return mix64(mix64(k1 + t * GAMMA) ^ k2)


def bounded(u: int, n: int) -> int:
    """Map a 64-bit draw to {0, ..., n-1} (multiply-shift on the top 32 bits)."""
    return ((u >> 32) * n) >> 32


@dataclass
class RngSpec:
    master_seed: int
    stream_index: int = 0


class CounterStream:
    """Scalar stream; ``counter`` is the index of the next draw."""

    def __init__(self, master_seed: int, stream_index: int = 0, counter: int = 0):
        self.master_seed = master_seed
        self.stream_index = stream_index
        self.counter = counter
        self._k1, self._k2 = stream_key(master_seed, stream_index)

    @classmethod
    def from_spec(cls, spec: RngSpec) -> CounterStream:
        return cls(spec.master_seed, spec.stream_index)

    def next_u64(self) -> int:
        u = draw(self._k1, self._k2, self.counter)
        self.counter += 1
        return u

    def randbelow(self, n: int) -> int:
        return bounded(self.next_u64(), n)

    def random(self) -> float:
        return (self.next_u64() >> 11) * 2.0**-53


# -- vectorized versions --------------------------------------------------

_U = np.uint64


def mix64_np(z: np.ndarray) -> np.ndarray:
    z = z ^ (z >> _U(30))
    z = z * _U(_M1)
    z = z ^ (z >> _U(27))
    z = z * _U(_M2)
    return z ^ (z >> _U(31))


def stream_keys_np(master_seed: int, streams: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    streams = np.asarray(streams, dtype=np.uint64)
    with np.errstate(over="ignore"):
        a = _U(mix64(master_seed))
        b = mix64_np(streams * _U(GAMMA) + _U(_SALT))
        k1 = mix64_np(a ^ b)
        k2 = mix64_np(a + b + _U(GAMMA))
    return k1, k2


def draw_np(k1: np.ndarray, k2: np.ndarray, t: np.ndarray) -> np.ndarray:
    with np.errstate(over="ignore"):
        return mix64_np(mix64_np(k1 + t.astype(np.uint64) * _U(GAMMA)) ^ k2)


def bounded_np(u: np.ndarray, n: np.ndarray) -> np.ndarray:
    return (((u >> _U(32)) * n.astype(np.uint64)) >> _U(32)).astype(np.int64)
