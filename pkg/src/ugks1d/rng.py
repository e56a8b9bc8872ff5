"""Seeded SplitMix64 generator for reproducible experiment inputs.

Random initial conditions must reproduce bit-for-bit across platforms
and languages, so the CLI uses this fixed 64-bit generator rather than
any library randomness.  One update of the state z is

    z      = (z + 0x9E3779B97F4A7C15) mod 2**64
    w      = z
    w      = (w ^ (w >> 30)) * 0xBF58476D1CE4E5B9   mod 2**64
    w      = (w ^ (w >> 27)) * 0x94D049BB133111EB   mod 2**64
    output = w ^ (w >> 31)

and uniform doubles in [0, 1) take the top 53 bits: (output >> 11) / 2**53.
"""

from __future__ import annotations

import numpy as np

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


class SplitMix64:
    def __init__(self, seed: int):
        self._state = seed & _MASK

    def next_uint64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK
        w = self._state
        w = ((w ^ (w >> 30)) * _MIX1) & _MASK
        w = ((w ^ (w >> 27)) * _MIX2) & _MASK
        return w ^ (w >> 31)

    def next_float(self) -> float:
        """Uniform double in [0, 1) with 53 significant bits."""
        return (self.next_uint64() >> 11) / float(1 << 53)

    def floats(self, shape) -> np.ndarray:
        """Array of uniforms filled in C (row-major) order."""
        out = np.empty(int(np.prod(shape)), dtype=float)
        for i in range(out.shape[0]):
            out[i] = self.next_float()
        return out.reshape(shape)
