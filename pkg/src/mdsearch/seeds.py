"""Deterministic 64-bit seed derivation.

Stream seeds for (cluster, heuristic, iteration) triples are derived from one
master seed by splitmix64 mixing, so results are independent of execution
order and safe to compute concurrently.
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_ABSORB = 0xD1B54A32D192ED03


def mix64(z: int) -> int:
    """splitmix64 finalizer (Steele, Lea & Flood 2014)."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return (z ^ (z >> 31)) & MASK64


def splitmix64(state: int) -> tuple[int, int]:
    """Advance a splitmix64 state; returns (new_state, output)."""
    state = (state + _GOLDEN) & MASK64
    return state, mix64(state)


def derive_seed(master: int, *parts: int) -> int:
    """Stable stream seed from a master seed and small integer indices."""
    s = master & MASK64
    for p in parts:
        s = (s + _GOLDEN) & MASK64
        s = mix64(s ^ ((p * _ABSORB) & MASK64))
    return mix64(s)
