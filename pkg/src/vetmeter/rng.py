"""Counter-based uniform draws keyed by ``(seed, task, stream, counter)``.

Each value is a SplitMix64 finalisation of a key/counter pair, so any single
draw can be regenerated without replaying the ones before it.
"""

from __future__ import annotations

import numpy as np

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_TASK_MUL = 0xD1B54A32D192ED03
_STREAM_MUL = 0xBF58476D1CE4E5B9


def _mix64_int(z: int) -> int:
    z &= _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def _mix64(z: np.ndarray) -> np.ndarray:
    z = z ^ (z >> np.uint64(30))
    z = z * np.uint64(0xBF58476D1CE4E5B9)
    z = z ^ (z >> np.uint64(27))
    z = z * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


def stream_key(seed: int, task_index: int, stream: int) -> int:
    k = _mix64_int(seed)
    k = _mix64_int(k ^ ((task_index * _TASK_MUL) & _MASK))
    return _mix64_int(k ^ ((stream * _STREAM_MUL) & _MASK))


def random_bits(seed: int, task_index: int, stream: int, counters) -> np.ndarray:
    """64-bit hashes for each counter in ``counters``."""
    key = np.uint64(stream_key(seed, task_index, stream))
    c = np.asarray(counters, dtype=np.uint64)
    return _mix64(key + (c + np.uint64(1)) * np.uint64(_GOLDEN))


def uniforms(seed: int, task_index: int, stream: int, counters) -> np.ndarray:
    """Uniform floats in the open interval (0, 1), 53-bit resolution."""
    bits = random_bits(seed, task_index, stream, counters) >> np.uint64(11)
    return (bits.astype(np.float64) + 0.5) * 2.0**-53
