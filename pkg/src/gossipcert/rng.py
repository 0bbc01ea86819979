"""Counter-based deterministic random numbers.

Every draw is a pure function of (master_seed, stream_id, step, slot), so
Monte Carlo trials can be evaluated in any order, on any number of workers,
and still produce bit-identical results.  The generator is a splitmix64-style
finalizer chained over the four words; it is stateless and vectorizes over
streams and slots with plain uint64 numpy arithmetic.
"""

from __future__ import annotations

import numpy as np

_MASK = np.uint64(0xFFFFFFFFFFFFFFFF)
_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_INV53 = float(2.0**-53)


def _mix(x: np.ndarray | np.uint64) -> np.ndarray | np.uint64:
    with np.errstate(over="ignore"):  # uint64 wraparound is the point
        z = (x + _GOLDEN) & _MASK
        z = ((z ^ (z >> _S30)) * _MIX1) & _MASK
        z = ((z ^ (z >> _S27)) * _MIX2) & _MASK
        return z ^ (z >> _S31)


def _u64(value: int) -> np.uint64:
    return np.uint64(int(value) & 0xFFFFFFFFFFFFFFFF)


def uniforms(master_seed: int, stream_ids, step: int, n_slots: int) -> np.ndarray:
    """Uniform[0,1) samples, shape (len(stream_ids), n_slots).

    ``stream_ids`` may be a scalar or a 1-D array of trial indices.
    """
    streams = np.atleast_1d(np.asarray(stream_ids, dtype=np.uint64))
    slots = np.arange(n_slots, dtype=np.uint64)
    h = _mix(_u64(master_seed))
    h = _mix(h ^ streams)[:, None]
    h = _mix(h ^ _u64(step))
    h = _mix(h ^ slots[None, :])
    return (h >> _S11).astype(np.float64) * _INV53


def uniform_row(master_seed: int, stream_id: int, step: int, n_slots: int) -> np.ndarray:
    """Single-stream convenience wrapper; returns shape (n_slots,)."""
    return uniforms(master_seed, [stream_id], step, n_slots)[0]
