"""Seeded Monte Carlo simulation of the consensus process.

Trials are vectorized: the state is a (trials, n) array and every step
applies one batched draw.  Trial k always consumes RNG stream k, so results
are independent of batching and bit-identical across runs with the same
master seed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import StructuralError
from .models import UpdateModel, draw_batch

DEFAULT_V_FRACTION = 1e-3


@dataclass(frozen=True)
class MseEstimate:
    t: int
    mse_mean: float
    ci_half_width: float  # 4-sigma normal half width
    trials: int
    v_mean: float


@dataclass(frozen=True)
class MeanEstimate:
    t: int
    mean_of_avg: float
    ci_half_width: float
    trials: int


def _apply_step(model: UpdateModel, x: np.ndarray, draw) -> np.ndarray:
    q = model.q
    if model.kind == "AAGA":
        i, j = draw
        rows = np.arange(x.shape[0])
        x[rows, i] += q * (x[rows, j] - x[rows, i])
        return x
    if model.kind in ("BGA", "PBGA"):
        j, mask = draw
        xb = x[np.arange(x.shape[0]), j]
        return x + q * mask * (xb[:, None] - x)
    (choice,) = draw
    return (1.0 - q) * x + q * np.take_along_axis(x, choice, axis=1)


def default_record_steps(steps: int) -> list[int]:
    """Every step up to 100, then roughly logarithmic."""
    if steps <= 100:
        return list(range(steps + 1))
    pts = set(range(101))
    t = 100.0
    while t < steps:
        t *= 1.1
        pts.add(min(int(round(t)), steps))
    pts.add(steps)
    return sorted(pts)


def run_trajectory(model: UpdateModel, x0, steps: int,
                   seed: int, stream_id: int = 0) -> list[tuple[float, float]]:
    """One trajectory; returns (xbar(t), V(x(t))) for t = 0..steps."""
    x0 = np.asarray(x0, dtype=np.float64)
    if x0.shape != (model.n,):
        raise StructuralError(f"x0 has shape {x0.shape}, expected ({model.n},)")
    if steps < 0:
        raise StructuralError("steps must be >= 0")
    x = x0[None, :].copy()
    out = [(float(x0.mean()), float(np.mean((x0 - x0.mean()) ** 2)))]
    streams = np.asarray([stream_id])
    for t in range(steps):
        x = _apply_step(model, x, draw_batch(model, seed, streams, t))
        xb = float(x[0].mean())
        out.append((xb, float(np.mean((x[0] - xb) ** 2))))
    return out


def _simulate(model: UpdateModel, x0, steps: int, trials: int, seed: int,
              record: list[int]):
    x0 = np.asarray(x0, dtype=np.float64)
    if x0.shape != (model.n,):
        raise StructuralError(f"x0 has shape {x0.shape}, expected ({model.n},)")
    x = np.tile(x0, (trials, 1))
    xbar0 = x0.mean()
    streams = np.arange(trials)
    record_set = set(record)
    rows = {}

    def snapshot(t):
        xb = x.mean(axis=1)
        dev2 = (xb - xbar0) ** 2
        v = np.mean((x - xb[:, None]) ** 2, axis=1)
        rows[t] = (
            float(dev2.mean()),
            float(4.0 * np.sqrt(dev2.var(ddof=1) / trials)) if trials > 1 else 0.0,
            float(v.mean()),
            float(xb.mean()),
            float(4.0 * np.sqrt(xb.var(ddof=1) / trials)) if trials > 1 else 0.0,
        )

    if 0 in record_set:
        snapshot(0)
    for t in range(steps):
        x = _apply_step(model, x, draw_batch(model, seed, streams, t))
        if (t + 1) in record_set:
            snapshot(t + 1)
    return rows


def estimate_mse(model: UpdateModel, x0, steps: int, trials: int,
                 master_seed: int,
                 record_steps: list[int] | None = None) -> list[MseEstimate]:
    """MSE of the running average at the recorded steps, with 4-sigma CIs."""
    if trials < 2:
        raise StructuralError("trials must be >= 2 for a CI")
    record = record_steps if record_steps is not None else default_record_steps(steps)
    rows = _simulate(model, x0, steps, trials, master_seed, record)
    return [MseEstimate(t, rows[t][0], rows[t][1], trials, rows[t][2])
            for t in sorted(rows)]


def estimate_mean_preservation(model: UpdateModel, x0, steps: int, trials: int,
                               master_seed: int,
                               record_steps: list[int] | None = None
                               ) -> list[MeanEstimate]:
    """Across-trial mean of xbar(t) with a 4-sigma CI at the recorded steps."""
    if trials < 2:
        raise StructuralError("trials must be >= 2 for a CI")
    record = record_steps if record_steps is not None else default_record_steps(steps)
    rows = _simulate(model, x0, steps, trials, master_seed, record)
    return [MeanEstimate(t, rows[t][3], rows[t][4], trials) for t in sorted(rows)]


def steady_state_estimate(model: UpdateModel, x0, trials: int, master_seed: int,
                          v_fraction: float = DEFAULT_V_FRACTION,
                          block: int = 200,
                          max_steps: int = 200_000) -> MseEstimate:
    """Run until the mean disagreement has decayed to v_fraction of V(x0).

    The MSE only grows toward its limit while disagreement remains, so
    stopping early can only under-estimate the steady-state MSE; the
    residual is bounded by roughly v_fraction times the certified bound.
    """
    x0 = np.asarray(x0, dtype=np.float64)
    v0 = float(np.mean((x0 - x0.mean()) ** 2))
    x = np.tile(x0, (trials, 1))
    streams = np.arange(trials)
    t = 0
    while t < max_steps:
        for _ in range(block):
            x = _apply_step(model, x, draw_batch(model, master_seed, streams, t))
            t += 1
        xb = x.mean(axis=1)
        v_mean = float(np.mean((x - xb[:, None]) ** 2))
        if v_mean <= v_fraction * max(v0, 1e-300):
            break
    xb = x.mean(axis=1)
    dev2 = (xb - x0.mean()) ** 2
    ci = float(4.0 * np.sqrt(dev2.var(ddof=1) / trials)) if trials > 1 else 0.0
    v_mean = float(np.mean((x - xb[:, None]) ** 2))
    return MseEstimate(t, float(dev2.mean()), ci, trials, v_mean)
