"""Exact propagation of E[x(t) x(t)*] through an enumerated update law.

The state update x(t+1) = (I - L(t)) x(t) makes the second moment evolve as
P(t+1) = sum_e p_e (I - L_e) P(t) (I - L_e)*, a fixed linear map that we
apply to vec(P).  This gives ground-truth mean-square deviation trajectories
with no sampling noise, for any instance whose support fits in memory.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import PreconditionError, StructuralError
from .models import LaplacianEvent

STEADY_REL_TOL = 1e-13
STEADY_RUN = 5
STEADY_MAX_STEPS = 100_000


@dataclass(frozen=True)
class SecondMoment:
    t: int
    P: np.ndarray
    mean: np.ndarray


def _check_events(events: list[LaplacianEvent]) -> int:
    if not events:
        raise StructuralError("empty event list")
    total = sum(e.probability for e in events)
    if abs(total - 1.0) > 1e-10:
        raise StructuralError(f"event probabilities sum to {total}, expected 1")
    return events[0].n


def _transition_maps(events: list[LaplacianEvent]):
    n = events[0].n
    eye = np.eye(n)
    second = np.zeros((n * n, n * n))
    mean_map = np.zeros((n, n))
    for e in events:
        t_e = eye - e.L
        second += e.probability * np.kron(t_e, t_e)
        mean_map += e.probability * t_e
    return second, mean_map


def propagate(events: list[LaplacianEvent], x0, steps: int) -> list[SecondMoment]:
    """Exact P(0..steps) and mean(0..steps) starting from the point mass x0."""
    n = _check_events(events)
    x0 = np.asarray(x0, dtype=np.float64)
    if x0.shape != (n,):
        raise StructuralError(f"x0 has shape {x0.shape}, expected ({n},)")
    if steps < 0:
        raise StructuralError("steps must be >= 0")
    second, mean_map = _transition_maps(events)
    p_vec = np.outer(x0, x0).ravel()
    mean = x0.copy()
    out = [SecondMoment(0, p_vec.reshape(n, n).copy(), mean.copy())]
    for t in range(1, steps + 1):
        p_vec = second @ p_vec
        mean = mean_map @ mean
        out.append(SecondMoment(t, p_vec.reshape(n, n).copy(), mean.copy()))
    return out


def _require_mean_preserving(events: list[LaplacianEvent]):
    el = sum(e.probability * e.L for e in events)
    if np.max(np.abs(el.sum(axis=0)), initial=0.0) > 1e-10:
        raise PreconditionError(
            "model does not preserve the expected average (1*E[L] != 0)"
        )


def mse_trajectory(events: list[LaplacianEvent], x0, steps: int) -> list[float]:
    """E[(xbar(t) - xbar(0))^2] for t = 0..steps, clamped at 0 for reporting."""
    _require_mean_preserving(events)
    n = _check_events(events)
    x0 = np.asarray(x0, dtype=np.float64)
    xbar0 = x0.mean()
    ones = np.ones(n)
    out = []
    for sm in propagate(events, x0, steps):
        # E[xbar(t)] = xbar(0) under mean preservation, so the MSE is
        # E[xbar(t)^2] - xbar(0)^2
        val = float(ones @ sm.P @ ones) / n**2 - xbar0**2
        out.append(max(val, 0.0))
    return out


def expected_disagreement(events: list[LaplacianEvent], x0,
                          steps: int) -> list[float]:
    """E[V(x(t))] = trace(Pi P(t)) / N with Pi the centering projection."""
    n = _check_events(events)
    proj = np.eye(n) - np.ones((n, n)) / n
    return [max(float(np.trace(proj @ sm.P)) / n, 0.0)
            for sm in propagate(events, x0, steps)]


def lyapunov_trajectory(events: list[LaplacianEvent], x0, gamma: float,
                        steps: int) -> list[float]:
    """E[C(x(t))] with C(y) = y*(11* + gamma I)y."""
    n = _check_events(events)
    c_mat = np.ones((n, n)) + gamma * np.eye(n)
    return [float(np.trace(c_mat @ sm.P)) for sm in propagate(events, x0, steps)]


def steady_state_mse(events: list[LaplacianEvent], x0,
                     max_steps: int = STEADY_MAX_STEPS) -> tuple[float, bool, int]:
    """Iterate until the MSE stalls; returns (mse, converged, steps_used).

    Convergence means |MSE(t+1) - MSE(t)| <= 1e-13 * max(1, MSE) for 5
    consecutive steps.
    """
    _require_mean_preserving(events)
    n = _check_events(events)
    x0 = np.asarray(x0, dtype=np.float64)
    xbar0 = x0.mean()
    ones = np.ones(n)
    second, _ = _transition_maps(events)
    p_vec = np.outer(x0, x0).ravel()

    def mse_of(vec):
        return max(float(ones @ vec.reshape(n, n) @ ones) / n**2 - xbar0**2, 0.0)

    prev = mse_of(p_vec)
    stall = 0
    for t in range(1, max_steps + 1):
        p_vec = second @ p_vec
        cur = mse_of(p_vec)
        if abs(cur - prev) <= STEADY_REL_TOL * max(1.0, cur):
            stall += 1
            if stall >= STEADY_RUN:
                return cur, True, t
        else:
            stall = 0
        prev = cur
    return prev, False, max_steps
