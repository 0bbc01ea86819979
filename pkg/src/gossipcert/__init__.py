"""Accuracy certification and simulation for randomized average-preserving
consensus systems (AAGA, BGA, SAGA, PBGA)."""

__version__ = "0.1.0"

from .graphs import WeightedGraph, disagreement, generate, laplacian, stats
from .models import (
    LaplacianEvent,
    MomentSet,
    StructureBounds,
    UpdateModel,
    empirical_moments,
    enumerate_events,
    exact_moments,
    sample,
)
from .certify import (
    BoundReport,
    GammaCertificate,
    check_condition,
    deviation_bound,
    gamma_from_beta,
    gamma_limited,
    gamma_pbga,
    gamma_uncorrelated,
    minimal_gamma,
    supermartingale_gap,
    theorem_gamma,
)
from .oracle import (
    expected_disagreement,
    lyapunov_trajectory,
    mse_trajectory,
    propagate,
    steady_state_mse,
)
from .montecarlo import (
    estimate_mean_preservation,
    estimate_mse,
    run_trajectory,
    steady_state_estimate,
)

__all__ = [
    "WeightedGraph", "disagreement", "generate", "laplacian", "stats",
    "LaplacianEvent", "MomentSet", "StructureBounds", "UpdateModel",
    "empirical_moments", "enumerate_events", "exact_moments", "sample",
    "BoundReport", "GammaCertificate", "check_condition", "deviation_bound",
    "gamma_from_beta", "gamma_limited", "gamma_pbga", "gamma_uncorrelated",
    "minimal_gamma", "supermartingale_gap", "theorem_gamma",
    "expected_disagreement", "lyapunov_trajectory", "mse_trajectory",
    "propagate", "steady_state_mse",
    "estimate_mean_preservation", "estimate_mse", "run_trajectory",
    "steady_state_estimate",
]
