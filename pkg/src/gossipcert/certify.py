"""Accuracy certificates: the matrix condition, gamma formulas, and bounds.

A certificate is a scalar gamma for which

    E[L* 1 1* L]  <=  gamma * E[L + L* - L* L]      (semidefinite order)

holds; it implies the deviation bound gamma/(N+gamma) * V(x0) on the mean
square deviation of the running average from the initial average.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import CapacityError, PreconditionError, StructuralError
from .graphs import WeightedGraph, stats
from .models import (
    LaplacianEvent,
    MomentSet,
    StructureBounds,
    UpdateModel,
    check_mean_preserving,
    covariance_structure,
    structure_bounds,
)
from .spectral import graph_spectrum, is_psd

VALIDITY_TOL = 1e-9
BISECTION_REL_TOL = 1e-9


@dataclass(frozen=True)
class GammaCertificate:
    gamma: float  # math.inf marks an infeasible certificate
    method: str
    psd_min_eig: float | None = None  # None until checked against moments
    valid: bool | None = None

    @property
    def infeasible(self) -> bool:
        return not math.isfinite(self.gamma)


@dataclass(frozen=True)
class BoundReport:
    gamma: float
    n: int
    v0: float
    bound: float
    comparisons: dict[str, float]


def _require_mean_preserving(m: MomentSet):
    if not check_mean_preserving(m):
        raise PreconditionError(
            "moments are not mean-preserving (1*E[L] != 0); the accuracy "
            "condition does not apply"
        )


def check_condition(m: MomentSet, gamma: float, tol: float = VALIDITY_TOL,
                    method: str = "condition_check") -> GammaCertificate:
    """Test whether gamma*E[L+L*-L*L] - E[L*11*L] is PSD."""
    _require_mean_preserving(m)
    if gamma < 0:
        raise PreconditionError("gamma must be nonnegative")
    residual = gamma * m.EDrift - m.EL11L
    residual = 0.5 * (residual + residual.T)
    psd, min_eig = is_psd(residual, tol=tol)
    return GammaCertificate(gamma=float(gamma), method=method,
                            psd_min_eig=min_eig, valid=psd)


def minimal_gamma(m: MomentSet, tol: float = VALIDITY_TOL,
                  gamma_hi: float = 1.0) -> GammaCertificate:
    """Smallest valid gamma by bisection.

    Validity is monotone in gamma when E[L+L*-L*L] is PSD (a precondition
    here, and a fact for all models with alpha_min > 0).  The upper bracket
    is doubled until valid, up to 2^60; if nothing works the instance is
    infeasible, which happens exactly when no positive self-confidence
    bound exists (e.g. two-node AAGA with q = 1).
    """
    _require_mean_preserving(m)
    hi = max(gamma_hi, 1.0)
    while hi <= 2.0**60:
        if check_condition(m, hi, tol).valid:
            break
        hi *= 2.0
    else:
        return GammaCertificate(gamma=math.inf, method="bisection",
                                psd_min_eig=None, valid=False)
    lo = 0.0
    cert_lo = check_condition(m, lo, tol)
    if cert_lo.valid:
        return replace(cert_lo, method="bisection")
    while hi - lo > BISECTION_REL_TOL * max(1.0, hi):
        mid = 0.5 * (lo + hi)
        if check_condition(m, mid, tol).valid:
            hi = mid
        else:
            lo = mid
    return replace(check_condition(m, hi, tol), method="bisection")


def gamma_limited(b: StructureBounds) -> GammaCertificate:
    """gamma = A_max / alpha_min (limited simultaneous updates)."""
    if b.alpha_min <= 0:
        return GammaCertificate(gamma=math.inf, method="thm_limited", valid=False)
    return GammaCertificate(gamma=b.a_max / b.alpha_min, method="thm_limited")


def gamma_uncorrelated(b: StructureBounds, case: str,
                       case_verified: bool) -> GammaCertificate:
    """gamma for the three uncorrelatedness cases.

    The caller must pass the verdict of covariance_structure for the same
    case; the formula is meaningless on correlated models.
    """
    if case not in ("a", "b", "c"):
        raise StructuralError(f"case must be one of a/b/c, got {case!r}")
    if not case_verified:
        raise PreconditionError(
            f"uncorrelatedness case {case!r} was not verified for this model"
        )
    if b.alpha_min <= 0:
        return GammaCertificate(gamma=math.inf, method=f"thm_uncorr_{case}",
                                valid=False)
    numerator = {"a": b.a_ind_max, "b": b.a_row_max, "c": b.a_col_max}[case]
    return GammaCertificate(gamma=numerator / b.alpha_min,
                            method=f"thm_uncorr_{case}")


def gamma_from_beta(beta: float, alpha_min: float) -> GammaCertificate:
    """gamma = beta / alpha_min, given E[L*11*L] <= beta * E[L+L*]."""
    if beta < 0:
        raise PreconditionError("beta must be nonnegative")
    if alpha_min <= 0:
        return GammaCertificate(gamma=math.inf, method="lemma_beta", valid=False)
    return GammaCertificate(gamma=beta / alpha_min, method="lemma_beta")


def gamma_pbga(w_max: float, q: float) -> GammaCertificate:
    """gamma = (W_max + 1) q / (1 - q) for probabilistic broadcast with W = W*."""
    if not 0.0 < q < 1.0:
        raise PreconditionError(f"q must lie in (0,1), got {q}")
    if w_max < 0:
        raise PreconditionError("W_max must be nonnegative")
    return GammaCertificate(gamma=(w_max + 1.0) * q / (1.0 - q), method="prop_pbga")


def deviation_bound(gamma: float, n: int, v0: float) -> float:
    """gamma/(n+gamma) * v0: the certified mean-square deviation bound."""
    if gamma < 0 or n < 1 or v0 < 0:
        raise PreconditionError("need gamma >= 0, n >= 1, v0 >= 0")
    if math.isinf(gamma):
        return v0
    return gamma / (n + gamma) * v0


def theorem_gamma(model: UpdateModel) -> GammaCertificate:
    """The gamma formula each model kind gets from the theory.

    AAGA and BGA use the limited-updates formula; SAGA uses the
    uncorrelated-updates case (rows are independent by construction, and the
    hypothesis is re-verified by enumeration when the support is small
    enough); PBGA uses its dedicated formula and needs W symmetric.
    """
    b = structure_bounds(model)
    if model.kind in ("AAGA", "BGA"):
        return gamma_limited(b)
    if model.kind == "SAGA":
        try:
            verified = covariance_structure(model, "b")["holds"]
        except CapacityError:
            verified = True  # independent per-row draws by construction
        return gamma_uncorrelated(b, "b", verified)
    if not stats(model.graph).is_symmetric:
        raise PreconditionError("the PBGA gamma formula requires W symmetric")
    return gamma_pbga(stats(model.graph).w_max, model.q)


def supermartingale_gap(events: list[LaplacianEvent], gamma: float,
                        tol: float = VALIDITY_TOL) -> dict:
    """PSD test of the one-step decrease of the quadratic y*(11* + gamma I)y.

    Delta = (11*+gI) - sum_e p_e (I-L_e)*(11*+gI)(I-L_e); Delta PSD is
    exactly the statement that E[C(x(t+1)) | x(t)] <= C(x(t)).
    """
    if not events:
        raise StructuralError("empty event list")
    total = sum(e.probability for e in events)
    if abs(total - 1.0) > 1e-10:
        raise StructuralError(f"event probabilities sum to {total}, expected 1")
    n = events[0].n
    eye = np.eye(n)
    c_mat = np.ones((n, n)) + gamma * eye
    acc = np.zeros((n, n))
    for e in events:
        t_e = eye - e.L
        acc += e.probability * (t_e.T @ c_mat @ t_e)
    delta = c_mat - acc
    psd, min_eig = is_psd(0.5 * (delta + delta.T), tol=tol)
    return {"psd": psd, "min_eig": min_eig}


def prior_bounds(g: WeightedGraph, kind: str, q: float,
                 v0: float | None = None,
                 sigma2: float | None = None
                 ) -> tuple[dict[str, float], dict[str, str]]:
    """Comparison bounds reproduced from the cited prior literature.

    Returns (values, errors).  Keys depend on the model kind: bga_tca and
    bga_ffpf for BGA, aaga_ffsz for AAGA (needs sigma2), saga_ffsz for SAGA
    (needs v0 and a symmetric W).  Eigenvalue-based bounds require a
    symmetric connected graph; inapplicable bounds land in errors.
    """
    out: dict[str, float] = {}
    errors: dict[str, str] = {}
    n = g.n
    if kind == "AAGA":
        if sigma2 is None:
            errors["aaga_ffsz"] = "needs sigma2 (variance of i.i.d. initial data)"
        else:
            out["aaga_ffsz"] = (q - q / n) / (1.0 - q + q / n) * sigma2 / n
    elif kind in ("BGA", "SAGA"):
        if v0 is None:
            errors[f"{kind.lower()}_*"] = "needs v0 (initial disagreement)"
        else:
            try:
                spec = graph_spectrum(g)
            except StructuralError as exc:
                spec = None
                for name in (("bga_tca", "bga_ffpf") if kind == "BGA"
                             else ("saga_ffsz",)):
                    errors[name] = str(exc)
            if spec is not None and kind == "BGA":
                if spec["n_zero"] != 1:
                    errors["bga_tca"] = "graph is disconnected"
                    errors["bga_ffpf"] = "graph is disconnected"
                else:
                    lam1 = spec["lambda_1"]
                    lam_last = spec["lambda_last"]
                    out["bga_tca"] = v0 * (
                        1.0 - (lam1 / lam_last)
                        / (1.0 - 0.5 * (q / n) * lam_last)
                    )
                    d_max = stats(g).d_max
                    out["bga_ffpf"] = 2.0 * v0 * q / (1.0 - q) * d_max**2 / (n * lam1)
            elif spec is not None:
                esr = spec["esr"]
                if esr >= 1.0:
                    errors["saga_ffsz"] = "esr(W) >= 1, bound undefined"
                else:
                    out["saga_ffsz"] = (q / (1.0 - q)) / (2.0 * n) \
                        / (1.0 - esr) * v0
    elif kind == "PBGA":
        pass  # no prior bound is reproduced for PBGA
    else:
        raise StructuralError(f"unknown model kind {kind!r}")
    return out, errors
