"""HTTP service exposing certification, simulation, and experiment runs.

The CLI is a thin client of this app (in-process by default, over the wire
with --server).  Request/response schemas are pydantic models; numerical
payloads stay plain lists so responses serialize to JSON without surprises.
"""

from __future__ import annotations

import math
from typing import Literal, Optional

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from . import __version__
from .certify import (
    check_condition,
    deviation_bound,
    minimal_gamma,
    theorem_gamma,
)
from .errors import (
    CapacityError,
    ConfigError,
    GossipcertError,
    NumericError,
    PreconditionError,
    StructuralError,
)
from .experiments import compare_bounds, make_x0, scaling
from .graphs import WeightedGraph, disagreement, generate
from .models import (
    UpdateModel,
    enumerate_events,
    exact_moments,
    support_size,
)
from .montecarlo import estimate_mse
from .oracle import expected_disagreement, lyapunov_trajectory, mse_trajectory

ORACLE_BUDGET = 4096


class GraphSpec(BaseModel):
    """Either explicit weights or a named generator."""

    n: Optional[int] = None
    weights: Optional[list[list[float]]] = None
    generate: Optional[str] = None  # cycle | complete | star | erdos_renyi
    weight: float = 1.0
    p: float = 0.5
    seed: int = 0

    def build(self) -> WeightedGraph:
        if self.weights is not None:
            if self.n is None:
                raise StructuralError("graph spec with weights needs n")
            return WeightedGraph.from_dict({"n": self.n, "weights": self.weights})
        if self.generate is not None:
            if self.n is None:
                raise StructuralError("graph generator needs n")
            return generate(self.generate, self.n, self.weight,
                            seed=self.seed, p=self.p)
        raise StructuralError("graph spec needs either weights or generate")


class ModelSpec(BaseModel):
    kind: Literal["AAGA", "BGA", "SAGA", "PBGA"]
    q: float
    graph: GraphSpec
    allow_degenerate: bool = False

    def build(self) -> UpdateModel:
        return UpdateModel(kind=self.kind, graph=self.graph.build(), q=self.q,
                           allow_degenerate=self.allow_degenerate)


class X0Spec(BaseModel):
    kind: Literal["explicit", "iid_uniform", "alternating"] = "alternating"
    values: Optional[list[float]] = None
    seed: int = 0
    normalize: bool = False

    def build(self, n: int):
        return make_x0(self.model_dump(), n)


class BoundFor(BaseModel):
    n: int
    v0: float
    bound: float


class CertifyRequest(BaseModel):
    model: ModelSpec
    gamma: Optional[float] = None
    minimal: bool = False
    theorem: Optional[str] = None  # only "auto" is recognized
    v0: Optional[float] = None


class CertifyResponse(BaseModel):
    gamma: Optional[float] = None  # None marks an infeasible certificate
    method: str
    psd_min_eig: Optional[float] = None
    valid: bool
    infeasible: bool
    bound_for: Optional[BoundFor] = None


class OracleRequest(BaseModel):
    model: ModelSpec
    x0: X0Spec = Field(default_factory=X0Spec)
    steps: int = 100
    gamma: Optional[float] = None  # defaults to the theorem gamma


class OracleRow(BaseModel):
    t: int
    mse: float
    disagreement: float
    lyapunov: float


class OracleResponse(BaseModel):
    gamma: float
    rows: list[OracleRow]


class SimulateRequest(BaseModel):
    model: ModelSpec
    x0: X0Spec = Field(default_factory=X0Spec)
    steps: int = 100
    trials: int = 1000
    seed: int = 0


class SimulateRow(BaseModel):
    t: int
    mse_mean: float
    mse_ci: float
    v_mean: float
    bound: Optional[float] = None
    oracle_mse: Optional[float] = None


class SimulateResponse(BaseModel):
    v0: float
    gamma: Optional[float] = None
    rows: list[SimulateRow]


class ScalingRequest(BaseModel):
    family: Literal["bga_cycle", "saga_cycle", "aaga_complete", "pbga_complete"]
    n_list: list[int]
    q: float = 0.5
    trials: int = 1000
    seed: int = 0
    v_fraction: float = 1e-3
    max_steps: int = 200_000


class ScalingResponse(BaseModel):
    rows: list[dict]


class CompareBoundsRequest(BaseModel):
    model: ModelSpec
    v0: float = 1.0
    sigma2: Optional[float] = None


class CompareBoundsResponse(BaseModel):
    rows: list[dict]


app = FastAPI(title="gossipcert", version=__version__)

_STATUS = {
    StructuralError: 400,
    ConfigError: 400,
    PreconditionError: 400,
    CapacityError: 413,
    NumericError: 500,
}


@app.exception_handler(GossipcertError)
async def _domain_error_handler(request: Request, exc: GossipcertError):
    status = next((code for cls, code in _STATUS.items() if isinstance(exc, cls)),
                  500)
    return JSONResponse(status_code=status,
                        content={"error": type(exc).__name__, "detail": str(exc)})


@app.get("/health")
def health():
    return {"status": "ok", "version": __version__}


@app.post("/certify", response_model=CertifyResponse)
def certify_endpoint(req: CertifyRequest) -> CertifyResponse:
    model = req.model.build()
    moments = exact_moments(model)
    if req.gamma is not None:
        cert = check_condition(moments, req.gamma)
    elif req.minimal:
        cert = minimal_gamma(moments)
    else:
        cert = theorem_gamma(model)
        if not cert.infeasible:
            checked = check_condition(moments, cert.gamma, method=cert.method)
            cert = checked
    bound_for = None
    if req.v0 is not None and not cert.infeasible:
        bound_for = BoundFor(n=model.n, v0=req.v0,
                             bound=deviation_bound(cert.gamma, model.n, req.v0))
    return CertifyResponse(
        gamma=cert.gamma if not cert.infeasible else None,
        method=cert.method,
        psd_min_eig=cert.psd_min_eig,
        valid=bool(cert.valid),
        infeasible=cert.infeasible,
        bound_for=bound_for,
    )


@app.post("/oracle", response_model=OracleResponse)
def oracle_endpoint(req: OracleRequest) -> OracleResponse:
    model = req.model.build()
    x0 = req.x0.build(model.n)
    events = enumerate_events(model)
    if req.gamma is not None:
        gamma = req.gamma
    else:
        cert = theorem_gamma(model)
        gamma = cert.gamma if not cert.infeasible else 0.0
    mse = mse_trajectory(events, x0, req.steps)
    dis = expected_disagreement(events, x0, req.steps)
    lya = lyapunov_trajectory(events, x0, gamma, req.steps)
    rows = [OracleRow(t=t, mse=mse[t], disagreement=dis[t], lyapunov=lya[t])
            for t in range(req.steps + 1)]
    return OracleResponse(gamma=gamma, rows=rows)


@app.post("/simulate", response_model=SimulateResponse)
def simulate_endpoint(req: SimulateRequest) -> SimulateResponse:
    model = req.model.build()
    x0 = req.x0.build(model.n)
    v0 = disagreement(x0)
    estimates = estimate_mse(model, x0, req.steps, req.trials, req.seed)
    cert = theorem_gamma(model)
    gamma = None if cert.infeasible else cert.gamma
    bound = None if gamma is None else deviation_bound(gamma, model.n, v0)
    oracle_mse: dict[int, float] = {}
    if support_size(model) <= ORACLE_BUDGET:
        try:
            events = enumerate_events(model, budget=ORACLE_BUDGET)
            traj = mse_trajectory(events, x0, req.steps)
            oracle_mse = {t: traj[t] for t in range(req.steps + 1)}
        except (CapacityError, PreconditionError):
            oracle_mse = {}
    rows = [SimulateRow(t=e.t, mse_mean=e.mse_mean, mse_ci=e.ci_half_width,
                        v_mean=e.v_mean, bound=bound,
                        oracle_mse=oracle_mse.get(e.t))
            for e in estimates]
    return SimulateResponse(v0=v0, gamma=gamma, rows=rows)


@app.post("/scaling", response_model=ScalingResponse)
def scaling_endpoint(req: ScalingRequest) -> ScalingResponse:
    rows = scaling(req.family, req.n_list, req.q, req.trials, req.seed,
                   v_fraction=req.v_fraction, max_steps=req.max_steps)
    return ScalingResponse(rows=rows)


@app.post("/compare-bounds", response_model=CompareBoundsResponse)
def compare_bounds_endpoint(req: CompareBoundsRequest) -> CompareBoundsResponse:
    model = req.model.build()
    rows = compare_bounds(model, req.v0, sigma2=req.sigma2)
    return CompareBoundsResponse(rows=rows)
