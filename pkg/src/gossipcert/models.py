"""The four randomized update laws and their Laplacian distributions.

AAGA  one directed edge (i,j) sampled with probability W_ij; the receiver i
      moves a fraction q toward x_j.
BGA   a uniform broadcaster j; every i with W_ij = 1 moves q toward x_j.
SAGA  every node i independently picks a neighbor j_i with probability
      W[i, j_i] and moves q toward it.
PBGA  a uniform broadcaster j; each i independently receives with
      probability W_ij and, if it does, moves q toward x_j.

All four produce an i.i.d. sequence of random Laplacians L(t); this module
samples them, enumerates their support exactly on small instances, and
computes the moment matrices E[L], E[L*L], E[L*11*L] that the certification
condition is stated in.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product

import numpy as np

from .errors import CapacityError, StructuralError
from .graphs import WeightedGraph, laplacian, stats
from .rng import uniforms

KINDS = ("AAGA", "BGA", "SAGA", "PBGA")
DEFAULT_BUDGET = 200_000
_W_TOL = 1e-9


@dataclass(frozen=True)
class UpdateModel:
    kind: str
    graph: WeightedGraph
    q: float
    allow_degenerate: bool = False

    def __post_init__(self):
        if self.kind not in KINDS:
            raise StructuralError(f"unknown model kind {self.kind!r}")
        w = self.graph.weights
        if np.any(np.diag(w) != 0):
            raise StructuralError("update models require a loop-free W")
        if not 0.0 < self.q < 1.0:
            if self.q == 1.0 and self.allow_degenerate:
                pass  # permitted only for oracle experiments (no valid gamma exists)
            else:
                raise StructuralError(
                    f"q must lie in (0,1), got {self.q}; q=1 needs allow_degenerate"
                )
        if self.kind == "AAGA":
            if abs(w.sum() - 1.0) > _W_TOL:
                raise StructuralError("AAGA requires the entries of W to sum to 1")
        elif self.kind == "BGA":
            if not np.all((np.abs(w) <= _W_TOL) | (np.abs(w - 1.0) <= _W_TOL)):
                raise StructuralError("BGA requires W with entries in {0,1}")
        elif self.kind == "SAGA":
            if np.max(np.abs(w.sum(axis=1) - 1.0)) > _W_TOL:
                raise StructuralError("SAGA requires row-stochastic W (W1 = 1)")
        elif self.kind == "PBGA":
            if np.any(w > 1.0 + _W_TOL):
                raise StructuralError("PBGA requires probabilities W_ij in [0,1]")

    @property
    def n(self) -> int:
        return self.graph.n

    @classmethod
    def from_dict(cls, obj: dict) -> "UpdateModel":
        try:
            kind = obj["kind"]
            q = float(obj["q"])
            graph = WeightedGraph.from_dict(obj["graph"])
        except (KeyError, TypeError, ValueError) as exc:
            raise StructuralError(f"bad model object: {exc}") from exc
        return cls(kind=kind, graph=graph, q=q,
                   allow_degenerate=bool(obj.get("allow_degenerate", False)))


@dataclass(frozen=True)
class LaplacianEvent:
    """One realization of L, stored as sparse (row, col, coefficient) triples.

    Each triple (i, j, a) means a_ij = a, contributing L_ij = -a and adding a
    to L_ii.  Row sums are therefore zero by construction.
    """

    n: int
    probability: float
    triples: tuple[tuple[int, int, float], ...]

    @cached_property
    def L(self) -> np.ndarray:
        lap = np.zeros((self.n, self.n))
        for i, j, a in self.triples:
            lap[i, j] -= a
            lap[i, i] += a
        return lap


@dataclass(frozen=True)
class MomentSet:
    EL: np.ndarray
    ELL: np.ndarray
    EL11L: np.ndarray
    source: str  # closed_form | enumeration | empirical(<trials>)

    @property
    def EDrift(self) -> np.ndarray:
        return self.EL + self.EL.T - self.ELL

    @property
    def n(self) -> int:
        return self.EL.shape[0]


@dataclass(frozen=True)
class StructureBounds:
    """Almost-sure bounds on the update coefficients of one model instance."""

    alpha_min: float
    a_max: float
    a_ind_max: float
    a_row_max: float
    a_col_max: float


# ---------------------------------------------------------------------------
# batched draws (shared by sample(), Monte Carlo, and empirical moments)
# ---------------------------------------------------------------------------

def _aaga_edges(w: np.ndarray):
    iu, ju = np.nonzero(w)
    probs = w[iu, ju]
    cum = np.cumsum(probs)
    cum[-1] = 1.0
    return iu, ju, probs, cum


def draw_batch(model: UpdateModel, master_seed: int, stream_ids, step: int):
    """One draw per stream; returns a model-specific descriptor tuple."""
    w = model.graph.weights
    n = model.n
    streams = np.asarray(stream_ids)
    t = streams.size
    if model.kind == "AAGA":
        iu, ju, _, cum = _aaga_edges(w)
        u = uniforms(master_seed, streams, step, 1)[:, 0]
        e = np.searchsorted(cum, u, side="right")
        e = np.minimum(e, len(iu) - 1)
        return iu[e], ju[e]
    if model.kind == "BGA":
        u = uniforms(master_seed, streams, step, 1)[:, 0]
        j = np.minimum((u * n).astype(np.int64), n - 1)
        mask = (w[:, j] > 0).T  # (t, n): receivers of each broadcaster
        return j, mask
    if model.kind == "SAGA":
        u = uniforms(master_seed, streams, step, n)
        cum = np.cumsum(w, axis=1)
        cum[:, -1] = 1.0
        choice = (u[:, :, None] >= cum[None, :, :]).sum(axis=2)
        return (np.minimum(choice, n - 1),)
    # PBGA: slot 0 selects the broadcaster, slots 1..n are reception coins
    u = uniforms(master_seed, streams, step, n + 1)
    j = np.minimum((u[:, 0] * n).astype(np.int64), n - 1)
    mask = u[:, 1:] < w[:, j].T
    return j, mask


def dense_events(model: UpdateModel, draw) -> np.ndarray:
    """Dense (t, n, n) Laplacian realizations for a batch of draws."""
    n = model.n
    q = model.q
    if model.kind == "AAGA":
        i, j = draw
        t = len(i)
        lap = np.zeros((t, n, n))
        rows = np.arange(t)
        lap[rows, i, i] = q
        lap[rows, i, j] = -q
        return lap
    if model.kind in ("BGA", "PBGA"):
        j, mask = draw
        t = len(j)
        lap = np.zeros((t, n, n))
        bt, bi = np.nonzero(mask)
        lap[bt, bi, bi] = q
        lap[bt, bi, j[bt]] = -q
        return lap
    (choice,) = draw
    t, _ = choice.shape
    lap = np.full((t, n, n), 0.0)
    rows = np.arange(t)[:, None]
    cols = np.arange(n)[None, :]
    lap[rows, cols, cols] = q
    np.add.at(lap, (rows, cols, choice), -q)
    return lap


def sample(model: UpdateModel, master_seed: int, stream_id: int = 0,
           step: int = 0) -> LaplacianEvent:
    """One realization of L(t); the probability field is unused (-1)."""
    draw = draw_batch(model, master_seed, np.asarray([stream_id]), step)
    q = model.q
    if model.kind == "AAGA":
        i, j = int(draw[0][0]), int(draw[1][0])
        triples = ((i, j, q),)
    elif model.kind in ("BGA", "PBGA"):
        j = int(draw[0][0])
        receivers = np.nonzero(draw[1][0])[0]
        triples = tuple((int(i), j, q) for i in receivers)
    else:
        choice = draw[0][0]
        triples = tuple((i, int(choice[i]), q) for i in range(model.n))
    return LaplacianEvent(n=model.n, probability=-1.0, triples=triples)


# ---------------------------------------------------------------------------
# exact support enumeration
# ---------------------------------------------------------------------------

def support_size(model: UpdateModel) -> int:
    w = model.graph.weights
    n = model.n
    if model.kind == "AAGA":
        return int(np.count_nonzero(w))
    if model.kind == "BGA":
        return n
    if model.kind == "PBGA":
        degs = (w > 0).sum(axis=0)  # receivers per broadcaster
        return int(sum(2 ** int(d) for d in degs))
    degs = (w > 0).sum(axis=1)
    size = 1
    for d in degs:
        size *= int(d)
    return size


def enumerate_events(model: UpdateModel,
                     budget: int = DEFAULT_BUDGET) -> list[LaplacianEvent]:
    """The full distribution of L as a list of events with probabilities.

    Zero-probability PBGA reception patterns are dropped; the remaining
    probabilities still sum to 1.
    """
    size = support_size(model)
    if size > budget:
        raise CapacityError(
            f"{model.kind} support size {size} exceeds budget {budget}",
            support_size=size,
        )
    w = model.graph.weights
    n = model.n
    q = model.q
    events: list[LaplacianEvent] = []
    if model.kind == "AAGA":
        iu, ju, probs, _ = _aaga_edges(w)
        for i, j, p in zip(iu, ju, probs):
            events.append(LaplacianEvent(n, float(p), ((int(i), int(j), q),)))
    elif model.kind == "BGA":
        for j in range(n):
            receivers = np.nonzero(w[:, j] > 0)[0]
            triples = tuple((int(i), j, q) for i in receivers)
            events.append(LaplacianEvent(n, 1.0 / n, triples))
    elif model.kind == "PBGA":
        for j in range(n):
            receivers = np.nonzero(w[:, j] > 0)[0]
            for bits in product((0, 1), repeat=len(receivers)):
                p = 1.0 / n
                triples = []
                for i, bit in zip(receivers, bits):
                    wij = w[i, j]
                    p *= wij if bit else 1.0 - wij
                    if bit:
                        triples.append((int(i), j, q))
                if p > 0.0:
                    events.append(LaplacianEvent(n, float(p), tuple(triples)))
    else:  # SAGA: cartesian product of independent per-row choices
        row_choices = []
        for i in range(n):
            nz = np.nonzero(w[i] > 0)[0]
            row_choices.append([(int(j), float(w[i, j])) for j in nz])
        for combo in product(*row_choices):
            p = 1.0
            triples = []
            for i, (j, wij) in enumerate(combo):
                p *= wij
                triples.append((i, j, q))
            events.append(LaplacianEvent(n, float(p), tuple(triples)))
    return _merge_duplicates(events)


def _merge_duplicates(events: list[LaplacianEvent]) -> list[LaplacianEvent]:
    # distinct broadcasters with no receivers all realize L = 0; collapse them
    merged: dict[tuple, float] = {}
    for e in events:
        key = tuple(sorted(e.triples))
        merged[key] = merged.get(key, 0.0) + e.probability
    if len(merged) == len(events):
        return events
    return [LaplacianEvent(events[0].n, p, triples)
            for triples, p in merged.items()]


# ---------------------------------------------------------------------------
# moments
# ---------------------------------------------------------------------------

def moments_from_events(events: list[LaplacianEvent], source: str = "enumeration",
                        check_total: bool = True) -> MomentSet:
    if not events:
        raise StructuralError("empty event list")
    n = events[0].n
    total = sum(e.probability for e in events)
    if check_total and abs(total - 1.0) > 1e-12:
        raise StructuralError(f"event probabilities sum to {total}, expected 1")
    el = np.zeros((n, n))
    ell = np.zeros((n, n))
    el11l = np.zeros((n, n))
    for e in events:
        lap = e.L
        el += e.probability * lap
        ell += e.probability * (lap.T @ lap)
        s = lap.sum(axis=0)
        el11l += e.probability * np.outer(s, s)
    return MomentSet(EL=el, ELL=ell, EL11L=el11l, source=source)


def _pair_difference_sum(w: np.ndarray) -> np.ndarray:
    """sum_ij w_ij (e_i - e_j)(e_i - e_j)^T  =  diag(r + c) - (W + W^T)."""
    r = w.sum(axis=1)
    c = w.sum(axis=0)
    return np.diag(r + c) - (w + w.T)


def exact_moments(model: UpdateModel, budget: int = DEFAULT_BUDGET) -> MomentSet:
    """Exact moment matrices: closed form when available, else enumeration.

    Closed forms: AAGA (any W), SAGA (per-row independence factorization),
    PBGA with symmetric W.  BGA uses enumeration, whose support is only N.
    """
    w = model.graph.weights
    n = model.n
    q = model.q
    if model.kind == "AAGA":
        lw = laplacian(model.graph)
        d = q * q * _pair_difference_sum(w)
        return MomentSet(EL=q * lw, ELL=d, EL11L=d, source="closed_form")
    if model.kind == "SAGA":
        lw = laplacian(model.graph)
        el = q * lw
        ell = q * q * _pair_difference_sum(w)
        # rows of L are independent: cross terms factor through row means
        eye = np.eye(n)
        m_rows = q * (eye - w)  # m_rows[i] = E of row i of L
        s = m_rows.sum(axis=0)
        el11l = ell + np.outer(s, s) - m_rows.T @ m_rows
        return MomentSet(EL=el, ELL=ell, EL11L=el11l, source="closed_form")
    if model.kind == "PBGA" and stats(model.graph).is_symmetric:
        lw = laplacian(model.graph)
        lww = laplacian(WeightedGraph(n, w * w))
        el = (q / n) * lw
        ell = (2.0 * q * q / n) * lw
        el11l = (q * q / n) * (lw @ lw) + (2.0 * q * q / n) * lw \
            - (2.0 * q * q / n) * lww
        return MomentSet(EL=el, ELL=ell, EL11L=el11l, source="closed_form")
    return moments_from_events(enumerate_events(model, budget=budget))


def empirical_moments(model: UpdateModel, trials: int, seed: int,
                      chunk: int = 50_000) -> MomentSet:
    """Sample-mean estimates of the moment matrices over independent draws."""
    if trials < 1:
        raise StructuralError("trials must be >= 1")
    n = model.n
    el = np.zeros((n, n))
    ell = np.zeros((n, n))
    el11l = np.zeros((n, n))
    done = 0
    while done < trials:
        batch = min(chunk, trials - done)
        streams = np.arange(done, done + batch)
        laps = dense_events(model, draw_batch(model, seed, streams, 0))
        el += laps.sum(axis=0)
        ell += np.einsum("tij,tik->jk", laps, laps)
        s = laps.sum(axis=1)
        el11l += np.einsum("ti,tj->ij", s, s)
        done += batch
    return MomentSet(EL=el / trials, ELL=ell / trials, EL11L=el11l / trials,
                     source=f"empirical({trials})")


def check_mean_preserving(moments: MomentSet, tol: float = 1e-10) -> bool:
    """True iff 1*E[L] = 0 entrywise within tol (expected-average preservation)."""
    return bool(np.max(np.abs(moments.EL.sum(axis=0)), initial=0.0) <= tol)


def structure_bounds(model: UpdateModel) -> StructureBounds:
    """Almost-sure coefficient bounds implied by the model's structure.

    Fields not pinned down by the structure fall back to the trivial
    almost-sure bound (q times a node/degree count).
    """
    q = model.q
    w = model.graph.weights
    n = model.n
    d_in_max = int((w > 0).sum(axis=0).max(initial=0))
    if model.kind == "AAGA":
        return StructureBounds(1.0 - q, q, q, q, q)
    if model.kind == "BGA":
        return StructureBounds(1.0 - q, q * d_in_max, q, q, q * d_in_max)
    if model.kind == "SAGA":
        return StructureBounds(1.0 - q, q * n, q, q, q * d_in_max)
    return StructureBounds(1.0 - q, q * d_in_max, q, q, q * d_in_max)


def covariance_structure(model: UpdateModel, case: str,
                         budget: int = DEFAULT_BUDGET) -> dict:
    """Check the uncorrelatedness hypothesis of the given case by enumeration.

    case 'a': all distinct off-diagonal coefficient pairs uncorrelated;
    case 'b': pairs in different rows (i != k); case 'c': different columns
    (j != l).  Diagonal coefficients never enter the certification condition
    (the y_i - y_i differences vanish), so only off-diagonal pairs are tested.
    """
    if case not in ("a", "b", "c"):
        raise StructuralError(f"case must be one of a/b/c, got {case!r}")
    events = enumerate_events(model, budget=budget)
    n = model.n
    probs = np.array([e.probability for e in events])
    a_flat = np.zeros((len(events), n * n))
    for k, e in enumerate(events):
        a = np.zeros((n, n))
        for i, j, coef in e.triples:
            a[i, j] += coef
        a_flat[k] = a.ravel()
    mean = probs @ a_flat
    second = a_flat.T @ (a_flat * probs[:, None])
    cov = second - np.outer(mean, mean)

    idx_i = np.repeat(np.arange(n), n)
    idx_j = np.tile(np.arange(n), n)
    offdiag = idx_i != idx_j
    if case == "a":
        required = np.ones((n * n, n * n), dtype=bool)
        np.fill_diagonal(required, False)
    elif case == "b":
        required = idx_i[:, None] != idx_i[None, :]
    else:
        required = idx_j[:, None] != idx_j[None, :]
    required &= offdiag[:, None] & offdiag[None, :]
    max_violation = float(np.max(np.abs(cov[required]), initial=0.0))
    return {"holds": max_violation <= 1e-12, "max_violation": max_violation}
