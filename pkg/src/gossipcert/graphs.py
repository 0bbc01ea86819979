"""Weighted directed graphs, Laplacians, and standard generators.

Nodes are the contiguous integers 0..n-1.  Everything is dense: the target
scale is at most a few hundred nodes, where dense numpy beats any sparse
cleverness.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import json

import numpy as np

from .errors import StructuralError
from .rng import uniforms

DEFAULT_TOL = 1e-12


@dataclass(frozen=True)
class WeightedGraph:
    """A node count plus a nonnegative weight matrix."""

    n: int
    weights: np.ndarray
    loops_allowed: bool = False

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.float64)
        object.__setattr__(self, "weights", w)
        if self.n < 1:
            raise StructuralError(f"node count must be >= 1, got {self.n}")
        if w.shape != (self.n, self.n):
            raise StructuralError(
                f"weight matrix shape {w.shape} does not match n={self.n}"
            )
        if not np.all(np.isfinite(w)):
            raise StructuralError("weights must be finite")
        if np.any(w < 0):
            raise StructuralError("weights must be nonnegative")
        if not self.loops_allowed and np.any(np.diag(w) != 0):
            raise StructuralError("diagonal weights present but loops_allowed=False")

    def to_json(self) -> str:
        return json.dumps({"n": self.n, "weights": self.weights.tolist()})

    @classmethod
    def from_dict(cls, obj: dict) -> "WeightedGraph":
        try:
            n = int(obj["n"])
            weights = obj["weights"]
        except (KeyError, TypeError, ValueError) as exc:
            raise StructuralError(f"bad graph object: {exc}") from exc
        return cls(n=n, weights=np.asarray(weights, dtype=np.float64),
                   loops_allowed=bool(obj.get("loops_allowed", False)))

    @classmethod
    def from_json(cls, text: str) -> "WeightedGraph":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class GraphStats:
    d_out_max: int
    d_in_max: int
    d_max: int
    w_max: float
    row_sums: np.ndarray
    col_sums: np.ndarray
    is_balanced: bool
    is_symmetric: bool


def laplacian(g: WeightedGraph) -> np.ndarray:
    """Laplacian of the weight matrix: -A_ij off-diagonal, row sums on the diagonal."""
    a = g.weights
    off = a - np.diag(np.diag(a))
    lap = -off
    np.fill_diagonal(lap, off.sum(axis=1))
    return lap


def disagreement(y) -> float:
    """Mean squared deviation of the entries of y from their average."""
    y = np.asarray(y, dtype=np.float64)
    if y.ndim != 1 or y.size == 0:
        raise StructuralError("disagreement needs a nonempty 1-D vector")
    return float(np.mean((y - y.mean()) ** 2))


def stats(g: WeightedGraph, tol: float = DEFAULT_TOL) -> GraphStats:
    a = g.weights
    off = a - np.diag(np.diag(a))
    row_nnz = (off > 0).sum(axis=1)
    col_nnz = (off > 0).sum(axis=0)
    row_sums = a.sum(axis=1)
    col_sums = a.sum(axis=0)
    return GraphStats(
        d_out_max=int(row_nnz.max(initial=0)),
        d_in_max=int(col_nnz.max(initial=0)),
        d_max=int(max(row_nnz.max(initial=0), col_nnz.max(initial=0))),
        w_max=float(row_sums.max(initial=0.0)),
        row_sums=row_sums,
        col_sums=col_sums,
        is_balanced=bool(np.max(np.abs(row_sums - col_sums), initial=0.0) <= tol),
        is_symmetric=bool(np.max(np.abs(a - a.T), initial=0.0) <= tol),
    )


def generate(kind: str, n: int, weight: float = 1.0, seed: int = 0,
             p: float = 0.5) -> WeightedGraph:
    """Build a named symmetric graph family with uniform edge weight.

    kinds: cycle, complete, star, erdos_renyi.  The Erdos-Renyi draw is
    deterministic given the seed (counter-based RNG, one stream).
    """
    if n < 2:
        raise StructuralError(f"generator needs n >= 2, got {n}")
    if weight < 0:
        raise StructuralError("weight must be nonnegative")
    a = np.zeros((n, n))
    if kind == "cycle":
        for i in range(n):
            j = (i + 1) % n
            a[i, j] = a[j, i] = weight
    elif kind == "complete":
        a[:] = weight
        np.fill_diagonal(a, 0.0)
    elif kind == "star":
        a[0, 1:] = weight
        a[1:, 0] = weight
    elif kind == "erdos_renyi":
        if not 0.0 <= p <= 1.0:
            raise StructuralError(f"edge probability must be in [0,1], got {p}")
        m = n * (n - 1) // 2
        u = uniforms(seed, [0], 0, m)[0]
        iu, ju = np.triu_indices(n, k=1)
        present = u < p
        a[iu[present], ju[present]] = weight
        a[ju[present], iu[present]] = weight
    else:
        raise StructuralError(f"unknown graph kind {kind!r}")
    return WeightedGraph(n=n, weights=a)
