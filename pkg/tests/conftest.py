"""Shared builders for the standard test instances used throughout the suite."""

import numpy as np
import pytest

from gossipcert.graphs import WeightedGraph, generate
from gossipcert.models import UpdateModel


def aaga_two_node(q=0.5, **kw):
    w = np.array([[0.0, 0.5], [0.5, 0.0]])
    return UpdateModel("AAGA", WeightedGraph(2, w), q, **kw)


def aaga_complete(n, q=0.5):
    w = np.full((n, n), 1.0 / (n * (n - 1)))
    np.fill_diagonal(w, 0.0)
    return UpdateModel("AAGA", WeightedGraph(n, w), q)


def bga_cycle(n, q=0.5):
    return UpdateModel("BGA", generate("cycle", n, 1.0), q)


def saga_cycle(n, q=0.5):
    return UpdateModel("SAGA", generate("cycle", n, 0.5), q)


def pbga_complete(n, q=0.5):
    return UpdateModel("PBGA", generate("complete", n, 1.0), q)


def standard_models(qs=(0.1, 0.5, 0.9)):
    """The instances every certification/oracle invariant is exercised on."""
    out = []
    for q in qs:
        out += [
            (f"aaga2_q{q}", aaga_two_node(q)),
            (f"aaga_complete4_q{q}", aaga_complete(4, q)),
            (f"bga_cycle4_q{q}", bga_cycle(4, q)),
            (f"bga_cycle6_q{q}", bga_cycle(6, q)),
            (f"saga_cycle4_q{q}", saga_cycle(4, q)),
            (f"pbga_complete3_q{q}", pbga_complete(3, q)),
            (f"pbga_complete4_q{q}", pbga_complete(4, q)),
        ]
    return out


@pytest.fixture(params=standard_models(), ids=lambda p: p[0])
def standard_model(request):
    return request.param[1]
