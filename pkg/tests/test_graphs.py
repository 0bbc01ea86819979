import numpy as np
import pytest
from hypothesis import given, strategies as st

from gossipcert.errors import StructuralError
from gossipcert.graphs import (
    WeightedGraph,
    disagreement,
    generate,
    laplacian,
    stats,
)


class TestLaplacian:
    def test_two_node_asymmetric(self):
        g = WeightedGraph(2, np.array([[0.0, 2.0], [3.0, 0.0]]))
        np.testing.assert_array_equal(laplacian(g),
                                      np.array([[2.0, -2.0], [-3.0, 3.0]]))

    def test_empty_graph_is_zero(self):
        g = WeightedGraph(3, np.zeros((3, 3)))
        np.testing.assert_array_equal(laplacian(g), np.zeros((3, 3)))

    def test_unit_four_cycle_spectrum(self):
        # eigenvalues of the N-cycle Laplacian are 2 - 2 cos(2 pi k / N)
        lap = laplacian(generate("cycle", 4, 1.0))
        expected = sorted(2.0 - 2.0 * np.cos(2.0 * np.pi * k / 4) for k in range(4))
        got = np.sort(np.linalg.eigvalsh(lap))
        np.testing.assert_allclose(got, expected, atol=1e-12)
        assert expected == pytest.approx([0.0, 2.0, 2.0, 4.0])

    @pytest.mark.parametrize("kind,n", [("cycle", 5), ("complete", 4),
                                        ("star", 6), ("erdos_renyi", 7)])
    def test_zero_row_sums(self, kind, n):
        lap = laplacian(generate(kind, n, 1.3, seed=5, p=0.6))
        assert np.max(np.abs(lap.sum(axis=1))) <= 1e-12

    def test_symmetric_graph_gives_psd_laplacian(self):
        lap = laplacian(generate("erdos_renyi", 10, 2.0, seed=11, p=0.5))
        eigs = np.linalg.eigvalsh(lap)
        assert eigs.min() >= -1e-10 * np.linalg.norm(lap)


class TestValidation:
    def test_negative_weight_rejected(self):
        with pytest.raises(StructuralError):
            WeightedGraph(2, np.array([[0.0, -1.0], [1.0, 0.0]]))

    def test_shape_mismatch_rejected(self):
        with pytest.raises(StructuralError):
            WeightedGraph(3, np.zeros((2, 2)))

    def test_loops_need_flag(self):
        w = np.array([[1.0, 1.0], [1.0, 0.0]])
        with pytest.raises(StructuralError):
            WeightedGraph(2, w)
        g = WeightedGraph(2, w, loops_allowed=True)
        assert g.weights[0, 0] == 1.0

    def test_small_n_rejected_by_generators(self):
        with pytest.raises(StructuralError):
            generate("cycle", 1, 1.0)


class TestGenerators:
    def test_cycle_degree(self):
        g = generate("cycle", 4, 1.0)
        assert list((g.weights > 0).sum(axis=1)) == [2, 2, 2, 2]

    def test_complete_three(self):
        g = generate("complete", 3, 1.0)
        expected = np.ones((3, 3)) - np.eye(3)
        np.testing.assert_array_equal(g.weights, expected)

    def test_erdos_renyi_p_zero_empty(self):
        g = generate("erdos_renyi", 5, 1.0, seed=7, p=0.0)
        assert np.all(g.weights == 0)

    def test_erdos_renyi_deterministic(self):
        a = generate("erdos_renyi", 12, 1.0, seed=3, p=0.4)
        b = generate("erdos_renyi", 12, 1.0, seed=3, p=0.4)
        np.testing.assert_array_equal(a.weights, b.weights)
        c = generate("erdos_renyi", 12, 1.0, seed=4, p=0.4)
        assert not np.array_equal(a.weights, c.weights)


class TestStats:
    def test_unit_four_cycle(self):
        s = stats(generate("cycle", 4, 1.0))
        assert s.d_max == 2
        assert s.w_max == 2.0
        assert s.is_balanced and s.is_symmetric

    def test_directed_edge_unbalanced(self):
        s = stats(WeightedGraph(2, np.array([[0.0, 1.0], [0.0, 0.0]])))
        assert not s.is_balanced
        assert not s.is_symmetric

    def test_complete_four_w_max(self):
        assert stats(generate("complete", 4, 1.0)).w_max == 3.0


class TestDisagreement:
    def test_examples(self):
        assert disagreement([0.0, 1.0]) == pytest.approx(0.25)
        assert disagreement([3.0] * 7) == 0.0
        assert disagreement([1.0, 2.0, 3.0]) == pytest.approx(2.0 / 3.0)

    def test_empty_rejected(self):
        with pytest.raises(StructuralError):
            disagreement([])

    @given(st.lists(st.floats(-1e3, 1e3), min_size=1, max_size=20),
           st.floats(-1e3, 1e3))
    def test_translation_invariant(self, values, shift):
        y = np.array(values)
        assert disagreement(y + shift) == pytest.approx(disagreement(y),
                                                        abs=1e-9)

    @given(st.lists(st.floats(-1e2, 1e2), min_size=1, max_size=20),
           st.floats(-1e2, 1e2))
    def test_quadratic_scaling(self, values, c):
        y = np.array(values)
        assert disagreement(c * y) == pytest.approx(c * c * disagreement(y),
                                                    rel=1e-9, abs=1e-12)


class TestSerialization:
    def test_json_round_trip(self):
        g = generate("star", 5, 2.5)
        g2 = WeightedGraph.from_json(g.to_json())
        assert g2.n == g.n
        np.testing.assert_array_equal(g2.weights, g.weights)

    def test_bad_object_rejected(self):
        with pytest.raises(StructuralError):
            WeightedGraph.from_dict({"n": 2})
