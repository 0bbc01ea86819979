import numpy as np
import pytest

from gossipcert.errors import NumericError, StructuralError
from gossipcert.graphs import WeightedGraph, generate, laplacian
from gossipcert.spectral import EigenResult, eig_sym, graph_spectrum, is_psd


def random_symmetric(rng, n, scale=1.0):
    a = rng.normal(size=(n, n)) * scale
    return 0.5 * (a + a.T)


def cholesky_psd_oracle(m):
    """Independent verdict: attempted factorization of M + tiny jitter."""
    jitter = 1e-10 * max(1.0, np.linalg.norm(m)) * np.eye(m.shape[0])
    try:
        np.linalg.cholesky(m + jitter)
        return True
    except np.linalg.LinAlgError:
        return False


class TestEigSym:
    def test_two_by_two_analytic(self):
        res = eig_sym(np.array([[2.0, -1.0], [-1.0, 2.0]]))
        np.testing.assert_allclose(res.values, [1.0, 3.0], atol=1e-12)

    def test_identity(self):
        res = eig_sym(np.eye(5))
        np.testing.assert_allclose(res.values, np.ones(5))

    def test_eight_cycle_smallest_nonzero(self):
        lap = laplacian(generate("cycle", 8, 1.0))
        res = eig_sym(lap)
        nonzero = res.values[np.abs(res.values) > 1e-9]
        assert nonzero[0] == pytest.approx(2.0 - np.sqrt(2.0), abs=1e-10)

    def test_nonfinite_rejected(self):
        with pytest.raises(NumericError):
            eig_sym(np.array([[np.nan, 0.0], [0.0, 1.0]]))

    def test_asymmetric_rejected(self):
        with pytest.raises(StructuralError):
            eig_sym(np.array([[0.0, 1.0], [0.0, 0.0]]))

    @pytest.mark.parametrize("n", [2, 5, 16, 64])
    def test_reconstruction_residual(self, n):
        rng = np.random.default_rng(n)
        m = random_symmetric(rng, n)
        res = eig_sym(m)
        recon = res.vectors @ np.diag(res.values) @ res.vectors.T
        assert np.linalg.norm(recon - m) <= 1e-9 * np.linalg.norm(m)
        assert np.all(np.diff(res.values) >= 0)
        ortho = res.vectors.T @ res.vectors
        assert np.max(np.abs(ortho - np.eye(n))) <= 1e-9

    @pytest.mark.parametrize("n", [3, 8, 24])
    def test_trace_and_frobenius_invariants(self, n):
        rng = np.random.default_rng(100 + n)
        m = random_symmetric(rng, n, scale=3.0)
        vals = eig_sym(m).values
        assert vals.sum() == pytest.approx(np.trace(m), rel=1e-10, abs=1e-10)
        assert (vals**2).sum() == pytest.approx(np.linalg.norm(m) ** 2,
                                                rel=1e-10)

    def test_residual_field(self):
        rng = np.random.default_rng(9)
        m = random_symmetric(rng, 10)
        res = eig_sym(m)
        assert res.residual <= 1e-9 * max(1.0, np.linalg.norm(m))


class TestIsPsd:
    def test_zero_matrix(self):
        psd, min_eig = is_psd(np.zeros((3, 3)))
        assert psd and min_eig == 0.0

    def test_indefinite(self):
        psd, min_eig = is_psd(np.array([[1.0, 2.0], [2.0, 1.0]]))
        assert not psd
        assert min_eig == pytest.approx(-1.0, abs=1e-12)

    def test_positive_definite(self):
        psd, _ = is_psd(np.array([[2.0, -1.0], [-1.0, 2.0]]))
        assert psd

    def test_agrees_with_factorization_oracle(self):
        rng = np.random.default_rng(77)
        tol = 1e-9
        checked = 0
        for _ in range(1000):
            n = int(rng.integers(2, 7))
            if rng.random() < 0.5:
                b = rng.normal(size=(n, n))
                m = b @ b.T  # PSD by construction
            else:
                m = random_symmetric(rng, n)
            psd, min_eig = is_psd(m, tol=tol)
            margin = 10.0 * tol * max(1.0, np.linalg.norm(m))
            if abs(min_eig) <= margin:
                continue  # verdict legitimately ambiguous at this tolerance
            checked += 1
            assert psd == cholesky_psd_oracle(m), f"disagreement at min_eig={min_eig}"
        assert checked > 800


class TestGraphSpectrum:
    def test_unit_four_cycle(self):
        spec = graph_spectrum(generate("cycle", 4, 1.0))
        assert spec["lambda_1"] == pytest.approx(2.0, abs=1e-10)
        assert spec["lambda_last"] == pytest.approx(4.0, abs=1e-10)

    def test_two_cycle_esr(self):
        g = WeightedGraph(2, np.array([[0.0, 0.5], [0.5, 0.0]]))
        assert graph_spectrum(g)["esr"] == pytest.approx(0.5, abs=1e-12)

    def test_eight_cycle_half_weight_esr(self):
        # circulant eigenvalues cos(2 pi k / 8); second largest is cos(2 pi / 8)
        g = generate("cycle", 8, 0.5)
        assert graph_spectrum(g)["esr"] == pytest.approx(np.cos(2 * np.pi / 8),
                                                         abs=1e-10)

    def test_asymmetric_rejected(self):
        g = WeightedGraph(2, np.array([[0.0, 1.0], [0.0, 0.0]]))
        with pytest.raises(StructuralError):
            graph_spectrum(g)

    def test_disconnected_counts_zero_eigenvalues(self):
        w = np.zeros((4, 4))
        w[0, 1] = w[1, 0] = 1.0
        w[2, 3] = w[3, 2] = 1.0
        spec = graph_spectrum(WeightedGraph(4, w))
        assert spec["n_zero"] == 2
