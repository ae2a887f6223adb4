import numpy as np
import pytest

from tripure import (
    ContractError,
    DensityMatrix,
    GenericityViolation,
    NumericalError,
    SpectrumMismatch,
    detect_degeneracy,
    eig_hermitian,
    match_spectra,
    partial_trace,
)
from tripure.spectral import RANK_LEAK_TOL, SpectralDecomposition

from conftest import haar
from oracles import partial_trace_pure_loops


def spec_of(vals, vecs=None):
    vals = np.asarray(vals, dtype=float)
    n = len(vals)
    vecs = np.eye(n, dtype=complex) if vecs is None else vecs
    return SpectralDecomposition(vals, vecs, n, n)


class TestEigHermitian:
    def test_isotropic_qubit(self):
        spec = eig_hermitian(DensityMatrix(("A",), (2,), np.eye(2) / 2.0))
        assert spec.rank == 2
        np.testing.assert_allclose(spec.eigenvalues, [0.5, 0.5], atol=1e-14)

    def test_w_state_marginal(self, w_state):
        # oracle: brute-force partial trace, diagonal by the state's symmetry
        rho_a = partial_trace_pure_loops(w_state.amplitudes, (2, 2, 2), "A")
        spec = eig_hermitian(DensityMatrix(("A",), (2,), rho_a))
        np.testing.assert_allclose(spec.eigenvalues, [2.0 / 3.0, 1.0 / 3.0], atol=1e-12)

    def test_explicit_diagonal_truncation(self):
        rho = DensityMatrix(("A",), (3,), np.diag([0.7, 0.3, 0.0]))
        spec = eig_hermitian(rho, rank_threshold=1e-12)
        assert spec.rank == 2
        np.testing.assert_allclose(spec.eigenvalues, [0.7, 0.3], atol=1e-14)

    @pytest.mark.parametrize("seed", range(4))
    def test_orthonormal_and_faithful(self, seed):
        rho = partial_trace(haar(3, 3, 3, seed), ("A", "B"))
        spec = eig_hermitian(rho)
        gram = spec.eigenvectors.conj().T @ spec.eigenvectors
        assert np.abs(gram - np.eye(spec.rank)).max() <= 1e-10
        rebuilt = (spec.eigenvectors * spec.eigenvalues) @ spec.eigenvectors.conj().T
        assert np.linalg.norm(rho.matrix - rebuilt) <= RANK_LEAK_TOL
        assert abs(spec.eigenvalues.sum() - 1.0) <= RANK_LEAK_TOL

    def test_descending_order(self):
        rho = partial_trace(haar(2, 3, 4, 7), ("B", "C"))
        spec = eig_hermitian(rho)
        assert np.all(np.diff(spec.eigenvalues) <= 0)

    @pytest.mark.parametrize("bad", [0.0, -1e-3, 1.0, 2.0])
    def test_threshold_range(self, bad):
        rho = DensityMatrix(("A",), (2,), np.eye(2) / 2.0)
        with pytest.raises(ContractError):
            eig_hermitian(rho, rank_threshold=bad)

    def test_solver_failure_is_typed(self, monkeypatch):
        def boom(_):
            raise np.linalg.LinAlgError("no convergence")

        monkeypatch.setattr(np.linalg, "eigh", boom)
        rho = DensityMatrix(("A",), (2,), np.eye(2) / 2.0)
        with pytest.raises(NumericalError):
            eig_hermitian(rho)

    @pytest.mark.parametrize("seed", range(3))
    def test_idempotent_reconstruction(self, seed):
        rho = partial_trace(haar(2, 2, 2, 30 + seed), ("A",))
        spec = eig_hermitian(rho)
        rebuilt = (spec.eigenvectors * spec.eigenvalues) @ spec.eigenvectors.conj().T
        spec2 = eig_hermitian(DensityMatrix(("A",), (2,), rebuilt))
        np.testing.assert_allclose(spec2.eigenvalues, spec.eigenvalues, atol=1e-10)

    @pytest.mark.parametrize("seed", range(3))
    def test_eigenvector_unique_up_to_phase(self, seed):
        rho = partial_trace(haar(2, 3, 4, 60 + seed), ("A",))
        spec = eig_hermitian(rho)
        rebuilt = (spec.eigenvectors * spec.eigenvalues) @ spec.eigenvectors.conj().T
        spec2 = eig_hermitian(DensityMatrix(("A",), (2,), rebuilt))
        for col in range(spec.rank):
            overlap = abs(np.vdot(spec2.eigenvectors[:, col], spec.eigenvectors[:, col]))
            assert overlap >= 1.0 - 1e-9


class TestDetectDegeneracy:
    def test_ghz_marginal_cluster(self, ghz_state):
        spec = eig_hermitian(partial_trace(ghz_state, ("A",)))
        assert detect_degeneracy(spec, gap_tol=1e-8) == [[0, 1]]

    def test_w_marginal_generic(self, w_state):
        spec = eig_hermitian(partial_trace(w_state, ("A",)))
        assert detect_degeneracy(spec, gap_tol=1e-8) == []

    def test_threshold_forced_cluster(self):
        spec = spec_of([0.4, 0.4 - 5e-9, 0.2])
        assert detect_degeneracy(spec, gap_tol=1e-8) == [[0, 1]]

    def test_two_separate_clusters(self):
        spec = spec_of([0.3, 0.3, 0.2, 0.2])
        assert detect_degeneracy(spec, gap_tol=1e-8) == [[0, 1], [2, 3]]


class TestMatchSpectra:
    def test_w_state_pairing(self, w_state):
        spec_a = eig_hermitian(partial_trace(w_state, ("A",)))
        spec_bc = eig_hermitian(partial_trace(w_state, ("B", "C")))
        pairing = match_spectra(spec_a, spec_bc)
        np.testing.assert_array_equal(pairing.permutation, [0, 1])
        assert pairing.max_pair_gap <= 1e-10

    @pytest.mark.parametrize("seed", range(6))
    def test_independent_states_mismatch(self, seed):
        spec_a = eig_hermitian(partial_trace(haar(2, 2, 2, seed), ("A",)))
        spec_bc = eig_hermitian(partial_trace(haar(2, 2, 2, 1000 + seed), ("B", "C")))
        with pytest.raises(SpectrumMismatch):
            match_spectra(spec_a, spec_bc)

    def test_ghz_degenerate(self, ghz_state):
        spec_a = eig_hermitian(partial_trace(ghz_state, ("A",)))
        spec_bc = eig_hermitian(partial_trace(ghz_state, ("B", "C")))
        with pytest.raises(GenericityViolation):
            match_spectra(spec_a, spec_bc)

    def test_rank_mismatch(self):
        with pytest.raises(SpectrumMismatch):
            match_spectra(spec_of([0.6, 0.4]), spec_of([0.6, 0.3, 0.1]))

    @pytest.mark.parametrize("dims", [(2, 2, 2), (2, 3, 4), (3, 3, 3)])
    @pytest.mark.parametrize("seed", range(3))
    def test_haar_complementarity(self, dims, seed):
        psi = haar(*dims, 300 + seed)
        spec_a = eig_hermitian(partial_trace(psi, ("A",)))
        spec_bc = eig_hermitian(partial_trace(psi, ("B", "C")))
        assert spec_a.rank == spec_bc.rank
        assert np.abs(spec_a.eigenvalues - spec_bc.eigenvalues).max() <= 1e-10
