"""Hermitian eigendecomposition with rank truncation and spectrum pairing.

For a pure composite state, complementary marginals share their nonzero
spectra; the pairing between the two descending eigenvalue lists is what
links an eigenvector of one marginal to its partner on the other side.
Degenerate retained eigenvalues make that pairing ambiguous, so they are
reported as a hard ``GenericityViolation`` instead of a guess.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ContractError, GenericityViolation, NumericalError, SpectrumMismatch
from .states import DensityMatrix

# Bounds both the truncated eigenvalue mass and the Frobenius reconstruction
# residual; dim * rank_threshold stays below this for dims up to 4096.
RANK_LEAK_TOL = 1e-6


@dataclass(frozen=True)
class SpectralDecomposition:
    """Retained eigenpairs of a density matrix, eigenvalues descending."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    original_dim: int
    rank: int


@dataclass(frozen=True)
class SpectrumPairing:
    """Index map between two retained spectra plus the worst matched gap."""

    permutation: np.ndarray
    max_pair_gap: float


def eig_hermitian(rho: DensityMatrix, rank_threshold: float = 1e-10) -> SpectralDecomposition:
    """Diagonalize ``rho`` and keep eigenpairs with eigenvalue above threshold.

    Eigenvalues are returned in descending order with orthonormal column
    eigenvectors.  The discarded tail must carry negligible weight: the
    Frobenius residual of the truncated reconstruction and the deficit of
    the retained eigenvalue sum are both checked against ``RANK_LEAK_TOL``.
    """
    if not (0.0 < rank_threshold < 1.0):
        raise ContractError(f"rank_threshold must lie in (0, 1), got {rank_threshold!r}")
    try:
        vals, vecs = np.linalg.eigh(rho.matrix)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigensolver failed to converge: {exc}") from exc
    vals = vals[::-1]
    vecs = vecs[:, ::-1]
    mask = vals > rank_threshold
    kept_vals = np.ascontiguousarray(vals[mask])
    kept_vecs = np.ascontiguousarray(vecs[:, mask])
    residual = np.linalg.norm(
        rho.matrix - (kept_vecs * kept_vals) @ kept_vecs.conj().T
    )
    if residual > RANK_LEAK_TOL:
        raise NumericalError(
            f"rank truncation at {rank_threshold:.1e} discards too much: "
            f"Frobenius residual {residual:.3e}"
        )
    if abs(kept_vals.sum() - 1.0) > RANK_LEAK_TOL:
        raise NumericalError(
            f"retained eigenvalue sum {kept_vals.sum()!r} deviates from 1"
        )
    return SpectralDecomposition(
        eigenvalues=kept_vals,
        eigenvectors=kept_vecs,
        original_dim=rho.dim,
        rank=int(mask.sum()),
    )


def detect_degeneracy(spec: SpectralDecomposition, gap_tol: float = 1e-8) -> list[list[int]]:
    """Clusters of retained eigenvalues whose consecutive gaps fall below gap_tol.

    An empty list means the spectrum is generic (all retained eigenvalues
    separated by at least gap_tol).
    """
    clusters: list[list[int]] = []
    current = [0]
    for idx in range(1, spec.rank):
        if spec.eigenvalues[idx - 1] - spec.eigenvalues[idx] < gap_tol:
            current.append(idx)
        else:
            if len(current) > 1:
                clusters.append(current)
            current = [idx]
    if len(current) > 1:
        clusters.append(current)
    return clusters


def match_spectra(
    spec_a: SpectralDecomposition,
    spec_bc: SpectralDecomposition,
    pair_tol: float = 1e-8,
) -> SpectrumPairing:
    """Pair two descending retained spectra that must agree eigenvalue by eigenvalue.

    Raises GenericityViolation if either spectrum has a cluster tighter than
    ``pair_tol`` (the pairing would be meaningless), and SpectrumMismatch if
    the ranks differ or any matched pair is further apart than ``pair_tol``.
    """
    for name, spec in (("first", spec_a), ("second", spec_bc)):
        clusters = detect_degeneracy(spec, pair_tol)
        if clusters:
            raise GenericityViolation(
                f"{name} spectrum has degenerate clusters {clusters} at tolerance {pair_tol:.1e}"
            )
    if spec_a.rank != spec_bc.rank:
        raise SpectrumMismatch(
            f"retained ranks differ: {spec_a.rank} vs {spec_bc.rank} "
            "(inputs are not marginals of one pure state)"
        )
    gaps = np.abs(spec_a.eigenvalues - spec_bc.eigenvalues)
    max_gap = float(gaps.max()) if gaps.size else 0.0
    if max_gap > pair_tol:
        raise SpectrumMismatch(
            f"paired eigenvalues differ by up to {max_gap:.3e} (> {pair_tol:.1e})"
        )
    return SpectrumPairing(permutation=np.arange(spec_a.rank), max_pair_gap=max_gap)
