"""Random-state sampling, round-trip verification and batch statistics."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AlgorithmError, ContractError
from .reconstruct import ReconstructionConfig, reconstruct_tripartite
from .spectral import eig_hermitian
from .states import Dims, PureState, fidelity, partial_trace


@dataclass(frozen=True)
class TrialRecord:
    """Outcome of one round trip; residuals and fidelity only on success."""

    seed: int | None
    dims: tuple[int, int, int]
    outcome: str
    fidelity: float | None
    marginal_residual_ab: float | None
    marginal_residual_bc: float | None
    compatibility_residual: float | None
    cycle_residual: float | None
    min_spectral_gap: float


def sample_haar_state(dims: Dims, seed: int) -> PureState:
    """Normalized vector of iid standard complex Gaussians, uniform on the sphere."""
    rng = np.random.default_rng(seed)
    raw = rng.standard_normal((dims.total, 2))
    amps = raw[:, 0] + 1j * raw[:, 1]
    return PureState(dims, amps / np.linalg.norm(amps))


def _min_spectral_gap(psi: PureState, rank_threshold: float) -> float:
    """Smallest spacing among retained rho_A and rho_C eigenvalues.

    The distance from the smallest retained eigenvalue down to zero counts
    as a gap too, so rank-1 spectra report a finite value.
    """
    gaps = []
    for labels in (("A",), ("C",)):
        spec = eig_hermitian(partial_trace(psi, labels), rank_threshold)
        gaps.extend(-np.diff(spec.eigenvalues))
        gaps.append(spec.eigenvalues[-1])
    return float(min(gaps))


def roundtrip(
    psi: PureState,
    config: ReconstructionConfig | None = None,
    seed: int | None = None,
) -> TrialRecord:
    """Trace out, reconstruct, and compare against the original state.

    Algorithm errors are captured in the record's ``outcome`` rather than
    raised, so batch runs always complete.
    """
    cfg = config if config is not None else ReconstructionConfig()
    rho_ab = partial_trace(psi, ("A", "B"))
    rho_bc = partial_trace(psi, ("B", "C"))
    min_gap = _min_spectral_gap(psi, cfg.rank_threshold)
    try:
        report = reconstruct_tripartite(rho_ab, rho_bc, psi.dims, cfg)
    except AlgorithmError as exc:
        return TrialRecord(
            seed=seed,
            dims=psi.dims.as_tuple(),
            outcome=type(exc).__name__,
            fidelity=None,
            marginal_residual_ab=None,
            marginal_residual_bc=None,
            compatibility_residual=None,
            cycle_residual=None,
            min_spectral_gap=min_gap,
        )
    return TrialRecord(
        seed=seed,
        dims=psi.dims.as_tuple(),
        outcome="success",
        fidelity=fidelity(psi, report.state),
        marginal_residual_ab=report.marginal_residual_ab,
        marginal_residual_bc=report.marginal_residual_bc,
        compatibility_residual=report.compatibility_residual,
        cycle_residual=report.cycle_residual,
        min_spectral_gap=min_gap,
    )


def run_trials(
    dims: Dims,
    n_trials: int,
    seed_base: int = 0,
    config: ReconstructionConfig | None = None,
) -> list[TrialRecord]:
    """Round-trip ``n_trials`` Haar samples, trial t seeded with seed_base + t."""
    if n_trials < 1:
        raise ContractError(f"n_trials must be >= 1, got {n_trials}")
    return [
        roundtrip(sample_haar_state(dims, seed_base + t), config, seed=seed_base + t)
        for t in range(n_trials)
    ]


def _quantiles(values: list[float]) -> dict[str, float] | None:
    if not values:
        return None
    arr = np.asarray(values, dtype=float)
    return {
        "min": float(arr.min()),
        "p10": float(np.quantile(arr, 0.10)),
        "p50": float(np.quantile(arr, 0.50)),
        "p90": float(np.quantile(arr, 0.90)),
        "max": float(arr.max()),
    }


def batch_stats(records: list[TrialRecord]) -> dict:
    """Deterministic JSON-ready aggregation of a record batch."""
    if not records:
        raise ContractError("cannot aggregate an empty record list")
    successes = [r for r in records if r.outcome == "success"]
    counts: dict[str, int] = {}
    for r in records:
        counts[r.outcome] = counts.get(r.outcome, 0) + 1
    return {
        "n_records": len(records),
        "success_rate": len(successes) / len(records),
        "outcome_counts": dict(sorted(counts.items())),
        "fidelity": _quantiles([r.fidelity for r in successes]),
        "marginal_residual_ab": _quantiles([r.marginal_residual_ab for r in successes]),
        "marginal_residual_bc": _quantiles([r.marginal_residual_bc for r in successes]),
        "compatibility_residual": _quantiles([r.compatibility_residual for r in successes]),
        "cycle_residual": _quantiles([r.cycle_residual for r in successes]),
        "min_spectral_gap": _quantiles([r.min_spectral_gap for r in records]),
        "gap_error_scatter": [[r.min_spectral_gap, 1.0 - r.fidelity] for r in successes],
    }
