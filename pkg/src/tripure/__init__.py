"""tripure: reconstruct a tripartite pure quantum state from two bipartite marginals.

Given the reduced density matrices rho_AB and rho_BC of an unknown pure
state on A x B x C, the pipeline recovers the state itself (up to a global
phase) whenever the marginal spectra are nondegenerate and the overlap
structure is generic, and raises a typed error otherwise.
"""

from .errors import (
    AlgorithmError,
    ContractError,
    ExpansionLeakage,
    GenericityViolation,
    MarginalInconsistency,
    NumericalError,
    PhaseGraphDisconnected,
    PhaseInconsistency,
    SpectrumMismatch,
)
from .harness import TrialRecord, batch_stats, roundtrip, run_trials, sample_haar_state
from .reconstruct import (
    CoefficientTensors,
    PhaseSolution,
    ReconstructionConfig,
    ReconstructionReport,
    assemble_state,
    coefficient_tensors,
    compatibility_residual,
    phase_edges,
    reconstruct_tripartite,
    solve_phases,
)
from .spectral import (
    SpectralDecomposition,
    SpectrumPairing,
    detect_degeneracy,
    eig_hermitian,
    match_spectra,
)
from .states import (
    DensityMatrix,
    Dims,
    PureState,
    fidelity,
    flat_index,
    partial_trace,
    purity,
)
from .tomography import (
    GridWavefunction,
    build_profile,
    grid_fidelity,
    normalize_grid,
    planar_density,
    reconstruct_grid,
)

__version__ = "0.1.0"

__all__ = [
    "AlgorithmError",
    "ContractError",
    "ExpansionLeakage",
    "GenericityViolation",
    "MarginalInconsistency",
    "NumericalError",
    "PhaseGraphDisconnected",
    "PhaseInconsistency",
    "SpectrumMismatch",
    "TrialRecord",
    "batch_stats",
    "roundtrip",
    "run_trials",
    "sample_haar_state",
    "CoefficientTensors",
    "PhaseSolution",
    "ReconstructionConfig",
    "ReconstructionReport",
    "assemble_state",
    "coefficient_tensors",
    "compatibility_residual",
    "phase_edges",
    "reconstruct_tripartite",
    "solve_phases",
    "SpectralDecomposition",
    "SpectrumPairing",
    "detect_degeneracy",
    "eig_hermitian",
    "match_spectra",
    "DensityMatrix",
    "Dims",
    "PureState",
    "fidelity",
    "flat_index",
    "partial_trace",
    "purity",
    "GridWavefunction",
    "build_profile",
    "grid_fidelity",
    "normalize_grid",
    "planar_density",
    "reconstruct_grid",
    "__version__",
]
