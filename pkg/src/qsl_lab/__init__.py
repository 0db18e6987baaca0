"""qsl-lab: exact and separable quantum speed limits for multipartite systems.

The package computes spectral-width speed limits, their best product-state
(mean-field) counterparts, and the ratio certifying entanglement-assisted
speedup; simulates entangling versus non-entangling dynamics; and exposes a
two-time witness for detecting entangling generation from measured data.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .backend import BACKEND, available_backends
from .config import get_hbar, hbar_set_to, set_hbar
from .dynamics import (
    LindbladModel,
    LindbladSpeedBounds,
    RateRecord,
    Trajectory,
    WitnessVerdict,
    cone_bounds,
    evolve_ensemble,
    evolve_full,
    evolve_lindblad,
    evolve_separable,
    interaction_picture,
    interaction_picture_generator,
    lindblad_rate,
    lindblad_speed_bounds,
    rate_full,
    rate_separable,
    witness_check,
)
from .errors import (
    ConfigError,
    DimensionCapError,
    DimensionMismatchError,
    EigensolverError,
    NonHermitianError,
    NormalizationError,
    PositivityError,
    QslLabError,
    SeriesFormatError,
    StepSizeError,
)
from .linalg import (
    EigenDecomposition,
    HermitianOperator,
    hermitian_eig,
    kron,
    spectral_norm,
    trace_norm,
    unitary_exp,
)
from .models import (
    NModeModelParams,
    QuditModelParams,
    SwapModelParams,
    build_nmode,
    build_qudit,
    build_swap,
    maximally_entangled_state,
    nmode_speedup,
    qudit_speedup,
)
from .reports import ReportDocument, write_csv
from .spaces import (
    EnergyStats,
    ProductState,
    PureState,
    SeparableEnsemble,
    SpaceDescriptor,
    embed,
    energy_stats,
    partial_reduction,
)
from .speedlimits import (
    SeparabilityEigenpair,
    SolverConfig,
    SpeedReport,
    qsl_exact,
    qsl_sep_bound,
    separability_extremes,
)

__all__ = [
    "__version__",
    "BACKEND",
    "available_backends",
    "get_hbar",
    "set_hbar",
    "hbar_set_to",
    # errors
    "QslLabError",
    "ConfigError",
    "DimensionCapError",
    "DimensionMismatchError",
    "EigensolverError",
    "NonHermitianError",
    "NormalizationError",
    "PositivityError",
    "SeriesFormatError",
    "StepSizeError",
    # linear algebra
    "EigenDecomposition",
    "HermitianOperator",
    "hermitian_eig",
    "kron",
    "spectral_norm",
    "trace_norm",
    "unitary_exp",
    # spaces and states
    "SpaceDescriptor",
    "PureState",
    "ProductState",
    "SeparableEnsemble",
    "EnergyStats",
    "embed",
    "energy_stats",
    "partial_reduction",
    # models
    "SwapModelParams",
    "QuditModelParams",
    "NModeModelParams",
    "build_swap",
    "build_qudit",
    "build_nmode",
    "maximally_entangled_state",
    "qudit_speedup",
    "nmode_speedup",
    # speed limits
    "SolverConfig",
    "SeparabilityEigenpair",
    "SpeedReport",
    "qsl_exact",
    "qsl_sep_bound",
    "separability_extremes",
    # dynamics
    "RateRecord",
    "Trajectory",
    "LindbladModel",
    "LindbladSpeedBounds",
    "WitnessVerdict",
    "rate_full",
    "rate_separable",
    "evolve_full",
    "evolve_separable",
    "evolve_ensemble",
    "evolve_lindblad",
    "lindblad_rate",
    "lindblad_speed_bounds",
    "witness_check",
    "cone_bounds",
    "interaction_picture",
    "interaction_picture_generator",
    # reports
    "ReportDocument",
    "write_csv",
]
