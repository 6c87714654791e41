"""Sparse-array DOA estimation with coarray ESPRIT.

The package covers the full pipeline: sparse integer-grid array geometry and
its difference coarray, circularly symmetric snapshot simulation, redundancy
averaging onto the contiguous virtual coarray, subspace rotation estimation,
torus accuracy metrics, closed-form performance bounds, and a reproducible
Monte Carlo harness with CSV output.
"""

from .bounds import (
    BoundConstants,
    BoundReport,
    build_bound_report,
    eigen_gap,
    q_factor,
    snapshot_requirement,
    specialized_bound,
    subspace_constants,
    tail_bound,
    vandermonde_floor,
)
from .errors import (
    CoarrayLabError,
    ConfigError,
    EigenGapError,
    EstimationError,
    RankDeficiencyError,
)
from .esprit import (
    CoarrayEsprit,
    DirectEsprit,
    DoaEstimate,
    SignalSubspace,
    coarray_esprit,
    direct_esprit,
    esprit_rotation,
    signal_subspace,
)
from .estimation import (
    CoarrayCovariance,
    covariance_error,
    grid_sup_bound,
    hermitian_spectral_norm,
    lambda_matrix,
    redundancy_average,
    sample_covariance,
    spectral_function_error,
    toeplitz_from_lags,
)
from .experiments import (
    ExperimentConfig,
    ExperimentDataset,
    derive_trial_seed,
    emit_csv,
    run_experiment,
)
from .geometry import (
    CoarrayStructure,
    SensorArray,
    averaging_groups,
    averaging_matrix,
    coarray_structure,
    nested,
    parse_array_spec,
    redundancy_coefficient,
    split_nested,
    ula,
)
from .metrics import (
    matching_distance,
    min_separation,
    resolution_success,
    torus_distance,
)
from .presets import preset_config, preset_names
from .signal_model import (
    SnapshotMatrix,
    SourceScene,
    noise_power_for_snr_db,
    omega_from_degrees,
    sample_coarray_covariance,
    sample_snapshots,
    steering_matrix,
    true_coarray_covariance,
    true_covariance,
)

__version__ = "0.1.0"

__all__ = [
    "BoundConstants",
    "BoundReport",
    "CoarrayCovariance",
    "CoarrayEsprit",
    "CoarrayLabError",
    "CoarrayStructure",
    "ConfigError",
    "DirectEsprit",
    "DoaEstimate",
    "EigenGapError",
    "EstimationError",
    "ExperimentConfig",
    "ExperimentDataset",
    "RankDeficiencyError",
    "SensorArray",
    "SignalSubspace",
    "SnapshotMatrix",
    "SourceScene",
    "averaging_groups",
    "averaging_matrix",
    "build_bound_report",
    "coarray_esprit",
    "coarray_structure",
    "covariance_error",
    "derive_trial_seed",
    "direct_esprit",
    "eigen_gap",
    "emit_csv",
    "esprit_rotation",
    "grid_sup_bound",
    "hermitian_spectral_norm",
    "lambda_matrix",
    "matching_distance",
    "min_separation",
    "nested",
    "noise_power_for_snr_db",
    "omega_from_degrees",
    "parse_array_spec",
    "preset_config",
    "preset_names",
    "q_factor",
    "redundancy_average",
    "redundancy_coefficient",
    "resolution_success",
    "run_experiment",
    "sample_coarray_covariance",
    "sample_covariance",
    "sample_snapshots",
    "signal_subspace",
    "snapshot_requirement",
    "specialized_bound",
    "spectral_function_error",
    "split_nested",
    "steering_matrix",
    "subspace_constants",
    "tail_bound",
    "toeplitz_from_lags",
    "torus_distance",
    "true_coarray_covariance",
    "true_covariance",
    "ula",
    "vandermonde_floor",
]
