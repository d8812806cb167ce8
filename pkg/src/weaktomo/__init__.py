"""Quantum state tomography from weak measurements.

Weakly couple an observable to a Gaussian pointer, post-select the system,
and the two conditional pointer shifts read off the real and imaginary parts
of a weak value.  A table of weak values over two bases determines the state
directly, without global reconstruction: this package computes those tables
exactly, simulates the pointer measurements (in closed form and shot by
shot), and implements the reconstruction schemes, from single matrix
elements up to full density matrices.
"""

from .errors import (
    AmbiguousReconstructionError,
    DegenerateDataError,
    DimensionMismatchError,
    InvalidDimensionError,
    MissingDataError,
    PreconditionError,
    ResourceLimitError,
    SchemeInapplicableError,
    UndefinedShiftError,
    UndefinedWeakValueError,
    UnusablePostselectionError,
    WeakTomoError,
)
from .qcore import (
    ATOL_EIG,
    ATOL_EXACT,
    PROB_FLOOR,
    DensityMatrix,
    Observable,
    OrthonormalBasis,
    StateVector,
    TransitionMatrix,
    fidelity,
    fix_global_phase,
    fourier_basis,
    random_density_matrix,
    random_pure_state,
    reference_basis,
    trace_distance,
    transition_matrix,
)
from .weakval import (
    SumRuleReport,
    WeakValueTable,
    check_sum_rules,
    weak_value,
    weak_value_table,
)
from .pointer import (
    ColumnEstimate,
    ExperimentRecord,
    NoiseModel,
    PointerConfig,
    PointerGrid,
    PointerShift,
    RecordStream,
    estimate_weak_value_column,
    estimate_weak_values,
    exact_joint_evolution,
    first_order_shifts,
    gaussian_pointer,
    pointer_covariance,
    postselect_probability,
    sample_observable_records,
    sample_records,
    table_shifts,
)
from .recon import (
    DensityEstimate,
    ElementPair,
    KernelProblem,
    PureStateEstimate,
    estimate_element_nonorthogonal,
    estimate_element_orthogonal,
    project_to_physical,
    reconstruct_mixed_abasis,
    reconstruct_mixed_bbasis,
    reconstruct_pure_all_data,
    reconstruct_pure_postselected,
    reconstruct_pure_single_observable,
    reconstruct_pure_single_projector,
)
from .harness import (
    DATA_MODES,
    PURE_SCHEMES,
    SCHEMES,
    ExperimentConfig,
    PhaseDemoReport,
    ResultBundle,
    compare_schemes,
    demo_phase_detection,
    ramp_probe,
    run_experiment,
    run_reconstruction,
    thread_cap,
)
from . import serialize

__version__ = "0.1.0"

__all__ = [
    "ATOL_EIG",
    "ATOL_EXACT",
    "DATA_MODES",
    "PROB_FLOOR",
    "PURE_SCHEMES",
    "SCHEMES",
    "AmbiguousReconstructionError",
    "ColumnEstimate",
    "DegenerateDataError",
    "DensityEstimate",
    "DensityMatrix",
    "DimensionMismatchError",
    "ElementPair",
    "ExperimentConfig",
    "ExperimentRecord",
    "InvalidDimensionError",
    "KernelProblem",
    "MissingDataError",
    "NoiseModel",
    "Observable",
    "OrthonormalBasis",
    "PhaseDemoReport",
    "PointerConfig",
    "PointerGrid",
    "PointerShift",
    "PreconditionError",
    "PureStateEstimate",
    "RecordStream",
    "ResourceLimitError",
    "ResultBundle",
    "SchemeInapplicableError",
    "StateVector",
    "SumRuleReport",
    "TransitionMatrix",
    "UndefinedShiftError",
    "UndefinedWeakValueError",
    "UnusablePostselectionError",
    "WeakTomoError",
    "WeakValueTable",
    "check_sum_rules",
    "compare_schemes",
    "demo_phase_detection",
    "estimate_element_nonorthogonal",
    "estimate_element_orthogonal",
    "estimate_weak_value_column",
    "estimate_weak_values",
    "exact_joint_evolution",
    "fidelity",
    "first_order_shifts",
    "fix_global_phase",
    "fourier_basis",
    "gaussian_pointer",
    "pointer_covariance",
    "postselect_probability",
    "project_to_physical",
    "ramp_probe",
    "random_density_matrix",
    "random_pure_state",
    "reconstruct_mixed_abasis",
    "reconstruct_mixed_bbasis",
    "reconstruct_pure_all_data",
    "reconstruct_pure_postselected",
    "reconstruct_pure_single_observable",
    "reconstruct_pure_single_projector",
    "reference_basis",
    "run_experiment",
    "run_reconstruction",
    "sample_observable_records",
    "sample_records",
    "serialize",
    "table_shifts",
    "thread_cap",
    "trace_distance",
    "transition_matrix",
    "weak_value",
    "weak_value_table",
]
