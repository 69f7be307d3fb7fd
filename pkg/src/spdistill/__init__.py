"""Simulation of entanglement distillation by Schmidt projection.

A photon-pair source emits states that are partially entangled in both
polarization and path; single-photon two-qubit gates concentrate that
entanglement into one maximally entangled polarization pair.  The package
models the states, the optical circuit, the counting statistics of a real
coincidence measurement, and the abstract n-pair protocol, plus a small
command line driver for canned experiment scenarios.
"""

from .registers import (
    LabelCollisionError,
    QubitLabel,
    QubitRegister,
    abstract_pair_register,
    photon_register,
    photonic_index,
    polarization_register,
)
from .states import (
    DensityMatrix,
    NormalizationError,
    PhysicalityError,
    ProjectorError,
    PureState,
    RegisterMismatchError,
    UnitarityError,
    apply,
    overlap,
    partial_trace,
    project,
    states_equal,
    tensor,
)
from .measures import (
    UndefinedVisibilityError,
    VisibilityValue,
    binary_entropy,
    concurrence,
    entanglement_of_formation,
    entropy_of_entanglement,
    fidelity_to_pure,
    purity,
    visibility,
)
from .optics import (
    NoiseChannel,
    SourceSetting,
    apply_noise,
    hwp_matrix,
    make_hyperentangled,
    polarization_triplet,
    qwp_matrix,
)
from .distill import (
    EXPERIMENTAL_ANGLES,
    MAX_PAIRS,
    DistillationOutcome,
    GateConfig,
    SchmidtSubspace,
    expected_yield_asymptotic,
    expected_yield_finite,
    n_pair_state,
    pair_state,
    project_n_pairs,
    run_photonic_sp,
    schmidt_projectors,
    subspace_probabilities,
    theta_grid,
)
from .lab import (
    AnalyzerSetting,
    CountRecord,
    TomographyResult,
    VisibilityScan,
    coincidence_probability,
    sample_counts,
    tomography_acquire,
    tomography_reconstruct,
    trace_distance,
    visibility_scan,
    write_counts_csv,
)

__version__ = "0.1.0"
