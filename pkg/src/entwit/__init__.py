"""Witness-operator entanglement detection for finite-dimensional states."""

from .errors import (
    EntwitError,
    NumericalConsistencyError,
    ShapeError,
    SizeCapError,
    StateValidationError,
)
from .linalg import (
    DIM_CAP,
    DimSpec,
    as_dimspec,
    hermitian_eig,
    kron,
    kron_all,
    matrix_sqrt_psd,
    partial_trace,
    partial_transpose,
    random_ginibre,
    random_unitary,
    singular_values,
    takagi_decompose,
)
from .states import (
    DensityMatrix,
    PureState,
    apply_local_unitary,
    bell_state,
    cut_coefficient_matrix,
    density_from_pure,
    ghz_state,
    isotropic_state,
    marginal_purity,
    pure_from_coeffs,
    random_mixed,
    random_product_pure,
    random_pure,
    random_separable_mixture,
    w_state,
    werner_2qubit,
)
from .witnesses import (
    WitnessOperator,
    WitnessStructure,
    antisymmetrize,
    bipartite_basis,
    bipartite_basis_witness,
    compose_witness,
    cut_basis_witness,
    cut_index_tuples,
    matrix_unit,
    random_bipartite_witness,
    random_cut_witness,
    witness_overlap,
)
from .concurrence import (
    PURE_SEPARABLE_TOL,
    bipartite_concurrence_purity,
    bipartite_concurrence_witness_sum,
    cut_concurrence,
    multipartite_concurrence,
    multipartite_concurrence_purity,
    multipartite_concurrence_witness_sum,
)
from .separability import (
    DecompositionCertificate,
    DetectionReport,
    PureCheckResult,
    WitnessTestResult,
    average_concurrence_bound,
    hollowizing_unitary,
    negativity,
    overlap_matrix,
    overlap_spectrum_direct,
    ppt_check,
    pure_state_check,
    sample_detection,
    trial_rng,
    witness_test,
    wootters_concurrence,
)

__version__ = "0.1.0"
