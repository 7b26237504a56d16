"""Gaussian quantum-metrology engine for lossy bosonic sensing protocols."""

from .errors import (
    CutoffTooSmallError,
    DegenerateStateError,
    NoInformationError,
    NumericalInstabilityError,
    PureStateError,
)
from .gaussian import (
    BLOCKWISE,
    INTERLEAVED,
    GaussianState,
    PhysicalityReport,
    SymplecticTransform,
    apply,
    basis_change,
    beam_splitter,
    check_physical,
    coherent,
    direct_sum,
    identity_transform,
    omega,
    partial_trace,
    permute_modes,
    reorder_basis,
    tensor,
    thermal,
    tmsv,
    two_mode_squeezed,
    vacuum,
)
from .qfi import (
    QfiResult,
    StateFamily,
    a_matrix,
    hc_closed_form,
    hq_closed_form,
    qfi_gaussian,
    ratio_high_reflectivity,
    ratio_noisy_limit,
    symplectic_eigenvalues,
)
from .sld import (
    ComplexGaussian,
    CoherentObservable,
    JpaCircuitParams,
    JpaCircuitSolution,
    SldCoefficients,
    SldForm,
    coherent_observable,
    jpa_circuit_solve,
    optimal_observable,
    qfi_complex_form,
    sld,
    sld_coeffs_closed_form,
    to_complex,
)
from .protocols import (
    BiFrequencyParams,
    ThermalApproxReport,
    bifrequency_advantage,
    bifrequency_received_state,
    noise_factor_ratio,
    qi_classical_qfi,
    qi_classical_qfi_numeric,
    qi_quantum_qfi,
    qi_quantum_qfi_numeric,
    qi_ratio,
    thermal_equal_occupation,
)

__version__ = "0.1.0"
