"""kerrgkp: conditional comb-codeword (GKP-type) preparation numerics.

Models an optical mode whose quantum fluctuations are conditionally shaped
into shift-resistant comb codewords by a cross-Kerr interaction with a
weak probe followed by homodyne post-selection.  Provides codeword
wavefunctions, intrinsic error probabilities (finite interaction time and
separated-peak limit), post-selection statistics, and a CLI that emits the
corresponding datasets.
"""

__version__ = "0.1.0"

from .numerics import (
    HermiteOverflowError,
    QuadratureError,
    QuadratureSpec,
    TruncationError,
    TruncationPolicy,
    gaussian_cos_interval_mass,
    gaussian_interval_mass,
    hermite_normalized,
    hermite_physicists,
    integrate_adaptive,
)
from .codewords import (
    ApproximateCodeword,
    CoefficientSet,
    CoherentSuperposition,
    DegenerateStateError,
    EncodingParams,
    IdealCodewordModel,
    Label,
    build_codeword,
    coefficients,
    coherent_superposition_oracle,
    fourier_consistency,
    ideal_model,
    normalization_constant,
    overlap_zero_one,
    state_fidelity,
    tau_from_physical,
    wavefunction_p,
    wavefunction_q,
)
from .error_analysis import (
    ErrorRegionFamily,
    ProbabilityReport,
    SweepTable,
    ThresholdNotReachedError,
    asymptotic_pi_pm,
    asymptotic_pi_q,
    error_regions,
    homodyne_density,
    intrinsic_error_pm,
    intrinsic_error_q,
    mean_intrinsic_error,
    pi_max_asymptotic,
    pi_max_finite,
    success_probability,
    sweep_tau,
    sweep_x,
    sweep_z,
    threshold_tau,
)

__all__ = [
    "__version__",
    "ApproximateCodeword",
    "CoefficientSet",
    "CoherentSuperposition",
    "DegenerateStateError",
    "EncodingParams",
    "ErrorRegionFamily",
    "HermiteOverflowError",
    "IdealCodewordModel",
    "Label",
    "ProbabilityReport",
    "QuadratureError",
    "QuadratureSpec",
    "SweepTable",
    "ThresholdNotReachedError",
    "TruncationError",
    "TruncationPolicy",
    "asymptotic_pi_pm",
    "asymptotic_pi_q",
    "build_codeword",
    "coefficients",
    "coherent_superposition_oracle",
    "error_regions",
    "fourier_consistency",
    "gaussian_cos_interval_mass",
    "gaussian_interval_mass",
    "hermite_normalized",
    "hermite_physicists",
    "homodyne_density",
    "ideal_model",
    "integrate_adaptive",
    "intrinsic_error_pm",
    "intrinsic_error_q",
    "mean_intrinsic_error",
    "normalization_constant",
    "overlap_zero_one",
    "pi_max_asymptotic",
    "pi_max_finite",
    "state_fidelity",
    "success_probability",
    "sweep_tau",
    "sweep_x",
    "sweep_z",
    "tau_from_physical",
    "threshold_tau",
    "wavefunction_p",
    "wavefunction_q",
]
