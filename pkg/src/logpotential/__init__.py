"""Numerics for logarithmic Bessel/Riesz potential kernels.

The package evaluates the shifted Bessel kernels G^lam_alpha and the
logarithmic Bessel kernel K^lam_{s+ln} through independent representations
(heat-kernel mixture vs radial Fourier-Bessel quadrature), verifies their
near-origin and far-field asymptotic constants, synthesizes the dyadic L1
kernels behind the homogeneous/inhomogeneous symbol bridge, and applies or
inverts the fractional-logarithmic operators spectrally on periodic grids.
"""

__version__ = "0.1.0"

from .kernels import (
    KernelParams,
    RadialProfile,
    SingularityError,
    bessel_kernel_Gs,
    homogeneous_symbol,
    inhomogeneous_symbol,
    laplace_approx_shifted,
    log_bessel_kernel,
    log_kernel_mass,
    log_kernel_origin_value,
    shifted_kernel,
    shifted_kernel_mass,
    tabulate_profile,
)
from .quadrature import (
    AccelerationError,
    EvaluationError,
    NonConvergenceError,
    QuadratureSpec,
    QuadResult,
    integrate,
    integrate_oscillatory_hankel,
)
from .asymptotics import (
    AsymptoticReport,
    critical_inner_check,
    far_field_rate,
    infinity_prefactor,
    origin_constant,
    riesz_normalization,
    verify_infinity,
    verify_origin,
)
from .symbols import (
    DyadicBlockSet,
    DyadicPartition,
    SymbolDescriptor,
    bridge_constant,
    bridge_identity_check,
    bridge_mu_hat,
    bridge_w_hat,
    build_partition,
    eval_symbol,
    make_descriptor,
    slow_part_laplace,
    symbol_min_check,
    synthesize_l1_kernel,
)
from .spectral import (
    PolynomialAmbiguityError,
    SpectralField,
    SpectralGrid,
    SymbolZeroError,
    apply_multiplier,
    apply_pointwise_frac_log,
    frac_laplacian_constant,
    frac_log_constants,
    solve_homogeneous,
    solve_inhomogeneous,
)
from .analysis import (
    ModulusReport,
    NormReport,
    critical_blowup_constant,
    critical_exponents,
    kernel_lr_norm,
    log_modulus_check,
    make_rough_field,
    p1_blowup_demo,
    riesz_comparison_integral,
    young_mapping_check,
)
