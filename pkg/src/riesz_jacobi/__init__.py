"""Jacobi trigonometric expansions, Jacobi-Poisson kernels, potential and
Riesz-Jacobi kernels, and two independent evaluation routes for the Riesz
transforms, with a verification harness over all of it.

The numerical setting is the measure
dmu_{a,b}(theta) = (sin theta/2)^{2a+1} (cos theta/2)^{2b+1} dtheta
on (0, pi) and the orthonormal system P_n of Jacobi trigonometric
polynomials; everything else (semigroup kernels, negative powers, Riesz
transforms of any order) is built on that pair.
"""

from .basis import (
    CoeffVector,
    JacobiParams,
    NumericalRuleError,
    QuadratureRule,
    fourier_coeffs,
    gauss_jacobi_rule,
    jacobi_gauss_xw,
    mu_density,
    mu_total,
    pi0_project,
    resolve_function,
    synthesize,
    trig_poly,
    trig_poly_deriv,
)
from .config import (
    DEFAULT_CONFIG,
    EvalConfig,
    NumericalError,
    TruncationError,
)
from .kernels import (
    dtheta_potential_kernel,
    potential_kernel,
    riesz_kernel,
    riesz_kernel_interlaced,
)
from .poisson import (
    envelope_bound,
    poisson_deriv_theta,
    poisson_kernel,
    poisson_kernel_compensated,
)
from .transforms import (
    annulus_integral,
    inverse_power,
    pv_row_integral,
    riesz_singular,
    riesz_spectral,
)
from .verify import (
    DEFAULT_PAIRS,
    VerificationReport,
    check_envelope,
    check_identities,
    check_pv_zero,
    check_representation,
    l1_growth_probe,
    reports_to_csv,
    reports_to_json,
    run_all,
)

__version__ = "0.1.0"

__all__ = [
    "JacobiParams",
    "QuadratureRule",
    "CoeffVector",
    "NumericalRuleError",
    "mu_density",
    "mu_total",
    "trig_poly",
    "trig_poly_deriv",
    "jacobi_gauss_xw",
    "gauss_jacobi_rule",
    "fourier_coeffs",
    "synthesize",
    "pi0_project",
    "resolve_function",
    "EvalConfig",
    "DEFAULT_CONFIG",
    "TruncationError",
    "NumericalError",
    "poisson_kernel",
    "poisson_kernel_compensated",
    "poisson_deriv_theta",
    "envelope_bound",
    "potential_kernel",
    "dtheta_potential_kernel",
    "riesz_kernel",
    "riesz_kernel_interlaced",
    "riesz_spectral",
    "riesz_singular",
    "pv_row_integral",
    "inverse_power",
    "annulus_integral",
    "VerificationReport",
    "DEFAULT_PAIRS",
    "check_representation",
    "check_pv_zero",
    "check_envelope",
    "l1_growth_probe",
    "check_identities",
    "run_all",
    "reports_to_json",
    "reports_to_csv",
    "__version__",
]
