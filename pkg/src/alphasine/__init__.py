"""Forward and inverse |sin|^a / |cos|^a kernel transforms on the half-line
and the circle."""

__version__ = "0.1.0"

from .direct_inv import (
    DirectConfig,
    choose_weight_exponent,
    h2_inverse,
    h_forward,
    invert_direct,
    mu,
    mu_table,
)
from .errors import (
    CoefficientUnderflow,
    EvenIntegerAlpha,
    NoTailSamples,
    NonConvergence,
    SingularDiagonal,
)
from .forward import k_cosine, t_sine, t_sine_series
from .fourier_inv import (
    FourierSamples,
    MollifierKind,
    TriangularSystem,
    bandlimited_eval,
    build_rhs,
    estimate_f0,
    invert_fourier,
    mollifier_kernel,
    reconstruct,
    reconstruct_smoothed,
    solve_xi,
)
from .grid import SampledFunction, UniformGrid, eval_linear, even_extension_eval
from .quad import QuadSpec, integrate, integrate_kernel_split
from .sas import SasParams, codifference_forward, f0_from_scale, g_from_codifference
from .specfun import (
    Alpha,
    CoefficientTable,
    cosine_coeffs,
    hyp2f1_unit,
    kummer_m,
    lambda_alpha,
    log_gamma,
    operator_norm_bound,
    sin_power_integral,
    sine_coeffs,
)
from .sphere import (
    CircleCoeffs,
    PeriodicDensity,
    circle_fourier_coeffs,
    circle_grid,
    density_example,
    invert_sphere,
    k_sphere,
    k_sphere_grid,
    shifted_sine_density,
    vonmises4_density,
    watson_density,
)

__all__ = [name for name in dir() if not name.startswith("_")]
