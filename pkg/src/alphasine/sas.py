"""Deterministic bridge between the codifference of a stationary harmonizable
symmetric stable process and the sine-kernel transform of its spectral density.

Estimation of (sigma, alpha, tau) from sample paths is out of scope; the
formulas here convert between known quantities.
"""

from __future__ import annotations

from dataclasses import dataclass

from .forward import t_sine
from .quad import QuadSpec, integrate
from .specfun import Alpha, as_alpha, lambda_alpha


@dataclass(frozen=True)
class SasParams:
    sigma: float
    alpha: Alpha

    def __post_init__(self):
        object.__setattr__(self, "alpha", as_alpha(self.alpha))
        if not (self.sigma > 0.0):
            raise ValueError(f"sigma must be positive, got {self.sigma}")
        if not (0.0 < self.alpha.value < 2.0):
            raise ValueError(
                f"stability index must lie in (0, 2), got {self.alpha.value}"
            )


def f0_from_scale(p: SasParams) -> float:
    """Total spectral mass F f(0) = sigma^a / lambda_a."""
    return p.sigma ** p.alpha.value / lambda_alpha(p.alpha)


def g_from_codifference(tau, p: SasParams, t: float) -> float:
    """g(t) = (2 sigma^a - tau(2t)) / (2^{a+1} lambda_a); equals the sine
    transform of the spectral density at t."""
    if not (t > 0.0):
        raise ValueError(f"t must be positive, got {t}")
    a = p.alpha.value
    return (2.0 * p.sigma**a - float(tau(2.0 * t))) / (2.0 ** (a + 1.0) * lambda_alpha(p.alpha))


def codifference_forward(f, p: SasParams, t: float, spec: QuadSpec | None = None) -> float:
    """Codifference of the process whose spectral density is the even
    extension of f; the scale is recomputed from f as sigma^a = lambda_a
    integral of f over the line.  Test utility for the inverse route."""
    spec = spec or QuadSpec()
    a = p.alpha.value
    lam = lambda_alpha(p.alpha)
    sigma_a = lam * 2.0 * integrate(f, 0.0, spec.tail_cut, spec)
    if t == 0.0:
        return 2.0 * sigma_a
    transform = 2.0 * t_sine(f, p.alpha, abs(t) / 2.0, spec)
    return 2.0 * sigma_a - 2.0**a * lam * transform
