"""Forward kernel transforms on the half-line and their series form.

t_sine integrates |sin(xy)|^a f(x) over (0, tail_cut]; t_sine_series instead
sums the cosine-expansion coefficients against samples of the Fourier
transform of the even extension of f.
"""

from __future__ import annotations

import math

import numpy as np

from .quad import QuadSpec, call_vec, integrate, integrate_kernel_split
from .specfun import as_alpha, sine_coeffs


def t_sine(f, alpha, y: float, spec: QuadSpec | None = None) -> float:
    """The |sin(xy)|^a transform of f at y >= 0."""
    spec = spec or QuadSpec()
    alpha = as_alpha(alpha)
    if y < 0.0:
        raise ValueError(f"y must be >= 0, got {y}")
    if y == 0.0:
        if alpha.value > 0.0:
            return 0.0
        if abs(alpha.value) <= 1e-12:
            # kernel is identically 1
            return integrate(f, 0.0, spec.tail_cut, spec)
        raise ValueError("t_sine is undefined at y = 0 for -1 < alpha < 0")
    return integrate_kernel_split(f, alpha, y, spec, kernel="sine")


def k_cosine(f, alpha, y: float, spec: QuadSpec | None = None) -> float:
    """The |cos(xy)|^a transform of f at y >= 0; at y = 0 the kernel is 1."""
    spec = spec or QuadSpec()
    alpha = as_alpha(alpha)
    if y < 0.0:
        raise ValueError(f"y must be >= 0, got {y}")
    if y == 0.0:
        return integrate(f, 0.0, spec.tail_cut, spec)
    return integrate_kernel_split(f, alpha, y, spec, kernel="cosine")


def t_sine_series(
    fhat,
    alpha,
    y: float,
    terms: int = 10_000,
    *,
    fhat_decays: bool = False,
) -> float:
    """Series form (c_0/2) fhat(0) + sum_j c_j fhat(2jy).

    fhat must be the Fourier transform of the even extension of f.  For
    -1 < alpha < 0 the coefficient series diverges, so truncation is only
    meaningful when fhat decays at least like 1/t; the caller certifies that
    with fhat_decays=True, otherwise the call is refused.
    """
    alpha = as_alpha(alpha)
    if terms < 1:
        raise ValueError(f"terms must be >= 1, got {terms}")
    if y <= 0.0:
        raise ValueError(f"y must be positive, got {y}")
    if alpha.value < 0.0 and not fhat_decays:
        raise ValueError(
            "t_sine_series for -1 < alpha < 0 needs fhat_decays=True "
            "(the coefficient series alone diverges)"
        )
    c = sine_coeffs(alpha, terms).coeffs
    j = np.arange(1, terms + 1, dtype=float)
    vals = call_vec(fhat, 2.0 * j * y)
    head = 0.5 * c[0] * float(fhat(0.0))
    return head + math.fsum((c[1:] * vals).tolist())
