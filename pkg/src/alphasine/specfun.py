"""Gamma-based special functions and the cosine-expansion coefficients of |sin|^a kernels.

Everything here is a pure function of its arguments; results are plain floats
or small immutable containers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

EVEN_INT_TOL = 1e-12

# Stopping rule for direct hypergeometric summation: a term must stay below
# this fraction of the accumulated sum for 3 consecutive terms.
SERIES_RTOL = 1e-15
SERIES_MAX_TERMS = 10_000_000


@dataclass(frozen=True)
class Alpha:
    """Kernel exponent, restricted to the open interval (-1, inf)."""

    value: float

    def __post_init__(self):
        v = float(self.value)
        if not math.isfinite(v) or v <= -1.0:
            raise ValueError(f"alpha must be a finite real > -1, got {self.value}")
        object.__setattr__(self, "value", v)

    def is_even_integer(self) -> bool:
        """True exactly for values within 1e-12 of {0, 2, 4, ...}."""
        k = round(self.value)
        return k >= 0 and k % 2 == 0 and abs(self.value - k) <= EVEN_INT_TOL


def as_alpha(a) -> Alpha:
    return a if isinstance(a, Alpha) else Alpha(float(a))


@dataclass(frozen=True)
class CoefficientTable:
    """Coefficients c_0..c_J of the cosine expansion of (1/2)|sin(x/2)|^a.

    kind is "sine" for the |sin| kernel and "cosine" for |cos|, whose
    coefficients differ by the alternating sign (-1)^j.
    """

    alpha: Alpha
    coeffs: np.ndarray
    kind: str

    def __post_init__(self):
        if self.kind not in ("sine", "cosine"):
            raise ValueError(f"kind must be 'sine' or 'cosine', got {self.kind!r}")
        arr = np.asarray(self.coeffs, dtype=float)
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)

    def __len__(self) -> int:
        return len(self.coeffs)


def log_gamma(x: float) -> float:
    """ln Gamma(x) for x > 0."""
    if not (x > 0.0):
        raise ValueError(f"log_gamma requires x > 0, got {x}")
    return math.lgamma(x)


def leading_coefficient(alpha) -> float:
    """c_0 = Gamma(1+a) / (2^a Gamma(a/2+1)^2)."""
    a = as_alpha(alpha).value
    return math.exp(math.lgamma(1.0 + a) - a * math.log(2.0) - 2.0 * math.lgamma(0.5 * a + 1.0))


def sine_coeffs(alpha, count: int) -> CoefficientTable:
    """Coefficients c_0..c_count for the sine kernel.

    c_0 comes from the closed gamma form; the rest follow the ratio recurrence
    c_1 = -c_0 a/(a+2), c_{j+1} = c_j (j - a/2)/(j + 1 + a/2), which avoids
    gamma evaluations at negative arguments.  For even integer a = 2k the
    exact binomial branch is taken: c_j = (-1)^j binom(2k, k-j)/4^k for j <= k
    and 0 beyond.
    """
    alpha = as_alpha(alpha)
    count = int(count)
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    a = alpha.value
    if alpha.is_even_integer():
        k = round(a) // 2
        c = np.zeros(count + 1)
        for j in range(0, min(k, count) + 1):
            c[j] = (-1) ** j * math.comb(2 * k, k - j) / 4.0**k
        return CoefficientTable(alpha, c, "sine")
    c = np.empty(count + 1)
    c[0] = leading_coefficient(alpha)
    c[1] = -c[0] * a / (a + 2.0)
    if count >= 2:
        j = np.arange(1, count, dtype=float)
        c[2:] = c[1] * np.cumprod((j - 0.5 * a) / (j + 1.0 + 0.5 * a))
    return CoefficientTable(alpha, c, "sine")


def cosine_coeffs(alpha, count: int) -> CoefficientTable:
    """Coefficients for the |cos| kernel: the sine coefficients with sign (-1)^j."""
    table = sine_coeffs(alpha, count)
    signs = np.where(np.arange(len(table)) % 2 == 0, 1.0, -1.0)
    return CoefficientTable(table.alpha, signs * table.coeffs, "cosine")


def sin_power_integral(alpha) -> float:
    """C_a = integral of |sin u|^a over [0, pi] = sqrt(pi) Gamma((1+a)/2) / Gamma(1+a/2)."""
    a = as_alpha(alpha).value
    return math.exp(0.5 * math.log(math.pi) + math.lgamma(0.5 * (1.0 + a)) - math.lgamma(1.0 + 0.5 * a))


def lambda_alpha(alpha) -> float:
    """Mean of |cos x|^a over a full period, C_a / pi."""
    return sin_power_integral(alpha) / math.pi


def _hyp_series(num: tuple, den: tuple, z: float, rtol: float) -> float:
    """Direct summation of a pFq series with the shared stopping rule.

    Stops once the running term stays below rtol times the accumulated sum for
    3 consecutive terms; raises after SERIES_MAX_TERMS.
    """
    total = 1.0
    term = 1.0
    small = 0
    for k in range(SERIES_MAX_TERMS):
        ratio = 1.0
        for a in num:
            ratio *= a + k
        for b in den:
            ratio /= b + k
        ratio /= k + 1.0
        term *= ratio * z
        total += term
        if abs(term) <= rtol * abs(total):
            small += 1
            if small >= 3:
                return total
        else:
            small = 0
    raise ValueError("hypergeometric series did not settle within the term budget")


def _nonpositive_int(x: float) -> bool:
    return x <= 0.0 and abs(x - round(x)) <= EVEN_INT_TOL


def hyp2f1_unit(a: float, b: float, c: float) -> float:
    """Gauss hypergeometric 2F1[a, b; c; 1].

    A nonpositive-integer a or b terminates the series, which is then summed
    outright (e.g. a = 0 gives 1 for any b, c).  Otherwise c - a - b > 0 is
    required; the closed gamma quotient is used when every gamma argument is
    positive, with direct series summation as the fallback.
    """
    if c <= 0.0 and abs(c - round(c)) <= EVEN_INT_TOL:
        raise ValueError(f"c must not be a non-positive integer, got {c}")
    if _nonpositive_int(a) or _nonpositive_int(b):
        m = int(-round(a)) if _nonpositive_int(a) else int(-round(b))
        total = term = 1.0
        for k in range(m):
            term *= (a + k) * (b + k) / ((c + k) * (k + 1.0))
            total += term
        return total
    if not (c - a - b > 0.0):
        raise ValueError(f"hyp2f1_unit requires c - a - b > 0, got {c - a - b}")
    args = (c, c - a - b, c - a, c - b)
    if all(x > 0.0 for x in args):
        return math.exp(math.lgamma(c) + math.lgamma(c - a - b) - math.lgamma(c - a) - math.lgamma(c - b))
    return _hyp_series((a, b), (c,), 1.0, SERIES_RTOL)


def kummer_m(a: float, b: float, z: float) -> float:
    """Confluent hypergeometric M(a, b, z) by direct series."""
    if b <= 0.0 and abs(b - round(b)) <= EVEN_INT_TOL:
        raise ValueError(f"b must not be a non-positive integer, got {b}")
    if z == 0.0:
        return 1.0
    return _hyp_series((a,), (b,), z, 1e-12)


def _hyp3f2_tail_accelerated(alpha: float) -> float:
    """3F2[1 - a/2, 1, 1; a/2 + 2, 2; 1] for -1 < a < 0.

    Terms behave like k^-(2+a), so plain truncation cannot reach fine relative
    tolerance for a near -1.  The partial sums are extrapolated with two
    Richardson stages using the exact remainder exponents 1+a and 2+a.
    """
    a = alpha
    k_base = 1 << 18
    k = np.arange(0, 4 * k_base, dtype=float)
    ratios = ((1.0 - 0.5 * a + k) * (1.0 + k)) / ((0.5 * a + 2.0 + k) * (2.0 + k))
    terms = np.concatenate(([1.0], np.cumprod(ratios)))
    csum = np.cumsum(terms)
    s1, s2, s4 = csum[k_base - 1], csum[2 * k_base - 1], csum[4 * k_base - 1]
    p1 = 1.0 + a
    p2 = 2.0 + a
    r1a = s2 + (s2 - s1) / (2.0**p1 - 1.0)
    r1b = s4 + (s4 - s2) / (2.0**p1 - 1.0)
    return r1b + (r1b - r1a) / (2.0**p2 - 1.0)


def operator_norm_bound(alpha) -> float:
    """Upper bound for the transform's operator norm in the -1 < a < 0 regime.

    C_a (1/pi + 1) + c_0 (1 - a/(a+2) * 3F2[1-a/2, 1, 1; a/2+2, 2; 1]).
    """
    a = as_alpha(alpha).value
    if not (-1.0 < a < 0.0):
        raise ValueError(f"operator_norm_bound is defined for -1 < alpha < 0, got {a}")
    f32 = _hyp3f2_tail_accelerated(a)
    c0 = leading_coefficient(a)
    return sin_power_integral(a) * (1.0 / math.pi + 1.0) + c0 * (1.0 - (a / (a + 2.0)) * f32)
