"""Direct inversion for kernel exponents a > 1 via the multiplicative group.

Working in logarithmic coordinates turns the three operators into oscillatory
integrals with linear phase:

  mu(x)  = int_0^inf |sin t|^a t^{-(c+1)/2} e^{i ln(t) ln(x)} dt
  H g(x) = int_0^inf y^{(c-3)/2 - i ln x} g(1/y) dy
  H2 w(z) = (z^{-(c+1)/2} / 2 pi) int_0^inf w(x) x^{i ln z - 1} dx

and the estimate is H2 [ (1/mu) 1{|mu| > eps} H g ].  mu is tabulated once on
a log-uniform grid; the tail of its integrand beyond the truncation point is
replaced by the analytic integral of the kernel's mean level c_0 t^{-(c+1)/2}
(the oscillatory residue falls off like t_cut^{-(c+1)/2}).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .grid import SampledFunction, UniformGrid
from .quad import QuadSpec
from .specfun import Alpha, as_alpha, leading_coefficient

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(16)

_MU_GRID_DEFAULT = UniformGrid(-24.0, 48.0 / 6144.0, 6145)
_PHASE_PER_PANEL = 2.5


def choose_weight_exponent(alpha) -> float:
    """Weight exponent c: as large as allowed (2a - 1) below a = 2, else 3.

    Larger c speeds up the decay of the mu integrand, but exponents above 3
    make the H integral numerically unwieldy.
    """
    a = as_alpha(alpha).value
    if a <= 1.0:
        raise ValueError(f"the direct route requires alpha > 1, got {a}")
    return 2.0 * a - 1.0 if a < 2.0 else 3.0


def _default_t_cut(alpha: Alpha, c: float) -> float:
    s = 0.5 * (c + 1.0)
    tol = 1e-7 if alpha.is_even_integer() else 1e-6
    t = (0.5 / tol) ** (1.0 / s)
    t = min(t, 1e6)
    return math.pi * max(4.0, math.ceil(t / math.pi))


@dataclass(frozen=True)
class DirectConfig:
    alpha: Alpha
    weight_exponent: float | None = None
    epsilon: float = 0.025
    mu_grid: UniformGrid | None = None
    t_cut: float | None = None
    quad: QuadSpec = QuadSpec()

    def __post_init__(self):
        alpha = as_alpha(self.alpha)
        object.__setattr__(self, "alpha", alpha)
        if alpha.value <= 1.0:
            raise ValueError(f"direct inversion requires alpha > 1, got {alpha.value}")
        c = self.weight_exponent
        if c is None:
            c = choose_weight_exponent(alpha)
        if not (1.0 < c <= 2.0 * alpha.value - 1.0):
            raise ValueError(
                f"weight exponent must lie in (1, 2 alpha - 1], got c={c} for alpha={alpha.value}"
            )
        object.__setattr__(self, "weight_exponent", float(c))
        if not (0.0 < self.epsilon < 1.0):
            raise ValueError(f"epsilon must lie in (0, 1), got {self.epsilon}")
        if self.mu_grid is None:
            object.__setattr__(self, "mu_grid", _MU_GRID_DEFAULT)
        if self.t_cut is None:
            object.__setattr__(self, "t_cut", _default_t_cut(alpha, c))

    @property
    def s_exponent(self) -> float:
        return 0.5 * (self.weight_exponent + 1.0)


def _gl_panel_nodes(edges: np.ndarray):
    """Gauss-Legendre nodes/weights on consecutive panels given their edges."""
    lo = edges[:-1]
    hi = edges[1:]
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    nodes = mid[:, None] + half[:, None] * _GL_NODES[None, :]
    weights = half[:, None] * _GL_WEIGHTS[None, :]
    return nodes.ravel(), weights.ravel()


def _lobe_delta_pattern(alpha: Alpha, omega_span: float):
    """Node offsets and weights within one kernel lobe (0, pi), kernel included.

    For fractional a the pattern grades dyadically toward both zeros; panels
    are additionally split so the phase ln(t) omega never sweeps more than a
    few radians per panel (omega_span is the worst case for the lobe batch).
    """
    if alpha.is_even_integer():
        base = np.array([0.0, math.pi / 2.0, math.pi])
    else:
        levels = math.pi / 2.0 * 0.5 ** np.arange(6, 0, -1)
        base = np.concatenate(([0.0], levels, math.pi - levels[::-1], [math.pi]))
    splits = max(1, int(math.ceil(omega_span / _PHASE_PER_PANEL)))
    if splits > 1:
        refined = [
            np.linspace(base[i], base[i + 1], splits + 1)[:-1] for i in range(len(base) - 1)
        ]
        base = np.concatenate(refined + [[math.pi]])
    delta, w = _gl_panel_nodes(base)
    kern = np.abs(np.sin(delta)) ** alpha.value
    return delta, w * kern


def _mu_nodes(alpha: Alpha, c: float, t_cut: float, omega_max: float):
    """Phase coordinates ln(t) and real weights so that
    mu(omega) ~ sum W exp(i omega L) + analytic mean tail."""
    a = alpha.value
    s = 0.5 * (c + 1.0)
    coords = []
    weights = []
    # head (0, pi] in u = ln t; the integrand magnitude decays like
    # exp((a + 1 - s) u) toward -inf, which is positive since c <= 2a - 1
    decay = a + 1.0 - s
    u_min = math.log(1e-16) / decay
    u_max = math.log(math.pi)
    width = min(0.5, 3.0 / max(1.0, omega_max))
    n_panels = int(math.ceil((u_max - u_min) / width))
    u, wu = _gl_panel_nodes(np.linspace(u_min, u_max, n_panels + 1))
    t_head = np.exp(u)
    coords.append(u)
    weights.append(wu * np.abs(np.sin(t_head)) ** a * np.exp((1.0 - s) * u))
    # lobes [k pi, (k+1) pi]
    m = int(round(t_cut / math.pi))
    k_split_max = min(m - 1, max(2, int(math.ceil(omega_max / _PHASE_PER_PANEL))))
    for k in range(1, k_split_max + 1):
        span = omega_max * math.log((k + 1.0) / k)
        delta, wk = _lobe_delta_pattern(alpha, span)
        t = k * math.pi + delta
        coords.append(np.log(t))
        weights.append(wk * t ** (-s))
    if m - 1 > k_split_max:
        delta, wk = _lobe_delta_pattern(alpha, omega_max * math.log((k_split_max + 2.0) / (k_split_max + 1.0)))
        ks = np.arange(k_split_max + 1, m, dtype=float)
        t = ks[:, None] * math.pi + delta[None, :]
        coords.append(np.log(t).ravel())
        weights.append((wk[None, :] * t ** (-s)).ravel())
    return np.concatenate(coords), np.concatenate(weights)


def _osc_sum(coords: np.ndarray, weights: np.ndarray, omegas: np.ndarray, sign: float) -> np.ndarray:
    """sum_j W_j exp(i sign omega L_j) for each omega, chunked for memory.

    For real weights the sum is Hermitian in omega, so a symmetric omega grid
    is evaluated on its nonnegative half and mirrored.
    """
    n = len(omegas)
    if (
        n >= 3
        and n % 2 == 1
        and not np.iscomplexobj(weights)
        and abs(omegas[0] + omegas[-1]) < 1e-12
        and abs(omegas[n // 2]) < 1e-15
    ):
        half = _osc_sum(coords, weights, omegas[n // 2 :], sign)
        return np.concatenate((np.conj(half[1:][::-1]), half))
    out = np.empty(n, dtype=complex)
    chunk = max(1, int(3e7 / max(1, len(coords))))
    for i in range(0, n, chunk):
        phase = sign * np.outer(omegas[i : i + chunk], coords)
        out[i : i + chunk] = np.cos(phase) @ weights + 1j * (np.sin(phase) @ weights)
    return out


def _mu_mean_tail(alpha: Alpha, c: float, t_cut: float, omegas: np.ndarray) -> np.ndarray:
    s = 0.5 * (c + 1.0)
    c0 = leading_coefficient(alpha)
    return (
        c0
        * t_cut ** (1.0 - s)
        * np.exp(1j * omegas * math.log(t_cut))
        / (s - 1.0 - 1j * omegas)
    )


@lru_cache(maxsize=8)
def _mu_nodes_cached(alpha_value: float, c: float, t_cut: float, omega_bucket: int):
    coords, weights = _mu_nodes(Alpha(alpha_value), c, t_cut, 8.0 * omega_bucket)
    coords.setflags(write=False)
    weights.setflags(write=False)
    return coords, weights


def mu(x: float, cfg: DirectConfig) -> complex:
    """The multiplier at a single point x > 0."""
    if not (x > 0.0):
        raise ValueError(f"x must be positive, got {x}")
    omega = math.log(x)
    bucket = max(1, int(math.ceil(abs(omega) / 8.0)))
    coords, weights = _mu_nodes_cached(cfg.alpha.value, cfg.weight_exponent, cfg.t_cut, bucket)
    om = np.array([omega])
    val = _osc_sum(coords, weights, om, +1.0) + _mu_mean_tail(
        cfg.alpha, cfg.weight_exponent, cfg.t_cut, om
    )
    return complex(val[0])


@lru_cache(maxsize=8)
def _mu_table_values(alpha_value: float, c: float, t_cut: float, grid: UniformGrid) -> np.ndarray:
    omegas = grid.points()
    bucket = max(1, int(math.ceil(np.max(np.abs(omegas)) / 8.0)))
    coords, weights = _mu_nodes_cached(alpha_value, c, t_cut, bucket)
    vals = _osc_sum(coords, weights, omegas, +1.0) + _mu_mean_tail(
        Alpha(alpha_value), c, t_cut, omegas
    )
    vals.setflags(write=False)
    return vals


def _mu_table_cached(cfg: DirectConfig) -> np.ndarray:
    # keyed on the quantities mu depends on, so changing eps reuses the table
    return _mu_table_values(cfg.alpha.value, cfg.weight_exponent, cfg.t_cut, cfg.mu_grid)


def mu_table(cfg: DirectConfig) -> SampledFunction:
    """mu tabulated on the log-uniform grid (abscissae are omega = ln x)."""
    return SampledFunction(cfg.mu_grid, _mu_table_cached(cfg))


def _h_u_grid(g: SampledFunction, cfg: DirectConfig):
    """Uniform u = ln(y) grid for the H integral plus the constant-tail data.

    g(1/y) is constant for y below 1/x_last (constant extrapolation); that
    region integrates in closed form.
    """
    x_last = g.grid.last
    u_const = -math.log(x_last)
    u_hi = 20.0
    du = 1.0 / 1024.0
    n = int(math.ceil((u_hi - u_const) / du)) + 1
    u = u_const + du * np.arange(n)
    return u, du, u_const


def _h_values(g: SampledFunction, cfg: DirectConfig, omegas: np.ndarray) -> np.ndarray:
    p = 0.5 * (cfg.weight_exponent - 1.0)
    u, du, u_const = _h_u_grid(g, cfg)
    gv = np.real(g.eval(np.exp(-u)))
    big = np.exp(p * u) * gv
    trap = np.full(len(u), du)
    trap[0] = trap[-1] = 0.5 * du
    vals = _osc_sum(u, big * trap, omegas, -1.0)
    g_last = float(np.real(g.values[-1]))
    vals += g_last * np.exp((p - 1j * omegas) * u_const) / (p - 1j * omegas)
    return vals


def h_forward(g: SampledFunction, x: float, cfg: DirectConfig) -> complex:
    """H g at a single x > 0; g is linearly interpolated, constant beyond."""
    if not (x > 0.0):
        raise ValueError(f"x must be positive, got {x}")
    return complex(_h_values(g, cfg, np.array([math.log(x)]))[0])


def _as_w_values(w, cfg: DirectConfig) -> np.ndarray:
    if isinstance(w, SampledFunction):
        if w.grid != cfg.mu_grid:
            raise ValueError("w must be sampled on cfg.mu_grid")
        return np.asarray(w.values, dtype=complex)
    arr = np.asarray(w, dtype=complex)
    if len(arr) != cfg.mu_grid.count:
        raise ValueError(f"expected {cfg.mu_grid.count} values on the mu grid")
    return arr


def _h2_values(w_vals: np.ndarray, cfg: DirectConfig, zs: np.ndarray):
    omegas = cfg.mu_grid.points()
    trap = np.full(len(omegas), cfg.mu_grid.step)
    trap[0] = trap[-1] = 0.5 * cfg.mu_grid.step
    weighted = w_vals * trap
    zetas = np.log(zs)
    acc = np.empty(len(zs), dtype=complex)
    chunk = max(1, int(3e7 / len(omegas)))
    for i in range(0, len(zs), chunk):
        phase = np.outer(zetas[i : i + chunk], omegas)
        acc[i : i + chunk] = (np.cos(phase) + 1j * np.sin(phase)) @ weighted
    out = zs ** (-cfg.s_exponent) / (2.0 * math.pi) * acc
    return np.real(out), np.imag(out)


def h2_inverse(w, z: float, cfg: DirectConfig) -> float:
    """H2 applied to values w on the mu grid, evaluated at z > 0.

    Returns the real part; a warning reports any significant imaginary
    residue, which signals an inconsistent w.
    """
    if not (z > 0.0):
        raise ValueError(f"z must be positive, got {z}")
    re, im = _h2_values(_as_w_values(w, cfg), cfg, np.array([z]))
    if abs(re[0]) > 0.0 and abs(im[0]) > 1e-2 * abs(re[0]):
        warnings.warn(
            f"h2_inverse imaginary residue {im[0]:.3e} vs real {re[0]:.3e}",
            stacklevel=2,
        )
    return float(re[0])


def invert_direct(g: SampledFunction, cfg: DirectConfig, out_grid: UniformGrid) -> SampledFunction:
    """Estimate f from samples of its transform: H2 [(1/mu) 1{|mu|>eps} H g].

    Deterministic for a fixed config; warns when the cutoff set {|mu| > eps}
    is empty or reaches the edge of the tabulation grid.
    """
    mu_vals = _mu_table_cached(cfg)
    keep = np.abs(mu_vals) > cfg.epsilon
    if not np.any(keep):
        warnings.warn("the set {|mu| > eps} is empty: the estimate is identically zero", stacklevel=2)
    elif keep[0] or keep[-1]:
        warnings.warn(
            "|mu| exceeds eps at the tabulation boundary; widen mu_grid", stacklevel=2
        )
    hg = _h_values(g, cfg, cfg.mu_grid.points())
    w = np.where(keep, hg / np.where(keep, mu_vals, 1.0), 0.0)
    zs = out_grid.points()
    if np.any(zs <= 0.0):
        raise ValueError("output grid must be strictly positive for the direct route")
    re, im = _h2_values(w, cfg, zs)
    scale = np.max(np.abs(re)) if len(re) else 0.0
    if scale > 0.0 and np.max(np.abs(im)) > 1e-2 * scale:
        warnings.warn(
            f"invert_direct imaginary residue up to {np.max(np.abs(im)):.3e}", stacklevel=2
        )
    return SampledFunction(out_grid, re)
