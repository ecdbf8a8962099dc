"""Direct-route operators; the full reconstruction lives in the slow suite."""

import math

import numpy as np
import pytest
from scipy.integrate import quad as scipy_quad

from alphasine.direct_inv import (
    DirectConfig,
    choose_weight_exponent,
    h2_inverse,
    h_forward,
    invert_direct,
    mu,
    mu_table,
)
from alphasine.grid import SampledFunction, UniformGrid

from conftest import sample, t2_f1


@pytest.fixture(scope="module")
def cfg():
    return DirectConfig(alpha=2.0)


@pytest.fixture(scope="module")
def small_cfg():
    # coarse tabulation grid keeps the trivial checks fast; eps = 0.1 keeps
    # the cutoff set inside the grid so no boundary warning fires
    return DirectConfig(
        alpha=2.0, epsilon=0.1, mu_grid=UniformGrid(-6.0, 12.0 / 512.0, 513)
    )


@pytest.fixture(scope="module")
def g_fine():
    return sample(t2_f1, 0.0, 20.0, 200001)


class TestWeightExponent:
    def test_rule(self):
        assert choose_weight_exponent(1.5) == 2.0
        assert choose_weight_exponent(2.0) == 3.0
        assert choose_weight_exponent(10.0) == 3.0

    def test_domain(self):
        for bad in (1.0, 0.5, -0.2):
            with pytest.raises(ValueError):
                choose_weight_exponent(bad)

    def test_config_validation(self):
        with pytest.raises(ValueError):
            DirectConfig(alpha=1.0)
        with pytest.raises(ValueError):
            DirectConfig(alpha=2.0, epsilon=0.0)
        with pytest.raises(ValueError):
            DirectConfig(alpha=2.0, epsilon=1.5)
        with pytest.raises(ValueError):
            DirectConfig(alpha=2.0, weight_exponent=5.0)
        with pytest.raises(ValueError):
            DirectConfig(alpha=1.5, weight_exponent=2.5)


class TestMu:
    def test_value_at_one(self, cfg):
        # log(1) = 0 makes the kernel real: integral of sin^2(t)/t^2 = pi/2
        assert abs(mu(1.0, cfg) - math.pi / 2.0) < 1e-6

    def test_conjugate_symmetry(self, cfg):
        for x in (0.3, 2.0, 7.5):
            assert abs(mu(1.0 / x, cfg) - np.conj(mu(x, cfg))) < 1e-8

    def test_decay(self, cfg):
        assert abs(mu(1e6, cfg)) < abs(mu(1.0, cfg)) / 10.0

    def test_closed_form_alpha_two(self, cfg):
        # |mu(e^w)| = sqrt(pi w tanh(pi w / 2) / 2) / (w sqrt(1 + w^2))
        for w in (0.5, 2.0, 10.0):
            expect = math.sqrt(math.pi * w * math.tanh(math.pi * w / 2.0) / 2.0) / (
                w * math.sqrt(1.0 + w * w)
            )
            assert math.isclose(abs(mu(math.exp(w), cfg)), expect, rel_tol=1e-6)

    def test_domain(self, cfg):
        with pytest.raises(ValueError):
            mu(0.0, cfg)

    def test_table_symmetry(self, small_cfg):
        tab = mu_table(small_cfg)
        v = tab.values
        assert np.max(np.abs(v - np.conj(v[::-1]))) < 1e-8


class TestH:
    def test_zero_input(self, small_cfg):
        g = SampledFunction(UniformGrid(0.0, 0.1, 201), np.zeros(201))
        assert h_forward(g, 1.0, small_cfg) == 0.0
        assert h_forward(g, 3.7, small_cfg) == 0.0

    def test_linearity(self, small_cfg, g_fine):
        g2 = SampledFunction(g_fine.grid, 2.5 * np.real(g_fine.values))
        a = h_forward(g_fine, 1.7, small_cfg)
        b = h_forward(g2, 1.7, small_cfg)
        assert abs(b - 2.5 * a) < 1e-12 * abs(b)

    def test_oracle_at_x_one(self, small_cfg, g_fine):
        # no oscillation at x = 1; compare against adaptive quadrature of the
        # same constant-extrapolated integrand (linear-interpolation slope
        # near 0 contributes ~5e-5 at this sampling step)
        val = h_forward(g_fine, 1.0, small_cfg)
        x_last = g_fine.grid.last
        o1 = float(np.real(g_fine.values[-1])) / x_last
        o2 = scipy_quad(lambda y: float(t2_f1(1.0 / y)), 1.0 / x_last, 2000.0, limit=400)[0]
        o3 = scipy_quad(lambda y: float(t2_f1(1.0 / y)), 2000.0, 1e5, limit=400)[0]
        o3 += math.sqrt(math.pi) / 4.0 / 1e5
        assert abs(val.real - (o1 + o2 + o3)) < 1e-3
        assert abs(val.imag) < 1e-12


class TestH2:
    def test_zero(self, small_cfg):
        w = np.zeros(small_cfg.mu_grid.count, dtype=complex)
        assert h2_inverse(w, 1.3, small_cfg) == 0.0

    def test_scaling(self, small_cfg):
        # Hermitian w (the physical case) keeps the output real
        rng = np.random.default_rng(5)
        n = small_cfg.mu_grid.count
        half = rng.standard_normal(n // 2) + 1j * rng.standard_normal(n // 2)
        half *= np.exp(-0.1 * small_cfg.mu_grid.points()[n // 2 + 1 :] ** 2)
        w = np.concatenate((np.conj(half[::-1]), [1.0 + 0.0j], half))
        a = h2_inverse(w, 0.7, small_cfg)
        b = h2_inverse(3.0 * w, 0.7, small_cfg)
        assert math.isclose(b, 3.0 * a, rel_tol=1e-12)

    def test_imaginary_residue_warns(self, small_cfg):
        # a one-sided w has a genuine imaginary part: the diagnostic fires
        w = np.zeros(small_cfg.mu_grid.count, dtype=complex)
        w[-50:] = 1.0
        with pytest.warns(UserWarning, match="imaginary"):
            h2_inverse(w, 0.7, small_cfg)

    def test_rejects_wrong_length(self, small_cfg):
        with pytest.raises(ValueError):
            h2_inverse(np.zeros(7), 1.0, small_cfg)
        with pytest.raises(ValueError):
            h2_inverse(np.zeros(small_cfg.mu_grid.count), 0.0, small_cfg)


class TestInvertDirect:
    def test_zero_input(self, small_cfg):
        g = SampledFunction(UniformGrid(0.0, 0.1, 201), np.zeros(201))
        out = UniformGrid(0.5, 0.25, 9)
        rec = invert_direct(g, small_cfg, out)
        assert np.max(np.abs(rec.values)) == 0.0

    def test_positive_grid_required(self, small_cfg):
        g = SampledFunction(UniformGrid(0.0, 0.1, 201), np.zeros(201))
        with pytest.raises(ValueError):
            invert_direct(g, small_cfg, UniformGrid(0.0, 0.1, 5))

    def test_empty_cutoff_warns(self, g_fine):
        # a grid placed beyond the mu peak sees only |mu| ~ 0.02 < eps
        cfg = DirectConfig(
            alpha=2.0, epsilon=0.5, mu_grid=UniformGrid(15.0, 1.0 / 128.0, 129)
        )
        with pytest.warns(UserWarning, match="empty"):
            invert_direct(g_fine, cfg, UniformGrid(0.5, 0.25, 5))

    def test_boundary_warning_when_grid_too_narrow(self, g_fine):
        cfg = DirectConfig(
            alpha=2.0, epsilon=0.01, mu_grid=UniformGrid(-4.0, 8.0 / 128.0, 129)
        )
        with pytest.warns(UserWarning, match="boundary"):
            invert_direct(g_fine, cfg, UniformGrid(0.5, 0.25, 5))
