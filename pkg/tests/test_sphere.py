"""Circle transform: convolution theorem, coefficient extraction, inversion."""

import math

import numpy as np
import pytest

from alphasine.errors import CoefficientUnderflow, EvenIntegerAlpha
from alphasine.grid import SampledFunction, UniformGrid
from alphasine.specfun import cosine_coeffs, kummer_m, sin_power_integral
from alphasine.sphere import (
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

DENSITIES = {
    "shifted_sine": shifted_sine_density(1.0),
    "vonmises4": vonmises4_density(1.0),
    "watson": watson_density(-2.5, 1.0),
}


class TestPeriodicDensity:
    def test_mass_enforced(self):
        g = circle_grid(8)
        with pytest.raises(ValueError):
            PeriodicDensity(SampledFunction(g, np.full(8, 1.0)))

    def test_negative_rejected(self):
        g = circle_grid(8)
        vals = np.full(8, 1.0 / (2.0 * math.pi))
        vals[3] = -vals[3]
        with pytest.raises(ValueError):
            PeriodicDensity(SampledFunction(g, vals))

    def test_pi_periodicity_certificate(self):
        g = circle_grid(8)
        vals = np.full(8, 1.0 / (2.0 * math.pi))
        vals[0] *= 1.5
        vals[1] *= 0.5
        total = (2.0 * math.pi / 8) * vals.sum()
        vals = vals / total
        with pytest.raises(ValueError):
            PeriodicDensity(SampledFunction(g, vals), certified_pi_periodic=True)
        PeriodicDensity(SampledFunction(g, vals))  # uncertified is fine

    def test_wrong_grid_rejected(self):
        bad = UniformGrid(0.0, 2.0 * math.pi / 8, 8)
        with pytest.raises(ValueError):
            PeriodicDensity(SampledFunction(bad, np.full(8, 1.0 / (2.0 * math.pi))))


class TestKSphere:
    @pytest.mark.parametrize("alpha", [-0.5, 0.0, 0.5, 1.5, 2.0])
    def test_uniform_density(self, alpha):
        uni = watson_density(0.0, 0.0)
        for y in (0.0, 0.7, -2.0):
            assert math.isclose(
                k_sphere(uni, alpha, y), sin_power_integral(alpha) / math.pi, rel_tol=1e-12
            )

    def test_uniform_alpha_two_value(self):
        uni = watson_density(0.0, 0.0)
        assert math.isclose(k_sphere(uni, 2.0, 0.3), 0.5, rel_tol=1e-12)

    def test_pointwise_matches_grid(self):
        f = DENSITIES["watson"]
        kf = k_sphere_grid(f, 1.5)
        for i in (0, 17, 200, 511):
            assert math.isclose(k_sphere(f, 1.5, kf.xs[i]), kf.values[i], rel_tol=1e-10)

    @pytest.mark.parametrize("alpha", [-0.5, 0.5, 1.5, 5.0])
    @pytest.mark.parametrize("name", ["watson", "vonmises4"])
    def test_convolution_theorem(self, alpha, name):
        f = DENSITIES[name]
        kf = k_sphere_grid(f, alpha)
        hk = circle_fourier_coeffs(kf, 22)
        fh = circle_fourier_coeffs(f.values, 22)
        ct = cosine_coeffs(alpha, 11).coeffs
        for n in range(-10, 11):
            expect = 2.0 * math.pi * ct[abs(n)] * fh.get(2 * n)
            assert abs(hk.get(2 * n) - expect) <= 1e-6


class TestCircleCoeffs:
    def test_pure_harmonic(self):
        g = circle_grid(128)
        u = SampledFunction(g, np.cos(2.0 * g.points()))
        c = circle_fourier_coeffs(u, 5)
        for n in range(-5, 6):
            expect = 0.5 if abs(n) == 2 else 0.0
            assert abs(c.get(n) - expect) <= 1e-10

    def test_constant(self):
        g = circle_grid(64)
        u = SampledFunction(g, np.full(64, 1.0 / (2.0 * math.pi)))
        c = circle_fourier_coeffs(u, 3)
        assert abs(c.get(0) - 1.0 / (2.0 * math.pi)) <= 1e-14
        for n in (1, 2, 3, -1):
            assert abs(c.get(n)) <= 1e-14

    def test_kernel_coefficients_cross_module(self):
        # |cos x|^1.5 sampled finely: trapezoid coefficients match the
        # closed-form table from the gamma route (aliasing ~ (M/4)^-2.5)
        g = circle_grid(32768)
        u = SampledFunction(g, np.abs(np.cos(g.points())) ** 1.5)
        c = circle_fourier_coeffs(u, 20)
        ct = cosine_coeffs(1.5, 10).coeffs
        for n in range(-10, 11):
            assert abs(c.get(2 * n) - ct[abs(n)]) <= 1e-10
        for n in (-9, -3, 1, 5, 19):
            assert abs(c.get(n)) <= 1e-10

    def test_antialiasing_margin_enforced(self):
        g = circle_grid(16)
        u = SampledFunction(g, np.full(16, 1.0))
        with pytest.raises(ValueError):
            circle_fourier_coeffs(u, 4)

    def test_conjugate_symmetry_enforced(self):
        with pytest.raises(ValueError):
            CircleCoeffs(np.array([1.0 + 1.0j, 0.0, 1.0 + 0.5j]))

    @pytest.mark.parametrize("name", list(DENSITIES))
    def test_odd_coefficients_vanish(self, name):
        c = circle_fourier_coeffs(DENSITIES[name].values, 21)
        for n in range(-21, 22, 2):
            assert abs(c.get(n)) <= 1e-10


class TestInvertSphere:
    def test_even_integer_rejected(self):
        kf = k_sphere_grid(DENSITIES["watson"], 1.5)
        for alpha in (0.0, 2.0, 4.0):
            with pytest.raises(EvenIntegerAlpha):
                invert_sphere(kf, alpha, 10)

    def test_coefficient_underflow(self):
        kf = k_sphere_grid(DENSITIES["watson"], 19.5)
        with pytest.raises(CoefficientUnderflow):
            invert_sphere(kf, 19.5, 40)

    def test_uniform_recovered_exactly(self):
        uni = watson_density(0.0, 0.0)
        kf = k_sphere_grid(uni, 1.5)
        rec = invert_sphere(kf, 1.5, 10)
        assert np.max(np.abs(rec.values.values - 1.0 / (2.0 * math.pi))) <= 1e-12
        assert rec.clipped_mass == 0.0

    @pytest.mark.parametrize("alpha", [-0.5, 0.5, 1.5, 3.0, 5.0])
    def test_round_trip_on_harmonics(self, alpha):
        g = circle_grid(256)
        x = g.points()
        vals = (1.0 + 0.3 * np.cos(2.0 * x) + 0.1 * np.cos(6.0 * (x - 0.4))) / (2.0 * math.pi)
        f = PeriodicDensity(SampledFunction(g, vals), certified_pi_periodic=True)
        rec = invert_sphere(k_sphere_grid(f, alpha), alpha, 4)
        assert np.max(np.abs(rec.values.values - vals)) <= 1e-9

    @pytest.mark.parametrize("name", list(DENSITIES))
    def test_example_densities_alpha_15(self, name):
        f = DENSITIES[name]
        rec = invert_sphere(k_sphere_grid(f, 1.5), 1.5, 10)
        assert np.max(np.abs(rec.values.values - f.values.values)) <= 0.02
        # reconstruction keeps the pi-periodicity certificate
        assert rec.certified_pi_periodic


class TestDensities:
    def test_all_pi_periodic(self):
        for f in DENSITIES.values():
            v = f.values.values
            m = len(v)
            assert np.max(np.abs(v - np.roll(v, m // 2))) <= 1e-10

    def test_mass_one(self):
        for f in DENSITIES.values():
            m = f.grid.count
            assert math.isclose((2.0 * math.pi / m) * f.values.values.sum(), 1.0, rel_tol=1e-12)

    def test_watson_zero_concentration_is_uniform(self):
        f = watson_density(1.0, 0.0)
        assert np.max(np.abs(f.values.values - 1.0 / (2.0 * math.pi))) <= 1e-15

    def test_watson_matches_kummer_normalization(self):
        f = watson_density(-2.5, 1.0, m=512)
        x = f.grid.points()
        expect = np.exp(np.cos(x + 2.5) ** 2) / (2.0 * math.pi * kummer_m(0.5, 1.0, 1.0))
        assert np.max(np.abs(f.values.values - expect)) <= 1e-12

    def test_vonmises4_against_bessel_normalization(self):
        f = vonmises4_density(0.3, m=512)
        x = f.grid.points()
        expect = np.exp(np.cos(4.0 * (x - 0.3))) / (2.0 * math.pi * np.i0(1.0))
        assert np.max(np.abs(f.values.values - expect)) <= 1e-12

    def test_shifted_sine_values(self):
        f = shifted_sine_density(0.0, m=512)
        x = f.grid.points()
        # renormalization moves the raw |sin|/4 samples by a few 1e-6
        assert np.max(np.abs(f.values.values - np.abs(np.sin(x)) / 4.0)) <= 1e-5

    def test_dispatcher(self):
        assert density_example("watson", kappa=0.0).grid.count == 512
        assert density_example("shifted_sine", m=64, h=0.5).grid.count == 64
        with pytest.raises(ValueError):
            density_example("cauchy")
