"""Quadrature engine: adaptive panels and kernel-zero lobe rules."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from alphasine.errors import NonConvergence
from alphasine.quad import QuadSpec, integrate, integrate_kernel_split
from alphasine.specfun import sin_power_integral

from conftest import f1, t2_f1


def test_spec_validation():
    with pytest.raises(ValueError):
        QuadSpec(abs_tol=0.0)
    with pytest.raises(ValueError):
        QuadSpec(max_subdivisions=4)
    with pytest.raises(ValueError):
        QuadSpec(tail_cut=-1.0)


class TestIntegrate:
    def test_sine(self):
        assert abs(integrate(np.sin, 0.0, math.pi) - 2.0) < 1e-10

    def test_endpoint_singularity(self):
        assert abs(integrate(lambda u: u**-0.5, 0.0, 1.0) - 2.0) < 1e-8

    def test_sin_power_constant(self):
        val = integrate(lambda u: np.abs(np.sin(u)) ** -0.5, 0.0, math.pi)
        assert abs(val - sin_power_integral(-0.5)) < 1e-8

    def test_nonconvergence(self):
        spec = QuadSpec(max_subdivisions=8)
        with pytest.raises(NonConvergence):
            integrate(lambda u: np.abs(u - 1.0 / 3.0) ** -0.9, 0.0, 1.0, spec)

    def test_bad_interval(self):
        with pytest.raises(ValueError):
            integrate(np.sin, 1.0, 1.0)

    @given(
        a=st.floats(min_value=-3.0, max_value=3.0),
        b=st.floats(min_value=-3.0, max_value=3.0),
    )
    @settings(max_examples=25, deadline=None)
    def test_linearity(self, a, b):
        spec = QuadSpec(abs_tol=1e-11, rel_tol=1e-11)
        fa = integrate(np.sin, 0.0, 2.0, spec)
        fb = integrate(np.cos, 0.0, 2.0, spec)
        combo = integrate(lambda x: a * np.sin(x) + b * np.cos(x), 0.0, 2.0, spec)
        assert abs(combo - (a * fa + b * fb)) <= 2e-10 * (1.0 + abs(a) + abs(b))


class TestKernelSplit:
    def test_one_lobe_alpha_two(self):
        y = 2.0
        spec = QuadSpec(tail_cut=math.pi / y)
        val = integrate_kernel_split(lambda x: np.ones_like(x), 2.0, y, spec)
        assert abs(val - math.pi / (2.0 * y)) < 1e-12

    def test_gaussian_closed_form(self):
        val = integrate_kernel_split(f1, 2.0, 1.0, QuadSpec())
        assert abs(val - float(t2_f1(1.0))) < 1e-6

    def test_one_lobe_negative_alpha(self):
        y = 2.0
        spec = QuadSpec(tail_cut=math.pi / y)
        val = integrate_kernel_split(lambda x: np.ones_like(x), -0.5, y, spec)
        assert abs(val - sin_power_integral(-0.5) / y) < 1e-6

    def test_extreme_negative_alpha(self):
        y = 1.0
        spec = QuadSpec(tail_cut=math.pi)
        val = integrate_kernel_split(lambda x: np.ones_like(x), -0.95, y, spec)
        assert abs(val - sin_power_integral(-0.95)) < 1e-8

    def test_matches_single_domain_adaptive(self):
        # smooth integrand: lobe splitting and plain adaptive must agree
        spec = QuadSpec(tail_cut=3.0 * math.pi)
        split = integrate_kernel_split(lambda x: np.exp(-x), 2.0, 1.0, spec)
        plain = integrate(lambda x: np.sin(x) ** 2 * np.exp(-x), 0.0, 3.0 * math.pi)
        assert abs(split - plain) < 1e-9

    def test_cosine_kernel_full_mass(self):
        # |cos|^0 = 1: the integral is just the tail_cut mass of f
        spec = QuadSpec(tail_cut=10.0)
        val = integrate_kernel_split(lambda x: np.exp(-x), 0.0, 1.3, spec, kernel="cosine")
        assert abs(val - (1.0 - math.exp(-10.0))) < 1e-9

    def test_rejects_bad_arguments(self):
        with pytest.raises(ValueError):
            integrate_kernel_split(f1, 2.0, 0.0)
        with pytest.raises(ValueError):
            integrate_kernel_split(f1, 2.0, 1.0, kernel="tan")

    def test_scalar_only_callable(self):
        val = integrate_kernel_split(lambda x: math.exp(-float(x) ** 2), 2.0, 1.0)
        assert abs(val - float(t2_f1(1.0))) < 1e-6
