"""Shared fixtures: the three reference densities on the half-line, their
Fourier transforms, and the closed forms of their |sin|^2 transforms."""

import math

import numpy as np
import pytest

from alphasine.grid import SampledFunction, UniformGrid
from alphasine.quad import QuadSpec


def f1(x):
    return np.exp(-np.asarray(x, dtype=float) ** 2)


def f2(x):
    x = np.asarray(x, dtype=float)
    return x * x * np.exp(-np.abs(x))


def f3(x):
    return (1.0 + np.asarray(x, dtype=float) ** 2) ** -2.0


def fhat1(t):
    return math.sqrt(math.pi) * np.exp(-np.asarray(t, dtype=float) ** 2 / 4.0)


def fhat2(t):
    t = np.asarray(t, dtype=float)
    return 4.0 * (1.0 - 3.0 * t * t) / (1.0 + t * t) ** 3


def fhat3(t):
    t = np.abs(np.asarray(t, dtype=float))
    return math.pi / 2.0 * (1.0 + t) * np.exp(-t)


def t2_f1(y):
    return math.sqrt(math.pi) / 4.0 * (1.0 - np.exp(-np.asarray(y, dtype=float) ** 2))


def t2_f2(y):
    y = np.asarray(y, dtype=float)
    y2 = y * y
    return 8.0 * y2 * (3.0 + 6.0 * y2 + 8.0 * y2 * y2) / (1.0 + 4.0 * y2) ** 3


def t2_f3(y):
    y = np.abs(np.asarray(y, dtype=float))
    return math.pi / 8.0 * (1.0 - np.exp(-2.0 * y) * (1.0 + 2.0 * y))


EXAMPLES = {
    "f1": (f1, fhat1, t2_f1),
    "f2": (f2, fhat2, t2_f2),
    "f3": (f3, fhat3, t2_f3),
}


@pytest.fixture(scope="session")
def quad_spec():
    return QuadSpec()


def sample(fn, start, stop, count) -> SampledFunction:
    return SampledFunction.from_callable(fn, UniformGrid.from_span(start, stop, count))


def rel_l2(approx: np.ndarray, truth: np.ndarray) -> float:
    return float(np.linalg.norm(approx - truth) / np.linalg.norm(truth))
