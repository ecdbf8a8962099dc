"""Uniform grids and sampled functions with linear interpolation.

Evaluation outside the grid span uses constant extrapolation with the nearest
endpoint value; both containers are immutable after construction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class UniformGrid:
    start: float
    step: float
    count: int

    def __post_init__(self):
        if not (self.step > 0.0) or not np.isfinite(self.step):
            raise ValueError(f"step must be positive, got {self.step}")
        if int(self.count) < 1:
            raise ValueError(f"count must be >= 1, got {self.count}")
        object.__setattr__(self, "start", float(self.start))
        object.__setattr__(self, "step", float(self.step))
        object.__setattr__(self, "count", int(self.count))

    def abscissa(self, i: int) -> float:
        return self.start + i * self.step

    @property
    def last(self) -> float:
        return self.start + (self.count - 1) * self.step

    def points(self) -> np.ndarray:
        return self.start + self.step * np.arange(self.count)

    @classmethod
    def from_span(cls, start: float, stop: float, count: int) -> "UniformGrid":
        if count < 2:
            return cls(start, max(stop - start, 1.0), count)
        return cls(start, (stop - start) / (count - 1), count)


@dataclass(frozen=True)
class SampledFunction:
    grid: UniformGrid
    values: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.values)
        if not np.iscomplexobj(arr):
            arr = arr.astype(float)
        if arr.ndim != 1 or len(arr) != self.grid.count:
            raise ValueError(f"expected {self.grid.count} values, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("sample values must be finite")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    @property
    def xs(self) -> np.ndarray:
        return self.grid.points()

    def eval(self, x):
        """Piecewise-linear inside the span, nearest endpoint value outside."""
        return np.interp(x, self.xs, self.values)

    @classmethod
    def from_callable(cls, f, grid: UniformGrid) -> "SampledFunction":
        xs = grid.points()
        vals = np.asarray(f(xs))
        if vals.shape != xs.shape:
            vals = np.array([f(x) for x in xs])
        return cls(grid, vals)


def eval_linear(s: SampledFunction, x):
    return s.eval(x)


def even_extension_eval(s: SampledFunction, x):
    """Evaluate the even extension f(-x) = f(x) of a half-line sample."""
    return s.eval(np.abs(x))
