"""Smooth compactly supported test kernels and their Fourier calculus.

Everything downstream (pair correlation windows, smoothed counts, the
sampling density on the alpha interval) is phrased in terms of one kernel
type: a smooth profile that is identically zero outside an open interval.
Exact zeros outside the support are load-bearing; they are what lets the
big sums truncate without an error term.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from numpy.polynomial.legendre import leggauss


class KernelError(Exception):
    """A kernel violated a construction contract."""


class DegenerateKernelError(KernelError):
    """Normalisation was requested for a kernel without positive mass."""


_GL_ORDER = 16
_GL_X, _GL_W = leggauss(_GL_ORDER)


def _gl_grid(lo: float, hi: float, panels: int):
    """Composite Gauss-Legendre rule: `panels` equal panels of 16 nodes."""
    edges = np.linspace(lo, hi, panels + 1)
    half = 0.5 * (hi - lo) / panels
    mids = 0.5 * (edges[:-1] + edges[1:])
    nodes = (mids[:, None] + half * _GL_X[None, :]).ravel()
    weights = np.tile(half * _GL_W, panels)
    return nodes, weights


@dataclass(frozen=True)
class TestKernel:
    """Smooth function vanishing identically outside (support_lo, support_hi).

    ``profile`` is only evaluated strictly inside the support; the wrapper
    returns exact 0.0 elsewhere.  ``smoothness_budget`` records how many
    derivatives error estimates may assume (the default is "all of them").
    """

    # "Test" here means test function, not a pytest suite
    __test__ = False

    support_lo: float
    support_hi: float
    profile: Callable[[np.ndarray], np.ndarray]
    smoothness_budget: int = 10**6

    def __post_init__(self):
        if not self.support_hi > self.support_lo:
            raise KernelError("empty support interval")

    @property
    def width(self) -> float:
        return self.support_hi - self.support_lo

    def __call__(self, x):
        arr = np.atleast_1d(np.asarray(x, dtype=np.float64))
        out = np.zeros(arr.shape, dtype=np.float64)
        inside = (arr > self.support_lo) & (arr < self.support_hi)
        if inside.any():
            out[inside] = self.profile(arr[inside])
        if np.ndim(x) == 0:
            return float(out[0])
        return out

    def scaled(self, c: float) -> "TestKernel":
        """Same support, profile multiplied by the constant c."""
        prof = self.profile
        return TestKernel(
            self.support_lo,
            self.support_hi,
            lambda t, _p=prof, _c=c: _c * _p(t),
            self.smoothness_budget,
        )


def make_bump(lo: float = -1.0, hi: float = 1.0) -> TestKernel:
    """The standard bump exp(-1/(1-u^2)) mapped onto (lo, hi).

    u is the affine image of x in (-1, 1).  The peak value is exp(-1) at the
    midpoint and every derivative vanishes at the endpoints.
    """
    if not hi > lo:
        raise KernelError(f"need lo < hi, got ({lo}, {hi})")

    def profile(x, _lo=lo, _hi=hi):
        u = (2.0 * x - _lo - _hi) / (_hi - _lo)
        t = 1.0 - u * u
        # t can underflow to 0 right at the edge of the open support; the
        # correct limit there is 0, so divide-by-zero is masked, not raised.
        with np.errstate(divide="ignore", over="ignore"):
            safe = np.where(t > 0.0, t, 1.0)
            return np.where(t > 0.0, np.exp(-1.0 / safe), 0.0)

    return TestKernel(lo, hi, profile)


def integrate(kernel: TestKernel, weight: Callable | None = None,
              nodes_per_unit: int = 4096) -> float:
    """Integral of kernel(x) * weight(x) over the support."""
    panels = max(1, math.ceil(kernel.width * nodes_per_unit / _GL_ORDER))
    nodes, wts = _gl_grid(kernel.support_lo, kernel.support_hi, panels)
    vals = kernel(nodes)
    if weight is not None:
        vals = vals * weight(nodes)
    return float(np.dot(vals, wts))


def normalize_rho(kernel: TestKernel, nodes_per_unit: int = 4096) -> TestKernel:
    """Rescale a density on (0, inf) so that int k(x)/x dx = 1."""
    if kernel.support_lo <= 0.0:
        raise DegenerateKernelError("1/x weight needs support inside (0, inf)")
    mass = integrate(kernel, weight=lambda x: 1.0 / x,
                     nodes_per_unit=nodes_per_unit)
    if not math.isfinite(mass) or mass <= 0.0:
        raise DegenerateKernelError(f"multiplicative mass {mass!r} not positive")
    return kernel.scaled(1.0 / mass)


def _transform_grid(kernel: TestKernel, max_abs_freq: float,
                    nodes_per_unit: int):
    # one oscillation period per panel keeps 16-node Gauss-Legendre far below
    # 1e-12 relative error at the largest frequency
    panels = max(
        math.ceil(kernel.width * nodes_per_unit / _GL_ORDER),
        math.ceil(kernel.width * max_abs_freq),
        1,
    )
    nodes, wts = _gl_grid(kernel.support_lo, kernel.support_hi, panels)
    return nodes, kernel(nodes) * wts


def fourier(kernel: TestKernel, x, nodes_per_unit: int = 4096):
    """Fourier transform int kernel(y) e(-x y) dy at frequency/ies x."""
    xs = np.atleast_1d(np.asarray(x, dtype=np.float64))
    fmax = float(np.max(np.abs(xs))) if xs.size else 0.0
    nodes, wv = _transform_grid(kernel, fmax, nodes_per_unit)
    out = np.empty(xs.shape, dtype=np.complex128)
    step = max(1, int(4.0e6) // max(nodes.size, 1))
    for i in range(0, xs.size, step):
        blk = xs.flat[i:i + step]
        out.flat[i:i + step] = np.exp(-2j * np.pi * np.outer(blk, nodes)) @ wv
    if np.ndim(x) == 0:
        return complex(out.flat[0])
    return out


class FourierTable:
    """Transform values of one kernel from a fixed quadrature grid.

    The grid is sized at construction for frequencies up to ``max_abs_freq``;
    asking beyond that band raises instead of silently losing accuracy.
    Scalar lookups are cached, vector evaluation is a direct matrix product.
    """

    def __init__(self, kernel: TestKernel, max_abs_freq: float = 64.0,
                 nodes_per_unit: int = 4096):
        self.kernel = kernel
        self.max_abs_freq = float(max_abs_freq)
        self._nodes, self._wvals = _transform_grid(kernel, self.max_abs_freq,
                                                   nodes_per_unit)
        self._cache: dict[float, complex] = {}

    def _check(self, fmax: float):
        if fmax > self.max_abs_freq * (1 + 1e-12):
            raise ValueError(
                f"frequency {fmax} outside the table band "
                f"[-{self.max_abs_freq}, {self.max_abs_freq}]")

    def value(self, x: float) -> complex:
        x = float(x)
        hit = self._cache.get(x)
        if hit is None:
            self._check(abs(x))
            hit = complex(np.exp(-2j * np.pi * x * self._nodes) @ self._wvals)
            self._cache[x] = hit
        return hit

    def values(self, xs) -> np.ndarray:
        xs = np.asarray(xs, dtype=np.float64)
        if xs.size:
            self._check(float(np.max(np.abs(xs))))
        out = np.empty(xs.shape, dtype=np.complex128)
        step = max(1, int(4.0e6) // max(self._nodes.size, 1))
        for i in range(0, xs.size, step):
            blk = xs.flat[i:i + step]
            out.flat[i:i + step] = (
                np.exp(-2j * np.pi * np.outer(blk, self._nodes)) @ self._wvals)
        return out


def periodize(kernel: TestKernel, N: int, x):
    """F_N(x) = sum_k kernel(N (x + k)); an exact finite sum, 1-periodic."""
    if N < 1:
        raise ValueError("N must be a positive integer")
    xs = np.atleast_1d(np.asarray(x, dtype=np.float64))
    klo = np.ceil(kernel.support_lo / N - xs)
    khi = np.floor(kernel.support_hi / N - xs)
    out = np.zeros(xs.shape, dtype=np.float64)
    span = int(np.max(khi - klo, initial=-1.0))
    for off in range(span + 1):
        k = klo + off
        live = k <= khi
        if live.any():
            out[live] += kernel(N * (xs[live] + k[live]))
    if np.ndim(x) == 0:
        return float(out[0])
    return out


def default_f() -> TestKernel:
    """Even window on (-1, 1) used to weight pair separations."""
    return make_bump(-1.0, 1.0)


def default_h() -> TestKernel:
    """Window on (1, 2) selecting the bulk dyadic range of indices."""
    return make_bump(1.0, 2.0)


def default_rho() -> TestKernel:
    """Density on (1, 2) with unit multiplicative mass int rho(x)/x dx."""
    return normalize_rho(make_bump(1.0, 2.0))
