"""Raw spacing statistics of the point sets {alpha * n**theta mod 1}.

Pair counting and nearest-neighbour gaps for finite samples, normalised so
that a Poissonian sequence gives pair counts ~2s and gap density ~exp(-s).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._precision import as_ld, frac
from .expsums import _pow_ld


@dataclass(frozen=True)
class PointSet:
    """Fractional parts of alpha * n**theta over an integer window.

    theta = alpha = None marks synthetic reference samples (see
    uniform_points) that carry no arithmetic provenance.
    """

    theta: float | None
    alpha: float | None
    n_lo: int
    n_hi: int
    exclude_squares: bool
    points: np.ndarray

    @property
    def size(self) -> int:
        return int(self.points.size)

    @property
    def window(self) -> str:
        if self.theta is None:
            return f"iid uniform, n in [{self.n_lo}, {self.n_hi}]"
        tag = " minus squares" if self.exclude_squares else ""
        return f"n in [{self.n_lo}, {self.n_hi}]{tag}"


def fractional_parts(theta: float, alpha: float, n_lo: int, n_hi: int,
                     exclude_squares: bool = False) -> PointSet:
    """Points {alpha * n**theta} for n_lo <= n <= n_hi.

    The powers are taken in long double before reduction mod 1; with
    exclude_squares the perfect squares in the window are dropped (they are
    the degenerate fibre when theta = 1/2 and alpha is rational).
    """
    if not 0.0 < theta < 1.0:
        raise ValueError("theta must lie strictly between 0 and 1")
    if alpha <= 0.0:
        raise ValueError("alpha must be positive")
    if not 1 <= n_lo <= n_hi:
        raise ValueError("need 1 <= n_lo <= n_hi")
    ns = np.arange(n_lo, n_hi + 1, dtype=np.int64)
    if exclude_squares:
        roots = np.arange(int(np.floor(np.sqrt(n_lo))),
                          int(np.ceil(np.sqrt(n_hi))) + 1, dtype=np.int64)
        squares = roots[(roots * roots >= n_lo) & (roots * roots <= n_hi)]
        ns = ns[~np.isin(ns, squares * squares)]
    pts = frac(as_ld(alpha) * _pow_ld(ns, theta))
    return PointSet(theta=theta, alpha=alpha, n_lo=n_lo, n_hi=n_hi,
                    exclude_squares=exclude_squares, points=pts)


def uniform_points(n: int, seed: int = 0) -> PointSet:
    """n i.i.d. uniform points on [0, 1): the Poisson reference sample."""
    if n < 1:
        raise ValueError("n must be a positive integer")
    pts = np.random.default_rng(seed).random(n)
    return PointSet(theta=None, alpha=None, n_lo=1, n_hi=n,
                    exclude_squares=False, points=pts)


@dataclass(frozen=True)
class PairCorrEstimate:
    """Count of ordered pairs within torus distance s / size."""

    s: float
    count: int
    normalized: float
    poisson_ref: float


def pair_corr_count(ps: PointSet, s: float) -> PairCorrEstimate:
    """Ordered pairs (x, y), x != y, with ||x - y|| <= s / size.

    Sort-and-sweep on the circle: each point queries the sorted array
    extended by one wrapped copy, so the cost is (size + pairs) log size.
    Radii s/size >= 1/2 cover the whole torus and short-circuit.
    """
    if s < 0:
        raise ValueError("s must be nonnegative")
    M = ps.size
    if M < 2:
        return PairCorrEstimate(s=s, count=0, normalized=0.0,
                                poisson_ref=2.0 * s)
    r = s / M
    if r >= 0.5:
        count = M * (M - 1)
    else:
        vs = np.sort(ps.points)
        ext = np.concatenate([vs, vs + 1.0])
        hi = np.searchsorted(ext, vs + r, side="right")
        count = 2 * int((hi - np.arange(M) - 1).sum())
    return PairCorrEstimate(s=s, count=count, normalized=count / M,
                            poisson_ref=2.0 * s)


@dataclass(frozen=True)
class GapHistogram:
    """Histogram of rescaled nearest-neighbour gaps on the circle."""

    edges: np.ndarray
    counts: np.ndarray
    density: np.ndarray
    overflow_count: int
    overflow_mass: float
    n_points: int

    @property
    def midpoints(self) -> np.ndarray:
        return 0.5 * (self.edges[:-1] + self.edges[1:])


def gap_distribution(ps: PointSet, bins: int = 80,
                     s_max: float = 4.0) -> GapHistogram:
    """Circular gaps rescaled by the point count, binned on [0, s_max].

    density integrates (with the overflow) to 1: sum(density)*bin_width
    + overflow_count/n = 1.  overflow_mass is the fraction of the circle
    covered by gaps beyond s_max.
    """
    M = ps.size
    if M < 2:
        raise ValueError("need at least two points for gaps")
    if bins < 1:
        raise ValueError("bins must be a positive integer")
    vs = np.sort(ps.points)
    gaps = np.diff(vs, append=vs[0] + 1.0) * M
    edges = np.linspace(0.0, s_max, bins + 1)
    bin_width = s_max / bins
    counts, _ = np.histogram(gaps, bins=edges)
    over = gaps >= edges[-1]
    return GapHistogram(
        edges=edges,
        counts=counts,
        density=counts / (M * bin_width),
        overflow_count=int(over.sum()),
        overflow_mass=float(gaps[over].sum() / M),
        n_points=M,
    )
