"""Exponential sums along alpha * n**theta and the smoothed pair counts
they reconstruct.

Conventions used throughout: e(x) = exp(2 pi i x), Theta = 1/(1 - theta),
and the index weight h selects n through h(n/N), so sums over n are finite.
The weighted sum

    E_j = sum_y h(y/N) e(alpha j y**theta)

admits a stationary-phase rewrite ("short form") whose length per j is a
factor ~N**(2 - 2*theta) shorter; both forms live here, together with the
exact spectral decomposition of the smoothed pair correlation into S-sums.
Phase arguments grow like alpha * j * N**theta, far past float64 resolution
of the fractional part, so every reduction mod 1 runs in long double via
the _precision helpers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._precision import LD, as_ld, csum, e_frac, frac
from .kernels import FourierTable, TestKernel, integrate, periodize


@dataclass(frozen=True)
class SequenceSpec:
    """One realisation of the sequence: exponent, dilate, and scale."""

    theta: float
    alpha: float
    N: int

    def __post_init__(self):
        if not 0.0 < self.theta < 1.0:
            raise ValueError("theta must lie strictly between 0 and 1")
        if not 1.0 <= self.alpha <= 2.0:
            raise ValueError("alpha must lie in [1, 2]")
        if self.N < 2:
            raise ValueError("N must be at least 2")

    @property
    def Theta(self) -> float:
        return 1.0 / (1.0 - self.theta)


@dataclass(frozen=True)
class BProcessConstants:
    """Stationary-phase constants: amplitude factor c1, phase factor c2."""

    c1: complex
    c2: float


def bprocess_constants(theta: float) -> BProcessConstants:
    Theta = 1.0 / (1.0 - theta)
    mod = theta ** (Theta / 2.0) / math.sqrt(1.0 - theta)
    c1 = mod * complex(math.cos(math.pi / 4.0), -math.sin(math.pi / 4.0))
    c2 = theta ** (Theta - 1.0) - theta ** Theta
    return BProcessConstants(c1=c1, c2=c2)


def _pow_ld(values, expo: float):
    """values**expo in long double; exact-path sqrt for expo = 1/2."""
    b = as_ld(values)
    if expo == 0.5:
        return np.sqrt(b)
    return np.power(b, LD(expo))


def _index_range(spec: SequenceSpec, h: TestKernel) -> np.ndarray:
    """Integers y >= 1 with N*support_lo < y < N*support_hi."""
    lo = int(math.floor(spec.N * h.support_lo)) + 1
    hi = int(math.ceil(spec.N * h.support_hi)) - 1
    return np.arange(max(lo, 1), hi + 1, dtype=np.int64)


def exp_sum_direct(spec: SequenceSpec, h: TestKernel, j: int) -> complex:
    """E_j by direct summation over the support of h(./N)."""
    ys = _index_range(spec, h)
    if ys.size == 0:
        return 0j
    w = _pow_ld(ys, spec.theta)
    ph = frac(as_ld(spec.alpha) * j * w)
    return csum(h(ys / spec.N) * e_frac(ph))


def _direct_abs2(spec: SequenceSpec, h: TestKernel, js: np.ndarray) -> np.ndarray:
    """|E_j|^2 for many j at once; chunked so the phase matrix stays small."""
    ys = _index_range(spec, h)
    out = np.zeros(len(js), dtype=np.float64)
    if ys.size == 0:
        return out
    w = _pow_ld(ys, spec.theta)
    hw = h(ys / spec.N)
    chunk = max(1, int(2 ** 21) // ys.size)
    a_ld = as_ld(spec.alpha)
    for i in range(0, len(js), chunk):
        aj = a_ld * as_ld(js[i:i + chunk])
        E = e_frac(frac(aj[:, None] * w[None, :])) @ hw
        out[i:i + chunk] = E.real ** 2 + E.imag ** 2
    return out


def stationary_point(spec: SequenceSpec, j: int, m: int) -> float:
    """Location x_m = (theta*alpha*j/m)**Theta of the m-th stationary point."""
    if m == 0:
        raise ValueError("m must be nonzero")
    return (spec.theta * spec.alpha * j / m) ** spec.Theta


def stationary_window(spec: SequenceSpec, j: int) -> tuple[int, int]:
    """Inclusive m-range whose stationary points fall in [N, 2N].

    Endpoints carry zero weight (h vanishes there), so the 1e-12 nudges only
    guard against ties rounding the wrong way.
    """
    if j < 1:
        raise ValueError("j must be a positive integer")
    th, al, N = spec.theta, spec.alpha, spec.N
    lo_f = th * al * j * (2.0 * N) ** (th - 1.0)
    hi_f = th * al * j * float(N) ** (th - 1.0)
    lo = max(1, int(math.ceil(lo_f * (1.0 - 1e-12))))
    hi = int(math.floor(hi_f * (1.0 + 1e-12)))
    return lo, hi


def _windows(spec: SequenceSpec, js: np.ndarray):
    th, al, N = spec.theta, spec.alpha, spec.N
    jsf = js.astype(np.float64)
    lo = np.ceil(th * al * jsf * (2.0 * N) ** (th - 1.0) * (1.0 - 1e-12))
    hi = np.floor(th * al * jsf * float(N) ** (th - 1.0) * (1.0 + 1e-12))
    lo = np.maximum(lo, 1.0).astype(np.int64)
    hi = hi.astype(np.int64)
    lens = np.maximum(hi - lo + 1, 0)
    return lo, hi, lens


def _flatten_windows(lo, lens):
    """Concatenate the integer windows [lo_j, lo_j + len_j) end to end."""
    total = int(lens.sum())
    rep = np.repeat(np.arange(len(lo)), lens)
    starts = np.concatenate(([0], np.cumsum(lens)))[:-1]
    m = (np.arange(total) - np.repeat(starts, lens)) + np.repeat(lo, lens)
    return rep, m


def _short_components(spec: SequenceSpec, h: TestKernel, js: np.ndarray):
    """Per-j short-form data: |E~_j|^2 and its diagonal (n = m) part.

    Shared long-double tables: A_j = (alpha*j)**Theta per j and
    B_m = m**(1-Theta) per m in the union of the windows; the phase of the
    (j, m) term is c2 * A_j * B_m, so no per-pair transcendentals are needed.
    """
    TH = spec.Theta
    th, al, N = spec.theta, spec.alpha, spec.N
    J = len(js)
    lo, hi, lens = _windows(spec, js)
    abs2 = np.zeros(J, dtype=np.float64)
    diag = np.zeros(J, dtype=np.float64)
    consts = bprocess_constants(th)
    pref = abs(consts.c1) ** 2 * (al * js.astype(np.float64)) ** TH
    total = int(lens.sum())
    if total == 0:
        return abs2, diag, (lo, hi, lens)
    rep, m = _flatten_windows(lo, lens)
    m_base = int(m.min())
    btab = _pow_ld(np.arange(m_base, int(m.max()) + 1), 1.0 - TH)
    a_ld = np.power(as_ld(al) * as_ld(js), LD(TH))
    th_ld = LD(th)
    c2_ld = np.power(th_ld, LD(TH - 1.0)) - np.power(th_ld, LD(TH))
    ph = frac(c2_ld * a_ld[rep] * btab[m - m_base])
    mf = m.astype(np.float64)
    xm = (th * al * js.astype(np.float64)[rep] / mf) ** TH
    amp = mf ** (-(TH + 1.0) / 2.0) * h(xm / N)
    vals = amp * e_frac(ph)
    sr = np.bincount(rep, weights=vals.real, minlength=J)
    si = np.bincount(rep, weights=vals.imag, minlength=J)
    dg = np.bincount(rep, weights=amp * amp, minlength=J)
    abs2 = pref * (sr ** 2 + si ** 2)
    diag = pref * dg
    return abs2, diag, (lo, hi, lens)


def exp_sum_bprocess(spec: SequenceSpec, h: TestKernel, j: int) -> complex:
    """Short (stationary-phase) form of E_j; 0 when the m-window is empty."""
    lo, hi = stationary_window(spec, j)
    if lo > hi:
        return 0j
    TH = spec.Theta
    th, al, N = spec.theta, spec.alpha, spec.N
    m = np.arange(lo, hi + 1, dtype=np.int64)
    btab = _pow_ld(m, 1.0 - TH)
    th_ld = LD(th)
    c2_ld = np.power(th_ld, LD(TH - 1.0)) - np.power(th_ld, LD(TH))
    a_ld = np.power(as_ld(al) * j, LD(TH))
    ph = frac(c2_ld * a_ld * btab)
    mf = m.astype(np.float64)
    xm = (th * al * j / mf) ** TH
    amp = mf ** (-(TH + 1.0) / 2.0) * h(xm / N)
    consts = bprocess_constants(th)
    return consts.c1 * (al * j) ** (TH / 2.0) * csum(amp * e_frac(ph))


@dataclass(frozen=True)
class ExpSumPair:
    """Direct and short evaluations of one E_j, with the error yardstick."""

    j: int
    direct: complex
    short: complex
    error_ref: float
    m_lo: int
    m_hi: int

    @property
    def ratio(self) -> float:
        return abs(self.direct - self.short) / self.error_ref


def exp_sum_pair(spec: SequenceSpec, h: TestKernel, j: int) -> ExpSumPair:
    lo, hi = stationary_window(spec, j)
    ref = spec.N ** (1.0 - spec.theta / 2.0) / math.sqrt(j)
    return ExpSumPair(
        j=j,
        direct=exp_sum_direct(spec, h, j),
        short=exp_sum_bprocess(spec, h, j),
        error_ref=ref,
        m_lo=lo,
        m_hi=hi,
    )


def s_sum(spec: SequenceSpec, f: TestKernel, h: TestKernel, j_max: int,
          use_short: bool = False) -> float:
    """S = (2/N^2) sum_{1 <= j <= j_max} fhat(j/N) |E_j|^2.

    For real f the +-j terms pair up into twice the real part, so only the
    real part of fhat enters.  j_max = 0 is the empty sum.
    """
    if j_max < 0:
        raise ValueError("j_max must be nonnegative")
    if j_max == 0:
        return 0.0
    js = np.arange(1, j_max + 1, dtype=np.int64)
    table = FourierTable(f, max_abs_freq=j_max / spec.N)
    fv = table.values(js / spec.N).real
    if use_short:
        e2, _, _ = _short_components(spec, h, js)
    else:
        e2 = _direct_abs2(spec, h, js)
    return float(2.0 / spec.N ** 2 * np.dot(fv, e2))


def _band(spec: SequenceSpec, eps: float) -> np.ndarray:
    """Integers j in [N^(1-eps), N^(1+eps)]."""
    lo = int(math.ceil(spec.N ** (1.0 - eps) * (1.0 - 1e-12)))
    hi = int(math.floor(spec.N ** (1.0 + eps) * (1.0 + 1e-12)))
    return np.arange(max(lo, 1), hi + 1, dtype=np.int64)


@dataclass(frozen=True)
class TildeDecomposition:
    """Short-form S over a j-band, split into diagonal and off-diagonal."""

    total: float
    diagonal: float
    off_diagonal: float
    j_lo: int
    j_hi: int


def _tilde_from_values(spec: SequenceSpec, h: TestKernel, js: np.ndarray,
                       f_values: np.ndarray) -> TildeDecomposition:
    """S~ assembly once the transform values over the band are in hand."""
    abs2, diag, _ = _short_components(spec, h, js)
    scale = 2.0 / spec.N ** 2
    total = float(scale * np.dot(f_values, abs2))
    diagonal = float(scale * np.dot(f_values, diag))
    return TildeDecomposition(total, diagonal, total - diagonal,
                              int(js[0]), int(js[-1]))


def s_tilde_parts(spec: SequenceSpec, f: TestKernel, h: TestKernel,
                  eps: float = 0.05) -> TildeDecomposition:
    """Assemble S~ over the band j in [N^(1-eps), N^(1+eps)] spectrally."""
    js = _band(spec, eps)
    if js.size == 0:
        return TildeDecomposition(0.0, 0.0, 0.0, 0, -1)
    table = FourierTable(f, max_abs_freq=js[-1] / spec.N)
    fv = table.values(js / spec.N).real
    return _tilde_from_values(spec, h, js, fv)


def r_off(spec: SequenceSpec, f: TestKernel, h: TestKernel, eps: float = 0.05,
          method: str = "pairs") -> float:
    """Off-diagonal part of S~ over the band j in [N^(1-eps), N^(1+eps)].

    method "pairs" runs the literal double sum over stationary points
    m != n, phasing each pair through z = m**(1-Theta) - n**(1-Theta);
    method "fourier" takes |E~_j|^2 minus its diagonal.  The two agree to
    rounding and exercise disjoint code paths.
    """
    if method == "fourier":
        parts = s_tilde_parts(spec, f, h, eps)
        return parts.off_diagonal
    if method != "pairs":
        raise ValueError("method must be 'pairs' or 'fourier'")
    js = _band(spec, eps)
    if js.size == 0:
        return 0.0
    TH = spec.Theta
    th, al, N = spec.theta, spec.alpha, spec.N
    table = FourierTable(f, max_abs_freq=js[-1] / N)
    fv = table.values(js / N).real
    lo, hi, lens = _windows(spec, js)
    consts = bprocess_constants(th)
    c1sq = abs(consts.c1) ** 2
    th_ld = LD(th)
    c2_ld = np.power(th_ld, LD(TH - 1.0)) - np.power(th_ld, LD(TH))
    mlo = int(lo[lens > 0].min()) if (lens > 0).any() else 1
    mhi = int(hi[lens > 0].max()) if (lens > 0).any() else 1
    btab = _pow_ld(np.arange(mlo, mhi + 1), 1.0 - TH)
    acc = 0.0 + 0.0j
    for idx, j in enumerate(js):
        k = int(lens[idx])
        if k < 2:
            continue
        m = np.arange(lo[idx], hi[idx] + 1, dtype=np.int64)
        b = btab[m - mlo]
        a_ld = np.power(as_ld(al) * int(j), LD(TH))
        # pair phase via z_mn = m^(1-Theta) - n^(1-Theta); the diagonal of
        # the quadratic form contributes e(0) Sum a^2, removed afterwards
        ph = frac(c2_ld * a_ld * (b[:, None] - b[None, :]))
        mf = m.astype(np.float64)
        xm = (th * al * float(j) / mf) ** TH
        a = mf ** (-(TH + 1.0) / 2.0) * h(xm / N)
        quad = a @ (e_frac(ph) @ a) - np.dot(a, a)
        acc += fv[idx] * c1sq * (al * float(j)) ** TH * quad
    acc *= 2.0 / N ** 2
    if abs(acc.imag) > 1e-10 * (abs(acc.real) + 1.0):
        raise ArithmeticError(
            f"pair sum picked up a spurious imaginary part: {acc.imag:.3e}")
    return float(acc.real)


def pair_corr_smooth(spec: SequenceSpec, f: TestKernel, h: TestKernel,
                     method: str = "auto") -> float:
    """R = (1/N) sum_{x != y} h(x/N) h(y/N) F_N(alpha(x^theta - y^theta)).

    F_N is the 1-periodisation of f(N .), so only pairs within max-support/N
    on the circle contribute; those are found by a sort-and-sweep pass and
    the cost scales with the number of contributing pairs, not with N^2.
    method "brute" forces the quadratic reference evaluation.
    """
    ys = _index_range(spec, h)
    if ys.size < 2:
        return 0.0
    N = spec.N
    w = _pow_ld(ys, spec.theta)
    v = frac(as_ld(spec.alpha) * w)
    hw = h(ys / N)
    r = max(abs(f.support_lo), abs(f.support_hi)) / N
    if method not in ("auto", "brute"):
        raise ValueError("method must be 'auto' or 'brute'")
    if method == "brute" or r >= 0.49 or ys.size < 16:
        d = v[:, None] - v[None, :]
        F = periodize(f, N, d.ravel()).reshape(d.shape)
        total = hw @ F @ hw - periodize(f, N, 0.0) * np.dot(hw, hw)
        return float(total / N)
    order = np.argsort(v, kind="stable")
    vs = v[order]
    hs = hw[order]
    ext_v = np.concatenate([vs, vs + 1.0])
    ext_h = np.concatenate([hs, hs])
    hi_idx = np.searchsorted(ext_v, vs + r, side="right")
    counts = np.maximum(hi_idx - np.arange(ys.size) - 1, 0)
    total_pairs = int(counts.sum())
    if total_pairs == 0:
        return 0.0
    left = np.repeat(np.arange(ys.size), counts)
    starts = np.concatenate(([0], np.cumsum(counts)))[:-1]
    right = (np.arange(total_pairs) - np.repeat(starts, counts)
             + np.repeat(np.arange(ys.size) + 1, counts))
    d = ext_v[right] - vs[left]
    # each unordered pair appears once; both orientations enter through
    # f(N d) + f(-N d), exact because N(1 - d) clears the support of f
    vals = hs[left] * ext_h[right] * (f(N * d) + f(-N * d))
    return float(vals.sum() / N)


@dataclass(frozen=True)
class DiagonalTerm:
    """Diagonal n-sum at scale W against its first-order evaluation.

    regime_warning flags W < 4, where so few lattice points hit the window
    that the first-order comparison is not meaningful.
    """

    value: float
    main_term: float
    W: float
    n_count: int
    regime_warning: bool = False


def diagonal_w_term(spec: SequenceSpec, j: int, h: TestKernel) -> DiagonalTerm:
    """sum_n n^{-(Theta+1)} h(W/n^Theta)^2 versus (1-theta) int(h^2) / W,
    where W = (theta*alpha*j)^Theta / N."""
    TH = spec.Theta
    W = (spec.theta * spec.alpha * j) ** TH / spec.N
    n_lo = max(1, int(math.floor((W / h.support_hi) ** (1.0 / TH))))
    n_hi = int(math.ceil((W / h.support_lo) ** (1.0 / TH))) + 1
    ns = np.arange(n_lo, n_hi + 1, dtype=np.float64)
    vals = ns ** (-(TH + 1.0)) * h(W / ns ** TH) ** 2
    main = (1.0 - spec.theta) * integrate(h, weight=lambda x: h(x)) / W
    return DiagonalTerm(value=float(vals.sum()), main_term=float(main),
                        W=float(W), n_count=int((vals > 0).sum()),
                        regime_warning=bool(W < 4.0))
