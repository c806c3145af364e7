"""Counting near-coincidences among products j**Theta * z.

Here z runs over gaps of the curved lattice, z = m**(1-Theta) - n**(1-Theta)
with n = m + gap > m, and the basic question is how often two products
j1**Theta * z1 and j2**Theta * z2 land within a threshold of each other.
The module enumerates honestly (sort and sweep), brute-counts the quartic
model problem, and bounds the same counts from below through a twisted
second moment of Dirichlet polynomials weighted by the Beurling-Selberg
window.  Parameters arrive on dyadic-exponential grids indexed by integers
(u, q): j in [e^u, e^(u+1)), gap in [e^q, e^(q+1)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._precision import LD, as_ld, csum, e_frac, frac
from .beurling import BeurlingSelberg
from .expsums import _pow_ld


class ResourceGuardError(Exception):
    """An enumeration would exceed the declared size budget."""


_ENUM_BUDGET = 10**9


def _iceil(x: float) -> int:
    return int(math.ceil(x * (1.0 - 1e-12) if x > 0 else x * (1.0 + 1e-12)))


def _ifloor(x: float) -> int:
    return int(math.floor(x * (1.0 + 1e-12) if x > 0 else x * (1.0 - 1e-12)))


@dataclass(frozen=True)
class DioInstance:
    """One cell of the counting problem.

    j_lo/j_hi and gap_lo/gap_hi are half-open integer ranges; m_lo/m_hi is
    inclusive.  u, q, N, eps are grid provenance and may be None for
    hand-built instances.  A cell whose smallest gap exceeds the window
    width admits no pairs at all and is flagged vacuous.
    """

    theta: float
    j_lo: int
    j_hi: int
    m_lo: int
    m_hi: int
    gap_lo: int
    gap_hi: int
    threshold: float
    u: int | None = None
    q: int | None = None
    N: int | None = None
    eps: float | None = None

    def __post_init__(self):
        if not 0.0 < self.theta < 1.0:
            raise ValueError("theta must lie strictly between 0 and 1")
        if self.j_lo < 1 or self.j_hi <= self.j_lo:
            raise ValueError("need 1 <= j_lo < j_hi")
        if self.m_lo < 1:
            raise ValueError("m_lo must be at least 1")
        if self.gap_lo < 1 or self.gap_hi <= self.gap_lo:
            raise ValueError("need 1 <= gap_lo < gap_hi")
        if self.threshold < 0:
            raise ValueError("threshold must be nonnegative")

    @property
    def Theta(self) -> float:
        return 1.0 / (1.0 - self.theta)

    @property
    def js(self) -> np.ndarray:
        return np.arange(self.j_lo, self.j_hi, dtype=np.int64)

    @property
    def is_vacuous(self) -> bool:
        return self.gap_lo > self.m_hi - self.m_lo


def dio_instance(theta: float, N: int, eps: float, u: int, q: int) -> DioInstance:
    """Grid cell (u, q) for scale N: j ~ e^u, gaps ~ e^q, threshold N^eps.

    The m-window covers every stationary range that any j in the cell and
    any dilate alpha in [1, 2] can produce.
    """
    if N < 2:
        raise ValueError("N must be at least 2")
    if not 0.0 < eps <= 0.2:
        raise ValueError("eps must lie in (0, 0.2]")
    logN = math.log(N)
    if not 1 <= u <= (1.0 + eps) * logN + 1e-9:
        raise ValueError(f"u = {u} outside [1, (1+eps) log N]")
    if not 0 <= q <= (theta + eps) * logN + 1e-9:
        raise ValueError(f"q = {q} outside [0, (theta+eps) log N]")
    j_lo = _iceil(math.exp(u))
    j_hi = _iceil(math.exp(u + 1.0))
    m_min = theta * 2.0 ** (theta - 1.0) * math.exp(u) * N ** (theta - 1.0)
    m_max = 2.0 * theta * math.exp(u + 1.0) * N ** (theta - 1.0)
    return DioInstance(
        theta=theta,
        j_lo=j_lo, j_hi=j_hi,
        m_lo=max(1, _iceil(m_min)), m_hi=_ifloor(m_max),
        gap_lo=_iceil(math.exp(q)), gap_hi=_iceil(math.exp(q + 1.0)),
        threshold=float(N) ** eps,
        u=u, q=q, N=N, eps=eps,
    )


@dataclass(frozen=True)
class ZMultiset:
    """Gap values z = m**(1-Theta) - n**(1-Theta) > 0, sorted ascending."""

    z: np.ndarray
    m: np.ndarray
    n: np.ndarray

    @property
    def size(self) -> int:
        return int(self.z.size)


def build_zset(inst: DioInstance) -> ZMultiset:
    """Enumerate (z, m, n) over the window of inst, one entry per pair.

    1 - Theta is negative, so m < n makes z positive.  The subtraction is
    done in long double: nearby m, n cancel most of their leading digits.
    """
    width = inst.m_hi - inst.m_lo
    gaps = range(inst.gap_lo, min(inst.gap_hi, width + 1))
    total = sum(max(0, width + 1 - d) for d in gaps)
    if total > _ENUM_BUDGET:
        raise ResourceGuardError(
            f"z enumeration of {total} pairs exceeds the budget {_ENUM_BUDGET}")
    if total == 0:
        empty = np.array([], dtype=np.int64)
        return ZMultiset(z=np.array([], dtype=np.float64), m=empty, n=empty)
    btab = _pow_ld(np.arange(inst.m_lo, inst.m_hi + 1), 1.0 - inst.Theta)
    ms, ns = [], []
    zs = []
    for d in gaps:
        k = width + 1 - d
        if k <= 0:
            continue
        m = np.arange(inst.m_lo, inst.m_lo + k, dtype=np.int64)
        ms.append(m)
        ns.append(m + d)
        zs.append((btab[:k] - btab[d:d + k]).astype(np.float64))
    m_all = np.concatenate(ms)
    n_all = np.concatenate(ns)
    z_all = np.concatenate(zs)
    order = np.argsort(z_all, kind="stable")
    return ZMultiset(z=z_all[order], m=m_all[order], n=n_all[order])


def _products(inst: DioInstance, zset: ZMultiset | None = None) -> np.ndarray:
    if zset is None:
        zset = build_zset(inst)
    js = inst.js
    est = js.size * zset.size
    if est > _ENUM_BUDGET:
        raise ResourceGuardError(
            f"product enumeration of {est} values exceeds the budget "
            f"{_ENUM_BUDGET}")
    if est == 0:
        return np.array([], dtype=np.float64)
    jpow = _pow_ld(js, inst.Theta)
    z_ld = as_ld(zset.z)
    rows = []
    chunk = max(1, int(2 ** 22) // max(zset.size, 1))
    for i in range(0, js.size, chunk):
        rows.append((jpow[i:i + chunk, None] * z_ld[None, :])
                    .astype(np.float64).ravel())
    return np.concatenate(rows)


def count_duq(inst: DioInstance, zset: ZMultiset | None = None) -> int:
    """Ordered pairs of products within the threshold, self-pairs included.

    |j1^Theta z1 - j2^Theta z2| <= threshold, counted over all (j, z) from
    the instance on both sides; a vacuous instance counts zero.
    """
    if inst.is_vacuous:
        return 0
    v = _products(inst, zset)
    if v.size == 0:
        return 0
    vs = np.sort(v)
    hi = np.searchsorted(vs, vs + inst.threshold, side="right")
    lo = np.searchsorted(vs, vs - inst.threshold, side="left")
    return int((hi - lo).sum())


def count_zdiag(inst_or_zset, tau: float) -> int:
    """Ordered pairs of z values with |z1 - z2| strictly below tau."""
    if isinstance(inst_or_zset, DioInstance):
        if inst_or_zset.is_vacuous:
            return 0
        zset = build_zset(inst_or_zset)
    else:
        zset = inst_or_zset
    if zset.size == 0:
        return 0
    zs = zset.z
    hi = np.searchsorted(zs, zs + tau, side="left")
    lo = np.searchsorted(zs, zs - tau, side="right")
    # tau = 0 makes the open interval empty while ties push hi below lo
    return int(np.maximum(hi - lo, 0).sum())


def robert_sargos_count(M: int, one_minus_Theta: float, gamma: float) -> int:
    """Quadruples 1 <= x,y,z,w <= M with
    |x^e - y^e + z^e - w^e| < gamma * M^e for the exponent e = 1 - Theta.

    Exhaustive count (reorganised as a pair sweep over the M^2 differences,
    which enumerates exactly the same quadruples).
    """
    if M < 1:
        raise ValueError("M must be a positive integer")
    if one_minus_Theta in (0.0, 1.0):
        raise ValueError("exponent must avoid 0 and 1")
    if gamma < 0:
        raise ValueError("gamma must be nonnegative")
    if float(M) ** 4 > _ENUM_BUDGET:
        raise ResourceGuardError(f"M^4 = {M**4} exceeds the budget {_ENUM_BUDGET}")
    vals = _pow_ld(np.arange(1, M + 1), one_minus_Theta).astype(np.float64)
    diffs = (vals[:, None] - vals[None, :]).ravel()
    thr = gamma * float(M) ** one_minus_Theta
    ds = np.sort(diffs)
    hi = np.searchsorted(ds, thr - diffs, side="left")
    lo = np.searchsorted(ds, -thr - diffs, side="right")
    # gamma = 0 makes the open interval empty while ties push hi below lo
    return int(np.maximum(hi - lo, 0).sum())


def dirichlet_D(u: float, Theta: float, t: float) -> complex:
    """D_u(Theta*t) = sum over j in [e^u, e^(u+1)) of e(Theta*t*log j).

    The Theta twist is baked into the signature because every use pairs
    D_u with the argument Theta*t; pass Theta=1 for the plain polynomial.
    """
    js = np.arange(_iceil(math.exp(u)), _iceil(math.exp(u + 1.0)),
                   dtype=np.int64)
    ph = frac(as_ld(Theta) * as_ld(t) * np.log(as_ld(js)))
    return csum(e_frac(ph))


def dirichlet_P(zset: ZMultiset, t: float) -> complex:
    """P(t) = sum over the multiset of e(t log z)."""
    if zset.size == 0:
        return 0j
    ph = frac(as_ld(t) * np.log(as_ld(zset.z)))
    return csum(e_frac(ph))


def count_log_close_pairs(inst: DioInstance, T: float,
                          zset: ZMultiset | None = None) -> int:
    """Ordered pairs of products with |T log(v1/v2)| < 1 (self included)."""
    v = _products(inst, zset)
    if v.size == 0:
        return 0
    lv = np.sort(np.log(v))
    hi = np.searchsorted(lv, lv + 1.0 / T, side="left")
    lo = np.searchsorted(lv, lv - 1.0 / T, side="right")
    return int((hi - lo).sum())


def twisted_second_moment(inst: DioInstance, bs: BeurlingSelberg,
                          T: float | None = None,
                          node_factor: int = 16) -> float:
    """(1/T) int |D_u(Theta t)|^2 |P(t)|^2 Phi(t/T) dt by midpoint rule.

    Expanding the squares shows the value equals sum over ordered pairs of
    products of Phi_hat(T log(v1/v2)); since Phi_hat dominates the unit
    tent, the value is bounded below by the number of pairs with
    |T log(v1/v2)| < 1.  T defaults to e^q N^(1-eps) when the instance
    carries grid provenance.
    """
    if T is None:
        if inst.q is None or inst.N is None or inst.eps is None:
            raise ValueError("explicit T required for hand-built instances")
        T = math.exp(inst.q) * inst.N ** (1.0 - inst.eps)
    if T <= 0:
        raise ValueError("T must be positive")
    zset = build_zset(inst)
    if zset.size == 0:
        return 0.0
    js = inst.js
    TH = inst.Theta
    # fastest beat frequency of |D|^2 |P|^2 in cycles per unit t
    f_max = (TH * (math.log(inst.j_hi) - math.log(inst.j_lo))
             + math.log(zset.z[-1] / zset.z[0]) + 1.0 / T)
    dt = min(1.0 / (node_factor * f_max), T / node_factor)
    K = int(math.ceil(2.0 * T / dt))
    ts = -T + (np.arange(K) + 0.5) * (2.0 * T / K)
    lj = np.log(js.astype(np.float64))
    lz = np.log(zset.z)
    acc = 0.0
    chunk = max(1, int(2 ** 22) // max(js.size + zset.size, 1))
    for i in range(0, K, chunk):
        tt = ts[i:i + chunk]
        D = np.exp(2j * np.pi * TH * np.outer(tt, lj)).sum(axis=1)
        P = np.exp(2j * np.pi * np.outer(tt, lz)).sum(axis=1)
        w = bs.phi(tt / T)
        acc += float(((D.real ** 2 + D.imag ** 2)
                      * (P.real ** 2 + P.imag ** 2) * w).sum())
    return acc * (2.0 * T / K) / T


def duq_bound_check(theta: float, N: int, eps: float) -> list[dict]:
    """Counts over the whole (u, q) grid with their polynomial references.

    Each row reports the pair count against N^(1+3 theta+3 eps) and the
    z-diagonal count at tau = N^(2 eps) e^(-Theta u) against
    N^(2 theta+3 eps); the ratios are the observables of interest.
    """
    if N < 4:
        raise ValueError("N must be at least 4")
    if N > 512:
        raise ResourceGuardError(
            f"brute-force grid at N={N} would enumerate ~{N ** 2} pair "
            "products per cell; the check is calibrated for N <= 512")
    logN = math.log(N)
    TH = 1.0 / (1.0 - theta)
    u_lo = int(math.floor((1.0 - eps) * logN)) + 1
    u_hi = int(math.floor((1.0 + eps) * logN))
    q_hi = int(math.floor((theta + eps) * logN))
    duq_ref = float(N) ** (1.0 + 3.0 * theta + 3.0 * eps)
    zdiag_ref = float(N) ** (2.0 * theta + 3.0 * eps)
    rows = []
    for u in range(max(1, u_lo), u_hi + 1):
        for q in range(0, q_hi + 1):
            inst = dio_instance(theta, N, eps, u, q)
            zset = build_zset(inst)
            duq = count_duq(inst, zset)
            tau = float(N) ** (2.0 * eps) * math.exp(-TH * u)
            zdiag = count_zdiag(zset, tau)
            rows.append({
                "u": u,
                "q": q,
                "j_count": int(inst.j_hi - inst.j_lo),
                "z_count": zset.size,
                "vacuous": inst.is_vacuous,
                "duq": duq,
                "duq_ref": duq_ref,
                "duq_ratio": duq / duq_ref,
                "zdiag": zdiag,
                "zdiag_tau": tau,
                "zdiag_ref": zdiag_ref,
                "zdiag_ratio": zdiag / zdiag_ref,
            })
    return rows
