"""Extended-precision phase helpers.

Phases like ``alpha * j * y**theta`` reach 1e8 and beyond before reduction
mod 1, so 53-bit arithmetic would leave only ~8 correct digits in the
fractional part.  Every reduction here goes through the platform long double
(80-bit extended on x86), and only the reduced value is handed back to
float64 circle arithmetic.
"""

import math

import numpy as np

LD = np.longdouble
EPS_LD = float(np.finfo(LD).eps)
TWO_PI = 2.0 * math.pi


def as_ld(x):
    return np.asarray(x, dtype=LD)


def frac(x):
    """Fractional part in [0, 1), computed in long double, returned as float64."""
    x = as_ld(x)
    return (x - np.floor(x)).astype(np.float64)


def e_frac(fr):
    """e(x) = exp(2 pi i x) for arguments already reduced to [0, 1)."""
    fr = np.asarray(fr, dtype=np.float64)
    return np.exp(1j * TWO_PI * fr)


def e_mod1(x):
    """e(x) with the argument reduced mod 1 in long double first."""
    return e_frac(frac(x))


def csum(values) -> complex:
    """Exactly rounded complex sum of a 1-d array (via math.fsum)."""
    v = np.asarray(values)
    if v.size == 0:
        return 0j
    return complex(math.fsum(v.real), math.fsum(v.imag))
