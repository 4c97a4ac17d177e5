"""Reference rounding built straight from the definition of a format.

Shares no code with the package: values are enumerated as Fractions from
``m * 2^(e-p+1)`` and rounding picks a neighbour by brute force.
"""

from bisect import bisect_left, bisect_right
from fractions import Fraction
from functools import lru_cache

INF = "inf"


@lru_cache(maxsize=None)
def grid(p, emax):
    """Sorted non-negative finite values with their significands."""
    emin = 1 - emax
    out = {Fraction(0): 0}
    for m in range(1, 1 << (p - 1)):
        out[Fraction(m) * Fraction(2) ** (emin - p + 1)] = m
    for e in range(emin, emax + 1):
        for m in range(1 << (p - 1), 1 << p):
            out[Fraction(m) * Fraction(2) ** (e - p + 1)] = m
    vals = sorted(out)
    return vals, [out[v] for v in vals]


def oracle_round(x, p, emax, mode):
    """Round a rational; returns a Fraction or ``'inf'`` / ``'-inf'``."""
    x = Fraction(x)
    mode = str(mode)
    neg = x < 0
    a = -x if neg else x
    vals, sig = grid(p, emax)
    i = bisect_left(vals, a)
    if i < len(vals) and vals[i] == a:
        return -a if neg else a
    lo_i = bisect_right(vals, a) - 1
    lo = vals[lo_i]
    if lo_i + 1 < len(vals):
        hi, hi_even = vals[lo_i + 1], sig[lo_i + 1] % 2 == 0
    else:
        hi, hi_even = Fraction(2) ** (emax + 1), True  # one step past the largest value
    lo_even = sig[lo_i] % 2 == 0
    away = {
        "rz": False,
        "ru": not neg,
        "rd": neg,
    }.get(mode)
    if mode == "rn":
        d_lo, d_hi = a - lo, max(hi - a, Fraction(0))
        away = d_hi < d_lo or (d_hi == d_lo and hi_even and not lo_even)
    r = hi if away else lo
    if r > vals[-1]:
        return "-inf" if neg else INF
    return -r if neg else r


def positives(p, emax):
    return grid(p, emax)[0][1:]
