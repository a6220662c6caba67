"""Big-integer helpers, optionally accelerated by gmpy2.

CPython's math.gcd is quadratic-ish and becomes the bottleneck when record
candidates at n ~ 1e5 produce million-bit numerators.  gmpy2 (GMP) reduces
those gcds from seconds to milliseconds.  Everything here falls back to the
standard library when gmpy2 is missing, with identical results.
"""

from __future__ import annotations

import math
from fractions import Fraction

try:
    import gmpy2 as _g

    HAVE_GMPY2 = True
except ImportError:  # pragma: no cover - exercised via the forced-fallback test
    _g = None
    HAVE_GMPY2 = False


def big_gcd(a: int, b: int) -> int:
    if HAVE_GMPY2:
        return int(_g.gcd(a, b))
    return math.gcd(a, b)


def fraction_from(num: int, den: int) -> Fraction:
    """Lowest-terms Fraction, reducing with the fast gcd.

    Fraction(num, den) would re-run the slow stdlib gcd; building the reduced
    pair through the private constructor skips that.  Falls back to the public
    constructor if the internals ever change.
    """
    if den < 0:
        num, den = -num, -den
    g = big_gcd(num, den)
    if g > 1:
        num //= g
        den //= g
    try:
        f = Fraction.__new__(Fraction)
        f._numerator = num
        f._denominator = den
        return f
    except AttributeError:  # pragma: no cover
        return Fraction(num, den)


def harmonic_pair(lo: int, hi: int) -> tuple[int, int]:
    """(num, den) with num/den = sum of 1/k for lo <= k <= hi, unreduced.

    Balanced divide-and-conquer keeps the intermediate products near-minimal;
    a naive left fold is infeasible past ~1e6 terms.
    """
    if HAVE_GMPY2:
        n, d = _harmonic_pair_mpz(lo, hi)
        return int(n), int(d)
    return _harmonic_pair_int(lo, hi)


_BASE_TERMS = 48  # accumulated with plain ints; small-operand churn dominates below this


def _harmonic_base(lo: int, hi: int) -> tuple[int, int]:
    num, den = 0, 1
    for k in range(lo, hi + 1):
        num = num * k + den
        den *= k
    return num, den


def _harmonic_pair_int(lo: int, hi: int) -> tuple[int, int]:
    if hi - lo < _BASE_TERMS:
        return _harmonic_base(lo, hi)
    mid = (lo + hi) >> 1
    n1, d1 = _harmonic_pair_int(lo, mid)
    n2, d2 = _harmonic_pair_int(mid + 1, hi)
    return n1 * d2 + n2 * d1, d1 * d2


def _harmonic_pair_mpz(lo: int, hi: int):
    if hi - lo < _BASE_TERMS:
        num, den = _harmonic_base(lo, hi)
        return _g.mpz(num), _g.mpz(den)
    mid = (lo + hi) >> 1
    n1, d1 = _harmonic_pair_mpz(lo, mid)
    n2, d2 = _harmonic_pair_mpz(mid + 1, hi)
    return n1 * d2 + n2 * d1, d1 * d2


def iroot(x: int, n: int) -> int:
    """Floor of the n-th root of a nonnegative integer."""
    if x < 0:
        raise ValueError("iroot of a negative integer")
    if x == 0:
        return 0
    if n == 1:
        return x
    if n == 2:
        return math.isqrt(x)
    r = 1 << -(-x.bit_length() // n)  # upper seed; Newton descends
    while True:
        nr = ((n - 1) * r + x // r ** (n - 1)) // n
        if nr >= r:
            return r
        r = nr
