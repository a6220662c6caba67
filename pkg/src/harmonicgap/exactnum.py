"""Exact rational arithmetic and certified dyadic interval (ball) arithmetic.

Every rigorous real-valued quantity in this package is a Ball: a closed
interval with dyadic endpoints (integer mantissa times a power of two) and
outward rounding, so the true value of an operation on members of the input
balls always lies in the output ball.  Dyadic endpoints make directed
rounding exact integer work; no floating-point environment is involved.

Exact quantities are Fractions (`Rat`): convergent ratios, harmonic sums,
overshoots, denominator ratios.

Precision policy: callers request a target width; computations start at 128
bits and double the working precision until the target is met, capping at
MAX_PREC with a PrecisionError.  Downstream certifications need *decided*
signs and bounds, never silent rounding.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from ._intops import iroot
from .errors import PrecisionError

Rat = Fraction

DEFAULT_PREC = int(os.environ.get("HARMONICGAP_PREC", "192"))
MAX_PREC = 1 << 16
_MIN_PREC = 32


def rat_reduce(num: int, den: int) -> Rat:
    """Lowest-terms rational with positive denominator."""
    if den == 0:
        raise ZeroDivisionError("rational with zero denominator")
    return Fraction(num, den)


# ----------------------------------------------------------------------
# Dyadic endpoints
# ----------------------------------------------------------------------

class Dyadic:
    """Exact dyadic real man * 2**exp, normalized to odd (or zero) mantissa."""

    __slots__ = ("man", "exp")

    def __init__(self, man: int, exp: int = 0):
        if man == 0:
            self.man = 0
            self.exp = 0
        else:
            s = (man & -man).bit_length() - 1
            self.man = man >> s
            self.exp = exp + s

    @staticmethod
    def from_int(v: int) -> "Dyadic":
        return Dyadic(v, 0)

    def is_zero(self) -> bool:
        return self.man == 0

    def sign(self) -> int:
        return (self.man > 0) - (self.man < 0)

    def as_fraction(self) -> Fraction:
        if self.exp >= 0:
            return Fraction(self.man << self.exp, 1)
        return Fraction(self.man, 1 << -self.exp)

    def bit_magnitude(self) -> int:
        """Upper bound b with |value| < 2**b (0 for zero)."""
        if self.man == 0:
            return 0
        return abs(self.man).bit_length() + self.exp

    def __neg__(self) -> "Dyadic":
        return Dyadic(-self.man, self.exp)

    def __add__(self, other: "Dyadic") -> "Dyadic":
        if self.man == 0:
            return other
        if other.man == 0:
            return self
        e = min(self.exp, other.exp)
        return Dyadic((self.man << (self.exp - e)) + (other.man << (other.exp - e)), e)

    def __sub__(self, other: "Dyadic") -> "Dyadic":
        return self + (-other)

    def __mul__(self, other: "Dyadic") -> "Dyadic":
        return Dyadic(self.man * other.man, self.exp + other.exp)

    def _cmp(self, other: "Dyadic") -> int:
        d = self - other
        return d.sign()

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __eq__(self, other):
        return isinstance(other, Dyadic) and self.man == other.man and self.exp == other.exp

    def __hash__(self):
        return hash((self.man, self.exp))

    def cmp_fraction(self, fr: Fraction) -> int:
        # man*2^exp vs num/den, den > 0: cross-multiply exactly
        num, den = fr.numerator, fr.denominator
        if self.exp >= 0:
            lhs = (self.man << self.exp) * den
        else:
            lhs = self.man * den
            num = num << -self.exp
        return (lhs > num) - (lhs < num)

    def round_down(self, prec: int) -> "Dyadic":
        """Round toward -inf keeping at most prec mantissa bits."""
        excess = abs(self.man).bit_length() - prec
        if excess <= 0:
            return self
        return Dyadic(self.man >> excess, self.exp + excess)

    def round_up(self, prec: int) -> "Dyadic":
        """Round toward +inf keeping at most prec mantissa bits."""
        excess = abs(self.man).bit_length() - prec
        if excess <= 0:
            return self
        return Dyadic(-((-self.man) >> excess), self.exp + excess)

    def __float__(self) -> float:
        # display/diagnostics only; saturates instead of raising
        m, e = self.man, self.exp
        extra = abs(m).bit_length() - 64
        if extra > 0:
            m >>= extra
            e += extra
        try:
            return math.ldexp(m, e)
        except OverflowError:  # pragma: no cover
            return math.inf if m > 0 else -math.inf

    def decimal_str(self, digits: int, round_up: bool) -> str:
        """Decimal string with directed rounding (exact integer arithmetic)."""
        if self.man == 0:
            return "0"
        scaled = self.man * 10 ** digits
        if self.exp >= 0:
            q = scaled << self.exp
        elif round_up:
            q = -((-scaled) >> -self.exp)
        else:
            q = scaled >> -self.exp
        sign = "-" if q < 0 else ""
        q = abs(q)
        s = str(q).rjust(digits + 1, "0")
        ip, fp = s[:-digits], s[-digits:]
        fp = fp.rstrip("0")
        return f"{sign}{ip}.{fp}" if fp else f"{sign}{ip}"

    def __repr__(self):
        return f"Dyadic({self.man}, {self.exp})"


ZERO = Dyadic(0)
ONE_DY = Dyadic(1)


def _div_directed(num: int, den: int, prec: int, up: bool) -> Dyadic:
    """Directed rounding of num/den (den > 0) to ~prec significant bits."""
    if num == 0:
        return ZERO
    s = prec - num.bit_length() + den.bit_length() + 2
    if s >= 0:
        scaled = num << s
    else:
        scaled = num
        den = den << -s
    q = -((-scaled) // den) if up else scaled // den
    return Dyadic(q, -s)


def _dyadic_div(a: Dyadic, b: Dyadic, prec: int, up: bool) -> Dyadic:
    if b.man == 0:
        raise ZeroDivisionError("dyadic division by zero")
    num, den = a.man, b.man
    if den < 0:
        num, den = -num, -den
    d = _div_directed(num, den, prec, up)
    return Dyadic(d.man, d.exp + a.exp - b.exp)


def _dyadic_sqrt(a: Dyadic, prec: int, up: bool) -> Dyadic:
    if a.man < 0:
        raise ValueError("sqrt of a negative dyadic")
    if a.man == 0:
        return ZERO
    m, e = a.man, a.exp
    # force even exponent and >= 2*prec+2 mantissa bits
    shift = max(0, 2 * prec + 2 - m.bit_length())
    if (e - shift) & 1:
        shift += 1
    m <<= shift
    e -= shift
    r = math.isqrt(m)
    if up and r * r < m:
        r += 1
    return Dyadic(r, e >> 1)


def _dyadic_root(a: Dyadic, n: int, prec: int, up: bool) -> Dyadic:
    if a.man < 0:
        raise ValueError("root of a negative dyadic")
    if a.man == 0:
        return ZERO
    m, e = a.man, a.exp
    shift = max(0, n * (prec + 2) - m.bit_length())
    shift += (e - shift) % n  # make the final exponent divisible by n
    m <<= shift
    e -= shift
    r = iroot(m, n)
    if up and r**n < m:
        r += 1
    return Dyadic(r, e // n)


# ----------------------------------------------------------------------
# Balls
# ----------------------------------------------------------------------

class Ball:
    """Closed interval [lo, hi] of dyadic reals with outward rounding."""

    __slots__ = ("lo", "hi", "prec")

    def __init__(self, lo: Dyadic, hi: Dyadic, prec: int = DEFAULT_PREC):
        if prec < _MIN_PREC:
            raise ValueError(f"precision must be >= {_MIN_PREC}")
        if lo > hi:
            raise ValueError("ball with lo > hi")
        self.lo = lo
        self.hi = hi
        self.prec = prec

    # -- constructors --------------------------------------------------

    @staticmethod
    def point(v: Dyadic | int, prec: int = DEFAULT_PREC) -> "Ball":
        d = Dyadic.from_int(v) if isinstance(v, int) else v
        return Ball(d, d, prec)

    @staticmethod
    def from_fraction(fr: Fraction | int, prec: int = DEFAULT_PREC) -> "Ball":
        fr = Fraction(fr)
        num, den = fr.numerator, fr.denominator
        if den == 1 or (den & (den - 1)) == 0:  # dyadic: exact
            d = Dyadic(num, -(den.bit_length() - 1))
            return Ball(d, d, prec)
        return Ball(
            _div_directed(num, den, prec, up=False),
            _div_directed(num, den, prec, up=True),
            prec,
        )

    @staticmethod
    def from_endpoints(lo: Fraction, hi: Fraction, prec: int = DEFAULT_PREC) -> "Ball":
        return Ball(
            _div_directed(lo.numerator, lo.denominator, prec, up=False)
            if lo.denominator != 1
            else Dyadic.from_int(lo.numerator),
            _div_directed(hi.numerator, hi.denominator, prec, up=True)
            if hi.denominator != 1
            else Dyadic.from_int(hi.numerator),
            prec,
        )

    # -- inspection ----------------------------------------------------

    def width(self) -> Dyadic:
        return self.hi - self.lo

    def midpoint(self) -> Dyadic:
        s = self.lo + self.hi
        return Dyadic(s.man, s.exp - 1)

    def contains(self, v: Fraction | int | Dyadic) -> bool:
        if isinstance(v, Dyadic):
            return self.lo <= v and v <= self.hi
        fr = Fraction(v)
        return self.lo.cmp_fraction(fr) <= 0 and self.hi.cmp_fraction(fr) >= 0

    def contains_ball(self, other: "Ball") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def overlaps(self, other: "Ball") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def sign(self) -> int | None:
        """-1, 0 (exact point zero) or +1 when decided, None when straddling."""
        if self.lo.man > 0:
            return 1
        if self.hi.man < 0:
            return -1
        if self.lo.man == 0 and self.hi.man == 0:
            return 0
        return None

    def cmp_fraction(self, fr: Fraction) -> int | None:
        """-1 if ball < fr, +1 if ball > fr, 0 if point-equal, else None."""
        hi_c = self.hi.cmp_fraction(fr)
        lo_c = self.lo.cmp_fraction(fr)
        if hi_c < 0:
            return -1
        if lo_c > 0:
            return 1
        if lo_c == 0 and hi_c == 0:
            return 0
        return None

    def decide_le(self, other: "Ball") -> bool | None:
        if self.hi <= other.lo:
            return True
        if self.lo > other.hi:
            return False
        return None

    def decide_lt(self, other: "Ball") -> bool | None:
        if self.hi < other.lo:
            return True
        if self.lo >= other.hi:
            return False
        return None

    def width_leq(self, bits: int) -> bool:
        """True iff width <= 2**bits."""
        w = self.width()
        return w.man == 0 or w.bit_magnitude() <= bits

    # -- arithmetic ----------------------------------------------------

    def _p(self, other) -> int:
        return max(self.prec, other.prec) if isinstance(other, Ball) else self.prec

    def __neg__(self) -> "Ball":
        return Ball(-self.hi, -self.lo, self.prec)

    def __abs__(self) -> "Ball":
        if self.lo.man >= 0:
            return self
        if self.hi.man <= 0:
            return -self
        hi = self.hi if self.hi >= -self.lo else -self.lo
        return Ball(ZERO, hi, self.prec)

    def add(self, other: "Ball", prec: int | None = None) -> "Ball":
        p = prec or self._p(other)
        return Ball((self.lo + other.lo).round_down(p), (self.hi + other.hi).round_up(p), p)

    def sub(self, other: "Ball", prec: int | None = None) -> "Ball":
        return self.add(-other, prec)

    def mul(self, other: "Ball", prec: int | None = None) -> "Ball":
        p = prec or self._p(other)
        cands = [
            self.lo * other.lo,
            self.lo * other.hi,
            self.hi * other.lo,
            self.hi * other.hi,
        ]
        lo = hi = cands[0]
        for c in cands[1:]:
            if c < lo:
                lo = c
            if c > hi:
                hi = c
        return Ball(lo.round_down(p), hi.round_up(p), p)

    def div(self, other: "Ball", prec: int | None = None) -> "Ball":
        p = prec or self._p(other)
        if other.lo.man <= 0 <= other.hi.man:
            raise PrecisionError("division by a ball containing zero")
        lo = hi = None
        for a in (self.lo, self.hi):
            for b in (other.lo, other.hi):
                d = _dyadic_div(a, b, p, up=False)
                u = _dyadic_div(a, b, p, up=True)
                if lo is None or d < lo:
                    lo = d
                if hi is None or u > hi:
                    hi = u
        return Ball(lo, hi, p)

    def __add__(self, other):
        return self.add(self._coerce(other))

    def __radd__(self, other):
        return self.add(self._coerce(other))

    def __sub__(self, other):
        return self.sub(self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other).sub(self)

    def __mul__(self, other):
        return self.mul(self._coerce(other))

    def __rmul__(self, other):
        return self.mul(self._coerce(other))

    def __truediv__(self, other):
        return self.div(self._coerce(other))

    def __rtruediv__(self, other):
        return self._coerce(other).div(self)

    def _coerce(self, other) -> "Ball":
        if isinstance(other, Ball):
            return other
        if isinstance(other, (int, Fraction)):
            return Ball.from_fraction(other, self.prec)
        if isinstance(other, Dyadic):
            return Ball(other, other, self.prec)
        return NotImplemented

    def sqrt(self, prec: int | None = None) -> "Ball":
        p = prec or self.prec
        if self.lo.man < 0:
            raise ValueError("sqrt of a ball with negative lower endpoint")
        return Ball(_dyadic_sqrt(self.lo, p, up=False), _dyadic_sqrt(self.hi, p, up=True), p)

    def root(self, n: int, prec: int | None = None) -> "Ball":
        p = prec or self.prec
        if self.lo.man < 0:
            raise ValueError("root of a ball with negative lower endpoint")
        return Ball(_dyadic_root(self.lo, n, p, up=False), _dyadic_root(self.hi, n, p, up=True), p)

    def pow_frac(self, expo: Fraction, prec: int | None = None) -> "Ball":
        """x**(a/b) for x >= 0 via integer power then b-th root."""
        p = prec or self.prec
        a, b = expo.numerator, expo.denominator
        if a < 0:
            return Ball.from_fraction(1, p).div(self.pow_frac(-expo, p), p)
        cur = Ball.from_fraction(1, p + 8)
        base = self.at(p + 8)
        for _ in range(a):
            cur = cur.mul(base)
        return cur.root(b, p) if b > 1 else cur.at(p)

    def widen_by(self, radius: Fraction | Dyadic) -> "Ball":
        r = radius if isinstance(radius, Dyadic) else _div_directed(
            radius.numerator, radius.denominator, self.prec, up=True
        )
        return Ball((self.lo - r).round_down(self.prec), (self.hi + r).round_up(self.prec), self.prec)

    def at(self, prec: int) -> "Ball":
        return Ball(self.lo.round_down(prec), self.hi.round_up(prec), prec)

    def __float__(self) -> float:
        return float(self.midpoint())

    def __repr__(self):
        return f"Ball[{float(self.lo)!r}, {float(self.hi)!r}]@{self.prec}"

    def interval_str(self, digits: int = 24) -> tuple[str, str]:
        return self.lo.decimal_str(digits, round_up=False), self.hi.decimal_str(digits, round_up=True)


def escalating(compute, start: int = 128, cap: int | None = None, what: str = "value"):
    """Run compute(prec) at doubling precision until it returns non-None.

    The cap defaults to the module's MAX_PREC at call time, so it can be
    reconfigured globally.
    """
    if cap is None:
        cap = MAX_PREC
    p = max(start, _MIN_PREC)
    while p <= cap:
        out = compute(p)
        if out is not None:
            return out
        p *= 2
    raise PrecisionError(f"undecidable {what} at precision cap {cap}")


# ----------------------------------------------------------------------
# Logarithms of rationals
# ----------------------------------------------------------------------

def _bucket(prec: int) -> int:
    b = 128
    while b < prec:
        b *= 2
    return b


@lru_cache(maxsize=None)
def _ln2(prec: int) -> Ball:
    # ln 2 = 2 atanh(1/3); geometric tail bound with ratio 1/9
    w = prec + 16
    terms = w // 3 + 4  # each term gains log2(9) ~ 3.17 bits
    s = Fraction(0)
    p9 = Fraction(1, 3)
    for j in range(terms):
        s += p9 / (2 * j + 1)
        p9 /= 9
    # tail: sum_{j>=terms} (1/3)^(2j+1)/(2j+1) <= (1/3)^(2*terms+1) * 9/8
    tail = Fraction(9, 8) / Fraction(3) ** (2 * terms + 1)
    return Ball.from_endpoints(2 * s, 2 * (s + tail), w).at(prec)


def ln_ball(r: Fraction | int, prec: int = DEFAULT_PREC) -> Ball:
    """Sound enclosure of ln(r) for rational r > 0, width <= 2**(4-prec).

    Argument reduction to [2/3, 4/3] by powers of two, then the atanh series
    ln(x) = 2*atanh((x-1)/(x+1)) with an explicit geometric remainder.
    """
    r = Fraction(r)
    if r <= 0:
        raise ValueError("ln of a non-positive rational")
    if r == 1:
        return Ball.point(0, prec)

    def attempt(w: int) -> Ball | None:
        num, den = r.numerator, r.denominator
        s = num.bit_length() - den.bit_length()
        # shift so that num/(den*2^s) lies in [2/3, 4/3]
        def scaled(sv):
            return (num, den << sv) if sv >= 0 else (num << -sv, den)

        a, b = scaled(s)
        while 3 * a > 4 * b:
            s += 1
            a, b = scaled(s)
        while 3 * a < 2 * b:
            s -= 1
            a, b = scaled(s)
        if a == b:
            series = Ball.point(0, w)
            tail_exp = None
        else:
            unum, uden = a - b, a + b
            # |u| <= 1/5 after reduction, and |u| < 2^(1-ell)
            ell = uden.bit_length() - abs(unum).bit_length()
            if ell < 2:
                ell = 2
            terms = (w + 8) // (2 * (ell - 1)) + 2
            u = Ball.from_fraction(Fraction(unum, uden), w + 16)
            u2 = u.mul(u)
            term = u
            acc = u
            for j in range(1, terms):
                term = term.mul(u2)
                acc = acc.add(term.div(Ball.from_fraction(2 * j + 1, w + 16)))
            series = acc
            # tail <= |u|^(2T+1)/(2T+1) * 25/24 < 2^(-(2T+1)*(ell-1)+1)
            tail_exp = -(2 * terms + 1) * (ell - 1) + 1
        out = series + series
        if tail_exp is not None:
            out = out.widen_by(Dyadic(1, tail_exp))
        if s != 0:
            sb = Ball.from_fraction(s, w)
            out = out.add(_ln2(_bucket(w + s.bit_length() + 8)).mul(sb))
        out = out.at(w)
        # keep the working precision: re-rounding to prec bits would break
        # the absolute width contract once |ln r| exceeds 2^4
        return out if out.width_leq(4 - prec) else None

    return escalating(attempt, start=_bucket(prec + 16), what=f"ln({r})")


# ----------------------------------------------------------------------
# e, sinh(1) and derived constants
# ----------------------------------------------------------------------

@lru_cache(maxsize=None)
def _e_cached(prec: int) -> Ball:
    # Taylor sum_{k<=K} 1/k! with remainder in (1/(K+1)!, 2/(K+1)!)
    K = 3
    fact = 24  # (K+1)!
    while fact.bit_length() < prec + 8:
        K += 1
        fact *= K + 1  # fact = (K+1)!
    c = 1  # K!/K!
    s = 1
    for k in range(K, 0, -1):
        c *= k  # K!/(k-1)!
        s += c
    kfact = fact // (K + 1)
    lo = Fraction(s, kfact)
    hi = lo + Fraction(2, fact)
    return Ball.from_endpoints(lo, hi, prec)


def const_e(prec: int = DEFAULT_PREC) -> Ball:
    """Enclosure of e from the exhaustively summed Taylor series."""
    if prec < _MIN_PREC:
        raise ValueError(f"precision must be >= {_MIN_PREC}")
    return _e_cached(_bucket(prec + 8)).at(prec)


def exp_ball(x: Fraction | int, prec: int = DEFAULT_PREC) -> Ball:
    """Enclosure of e**x for rational x, |x| <= 8."""
    x = Fraction(x)
    if x == 0:
        return Ball.point(1, prec)
    if abs(x) > 8:
        raise ValueError("exp_ball restricted to |x| <= 8")
    if x < 0:
        return Ball.from_fraction(1, prec + 8).div(exp_ball(-x, prec + 8)).at(prec)
    if x == 1:
        return const_e(prec)
    w = prec + 16
    s = Fraction(1)
    term = Fraction(1)
    k = 0
    while True:
        k += 1
        term *= x / k
        s += term
        # once k+1 > 2x the tail is dominated by a geometric series of ratio <= 1/2
        if k + 1 > 2 * x and term < Fraction(1, 1 << (w + 4)):
            break
    tail = 2 * term
    return Ball.from_endpoints(s, s + tail, w).at(prec)


def const_sinh1(prec: int = DEFAULT_PREC) -> Ball:
    """sinh(1) = (e - 1/e)/2 in ball arithmetic."""
    w = prec + 16
    e = const_e(w)
    half = Ball.from_fraction(Fraction(1, 2), w)
    return (e - Ball.from_fraction(1, w).div(e)).mul(half).at(prec)


@dataclass(frozen=True)
class Constants:
    """The recurring certified constants, all at a common precision."""

    prec: int
    e: Ball
    sinh1: Ball
    critical_offset: Ball  # sinh(1)/12: the offset nulling the n^-2 error term
    gap_target: Ball       # sinh(1)/6: what the scaled gap must approach
    three_over_sinh1: Ball


@lru_cache(maxsize=None)
def _constants_cached(prec: int) -> Constants:
    e = const_e(prec + 16)
    sinh1 = const_sinh1(prec + 16)
    twelve = Ball.from_fraction(12, prec + 16)
    six = Ball.from_fraction(6, prec + 16)
    three = Ball.from_fraction(3, prec + 16)
    return Constants(
        prec=prec,
        e=e.at(prec),
        sinh1=sinh1.at(prec),
        critical_offset=sinh1.div(twelve).at(prec),
        gap_target=sinh1.div(six).at(prec),
        three_over_sinh1=three.div(sinh1).at(prec),
    )


def constants(prec: int = DEFAULT_PREC) -> Constants:
    return _constants_cached(_bucket(prec))
