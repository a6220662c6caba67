"""Harmonic-number differences: exact, certified, and asymptotic.

The central quantities: the segment sum 1/n + 1/(n+1) + ... + 1/m, the least
crossing index t(n) where the segment starting at n first reaches 1, the
exact overshoot at the crossing, and the second-order prediction of the
overshoot in terms of the offset y defined by m = e*n - (1+e)/2 + y/n.

The Euler-Maclaurin route evaluates the difference of the expansions
ln N + 1/(2N) - 1/(12N^2) at both endpoints; Euler's constant cancels in
the difference and is never computed.  The expansion truncated after the
-1/(12 N^2) term has error within (0, 1/(120 N^4)) (enveloping alternating
tail), applied at both endpoints and summed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from ._intops import fraction_from, harmonic_pair
from .errors import CapacityError
from .exactnum import Ball, const_e, escalating, exp_ball

__all__ = [
    "Crossing",
    "exact_sum",
    "ball_sum",
    "em_difference",
    "crossing",
    "iter_crossings",
    "pair_offset",
    "predicted_overshoot",
    "MAX_EXACT_TERMS",
]

MAX_EXACT_TERMS = 10**7


def exact_sum(first: int, last: int, term_cap: int = MAX_EXACT_TERMS) -> Fraction:
    """Exact segment sum 1/first + ... + 1/last via balanced combination."""
    if not 1 <= first <= last:
        raise ValueError("need 1 <= first <= last")
    if last - first > term_cap:
        raise CapacityError(f"segment of {last - first + 1} terms exceeds cap {term_cap}")
    num, den = harmonic_pair(first, last)
    return fraction_from(num, den)


def _endpoint_tail(n: int) -> Fraction:
    # |H_N - (ln N + gamma + 1/(2N) - 1/(12N^2))| < 1/(120 N^4)
    return Fraction(1, 120 * n**4)


def em_difference(first: int, last: int, prec: int = 128) -> Ball:
    """The expansion difference itself, without the remainder padding:

        ln(last/(first-1)) + 1/(2 last) - 1/(2(first-1))
                           - 1/(12 last^2) + 1/(12 (first-1)^2)

    Euler's constant cancels and is never evaluated.  The true segment sum
    differs from this by at most the per-endpoint remainder 1/(120 N^4).
    """
    if not 2 <= first <= last:
        raise ValueError("need 2 <= first <= last")
    from .exactnum import ln_ball

    n1 = first - 1
    m = last
    out = ln_ball(Fraction(m, n1), prec)
    out = out + Ball.from_fraction(Fraction(1, 2 * m) - Fraction(1, 2 * n1), prec)
    return out + Ball.from_fraction(Fraction(1, 12 * n1 * n1) - Fraction(1, 12 * m * m), prec)


def ball_sum(first: int, last: int, target_width: Fraction, prec_hint: int = 0) -> Ball:
    """Certified segment sum via the Euler-Maclaurin difference.

    Sound for first >= 2 at any segment length; the width target drives the
    working precision, escalating from a size-informed start.
    """
    if not 2 <= first <= last:
        raise ValueError("need 2 <= first <= last")
    n1 = first - 1
    m = last
    remainder = _endpoint_tail(m) + _endpoint_tail(n1)
    if Fraction(target_width) <= 2 * remainder:
        raise ValueError(
            "target width below the Euler-Maclaurin remainder floor "
            f"{float(2 * remainder):.3e} for this segment"
        )
    tw = Fraction(target_width) - 2 * remainder
    bits = max(64, _width_bits(tw) + 16, prec_hint)

    def attempt(w: int) -> Ball | None:
        out = em_difference(first, last, w).widen_by(remainder)
        if out.width().cmp_fraction(Fraction(target_width)) <= 0:
            return out
        return None

    return escalating(attempt, start=bits, what=f"segment sum [{first}, {last}]")


def _width_bits(w: Fraction) -> int:
    # smallest b with 2^-b <= w, roughly
    return max(1, w.denominator.bit_length() - w.numerator.bit_length() + 2)


@dataclass(frozen=True)
class Crossing:
    """Least t with 1/n + ... + 1/t >= 1, and the exact overshoot."""

    n: int
    t: int
    overshoot: Fraction

    @property
    def scaled(self) -> Fraction:
        return self.n * self.n * self.overshoot


def _crossing_bracket_ok(n: int, t: int, total: Fraction) -> bool:
    return total >= 1 and (t == n or total - Fraction(1, t) < 1)


def crossing(n: int) -> Crossing:
    """t(n) and the exact overshoot, with the minimality bracket verified."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 1:
        return Crossing(1, 1, Fraction(0))
    if n <= 64:
        total = Fraction(0)
        t = n - 1
        while total < 1:
            t += 1
            total += Fraction(1, t)
        return Crossing(n, t, total - 1)
    # jump near the asymptotic location, then walk exactly
    e = const_e(64 + 2 * n.bit_length())
    est = Ball.from_fraction(n, e.prec) * e - (Ball.from_fraction(1, e.prec) + e) / 2
    t = max(n, int(est.midpoint().as_fraction()))
    total = exact_sum(n, t)
    while total < 1:
        t += 1
        total += Fraction(1, t)
    while t > n and total - Fraction(1, t) >= 1:
        total -= Fraction(1, t)
        t -= 1
    assert _crossing_bracket_ok(n, t, total)
    return Crossing(n, t, total - 1)


def iter_crossings(n_lo: int, n_hi: int) -> Iterator[Crossing]:
    """Crossings for consecutive n, maintained incrementally and exactly."""
    if n_lo < 2:
        raise ValueError("incremental crossings start at n >= 2")
    first = crossing(n_lo)
    total = first.overshoot + 1
    t = first.t
    yield first
    for n in range(n_lo + 1, n_hi + 1):
        total -= Fraction(1, n - 1)
        while total < 1:
            t += 1
            total += Fraction(1, t)
        yield Crossing(n, t, total - 1)


def pair_offset(n: int, m: int, prec: int = 0) -> Ball:
    """The offset y with m = e*n - (1+e)/2 + y/n, certified.

    Nonzero for every integer pair since e is irrational; the enclosure
    tightens with precision but never decides y = 0.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    start = max(prec, 2 * n.bit_length() + m.bit_length() + 64)

    def attempt(w: int) -> Ball | None:
        e = const_e(w)
        nn = Ball.from_fraction(n, w)
        inner = Ball.from_fraction(m, w) - e * nn + (1 + e) / Ball.from_fraction(2, w)
        out = nn * inner
        return out if out.width_leq(-max(prec, 32)) else None

    return escalating(attempt, start=start, what=f"pair offset ({n}, {m})")


def predicted_overshoot(n: int, offset: Ball, x: Fraction | int = 1, prec: int = 128) -> Ball:
    """Second-order prediction (24 e^-x y + e^-2x - 1) / (24 n^2) of the
    overshoot of the segment sum over x, for 0 < x < ln((3+sqrt(13))/2).

    At offset = sinh(x)/12 the numerator vanishes identically.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    x = Fraction(x)
    if x <= 0:
        raise ValueError("x must be positive")
    w = max(prec, 64)
    ex = exp_ball(x, w + 16)
    # admissible range: sinh(x) < 3/2, i.e. e^x < (3 + sqrt(13))/2
    limit = (Ball.from_fraction(3, w + 16) + Ball.from_fraction(13, w + 16).sqrt()) / 2
    if ex.decide_lt(limit) is not True:
        raise ValueError("x outside the admissible range (needs sinh x < 3/2)")
    inv = Ball.from_fraction(1, w + 16).div(ex)
    numer = Ball.from_fraction(24, w) * inv * offset + inv * inv - 1
    return numer.div(Ball.from_fraction(24 * n * n, w))
