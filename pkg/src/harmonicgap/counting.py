"""Equidistribution machinery at desk scale.

Exponential (Weyl) sums with certified magnitudes, the Erdos-Turan
discrepancy inequality in its compact-error form, exact counting of
quadratic residues near a target modulo 1, and a constructive search for
approximations of a real by fractions with square denominators.

The only transcendental need here is e(x) = exp(2 pi i x).  A dedicated
fixed-point evaluator computes cos/sin of 2 pi t with an explicit,
deliberately generous error envelope; it exists because the certified
magnitude |S_m| feeds the inequality's right-hand side and must be sound.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Callable, Sequence

from .errors import PrecisionError
from .exactnum import Ball, Dyadic, ln_ball

__all__ = [
    "PointSet",
    "ETReport",
    "CountReport",
    "ApproxHit",
    "cos_sin_2pi",
    "weyl_sum_abs",
    "erdos_turan_check",
    "count_quadratic",
    "count_quadratic_modular",
    "square_denominator_search",
    "verify_hit",
    "random_et_instance",
]


# ----------------------------------------------------------------------
# Certified cos/sin of 2*pi*t in fixed point
# ----------------------------------------------------------------------

@lru_cache(maxsize=None)
def _pi_fraction_bracket(terms: int) -> tuple[Fraction, Fraction]:
    # Machin: pi = 16 atan(1/5) - 4 atan(1/239); alternating partial sums
    # bracket each atan
    def atan_bracket(x: int) -> tuple[Fraction, Fraction]:
        s = Fraction(0)
        sign = 1
        p = Fraction(1, x)
        x2 = x * x
        lo = hi = None
        for j in range(terms):
            s += sign * p / (2 * j + 1)
            if sign > 0:
                hi = s
            else:
                lo = s
            sign = -sign
            p /= x2
        return lo, hi

    lo5, hi5 = atan_bracket(5)
    lo239, hi239 = atan_bracket(239)
    return 16 * lo5 - 4 * hi239, 16 * hi5 - 4 * lo239


@lru_cache(maxsize=None)
def _pi_fp(bits: int) -> int:
    """floor of a lower bound on pi * 2^bits, within 2 ulp of the truth."""
    terms = bits // 4 + 8  # atan(1/5) gains log2(25) ~ 4.6 bits per term
    while True:
        lo, hi = _pi_fraction_bracket(terms)
        if (hi - lo) * (1 << bits) <= 1:
            return (lo.numerator << bits) // lo.denominator
        terms *= 2  # pragma: no cover


def _series_eval(z_fp: int, one: int, terms: int) -> tuple[int, int]:
    """Fixed-point alternating Taylor sums for cos and sin at z >= 0."""
    z2 = (z_fp * z_fp) // one
    c = one
    t = one
    sign = -1
    for j in range(1, terms):
        t = (t * z2 // one) // ((2 * j - 1) * (2 * j))
        c += sign * t
        sign = -sign
    s = z_fp
    t = z_fp
    sign = -1
    for j in range(1, terms):
        t = (t * z2 // one) // ((2 * j) * (2 * j + 1))
        s += sign * t
        sign = -sign
    return c, s


def _series_terms(bits: int) -> int:
    # smallest J with (pi/4)^(2J) / (2J)! <= 2^-(bits+4), using
    # (pi/4)^2 < 16/25 as the per-term ratio bound
    num, den, fact = 1, 1, 1
    j = 0
    while True:
        j += 1
        num *= 16
        den *= 25
        fact *= (2 * j - 1) * (2 * j)
        if den * fact >= num << (bits + 4):
            return j + 1


@lru_cache(maxsize=None)
def _series_plan(bits: int) -> tuple[int, int]:
    """(terms, radius in ulp) for the fixed-point evaluation at `bits`.

    The radius envelope is deliberately loose: with J terms every
    accumulated arithmetic error stays below 64*J + 64 ulp (each
    fixed-point step floors at most twice on operands bounded by 2^bits,
    with contraction factor z^2/d < 0.31 per term), plus 2 ulp of series
    tail by the choice of J and the 2-ulp argument error scaled by
    |sin'| <= 1.
    """
    terms = _series_terms(bits)
    return terms, 64 * terms + 64


def _cos_sin_fp(num: int, den: int, bits: int) -> tuple[int, int, int]:
    """Fixed-point (cos, sin, radius_ulp) of 2*pi*num/den, den > 0."""
    one = 1 << bits
    # quadrant reduction: num/den = qd/4 + u with |u| <= 1/8
    qd = (8 * num + den) // (2 * den)
    aun = 4 * num - qd * den
    aud = 4 * den
    neg = aun < 0
    if neg:
        aun = -aun
    z_fp = (2 * _pi_fp(bits) * aun) // aud
    terms, radius = _series_plan(bits)
    c_fp, s_fp = _series_eval(z_fp, one, terms)
    if neg:
        s_fp = -s_fp
    q = qd % 4
    if q == 0:
        return c_fp, s_fp, radius
    if q == 1:
        return -s_fp, c_fp, radius
    if q == 2:
        return -c_fp, -s_fp, radius
    return s_fp, -c_fp, radius


def cos_sin_2pi(t: Fraction | Ball, bits: int = 72) -> tuple[Ball, Ball]:
    """Certified (cos 2 pi t, sin 2 pi t).

    Fixed-point Taylor evaluation after quadrant reduction, wrapped into
    balls.  Ball inputs are evaluated at the midpoint and widened by
    7 * halfwidth (|d cos(2 pi t)/dt| <= 2 pi < 7).
    """
    extra_radius = Fraction(0)
    if isinstance(t, Ball):
        halfwidth = Fraction(t.width().as_fraction(), 2)
        extra_radius = 7 * halfwidth
        t = t.midpoint().as_fraction()
    else:
        t = Fraction(t)

    cos_fp, sin_fp, radius = _cos_sin_fp(t.numerator, t.denominator, bits)

    def ball(v: int) -> Ball:
        b = Ball(Dyadic(v - radius, -bits), Dyadic(v + radius, -bits), max(64, bits))
        if extra_radius:
            b = b.widen_by(extra_radius)
        return b

    return ball(cos_fp), ball(sin_fp)


# ----------------------------------------------------------------------
# Point sets and exponential sums
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class PointSet:
    """Finite list of reals mod 1, each a Fraction or a Ball."""

    points: tuple

    def __post_init__(self):
        reduced = []
        for x in self.points:
            if isinstance(x, Ball):
                reduced.append(x)
            else:
                x = Fraction(x)
                reduced.append(x - (x // 1))
        object.__setattr__(self, "points", tuple(reduced))

    def __len__(self) -> int:
        return len(self.points)

    @staticmethod
    def of(values) -> "PointSet":
        return PointSet(tuple(values))


def _tree_sum(balls: Sequence[Ball]) -> Ball:
    # fixed pairwise order: reproducible regardless of any partitioning
    items = list(balls)
    if not items:
        return Ball.point(0, 64)
    while len(items) > 1:
        items = [
            items[i] + items[i + 1] if i + 1 < len(items) else items[i]
            for i in range(0, len(items), 2)
        ]
    return items[0]


def weyl_sum_abs(ps: PointSet, m: int, bits: int = 72) -> Ball:
    """Certified |S_m| where S_m = sum of e(m x) over the point set.

    The real and imaginary parts accumulate as exact integer fixed-point
    sums (addition is associative here, so any partitioning of the points
    reproduces the same result bit for bit); only the final magnitude is
    ball arithmetic.
    """
    if m < 1:
        raise ValueError("frequency m must be >= 1")
    re_fp = im_fp = 0
    rad = 0
    extra = Fraction(0)
    for x in ps.points:
        if isinstance(x, Ball):
            arg = x * m
            halfwidth = Fraction(arg.width().as_fraction(), 2)
            extra += 7 * halfwidth
            mid = arg.midpoint().as_fraction()
            c, s, r = _cos_sin_fp(mid.numerator, mid.denominator, bits)
        else:
            c, s, r = _cos_sin_fp(m * x.numerator, x.denominator, bits)
        re_fp += c
        im_fp += s
        rad += r
    if extra:
        rad += (extra.numerator << bits) // extra.denominator + 1
    re = Ball(Dyadic(re_fp - rad, -bits), Dyadic(re_fp + rad, -bits), max(64, bits))
    im = Ball(Dyadic(im_fp - rad, -bits), Dyadic(im_fp + rad, -bits), max(64, bits))
    sq = re.mul(re).add(im.mul(im))
    # |S|^2 >= 0: clamp the outward-rounded lower endpoint
    if sq.lo.man < 0:
        sq = Ball(Dyadic(0), sq.hi, sq.prec)
    mag = sq.sqrt()
    n_dy = Dyadic(len(ps))
    if mag.hi > n_dy:  # |S_m| <= N always: intersect with [0, N]
        mag = Ball(n_dy if mag.lo > n_dy else mag.lo, n_dy, mag.prec)
    return mag


# ----------------------------------------------------------------------
# Erdos-Turan inequality
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class ETReport:
    n_points: int
    count: int
    delta: Fraction
    order: int              # L
    lhs: Fraction           # |count - N delta|
    rhs: Ball               # N/(L+1) + E, compact error form
    holds: bool


def _in_interval_mod1(x, a: Fraction, delta: Fraction) -> bool:
    """x in [a, a + delta] mod 1; exact for Fractions, decided for Balls."""
    if isinstance(x, Ball):
        shifted = x - Ball.from_fraction(a, x.prec)
        f = shifted.lo.as_fraction() // 1
        pos = shifted - Ball.from_fraction(f, x.prec)
        if pos.hi.cmp_fraction(Fraction(1)) > 0 and pos.lo.cmp_fraction(Fraction(1)) < 0:
            raise PrecisionError("point position mod 1 undecided at this precision")
        if pos.lo.cmp_fraction(Fraction(1)) >= 0:
            pos = pos - Ball.from_fraction(1, x.prec)
        c_hi = pos.hi.cmp_fraction(delta)
        c_lo = pos.lo.cmp_fraction(Fraction(0))
        if c_hi <= 0 and c_lo >= 0:
            return True
        if pos.lo.cmp_fraction(delta) > 0 or pos.hi.cmp_fraction(Fraction(0)) < 0:
            return False
        raise PrecisionError("interval membership undecided at this precision")
    pos = (x - a) % 1
    return pos <= delta


def erdos_turan_check(
    ps: PointSet,
    a: Fraction,
    b: Fraction,
    order: int,
    bits: int = 72,
) -> ETReport:
    """Check |#{x in [a,b] mod 1} - N delta| <= N/(L+1) + E with
    E = 2 (1/(L+1) + delta) * sum_{m<=L} |S_m| (the compact upper form)."""
    a, b = Fraction(a), Fraction(b)
    delta = b - a
    if not 0 < delta < 1:
        raise ValueError("need an interval of length strictly between 0 and 1")
    if order < 1:
        raise ValueError("order L must be >= 1")
    n = len(ps)
    count = sum(1 for x in ps.points if _in_interval_mod1(x, a, delta))
    lhs = abs(count - n * delta)

    for attempt_bits in (bits, 2 * bits, 4 * bits):
        sums = _tree_sum([weyl_sum_abs(ps, m, attempt_bits) for m in range(1, order + 1)])
        rhs = (
            Ball.from_fraction(Fraction(n, order + 1), 128)
            + Ball.from_fraction(2 * (Fraction(1, order + 1) + delta), 128) * sums
        )
        decided = Ball.from_fraction(lhs, 128).decide_le(rhs)
        if decided is not None:
            return ETReport(n, count, delta, order, lhs, rhs, bool(decided))
    raise PrecisionError("inequality comparison undecided after escalation")


def random_et_instance(rng) -> tuple[PointSet, Fraction, Fraction, int]:
    """Seeded random rational instance for inequality property runs."""
    n = rng.randint(1, 1000)
    den = rng.randint(50, 1 << 16)
    pts = PointSet.of(Fraction(rng.randrange(den), den) for _ in range(n))
    a = Fraction(rng.randrange(den), den)
    delta = Fraction(rng.randint(1, den - 1), den)
    order = rng.randint(1, 50)
    return pts, a, a + delta, order


# ----------------------------------------------------------------------
# Quadratic counting
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class CountReport:
    p: int
    q: int
    shift: Fraction          # the target r
    delta: Fraction
    n_max: int
    residue: int
    modulus: int
    count: int
    boundary_ties: int       # ||.|| == delta exactly; excluded from count
    main_term: Fraction      # 2 N delta / b
    eta: Fraction
    error_bound: Ball        # the displayed error expression, constant 1
    multiplier: int
    within_bound: bool | None

    def deviation(self) -> Fraction:
        return abs(self.count - self.main_term)


def _dist_to_nearest_int(v: Fraction) -> Fraction:
    f = v - (v // 1)
    return min(f, 1 - f)


def count_quadratic(
    p: int,
    q: int,
    shift: Fraction = Fraction(0),
    delta: Fraction = Fraction(1, 4),
    n_max: int = 100,
    residue: int = 0,
    modulus: int = 1,
    eta: Fraction = Fraction(1, 10),
    multiplier: int = 10,
) -> CountReport:
    """Exact count of n <= n_max, n = residue (mod modulus), with
    ||p n^2 / q - shift|| < delta, plus the lemma's main term and error
    expression for comparison."""
    if q < 1 or gcd(p, q) != 1:
        raise ValueError("need q >= 1 and p coprime to q")
    if not 0 < delta < Fraction(1, 2):
        raise ValueError("need 0 < delta < 1/2")
    if modulus < 1:
        raise ValueError("modulus must be >= 1")
    shift = Fraction(shift)
    count = ties = 0
    start = residue % modulus
    if start == 0:
        start = modulus
    for n in range(start, n_max + 1, modulus):
        d = _dist_to_nearest_int(Fraction(p * n * n, q) - shift)
        if d < delta:
            count += 1
        elif d == delta:
            ties += 1

    main = Fraction(2 * n_max * delta, modulus)
    err = _error_expression(q, delta, n_max, eta)
    dev = abs(count - main)
    bound = Ball.from_fraction(multiplier, err.prec) * err
    within = Ball.from_fraction(dev, 128).decide_le(bound)
    return CountReport(
        p, q, shift, delta, n_max, residue, modulus, count, ties, main, eta, err,
        multiplier, within,
    )


def _error_expression(q: int, delta: Fraction, n_max: int, eta: Fraction) -> Ball:
    # N^(1+2 eta) / delta^eta * (ln q / N + 1/q + q delta ln q / N^2)^(1/2)
    prec = 128
    n_ball = Ball.from_fraction(n_max, prec)
    lead = n_ball.pow_frac(1 + 2 * eta, prec).div(
        Ball.from_fraction(delta, prec).pow_frac(eta, prec)
    )
    lq = ln_ball(q, prec) if q > 1 else Ball.point(0, prec)
    inner = (
        lq.div(n_ball)
        + Ball.from_fraction(Fraction(1, q), prec)
        + Ball.from_fraction(q * delta, prec) * lq / Ball.from_fraction(n_max * n_max, prec)
    )
    return lead.mul(inner.sqrt())


def count_quadratic_modular(
    p: int,
    q: int,
    shift: Fraction = Fraction(0),
    delta: Fraction = Fraction(1, 4),
    n_max: int = 100,
    residue: int = 0,
    modulus: int = 1,
) -> tuple[int, int]:
    """Independent enumeration path: residue tables, no Fraction arithmetic.

    Returns (count, boundary_ties); must agree exactly with count_quadratic.
    """
    if q < 1 or gcd(p, q) != 1:
        raise ValueError("need q >= 1 and p coprime to q")
    if not 0 < delta < Fraction(1, 2):
        raise ValueError("need 0 < delta < 1/2")
    rn, rd = shift.numerator, shift.denominator
    dn, dd = delta.numerator, delta.denominator
    big_q = q * rd
    count = ties = 0
    start = residue % modulus
    if start == 0:
        start = modulus
    for n in range(start, n_max + 1, modulus):
        c = (p * ((n % q) * (n % q) % q)) % q
        w = (c * rd - rn * q) % big_q
        dist_num = min(w, big_q - w)  # ||...|| = dist_num / big_q
        lhs = dist_num * dd
        rhs = dn * big_q
        if lhs < rhs:
            count += 1
        elif lhs == rhs:
            ties += 1
    return count, ties


# ----------------------------------------------------------------------
# Approximation by fractions with square denominators
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class ApproxHit:
    m: int
    n: int
    error: Ball  # |alpha - m/n^2|


AlphaSource = Callable[[int], Ball]


def _alpha_at(alpha: Ball | AlphaSource, prec: int) -> Ball:
    return alpha(prec) if callable(alpha) else alpha


def square_denominator_search(
    alpha: Ball | AlphaSource,
    exponent: Fraction,
    n_max: int,
    n_mod: tuple[int, int] = (0, 1),
    m_mod: tuple[int, int] = (0, 1),
    prec: int = 96,
) -> tuple[list[ApproxHit], int]:
    """All (m, n) with n <= n_max in the given residue classes such that
    |alpha - m/n^2| < n^(-exponent), where m is the nearest integer to
    alpha n^2 within its class.  Returns (hits, skipped): undecidable
    candidates are skipped with a warning count."""
    exponent = Fraction(exponent)
    if exponent > Fraction(5, 2):
        raise ValueError("exponent must be <= 5/2")
    if n_max < 2:
        raise ValueError("n_max must be >= 2")
    a_n, b_n = n_mod
    a_m, b_m = m_mod
    if b_n < 1 or b_m < 1:
        raise ValueError("moduli must be >= 1")
    av = _alpha_at(alpha, prec)
    if av.sign() != 1:
        raise ValueError("alpha must be decidedly positive")
    hits: list[ApproxHit] = []
    skipped = 0
    start = a_n % b_n
    if start == 0:
        start = b_n
    for n in range(start, n_max + 1, b_n):
        if n < 2:
            continue
        got = _attempt_hit(av, exponent, n, a_m, b_m)
        if got == "skip":
            skipped += 1
        elif got is not None:
            hits.append(got)
    return hits, skipped


def _attempt_hit(av: Ball, exponent: Fraction, n: int, a_m: int, b_m: int):
    prec = av.prec
    v = av * Ball.from_fraction(n * n, prec)
    scaled = (v - Ball.from_fraction(a_m, prec)) / Ball.from_fraction(b_m, prec)
    mid = scaled.midpoint().as_fraction()
    j = (mid + Fraction(1, 2)) // 1
    if not (
        scaled.lo.cmp_fraction(j - Fraction(1, 2)) > 0
        and scaled.hi.cmp_fraction(j + Fraction(1, 2)) < 0
    ):
        return "skip"
    m = a_m + b_m * int(j)
    if m <= 0:
        return None
    err_scaled = abs(v - Ball.from_fraction(m, prec))  # |alpha n^2 - m|
    threshold = Ball.from_fraction(n, prec).pow_frac(2 - exponent, prec)
    decided = err_scaled.decide_lt(threshold)
    if decided is None:
        return "skip"
    if not decided:
        return None
    err = err_scaled.div(Ball.from_fraction(n * n, prec))
    return ApproxHit(m, n, err)


def verify_hit(alpha: Ball | AlphaSource, exponent: Fraction, hit: ApproxHit, prec: int) -> bool:
    """Re-verify an accepted pair at the given (typically doubled) precision."""
    av = _alpha_at(alpha, prec)
    err = abs(av * Ball.from_fraction(hit.n * hit.n, prec) - Ball.from_fraction(hit.m, prec))
    threshold = Ball.from_fraction(hit.n, prec).pow_frac(2 - Fraction(exponent), prec)
    return err.decide_lt(threshold) is True
