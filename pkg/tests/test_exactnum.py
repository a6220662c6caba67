"""Tests for exact rationals and the certified ball arithmetic."""

import random
from fractions import Fraction

import pytest

from harmonicgap.errors import PrecisionError
from harmonicgap.exactnum import (
    Ball,
    Dyadic,
    const_e,
    const_sinh1,
    constants,
    exp_ball,
    ln_ball,
    rat_reduce,
)

# independent oracle: ln via exact-rational atanh series with geometric tail
def _ln_oracle(x: Fraction, terms: int = 200) -> tuple[Fraction, Fraction]:
    u = (x - 1) / (x + 1)
    assert abs(u) < Fraction(9, 10)
    s = Fraction(0)
    p = u
    u2 = u * u
    for j in range(terms):
        s += p / (2 * j + 1)
        p *= u2
    tail = abs(p) / ((2 * terms + 1) * (1 - u2))
    return 2 * s, 2 * tail


# independent oracle: e via exact-rational Taylor with factorial tail
def _e_oracle(K: int = 40) -> tuple[Fraction, Fraction]:
    s = Fraction(0)
    f = 1
    for k in range(K + 1):
        if k:
            f *= k
        s += Fraction(1, f)
    return s, Fraction(2, f * (K + 1))


class TestRatReduce:
    def test_gcd_normalization(self):
        assert rat_reduce(6, -4) == Fraction(-3, 2)

    def test_zero(self):
        r = rat_reduce(0, 7)
        assert r.numerator == 0 and r.denominator == 1

    def test_euclid(self):
        # gcd(579, 213) = 3
        assert rat_reduce(579, 213) == Fraction(193, 71)

    def test_zero_denominator_rejected(self):
        with pytest.raises(ZeroDivisionError):
            rat_reduce(1, 0)


class TestDyadic:
    def test_normalization(self):
        d = Dyadic(12, 0)
        assert d.man == 3 and d.exp == 2

    def test_round_directed(self):
        d = Dyadic(0b10111, 0)  # 23
        assert d.round_down(3).as_fraction() == 20
        assert d.round_up(3).as_fraction() == 24
        n = Dyadic(-23, 0)
        assert n.round_down(3).as_fraction() == -24
        assert n.round_up(3).as_fraction() == -20

    def test_decimal_str_directed(self):
        d = Dyadic(1, -1)
        assert d.decimal_str(4, round_up=False) == "0.5"
        third_down = Ball.from_fraction(Fraction(1, 3), 64).lo
        s = third_down.decimal_str(6, round_up=False)
        assert s.startswith("0.333333")


class TestBallOps:
    def test_add_exact_points(self):
        b = Ball.point(1, 64) + Ball.point(1, 64)
        assert b.lo == b.hi and b.lo.as_fraction() == 2

    def test_sqrt_point(self):
        b = Ball.point(4, 64).sqrt()
        assert b.contains(2)
        w = b.width()
        assert w.is_zero() or w.bit_magnitude() <= 1 - 64 + 2

    def test_div_third(self):
        third = Ball.point(1, 64).div(Ball.point(3, 64), 64)
        assert third.contains(Fraction(1, 3))
        assert third.width_leq(-62)

    def test_div_by_zero_ball(self):
        straddling = Ball.from_endpoints(Fraction(-1), Fraction(1), 64)
        with pytest.raises(PrecisionError):
            Ball.point(1, 64).div(straddling)

    def test_sqrt_negative_rejected(self):
        with pytest.raises(ValueError):
            Ball.point(-1, 64).sqrt()

    def test_containment_ten_thousand_rationals(self):
        # single-op containment over 10^4 random rationals
        rng = random.Random(6021023)
        for _ in range(10000):
            a = Fraction(rng.randint(-(10**6), 10**6), rng.randint(1, 10**6))
            b = Fraction(rng.randint(-(10**6), 10**6), rng.randint(1, 10**6))
            ba = Ball.from_fraction(a, 80)
            bb = Ball.from_fraction(b, 80)
            op = rng.choice("asmd")
            if op == "a":
                assert (ba + bb).contains(a + b)
            elif op == "s":
                assert (ba - bb).contains(a - b)
            elif op == "m":
                assert (ba * bb).contains(a * b)
            elif b != 0:
                assert (ba / bb).contains(a / b)

    def test_containment_random_op_sequences(self):
        # the exact Fraction result always lies inside the ball result
        rng = random.Random(20240814)
        for _ in range(400):
            fr = Fraction(rng.randint(-999, 999), rng.randint(1, 999))
            ball = Ball.from_fraction(fr, 96)
            for _ in range(rng.randint(1, 12)):
                op = rng.choice("asmd")
                other = Fraction(rng.randint(-99, 99), rng.randint(1, 99))
                if op == "a":
                    fr, ball = fr + other, ball + other
                elif op == "s":
                    fr, ball = fr - other, ball - other
                elif op == "m":
                    fr, ball = fr * other, ball * other
                elif op == "d" and other != 0:
                    fr, ball = fr / other, ball / other
            assert ball.contains(fr)

    def test_width_contract_halves(self):
        # doubling prec at least halves the output width on a fixed op sequence
        rng = random.Random(7)
        for _ in range(100):
            ops = [
                (rng.choice("asmd"), Fraction(rng.randint(1, 99), rng.randint(1, 99)))
                for _ in range(8)
            ]
            widths = []
            for prec in (64, 128):
                b = Ball.from_fraction(Fraction(1, 3), prec)
                for op, v in ops:
                    if op == "a":
                        b = b.add(Ball.from_fraction(v, prec))
                    elif op == "s":
                        b = b.sub(Ball.from_fraction(v, prec))
                    elif op == "m":
                        b = b.mul(Ball.from_fraction(v, prec))
                    else:
                        b = b.div(Ball.from_fraction(v, prec))
                widths.append(b.width().as_fraction())
            assert widths[1] * 2 <= widths[0] or widths[0] == 0

    def test_root(self):
        b = Ball.from_fraction(32, 96).root(5)
        assert b.contains(2)
        c = Ball.from_fraction(10, 96).pow_frac(Fraction(5, 4))
        # 10^(5/4) = 17.7827941...
        assert c.contains(Fraction(177827941, 10**7)) or (
            c.lo.cmp_fraction(Fraction(1778279, 10**5)) > 0
            and c.hi.cmp_fraction(Fraction(1778280, 10**5)) < 0
        )


class TestLn:
    def test_ln_one_exact_zero(self):
        b = ln_ball(1, 64)
        assert b.lo.man == 0 and b.hi.man == 0

    def test_ln_two(self):
        lo, tail = _ln_oracle(Fraction(2))
        b = ln_ball(2, 96)
        # the oracle bracket [lo, lo+tail] and the ball must overlap
        assert b.lo.cmp_fraction(lo + tail) <= 0 and b.hi.cmp_fraction(lo) >= 0
        # frozen digits: ln 2 = 0.69314718055994530941...
        assert b.lo.cmp_fraction(Fraction(6931471805, 10**10)) > 0
        assert b.hi.cmp_fraction(Fraction(6931471806, 10**10)) < 0

    def test_ln_289_over_106(self):
        x = Fraction(289, 106)
        lo, tail = _ln_oracle(x)
        b = ln_ball(x, 96)
        assert b.lo.cmp_fraction(lo + tail) <= 0 and b.hi.cmp_fraction(lo) >= 0
        # frozen digits from the oracle: 1.002987594000...
        assert b.lo.cmp_fraction(Fraction(1002987593, 10**9)) > 0
        assert b.hi.cmp_fraction(Fraction(1002987595, 10**9)) < 0
        # cross-check ln(289) - ln(106)
        diff = ln_ball(289, 96) - ln_ball(106, 96)
        assert diff.overlaps(b)

    def test_width_contract(self):
        for prec in (48, 96, 192, 384):
            b = ln_ball(Fraction(355, 113), prec)
            assert b.width_leq(4 - prec)

    def test_domain_error(self):
        with pytest.raises(ValueError):
            ln_ball(0, 64)
        with pytest.raises(ValueError):
            ln_ball(Fraction(-2), 64)

    def test_huge_argument(self):
        x = Fraction(10**200 + 7, 3)
        b = ln_ball(x, 128)
        assert b.width_leq(4 - 128)
        s = x.numerator.bit_length() - x.denominator.bit_length()
        while x / Fraction(2) ** s > Fraction(4, 3):
            s += 1
        while x / Fraction(2) ** s < Fraction(2, 3):
            s -= 1
        lo, tail = _ln_oracle(x / Fraction(2) ** s)
        l2, l2t = _ln_oracle(Fraction(2))
        approx = lo + s * l2
        slack = tail + s * l2t + Fraction(1, 10**20)
        assert b.lo.cmp_fraction(approx - slack) >= 0
        assert b.hi.cmp_fraction(approx + slack) <= 0


class TestConstants:
    def test_e_value(self):
        lo, tail = _e_oracle()
        b = const_e(96)
        assert b.lo.cmp_fraction(lo + tail) <= 0 and b.hi.cmp_fraction(lo) >= 0
        # frozen digits 2.718281828459045235...
        assert b.lo.cmp_fraction(Fraction(2718281828459045, 10**15)) > 0
        assert b.hi.cmp_fraction(Fraction(2718281828459046, 10**15)) < 0

    def test_e_monotone_refinement(self):
        for p1 in (48, 64, 128, 300):
            b1 = const_e(p1)
            b2 = const_e(p1 + 8)
            assert b1.contains_ball(b2)

    def test_e_width(self):
        for prec in (32, 64, 128, 512):
            b = const_e(prec)
            # width <= 2^(1-prec) * magnitude ~ 2^(2-prec)
            assert b.width_leq(3 - prec)

    def test_sinh1(self):
        b = const_sinh1(96)
        # frozen digits 1.1752011936438014...
        assert b.lo.cmp_fraction(Fraction(11752011936438013, 10**16)) > 0
        assert b.hi.cmp_fraction(Fraction(11752011936438015, 10**16)) < 0

    def test_derived_constants(self):
        c = constants(128)
        # y* = sinh(1)/12 = 0.0979334328036501...
        assert c.critical_offset.lo.cmp_fraction(Fraction(979334328, 10**10)) > 0
        assert c.critical_offset.hi.cmp_fraction(Fraction(979334329, 10**10)) < 0
        # 3/sinh(1) = 2.55275438...
        assert c.three_over_sinh1.lo.cmp_fraction(Fraction(255275438, 10**8)) > 0
        assert c.three_over_sinh1.hi.cmp_fraction(Fraction(255275439, 10**8)) < 0
        # sinh(1)/6 = 2 * y*
        twice = c.critical_offset + c.critical_offset
        assert twice.overlaps(c.gap_target)

    def test_exp_ball(self):
        b = exp_ball(Fraction(-1), 96)
        inv = Ball.from_fraction(1, 96).div(const_e(96))
        assert b.overlaps(inv)
        b2 = exp_ball(Fraction(1, 2), 96)
        sq = b2.mul(b2)
        assert sq.overlaps(const_e(96))
