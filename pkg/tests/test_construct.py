"""Construction and certification of near-1 pairs."""

from fractions import Fraction

import pytest

from harmonicgap.construct import (
    certify,
    closest_odd,
    gap_bracket,
    ideal_multiplier,
    joint_search,
    pair_from,
    pick_multiplier,
)
from harmonicgap.exactnum import Ball, constants


def _naive_overshoot(n: int, m: int) -> Fraction:
    return sum(Fraction(1, k) for k in range(n, m + 1)) - 1


class TestIdealMultiplier:
    def test_k2(self):
        # refined value with the fixed-point pass: 1.661135...
        d = ideal_multiplier(2, 96)
        assert d.lo.cmp_fraction(Fraction(165, 100)) > 0
        assert d.hi.cmp_fraction(Fraction(167, 100)) < 0

    def test_k0_degenerate(self):
        # fixed-point pass lands on n0 = 2, giving 1.02122...; the crude
        # (2n-1)/n ~ 2 approximation would instead give 1.179
        d = ideal_multiplier(0, 96)
        assert d.lo.cmp_fraction(Fraction(101, 100)) > 0
        assert d.hi.cmp_fraction(Fraction(104, 100)) < 0

    def test_asymptotic_ratio(self):
        # ideal(k) / sqrt(2 k sinh(1)/3) -> 1
        c = constants(128)
        for k, tol in ((20, Fraction(1, 10)), (100, Fraction(1, 45)), (200, Fraction(1, 90))):
            d = ideal_multiplier(k, 96)
            ref = (Ball.from_fraction(2 * k, 128) * c.sinh1 / 3).sqrt()
            ratio = d.div(ref)
            assert abs(ratio - 1).hi.cmp_fraction(tol) < 0, k

    def test_odd_k_rejected(self):
        with pytest.raises(ValueError):
            ideal_multiplier(3)


class TestPickMultiplier:
    def test_k2(self):
        assert pick_multiplier(2) == 3

    def test_k0(self):
        assert pick_multiplier(0) == 3

    def test_bracket_holds(self):
        for k in range(2, 40, 2):
            d = pick_multiplier(k)
            ideal = ideal_multiplier(k, 96)
            assert (ideal + 1).hi.cmp_fraction(Fraction(d)) <= 0 or (
                ideal + 1
            ).lo.cmp_fraction(Fraction(d)) < 0
            lo_ok = (ideal + 1).lo.cmp_fraction(Fraction(d)) <= 0
            hi_ok = (ideal + 3).hi.cmp_fraction(Fraction(d)) >= 0
            assert lo_ok and hi_ok, k

    def test_tie_rule(self):
        # exact even-integer point ball: tie broken upward
        assert closest_odd(Ball.point(4, 64)) == 5
        assert closest_odd(Ball.point(3, 64)) == 3
        assert closest_odd(Ball.from_fraction(Fraction(366, 100), 64)) == 3
        assert closest_odd(Ball.from_fraction(Fraction(51, 10), 64)) == 5


class TestPairFrom:
    def test_k2_d3(self):
        assert pair_from(2, 3) == (289, 107)

    def test_k0_d1(self):
        assert pair_from(0, 1) == (1, 1)

    def test_k3_d1(self):
        assert pair_from(3, 1) == (1360, 501)

    def test_parity_error(self):
        with pytest.raises(ValueError):
            pair_from(2, 4)


class TestCertify:
    def test_spot_k2(self):
        pair = certify(2)
        assert (pair.d, pair.m, pair.n) == (3, 289, 107)
        assert pair.canonical and pair.bound_ok
        eps = pair.overshoot_exact
        assert eps == _naive_overshoot(107, 289)
        assert Fraction(68, 10**7) <= eps <= Fraction(74, 10**7)
        # quality ~ 0.08169, and quality * sqrt(2) ~ 0.1155 <= 1001
        assert pair.quality.lo.cmp_fraction(Fraction(816, 10**4)) > 0
        assert pair.quality.hi.cmp_fraction(Fraction(818, 10**4)) < 0

    def test_reduction_recovers_convergent(self):
        from math import gcd

        pair = certify(2)
        a, b = 2 * pair.m + 1, 2 * pair.n - 1
        g = gcd(a, b)
        assert g == pair.d == 3
        assert (a // g, b // g) == (193, 71)

    def test_k0_d3_degenerate(self):
        pair = certify(0, 3)
        assert (pair.m, pair.n) == (4, 2)
        assert pair.overshoot_exact == Fraction(1, 12)
        assert pair.bound_ok is None  # no claim at k = 0

    def test_k2_d1_negative(self):
        pair = certify(2, 1)
        assert not pair.canonical
        assert pair.overshoot.sign() == -1
        assert pair.bound_ok is False

    def test_interval_route_matches_exact(self):
        # force the interval route by shrinking the exact cap
        pair = certify(4, exact_cap=1)
        exact = certify(4)
        assert pair.overshoot_exact is None
        assert exact.overshoot_exact is not None
        assert pair.overshoot.contains(exact.overshoot_exact)
        assert pair.bound_ok and exact.bound_ok

    def test_even_k_sweep_certified(self):
        for k in range(2, 41, 2):
            pair = certify(k)
            assert pair.bound_ok, k
            assert pair.overshoot_positive, k

    def test_offset_convergence(self):
        # 1/(200 sqrt k) <= y - y* <= 50/sqrt k for canonical pairs, k >= 4
        crit = constants(128).critical_offset
        for k in range(4, 41, 2):
            pair = certify(k)
            dev = pair.offset - crit
            s = Ball.from_fraction(k, 128).sqrt()
            assert (dev * s).lo.cmp_fraction(Fraction(1, 200)) > 0, k
            assert (dev * s).hi.cmp_fraction(Fraction(50)) < 0, k


class TestGapBracket:
    def test_bracket_decided(self):
        for k in range(2, 41, 2):
            lhs, gap, rhs = gap_bracket(k)
            assert lhs.decide_le(gap) is True, k
            assert gap.decide_le(rhs) is True, k


class TestExpansionConsistency:
    def test_f_difference_tracks_exact_sum(self):
        # |exact segment sum - expansion difference| <= 1/(15 n^4) for
        # constructed pairs with n <= 1e4
        from harmonicgap.harmonic import em_difference, exact_sum

        for k, d in ((2, 1), (2, 3), (2, 5), (4, 1)):
            m, n = pair_from(k, d)
            assert n <= 10**4
            exact = exact_sum(n, m)
            approx = em_difference(n, m, prec=160)
            diff = abs(approx - Ball.from_fraction(exact, 160))
            assert diff.hi.cmp_fraction(Fraction(1, 15 * n**4)) < 0, (k, d)


class TestJointSearch:
    def test_window_contains_canonical(self):
        pairs, skipped = joint_search(6, window=5)
        assert skipped == 0
        keys = {(p.k, p.d) for p in pairs}
        for k in (2, 4, 6):
            assert (k, pick_multiplier(k)) in keys

    def test_beats_canonical_at_k4(self):
        # the canonical d = 5 is conservative: d = 1 undershoots with the
        # smallest |quality| in the window, and d = 3 is the best pair with
        # a positive overshoot (the record (73756, 27134))
        pairs, _ = joint_search(4, window=5)
        k4 = {p.d: p for p in pairs if p.k == 4}
        canonical = certify(4)
        assert canonical.d == 5
        best = min(k4.values(), key=lambda p: abs(p.quality).hi.as_fraction())
        assert best.d == 1
        assert best.overshoot.sign() == -1
        assert abs(best.quality).decide_lt(abs(canonical.quality)) is True
        d3 = k4[3]
        assert (d3.m, d3.n) == (73756, 27134)
        assert d3.overshoot.sign() == 1
        assert abs(d3.quality).decide_lt(abs(canonical.quality)) is True

    def test_sorted_by_quality(self):
        pairs, _ = joint_search(8, window=3)
        mags = [abs(p.quality).hi.as_fraction() for p in pairs]
        assert mags == sorted(mags)

    def test_min_quality_monotone_in_k(self):
        pairs, _ = joint_search(10, window=3)
        best: dict[int, Fraction] = {}
        for p in pairs:
            q = abs(p.quality).hi.as_fraction()
            best[p.k] = min(best.get(p.k, q), q)
        running = None
        for k in sorted(best):
            running = best[k] if running is None else min(running, best[k])
            cumulative_min = min(v for kk, v in best.items() if kk <= k)
            assert cumulative_min <= best[k]

    def test_workers_deterministic(self):
        seq, s1 = joint_search(6, window=2)
        par, s2 = joint_search(6, window=2, workers=2)
        assert s1 == s2
        assert [(p.k, p.d, p.m, p.n) for p in seq] == [(p.k, p.d, p.m, p.n) for p in par]
