"""Pure-Python screening kernel for the record scan.

Mirrors `_screen_c` operation for operation: both kernels must produce
bit-identical candidate lists for the same arguments (the compiled kernel is
cross-validated against this one in the test suite).

The screen maintains, for the sliding window [n, t],

    acc = sum of floor(2^F / k) for n <= k <= t,      cnt = t - n + 1,

so the true partial sum S(n, t) satisfies acc <= S*2^F < acc + cnt.  The
window is extended until the upper estimate crosses 1.  If the lower estimate
has also crossed, the crossing index t and the overshoot bracket are certain;
otherwise the n is flagged as ambiguous and left to exact confirmation.

Record screening compares against a running upper bound M on the minimum
scaled overshoot seen so far; every true record is flagged (possibly along
with a few false positives, discarded later by exact arithmetic).  All scaled
comparisons drop 32 low bits first so the compiled kernel fits in 128 bits.
"""

from __future__ import annotations

KIND_RECORD = 1
KIND_TAU = 2
KIND_AMBIGUOUS = 4

_M_INIT = 1 << 126


def screen_block(
    n_start: int,
    n_end: int,
    frac_bits: int,
    tau_hi_fp: int,
) -> tuple[list[tuple[int, int, int]], int]:
    """Screen n in [n_start, n_end); returns (flags, final M).

    flags entries are (n, t_screen, kind).  tau_hi_fp is an upper fixed-point
    bound on the connection threshold, scaled by 2^(frac_bits - 32).
    """
    one = 1 << frac_bits
    n = n_start
    t = n_start
    acc = one // n
    cnt = 1
    m_run = _M_INIT
    flags: list[tuple[int, int, int]] = []

    while n < n_end:
        while acc + cnt < one:
            t += 1
            acc += one // t
            cnt += 1
        kind = 0
        if acc >= one:
            # crossing certain: bracket the scaled overshoot
            es_lo = (acc - one) >> 32
            es_hi = ((acc + cnt - one) >> 32) + 1
            scaled_lo = n * n * es_lo
            scaled_hi = n * n * es_hi
            if scaled_lo < m_run:
                kind |= KIND_RECORD
            if n > 10 and scaled_lo < tau_hi_fp * (n - 10) // n + 1:
                kind |= KIND_TAU
            if scaled_hi < m_run:
                m_run = scaled_hi
        else:
            # upper estimate crossed but lower did not: ambiguous
            kind = KIND_RECORD | KIND_TAU | KIND_AMBIGUOUS
            es_hi = ((one // t) >> 32) + 1  # overshoot < 1/t always
            scaled_hi = n * n * es_hi
            if scaled_hi < m_run:
                m_run = scaled_hi
        if kind:
            flags.append((n, t, kind))
        acc -= one // n
        cnt -= 1
        n += 1

    return flags, m_run
