"""Exhaustive record scan for the scaled overshoot n^2 * (H_t - H_{n-1} - 1).

A fixed-point screen (compiled kernel when available) walks every n up to
the horizon, flagging candidates that might improve the running record or
fall below the connection threshold.  Every emitted record is re-verified
with pure rational arithmetic; a cheap certified pre-filter discards the
screen's false positives without exact work.

The connection threshold tau = (3/e + 1/e^2 - 1)/24 is the scaled quality
below which (asymptotically) the offset y must drop under 1/8, forcing the
reduced fraction (2m+1)/(2n-1) to be a convergent of e.  Every scanned n
with n^2 eps below tau * (1 - 10/n) gets a connection report; a
non-convergent there would be a release-blocking finding.

Scan results are a pure function of the horizon: blocks have a fixed size
independent of the worker count, every block is screened independently,
and the merge is sequential and deterministic.
"""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from . import __version__
from ._screen import KIND_AMBIGUOUS, KIND_RECORD, KIND_TAU, frac_bits_for, kernel_name, screen_block
from .contfrac import is_e_convergent
from .errors import CheckpointError, PrecisionError
from .exactnum import Ball, constants, escalating
from .harmonic import ball_sum, exact_sum, pair_offset

__all__ = [
    "RecordRow",
    "ConnectionReport",
    "RecordTable",
    "quality_threshold",
    "connection_report",
    "scan_records",
    "DEFAULT_BLOCK_SIZE",
]

DEFAULT_BLOCK_SIZE = 1 << 16
CONVERGENT_INDEX_CAP = 600
CSV_HEADER = "n,t,eps_num,eps_den,scaled_num,scaled_den,reduced_p,reduced_q,d,is_convergent"


def quality_threshold(prec: int = 128) -> Ball:
    """tau = (3/e + e^-2 - 1)/24, the scaled-quality connection threshold.

    At offset exactly 1/8 the second-order prediction times n^2 equals tau.
    """
    c = constants(prec + 16)
    inv = Ball.from_fraction(1, prec + 16).div(c.e)
    return (3 * inv + inv * inv - 1).div(Ball.from_fraction(24, prec + 16)).at(prec)


@dataclass(frozen=True)
class ConnectionReport:
    """Reduction of (2m+1)/(2n-1) and its convergent membership."""

    n: int
    m: int
    d: int
    reduced_p: int
    reduced_q: int
    is_convergent: bool
    offset: Ball

    @staticmethod
    def build(n: int, m: int, index_cap: int = CONVERGENT_INDEX_CAP, prec: int = 128) -> "ConnectionReport":
        a, b = 2 * m + 1, 2 * n - 1
        d = gcd(a, b)
        p, q = a // d, b // d
        return ConnectionReport(
            n=n,
            m=m,
            d=d,
            reduced_p=p,
            reduced_q=q,
            is_convergent=is_e_convergent(p, q, index_cap),
            offset=pair_offset(n, m, prec),
        )


def connection_report(n: int, m: int, index_cap: int = CONVERGENT_INDEX_CAP, prec: int = 128) -> ConnectionReport:
    if not 2 <= n <= m:
        raise ValueError("need 2 <= n <= m")
    return ConnectionReport.build(n, m, index_cap, prec)


@dataclass(frozen=True)
class RecordRow:
    n: int
    t: int
    overshoot: Fraction
    scaled: Fraction
    reduced_p: int
    reduced_q: int
    d: int
    is_convergent: bool

    def csv(self) -> str:
        return (
            f"{self.n},{self.t},{self.overshoot.numerator},{self.overshoot.denominator},"
            f"{self.scaled.numerator},{self.scaled.denominator},"
            f"{self.reduced_p},{self.reduced_q},{self.d},{str(self.is_convergent).lower()}"
        )

    def json_obj(self) -> dict:
        return {
            "n": self.n,
            "t": self.t,
            "eps_num": str(self.overshoot.numerator),
            "eps_den": str(self.overshoot.denominator),
            "scaled_num": str(self.scaled.numerator),
            "scaled_den": str(self.scaled.denominator),
            "reduced_p": str(self.reduced_p),
            "reduced_q": str(self.reduced_q),
            "d": self.d,
            "is_convergent": self.is_convergent,
        }


@dataclass
class RecordTable:
    horizon: int
    records: list[RecordRow] = field(default_factory=list)
    below_threshold: list[RecordRow] = field(default_factory=list)
    exact_hits: list[tuple[int, int]] = field(default_factory=list)  # (n, t) with overshoot exactly 0
    kernel: str = ""
    wall_time_s: float | None = None

    def csv_lines(self) -> list[str]:
        return [CSV_HEADER] + [r.csv() for r in self.records]

    def json_obj(self, timing: bool = False) -> dict:
        return {
            "horizon": self.horizon,
            "version": __version__,
            "wall_time_s": self.wall_time_s if timing else None,
            "kernel": self.kernel,
            "records": [r.json_obj() for r in self.records],
            "below_threshold": [r.json_obj() for r in self.below_threshold],
            "exact_hits": [list(pair) for pair in self.exact_hits],
        }

    def profile(self, delta: Fraction, prec: int = 96) -> list[tuple[int, str, str]]:
        """n^(2+delta) * overshoot per record: the conjectured-divergence view."""
        out = []
        for r in self.records:
            v = Ball.from_fraction(r.n, prec).pow_frac(2 + Fraction(delta), prec).mul(
                Ball.from_fraction(r.overshoot, prec)
            )
            lo, hi = v.interval_str(20)
            out.append((r.n, lo, hi))
        return out


def _confirm_exact(n: int, t_screen: int) -> tuple[int, Fraction]:
    """Exact crossing and overshoot near the screen's estimate.

    Confirmation windows grow with the horizon (about 1.72 n terms), so the
    scanner overrides the segment-sum term cap with its own window size.
    """
    total = exact_sum(n, t_screen, term_cap=t_screen - n + 64)
    t = t_screen
    while total < 1:
        t += 1
        total += Fraction(1, t)
    while t > n and total - Fraction(1, t) >= 1:
        total -= Fraction(1, t)
        t -= 1
    return t, total - 1


def _cheap_scaled_ball(n: int, t: int, resolution: Fraction) -> Ball | None:
    """Certified n^2 * overshoot enclosure from the Euler-Maclaurin route."""
    if n < 8:
        return None
    floor = 2 * (Fraction(1, 120 * (n - 1) ** 4) + Fraction(1, 120 * t**4))
    width = max(4 * floor, resolution / (n * n))
    try:
        eps = ball_sum(n, t, width) - 1
    except (ValueError, PrecisionError):  # pragma: no cover
        return None
    return eps.mul(Ball.from_fraction(n * n, eps.prec))


def _tau_compare_exact(scaled: Fraction, n: int) -> bool:
    """Decide n^2 eps < tau (1 - 10/n) for exact scaled, escalating tau."""
    if n <= 10:
        return False
    target = scaled * Fraction(n, n - 10)

    def attempt(w: int) -> bool | None:
        cmp = quality_threshold(w).cmp_fraction(target)
        return None if cmp is None else cmp > 0

    return escalating(attempt, start=128, what="connection threshold comparison")


class _Merger:
    """Sequential, deterministic confirmation of screened candidates."""

    def __init__(self, index_cap: int = CONVERGENT_INDEX_CAP):
        self.index_cap = index_cap
        self.records: list[RecordRow] = []
        self.below: list[RecordRow] = []
        self.exact_hits: list[int] = []
        self.min_scaled: Fraction | None = None
        self.tau_hi: Fraction = quality_threshold(128).hi.as_fraction()

    def _row(self, n: int, t: int, eps: Fraction, scaled: Fraction) -> RecordRow:
        rep = ConnectionReport.build(n, t, self.index_cap)
        return RecordRow(
            n=n,
            t=t,
            overshoot=eps,
            scaled=scaled,
            reduced_p=rep.reduced_p,
            reduced_q=rep.reduced_q,
            d=rep.d,
            is_convergent=rep.is_convergent,
        )

    def feed(self, n: int, t_screen: int, kind: int) -> None:
        want_record = bool(kind & KIND_RECORD)
        want_tau = bool(kind & KIND_TAU) and n > 10
        ambiguous = bool(kind & KIND_AMBIGUOUS)
        if not (want_record or want_tau or ambiguous):
            return

        need_exact = ambiguous
        if not need_exact:
            resolution = Fraction(1, 50)
            if want_record and self.min_scaled is not None:
                resolution = min(resolution, self.min_scaled / 4)
            if want_tau:
                resolution = min(resolution, Fraction(1, 400))
            ball = _cheap_scaled_ball(n, t_screen, resolution)
            if ball is None:
                need_exact = True
            else:
                if want_record:
                    cmp = (
                        None
                        if self.min_scaled is None
                        else ball.cmp_fraction(self.min_scaled)
                    )
                    if cmp is None or cmp < 0:
                        need_exact = True
                if want_tau and not need_exact:
                    thr = self.tau_hi * Fraction(n - 10, n)
                    if ball.cmp_fraction(thr) != 1:
                        need_exact = True
        if not need_exact:
            return

        t, eps = _confirm_exact(n, t_screen)
        scaled = n * n * eps
        if eps == 0:
            self.exact_hits.append((n, t))
        if self.min_scaled is None or scaled < self.min_scaled:
            self.records.append(self._row(n, t, eps, scaled))
            self.min_scaled = scaled
        if n > 10 and _tau_compare_exact(scaled, n):
            self.below.append(self._row(n, t, eps, scaled))


def _screen_args(n_max: int, block_size: int, start: int, frac_bits: int, tau_fp: int):
    # every block rebuilds its initial window (~1.72 * lo terms), so spans
    # grow with the position to keep that amortized; boundaries depend only
    # on (start, n_max, block_size), never on the worker count
    lo = start
    while lo <= n_max:
        span = max(block_size, lo // 8)
        hi = min(lo + span, n_max + 1)
        yield (lo, hi, frac_bits, tau_fp)
        lo = hi


def _run_screen(args):
    return screen_block(*args)


def _tau_fp_bound(frac_bits: int) -> int:
    tau = quality_threshold(160)
    hi = tau.hi
    shift = frac_bits - 32 + hi.exp
    if shift >= 0:
        return (hi.man << shift) + 1
    return -((-hi.man) >> -shift) + 1


# ----------------------------------------------------------------------
# Checkpoints: tiny, cursor-only; sums are recomputed on resume
# ----------------------------------------------------------------------

_CKPT_FORMAT = 1


def _checkpoint_payload(n_max, block_size, next_start, merger: _Merger) -> dict:
    return {
        "format": _CKPT_FORMAT,
        "horizon": n_max,
        "block_size": block_size,
        "next_start": next_start,
        "records": [[r.n, r.t] for r in merger.records],
        "below_threshold": [[r.n, r.t] for r in merger.below],
        "exact_hits": [list(pair) for pair in merger.exact_hits],
    }


def _save_checkpoint(path: str, payload: dict) -> None:
    body = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    digest = hashlib.sha256(body.encode()).hexdigest()
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps({"payload": payload, "sha256": digest}, sort_keys=True))


def _load_checkpoint(path: str, n_max: int, block_size: int) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            wrapper = json.load(fh)
        payload = wrapper["payload"]
        digest = wrapper["sha256"]
    except FileNotFoundError:
        raise
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise CheckpointError(f"unreadable checkpoint {path}: {exc}") from exc
    body = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    if hashlib.sha256(body.encode()).hexdigest() != digest:
        raise CheckpointError(f"checkpoint {path} failed its integrity hash")
    if payload.get("format") != _CKPT_FORMAT:
        raise CheckpointError(f"checkpoint {path} has an unsupported format")
    if payload.get("horizon") != n_max or payload.get("block_size") != block_size:
        raise CheckpointError(
            f"checkpoint {path} was taken for a different scan "
            f"(horizon {payload.get('horizon')}, block {payload.get('block_size')})"
        )
    return payload


def _replay_merger(payload: dict, index_cap: int) -> _Merger:
    merger = _Merger(index_cap)
    for n, t in payload["records"]:
        t_exact, eps = _confirm_exact(n, t)
        if t_exact != t:
            raise CheckpointError("checkpoint record cursor does not re-verify")
        scaled = n * n * eps
        if merger.min_scaled is not None and scaled >= merger.min_scaled:
            raise CheckpointError("checkpoint records are not strictly decreasing")
        merger.records.append(merger._row(n, t, eps, scaled))
        merger.min_scaled = scaled
    for n, t in payload["below_threshold"]:
        t_exact, eps = _confirm_exact(n, t)
        if t_exact != t:
            raise CheckpointError("checkpoint connection cursor does not re-verify")
        merger.below.append(merger._row(n, t, eps, n * n * eps))
    for n, t in payload["exact_hits"]:
        t_exact, eps = _confirm_exact(n, t)
        if t_exact != t or eps != 0:
            raise CheckpointError("checkpoint exact-hit entry does not re-verify")
        merger.exact_hits.append((n, t))
    return merger


# ----------------------------------------------------------------------
# Driver
# ----------------------------------------------------------------------

def scan_records(
    n_max: int,
    threads: int = 1,
    checkpoint_path: str | None = None,
    block_size: int = DEFAULT_BLOCK_SIZE,
    index_cap: int = CONVERGENT_INDEX_CAP,
) -> RecordTable:
    """Complete record table for 2 <= n <= n_max.

    The output is a pure function of n_max (and index_cap): thread count,
    block size and checkpoint placement never change it.  Records are
    emitted only after exact rational re-verification.
    """
    if n_max < 2:
        raise ValueError("n_max must be >= 2")
    if threads < 1:
        raise ValueError("threads must be >= 1")
    if block_size < 1024:
        raise ValueError("block_size must be >= 1024")
    started = time.monotonic()
    frac_bits = frac_bits_for(n_max)
    tau_fp = _tau_fp_bound(frac_bits)

    start = 2
    merger = _Merger(index_cap)
    if checkpoint_path is not None:
        try:
            payload = _load_checkpoint(checkpoint_path, n_max, block_size)
        except FileNotFoundError:
            payload = None
        except CheckpointError:
            raise
        if payload is not None:
            merger = _replay_merger(payload, index_cap)
            start = payload["next_start"]

    args = list(_screen_args(n_max, block_size, start, frac_bits, tau_fp))
    if threads > 1 and len(args) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=threads) as pool:
            screened = pool.map(_run_screen, args)
            for (lo, hi, _, _), (flags, _m) in zip(args, screened):
                for n, t, kind in flags:
                    merger.feed(n, t, kind)
                if checkpoint_path is not None:
                    _save_checkpoint(
                        checkpoint_path,
                        _checkpoint_payload(n_max, block_size, hi, merger),
                    )
    else:
        for block in args:
            flags, _m = _run_screen(block)
            for n, t, kind in flags:
                merger.feed(n, t, kind)
            if checkpoint_path is not None:
                _save_checkpoint(
                    checkpoint_path,
                    _checkpoint_payload(n_max, block_size, block[1], merger),
                )

    return RecordTable(
        horizon=n_max,
        records=merger.records,
        below_threshold=merger.below,
        exact_hits=merger.exact_hits,
        kernel=kernel_name(),
        wall_time_s=time.monotonic() - started,
    )
