"""Independent verification and measurement of construction output.

The stage-log checker rebuilds every schedule quantity from the profile and
replays each recorded stage in exact arithmetic, so a log can only pass if
every per-stage condition actually held.  The check_* routines are executable
forms of the concatenation and transfer facts the correctness argument rests
on; their premises are enforced separately from their conclusions, with a
distinct premise-failure outcome.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction

from .blocks import DigitBlock, block_discrepancy, discrepancy, occurrences
from .engine import (
    PhaseContext,
    StageRecord,
    condition_one,
    condition_two,
    growth_gap,
    initial_state,
    StageState,
    MAX_ELL_DOUBLINGS,
)
from .errors import PremiseFailure
from .profile import NormalityProfile
from .radix import (
    AdicInterval,
    SAdicNumber,
    extract_digits,
    extract_digits_fraction,
    leftmost_tadic_subinterval,
    nat_pos,
)


@dataclass(frozen=True)
class ReportRow:
    base: int
    checkpoint: int
    counts: tuple[int, ...]
    discrepancy: Fraction


@dataclass(frozen=True)
class DiscrepancyReport:
    rows: tuple[ReportRow, ...]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(
            [
                "base",
                "checkpoint",
                "digit",
                "count",
                "freq_num",
                "freq_den",
                "discrepancy_num",
                "discrepancy_den",
                "discrepancy_float",
            ]
        )
        for row in self.rows:
            for digit, count in enumerate(row.counts):
                freq = Fraction(count, row.checkpoint)
                writer.writerow(
                    [
                        row.base,
                        row.checkpoint,
                        digit,
                        count,
                        freq.numerator,
                        freq.denominator,
                        row.discrepancy.numerator,
                        row.discrepancy.denominator,
                        f"{float(row.discrepancy):.12g}",
                    ]
                )
        return buf.getvalue()


def digit_report(
    x: SAdicNumber,
    bases: list[int],
    checkpoints: list[int],
    max_positions: dict[int, int] | None = None,
) -> DiscrepancyReport:
    """Exact digit counts and discrepancy of x per (base, checkpoint).

    ``max_positions`` caps the admissible checkpoint per base (the digit
    horizon of the construction); exceeding it raises with the maximum named.
    """
    rows = []
    for base in sorted(bases):
        for checkpoint in sorted(checkpoints):
            if checkpoint < 1:
                raise ValueError(f"checkpoint must be >= 1, got {checkpoint}")
            if max_positions is not None:
                limit = max_positions.get(base)
                if limit is not None and checkpoint > limit:
                    raise ValueError(
                        f"checkpoint {checkpoint} beyond available precision "
                        f"for base {base} (max {limit})"
                    )
            digits = extract_digits(x, base, 0, checkpoint)
            counts = [0] * base
            for d in digits.digits:
                counts[d] += 1
            rows.append(
                ReportRow(
                    base=base,
                    checkpoint=checkpoint,
                    counts=tuple(counts),
                    discrepancy=discrepancy(digits.digits, base),
                )
            )
    return DiscrepancyReport(tuple(rows))


def verify_stage_log(
    records: list[StageRecord], profile: NormalityProfile
) -> tuple[bool, str | None]:
    """Replay a stage log from scratch and recheck every condition exactly.

    Rebuilds alphabets and schedule data from the profile, recomputes both
    stage conditions, the re-anchoring, the appended value, and the per-block
    digit conditions.  Returns (True, None) or (False, reason for the first
    failing stage).  The seeded candidate stream is not replayed: any block
    meeting all conditions is acceptable at its stage.
    """
    ctx = PhaseContext(profile)
    state = initial_state(ctx)
    exponents: dict[int, int] = {}

    def fail(t: int, msg: str) -> tuple[bool, str]:
        return False, f"stage {t}: {msg}"

    for rec in records:
        t = state.t + 1
        if rec.t != t:
            return fail(t, f"stage index {rec.t} out of order")
        jt = state.j
        for j_class, exp in ((jt + 1, rec.ell_exp_next), (rec.j, rec.ell_exp)):
            known = exponents.get(j_class, 0)
            if exp < known or exp > MAX_ELL_DOUBLINGS:
                return fail(t, f"length exponent {exp} for class {j_class} invalid")
        ell_next = ctx.ell(jt + 1, rec.ell_exp_next)
        if rec.ell_next != ell_next:
            return fail(t, f"recorded next length {rec.ell_next} != {ell_next}")
        hold_state = StageState(
            t=state.t, j=state.j, b=state.b, x=state.x, ell_exponents=()
        )
        cond1 = condition_one(ctx, hold_state, ell_next)
        cond2, d_freq = condition_two(ctx, hold_state)
        if cond1 != rec.cond1:
            return fail(t, f"condition 1 recomputes to {cond1}")
        if cond2 != rec.cond2:
            return fail(t, f"condition 2 recomputes to {cond2}")
        if d_freq != rec.d_freq:
            return fail(t, f"bias frequency recomputes to {d_freq}")
        if cond1 and cond2:
            j_new = jt + 1
            pp = ctx.params(j_new)
            interval = AdicInterval(state.x.base, state.x.prec, state.x.numerator)
            a, y = leftmost_tadic_subinterval(interval, state.b, pp.s_star)
        else:
            j_new, a, y = jt, state.b, state.x
        if rec.j != j_new:
            return fail(t, f"schedule index recomputes to {j_new}")
        if rec.a != a:
            return fail(t, f"anchor position recomputes to {a}")
        pp = ctx.params(j_new)
        ell_used = ctx.ell(j_new, rec.ell_exp)
        if rec.ell != ell_used:
            return fail(t, f"recorded length {rec.ell} != {ell_used}")
        k = nat_pos(a + ell_used, pp.s_star) - nat_pos(a, pp.s_star)
        if len(rec.w_star) != k:
            return fail(t, f"block holds {len(rec.w_star)} digits, expected {k}")
        z_val, zt_val = pp.excluded
        for v in rec.w_star:
            if not 0 <= v < pp.s_star or v == z_val or v == zt_val:
                return fail(t, f"digit {v} lies outside the restricted alphabet")
        x_new = y.append_digits(list(rec.w_star))
        if x_new != rec.x:
            return fail(t, "recorded value does not match the appended digits")
        w = _expand(pp.s, pp.alphabet.ell_u, rec.w_star)
        tolerance = Fraction(1, j_new + 1)
        for m in pp.M:
            if block_discrepancy(w, m) >= tolerance:
                return fail(t, f"chunk discrepancy for m={m} out of tolerance")
        chunk_total = len(w) // pp.n
        bias = Fraction(occurrences(w, pp.n)[pp.d_value], chunk_total)
        if bias >= Fraction(1, pp.s**pp.n) - pp.eps:
            return fail(t, f"bias frequency {bias} not below the margin")
        r_checks = sorted(
            ({r for r in pp.r_list} | {r**pp.p for r in pp.r_list})
            - {pp.s**m for m in pp.M}
        )
        for r in r_checks:
            window = extract_digits(x_new, r, nat_pos(a, r), nat_pos(a + ell_used, r))
            if block_discrepancy(window, 1) >= tolerance:
                return fail(t, f"window discrepancy in base {r} out of tolerance")
        if rec.b != a + ell_used:
            return fail(t, f"end position recomputes to {a + ell_used}")
        if rec.eta != pp.eta_lower:
            return fail(t, "dimension metric mismatch")
        exponents[jt + 1] = rec.ell_exp_next
        exponents[j_new] = rec.ell_exp
        state = StageState(
            t=t, j=j_new, b=rec.b, x=x_new, ell_exponents=()
        )
    return True, None


def _expand(s: int, ell_u: int, values: tuple[int, ...]) -> DigitBlock:
    digits: list[int] = []
    for v in values:
        digits.extend(DigitBlock.from_value(s, v, ell_u).digits)
    return DigitBlock(s, tuple(digits))


def check_append_bound(w: DigitBlock, u: DigitBlock, eps: Fraction) -> bool:
    """Appending fewer than eps*|w| digits to a block of discrepancy < eps
    keeps the discrepancy below 2*eps."""
    eps = Fraction(eps)
    if w.base != u.base:
        raise ValueError("blocks must share a base")
    if len(u) >= eps * len(w):
        raise PremiseFailure(f"appended length {len(u)} not below eps*|w| = {eps * len(w)}")
    if block_discrepancy(w, 1) >= eps:
        raise PremiseFailure("leading block discrepancy not below eps")
    return block_discrepancy(w.concat(u), 1) < 2 * eps


def _segment_bounds(cuts: list[int], length: int) -> None:
    if len(cuts) < 2:
        raise ValueError("need at least two cut positions")
    if cuts[0] < 0 or any(b >= c for b, c in zip(cuts, cuts[1:])):
        raise ValueError("cut positions must be non-negative and increasing")
    if cuts[-1] > length:
        raise ValueError("cut positions exceed the digit sequence")


def _first_good_segment(
    w: DigitBlock, cuts: list[int], good: "callable"
) -> int:
    """Least segment index from which every later segment satisfies `good`."""
    flags = [good(t) for t in range(len(cuts) - 1)]
    t0 = len(flags)
    for t in range(len(flags) - 1, -1, -1):
        if not flags[t]:
            break
        t0 = t
    if t0 >= len(flags):
        raise PremiseFailure("no suffix of segments satisfies the premises")
    return t0


def check_limit_bound(w: DigitBlock, cuts: list[int], eps: Fraction) -> bool:
    """Prefix discrepancies stay within 2*eps once segments are short relative
    to their start and individually below eps in discrepancy.

    Finite rendering of a limit statement: prefixes are evaluated at the cut
    positions after the premises start holding, with head-mass slack
    (cuts[t0]+1)/checkpoint added to the 2*eps budget (equal to the nominal
    1/checkpoint slack when the premises hold from position zero).
    """
    eps = Fraction(eps)
    _segment_bounds(cuts, len(w))
    r = w.base

    def good(t: int) -> bool:
        lo, hi = cuts[t], cuts[t + 1]
        if cuts[t] > 0 and hi - lo > eps * lo:
            return False
        segment = DigitBlock(r, w.digits[lo:hi])
        return block_discrepancy(segment, 1) < eps

    t0 = _first_good_segment(w, cuts, good)
    head = cuts[t0]
    for t in range(t0 + 1, len(cuts)):
        checkpoint = cuts[t]
        prefix = DigitBlock(r, w.digits[:checkpoint])
        if block_discrepancy(prefix, 1) > 2 * eps + Fraction(head + 1, checkpoint):
            return False
    return True


def check_liminf_deficit(
    w: DigitBlock, cuts: list[int], d: int, eps: Fraction
) -> bool:
    """Some prefix checkpoint shows digit d with frequency below 1/r - eps/2,
    given that every segment past some point keeps d below 1/r - eps."""
    eps = Fraction(eps)
    _segment_bounds(cuts, len(w))
    r = w.base
    if not 0 <= d < r:
        raise ValueError(f"digit {d} out of range for base {r}")
    cap = Fraction(1, r) - eps

    def good(t: int) -> bool:
        lo, hi = cuts[t], cuts[t + 1]
        count = sum(1 for v in w.digits[lo:hi] if v == d)
        return Fraction(count, hi - lo) < cap

    t0 = _first_good_segment(w, cuts, good)
    target = Fraction(1, r) - eps / 2
    for t in range(t0 + 1, len(cuts)):
        checkpoint = cuts[t]
        count = sum(1 for v in w.digits[:checkpoint] if v == d)
        if Fraction(count, checkpoint) < target:
            return True
    return False


def check_transfer(
    q: SAdicNumber,
    x: Fraction,
    r: int,
    p: int,
    a: int,
    b: int,
    eps: Fraction,
) -> bool:
    """Discrepancy of a digit window transfers from an adic anchor q to any
    real x in its adic interval: if q's window in base r and in base r^p both
    have discrepancy < eps, with 2/r^p < eps and 3p/|window| < eps, then x's
    base-r window has discrepancy < 5*eps.

    All windows cover positions (nat_pos(.,base), nat_pos(.,base)] between the
    nat positions a < b; q must have precision nat_pos(b, q.base).
    """
    eps = Fraction(eps)
    if not 0 < a < b:
        raise ValueError("need 0 < a < b")
    if q.prec != nat_pos(b, q.base):
        raise ValueError("anchor precision does not match position b")
    q_frac = q.as_fraction()
    if not q_frac <= x < q_frac + q.ulp():
        raise ValueError("x outside the anchor's adic interval")
    if Fraction(2, r**p) >= eps:
        raise PremiseFailure(f"2/{r}^{p} not below eps")
    u = extract_digits(q, r, nat_pos(a, r), nat_pos(b, r))
    if Fraction(3 * p, len(u)) >= eps:
        raise PremiseFailure(f"3p/|u| = {Fraction(3 * p, len(u))} not below eps")
    if block_discrepancy(u, 1) >= eps:
        raise PremiseFailure("anchor window discrepancy not below eps")
    u_tilde = extract_digits(q, r**p, nat_pos(a, r**p), nat_pos(b, r**p))
    if block_discrepancy(u_tilde, 1) >= eps:
        raise PremiseFailure("anchor power-base window discrepancy not below eps")
    v = extract_digits_fraction(x, r, nat_pos(a, r), nat_pos(b, r))
    return block_discrepancy(v, 1) < 5 * eps


def envelope_report(
    x: SAdicNumber, records: list[StageRecord], profile: NormalityProfile, r: int
) -> list[tuple[int, int, int, Fraction, Fraction]]:
    """Prefix discrepancy of x in base r at every stage checkpoint, paired
    with the (generous) decay envelope 12/(j+1) of the schedule index."""
    out = []
    for rec in records:
        checkpoint = nat_pos(rec.b, r)
        if checkpoint < 1:
            continue
        window = extract_digits(x, r, 0, checkpoint)
        d = block_discrepancy(window, 1)
        out.append((rec.t, rec.j, checkpoint, d, Fraction(12, rec.j + 1)))
    return out


__all__ = [
    "ReportRow",
    "DiscrepancyReport",
    "digit_report",
    "verify_stage_log",
    "check_append_bound",
    "check_limit_bound",
    "check_liminf_deficit",
    "check_transfer",
    "envelope_report",
]
