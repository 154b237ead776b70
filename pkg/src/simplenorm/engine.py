"""The stage recursion that emits the digits of the constructed number.

State is a nested sequence of adic intervals: at stage t the number is pinned
to [x_t, x_t + ulp) where x_t is exact in base s*_j = s^(block length) for the
currently scheduled pair (s, n).  Each stage appends a block of restricted-
alphabet digits chosen so that, in exact rational arithmetic,

  (ii)  chunk discrepancies in base s are below 1/(j+1) for every m in M(s),
  (iii) the bias chunk stays under-represented by the alphabet margin,
  (iv)  digit windows in every other tracked base have discrepancy < 1/(j+1),

and advances the schedule index j whenever position growth (condition 1) and
accumulated bias (condition 2) allow.  Candidate blocks come from a seeded
stream, so runs are reproducible bit for bit; the block-length function can
be doubled adaptively when a search budget is exhausted.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .alphabet import AlphabetU, balanced_alphabet, excluded_values, verify_alphabet
from .blocks import DigitBlock, block_discrepancy, occurrences
from .errors import InternalInvariantError, ProfileError
from .profile import NormalityProfile
from .radix import (
    AdicInterval,
    SAdicNumber,
    extract_digits,
    leftmost_tadic_subinterval,
    nat_pos,
)
from .rigmath import ceil_log_sum, ceil_mul_log, log_ratio_lower

# Alphabet digits are sampled as integers below s^ell_u; cap their bit size.
ENGINE_VALUE_BITS = 1 << 20
DEFAULT_BUDGET = 256
MAX_ELL_DOUBLINGS = 16


@dataclass(frozen=True)
class PhaseParams:
    """Everything the recursion needs about one schedule index j."""

    j: int
    s: int
    n: int
    M: tuple[int, ...]
    r_list: tuple[int, ...]
    p: int
    alphabet: AlphabetU
    s_star: int
    excluded: tuple[int, int | None]
    d_value: int
    eps: Fraction
    ell_base: int
    eta_lower: Fraction


@dataclass(frozen=True)
class StageState:
    t: int
    j: int
    b: int
    x: SAdicNumber
    ell_exponents: tuple[int, ...]

    def exponent(self, j: int) -> int:
        return self.ell_exponents[j] if j < len(self.ell_exponents) else 0


@dataclass(frozen=True)
class StageRecord:
    """One audited stage transition, reproducible from (profile, seed)."""

    t: int
    j_prev: int
    j: int
    cond1: bool
    cond2: bool
    d_freq: Fraction | None
    a: int
    b: int
    ell_exp_next: int
    ell_next: int
    ell_exp: int
    ell: int
    attempts: int
    w_star: tuple[int, ...]
    x: SAdicNumber
    eta: Fraction

    def to_json_dict(self) -> dict:
        return {
            "t": self.t,
            "j_prev": self.j_prev,
            "j": self.j,
            "cond1": self.cond1,
            "cond2": self.cond2,
            "d_freq": None if self.d_freq is None else _frac_str(self.d_freq),
            "a": self.a,
            "b": self.b,
            "ell_exp_next": self.ell_exp_next,
            "ell_next": self.ell_next,
            "ell_exp": self.ell_exp,
            "ell": self.ell,
            "attempts": self.attempts,
            "w_star": [str(v) for v in self.w_star],
            "x": self.x.to_json_dict(),
            "eta": _frac_str(self.eta),
        }

    @classmethod
    def from_json_dict(cls, doc: dict) -> "StageRecord":
        return cls(
            t=int(doc["t"]),
            j_prev=int(doc["j_prev"]),
            j=int(doc["j"]),
            cond1=bool(doc["cond1"]),
            cond2=bool(doc["cond2"]),
            d_freq=None if doc["d_freq"] is None else _parse_frac(doc["d_freq"]),
            a=int(doc["a"]),
            b=int(doc["b"]),
            ell_exp_next=int(doc["ell_exp_next"]),
            ell_next=int(doc["ell_next"]),
            ell_exp=int(doc["ell_exp"]),
            ell=int(doc["ell"]),
            attempts=int(doc["attempts"]),
            w_star=tuple(int(v) for v in doc["w_star"]),
            x=SAdicNumber.from_json_dict(doc["x"]),
            eta=_parse_frac(doc["eta"]),
        )


def _frac_str(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def _parse_frac(text: str) -> Fraction:
    num, den = text.split("/")
    return Fraction(int(num), int(den))


class PhaseContext:
    """Caches the schedule, alphabets and block-length bases for a profile."""

    def __init__(self, profile: NormalityProfile):
        self.profile = profile
        self.pairs: list[tuple[int, int]] = []
        finite_sets: dict[int, frozenset[int]] = {}
        r_values: set[int] = set()
        for entry in profile.entries:
            if entry.is_all():
                r_values.update(entry.s**m for m in range(1, entry.m_max + 1))
                continue
            exponents = frozenset(entry.exponents)
            finite_sets[entry.s] = exponents
            r_values.update(entry.s**m for m in exponents)
        for s in sorted(finite_sets):
            for n in range(1, profile.n_max + 1):
                if n not in finite_sets[s]:
                    self.pairs.append((s, n))
        if not self.pairs:
            raise ProfileError(
                "no (base, bias exponent) pair is available: every tracked set "
                "of exponents is infinite, which asks for a fully normal "
                "number (out of scope)"
            )
        self.finite_sets = finite_sets
        self.r_enum: tuple[int, ...] = tuple(sorted(r_values))
        self._alphabets: dict[tuple[int, int], AlphabetU] = {}
        self._params: dict[int, PhaseParams] = {}
        self._ell_base: dict[int, int] = {}

    def pair(self, j: int) -> tuple[int, int]:
        return self.pairs[j % len(self.pairs)]

    def r_list(self, j: int) -> tuple[int, ...]:
        return self.r_enum[: j + 1]

    def p_value(self, j: int) -> int:
        """Least p with r^p >= 2(j+1) for every tracked r up to index j."""
        smallest = self.r_list(j)[0]
        p = 1
        while smallest**p < 2 * (j + 1):
            p += 1
        return p

    def alphabet(self, s: int, n: int) -> AlphabetU:
        key = (s, n)
        if key not in self._alphabets:
            alpha = balanced_alphabet(s, set(self.finite_sets[s]), n, self.profile.c)
            verify_alphabet(alpha)
            if alpha.ell_u * s.bit_length() > ENGINE_VALUE_BITS:
                raise ProfileError(
                    f"alphabet for base {s}, bias exponent {n} has block length "
                    f"{alpha.ell_u}; beyond desk scale"
                )
            self._alphabets[key] = alpha
        return self._alphabets[key]

    def params(self, j: int) -> PhaseParams:
        if j not in self._params:
            s, n = self.pair(j)
            alpha = self.alphabet(s, n)
            s_star = s**alpha.ell_u
            self._params[j] = PhaseParams(
                j=j,
                s=s,
                n=n,
                M=alpha.M,
                r_list=self.r_list(j),
                p=self.p_value(j),
                alphabet=alpha,
                s_star=s_star,
                excluded=excluded_values(alpha),
                d_value=alpha.d.value(),
                eps=alpha.bias_eps(),
                ell_base=self._ell_base_for(j),
                eta_lower=log_ratio_lower(s_star - 2, s_star),
            )
        return self._params[j]

    def _ell_base_for(self, j: int) -> int:
        if j not in self._ell_base:
            s, n = self.pair(j)
            alpha = self.alphabet(s, n)
            s_prev, n_prev = self.pair(j - 1) if j > 0 else (s, n)
            alpha_prev = self.alphabet(s_prev, n_prev)
            gap = ceil_log_sum(
                _log_terms(s_prev, alpha_prev.ell_u, s, alpha.ell_u)
            )
            growth_bound = 2 * gap * (j + 2)
            best = 1
            for k, r in enumerate(self.r_list(j)):
                bound = max(growth_bound, 3 * self.p_value(k) * (j + 2))
                best = max(best, ceil_mul_log(Fraction(bound + 1), r))
            self._ell_base[j] = best
        return self._ell_base[j]

    def ell(self, j: int, exponent: int) -> int:
        """Block length for index j after `exponent` adaptive doublings."""
        if exponent < 0 or exponent > MAX_ELL_DOUBLINGS:
            raise InternalInvariantError(f"ell exponent {exponent} out of range")
        return self._ell_base_for(j) << exponent


def _log_terms(s1: int, c1: int, s2: int, c2: int) -> list[tuple[int, int]]:
    """ln(s1^c1) + 3 ln(s2^c2) as integer-coefficient log terms."""
    if s1 == s2:
        return [(c1 + 3 * c2, s1)]
    return [(c1, s1), (3 * c2, s2)]


def growth_gap(ctx: PhaseContext, j_from: int, j_to: int) -> int:
    """ceil(ln s*_{j_from} + 3 ln s*_{j_to}) computed from base factorizations."""
    a_from = ctx.params(j_from).alphabet
    a_to = ctx.params(j_to).alphabet
    return ceil_log_sum(_log_terms(a_from.s, a_from.ell_u, a_to.s, a_to.ell_u))


def condition_one(ctx: PhaseContext, state: StageState, ell_next: int) -> bool:
    """Position growth check: appending the next block (plus the re-anchoring
    gap) must advance every tracked digit position by less than a (j+1)-th of
    its current value.  Vacuously true when no base is tracked yet."""
    jt = state.j
    pp = ctx.params(jt)
    gap = growth_gap(ctx, jt, jt + 1)
    excluded = {pp.s**m for m in pp.M}
    for r in ctx.r_enum[: jt + 2]:
        if r in excluded:
            continue
        lhs = nat_pos(state.b + gap + ell_next, r) - nat_pos(state.b, r)
        if lhs * (jt + 1) >= nat_pos(state.b, r):
            return False
    return True


def condition_two(ctx: PhaseContext, state: StageState) -> tuple[bool, Fraction | None]:
    """Bias check: the bias chunk frequency over all base-s digits produced so
    far must sit below 1/s^n - eps/2.  With no complete chunk yet (the initial
    stage) there is no evidence of bias and the condition fails."""
    pp = ctx.params(state.j)
    positions = nat_pos(state.b, pp.s)
    chunks = positions // pp.n
    if chunks == 0:
        return False, None
    w = extract_digits(state.x, pp.s, 0, positions)
    freq = Fraction(occurrences(w, pp.n)[pp.d_value], chunks)
    return freq < Fraction(1, pp.s**pp.n) - pp.eps / 2, freq


def find_block(
    ctx: PhaseContext,
    j: int,
    a: int,
    y: SAdicNumber,
    ell_eff: int,
    rng: random.Random,
    budget: int = DEFAULT_BUDGET,
) -> tuple[SAdicNumber | None, tuple[int, ...], int]:
    """First block from the seeded candidate stream passing all per-stage
    digit conditions, or (None, (), attempts) when the budget runs out.

    Candidate digits are uniform over the restricted alphabet by rejection
    against the excluded values.  Every check is exact rational arithmetic.
    """
    pp = ctx.params(j)
    s_star = pp.s_star
    if y.base != s_star or y.prec != nat_pos(a, s_star):
        raise InternalInvariantError("anchor precision does not match its position")
    k = nat_pos(a + ell_eff, s_star) - nat_pos(a, s_star)
    z_val, zt_val = pp.excluded
    tolerance = Fraction(1, j + 1)
    bias_cap = Fraction(1, pp.s**pp.n) - pp.eps
    r_checks = sorted(
        ({r for r in pp.r_list} | {r**pp.p for r in pp.r_list})
        - {pp.s**m for m in pp.M}
    )
    for attempt in range(1, budget + 1):
        digits = []
        while len(digits) < k:
            v = rng.randrange(s_star)
            if v == z_val or v == zt_val:
                continue
            digits.append(v)
        candidate = y.append_digits(digits)
        w = _expand_digits(pp, digits)
        if any(block_discrepancy(w, m) >= tolerance for m in pp.M):
            continue
        chunk_total = len(w) // pp.n
        if Fraction(occurrences(w, pp.n)[pp.d_value], chunk_total) >= bias_cap:
            continue
        ok = True
        for r in r_checks:
            window = extract_digits(candidate, r, nat_pos(a, r), nat_pos(a + ell_eff, r))
            if block_discrepancy(window, 1) >= tolerance:
                ok = False
                break
        if ok:
            return candidate, tuple(digits), attempt
    return None, (), budget


def _expand_digits(pp: PhaseParams, digits: list[int] | tuple[int, ...]) -> DigitBlock:
    """Base-s digit block spelled by a sequence of base-s* digits."""
    ell_u = pp.alphabet.ell_u
    out: list[int] = []
    for v in digits:
        out.extend(DigitBlock.from_value(pp.s, v, ell_u).digits)
    return DigitBlock(pp.s, tuple(out))


def step(
    ctx: PhaseContext,
    state: StageState,
    rng: random.Random,
    budget: int = DEFAULT_BUDGET,
) -> tuple[StageState, StageRecord]:
    """One stage transition; retries with doubled block length on exhaustion."""
    exponents = list(state.ell_exponents)
    while True:
        def exp_of(idx: int) -> int:
            return exponents[idx] if idx < len(exponents) else 0

        jt = state.j
        ell_next = ctx.ell(jt + 1, exp_of(jt + 1))
        cond1 = condition_one(ctx, state, ell_next)
        cond2, d_freq = condition_two(ctx, state)
        if cond1 and cond2:
            j_new = jt + 1
            pp_new = ctx.params(j_new)
            interval = AdicInterval(state.x.base, state.x.prec, state.x.numerator)
            a, y = leftmost_tadic_subinterval(interval, state.b, pp_new.s_star)
            if a != state.b + growth_gap(ctx, jt, j_new):
                raise InternalInvariantError("re-anchoring gap mismatch")
        else:
            j_new = jt
            a = state.b
            y = state.x
        ell_used = ctx.ell(j_new, exp_of(j_new))
        x_new, w_star, attempts = find_block(ctx, j_new, a, y, ell_used, rng, budget)
        if x_new is not None:
            break
        while len(exponents) <= j_new:
            exponents.append(0)
        exponents[j_new] += 1
        if exponents[j_new] > MAX_ELL_DOUBLINGS:
            raise InternalInvariantError(
                f"block search kept failing after {MAX_ELL_DOUBLINGS} doublings"
            )
    b_new = a + ell_used
    pp = ctx.params(j_new)
    while len(exponents) <= j_new + 1:
        exponents.append(0)
    record = StageRecord(
        t=state.t + 1,
        j_prev=jt,
        j=j_new,
        cond1=cond1,
        cond2=cond2,
        d_freq=d_freq,
        a=a,
        b=b_new,
        ell_exp_next=exp_of(jt + 1),
        ell_next=ell_next,
        ell_exp=exp_of(j_new),
        ell=ell_used,
        attempts=attempts,
        w_star=w_star,
        x=x_new,
        eta=pp.eta_lower,
    )
    new_state = StageState(
        t=state.t + 1,
        j=j_new,
        b=b_new,
        x=x_new,
        ell_exponents=tuple(exponents),
    )
    return new_state, record


def initial_state(ctx: PhaseContext) -> StageState:
    s_star = ctx.params(0).s_star
    return StageState(t=0, j=0, b=0, x=SAdicNumber(s_star, 0, 0), ell_exponents=(0,))


def run(
    profile: NormalityProfile, budget: int = DEFAULT_BUDGET
) -> tuple[SAdicNumber, list[StageRecord]]:
    """Iterate stages until the nat position reaches profile.until_b."""
    ctx = PhaseContext(profile)
    state = initial_state(ctx)
    rng = random.Random(profile.seed)
    records: list[StageRecord] = []
    while state.b < profile.until_b:
        state, record = step(ctx, state, rng, budget)
        records.append(record)
    return state.x, records


__all__ = [
    "PhaseParams",
    "PhaseContext",
    "StageState",
    "StageRecord",
    "condition_one",
    "condition_two",
    "find_block",
    "growth_gap",
    "initial_state",
    "step",
    "run",
    "DEFAULT_BUDGET",
]
