"""Exact adic rationals, digit extraction in arbitrary bases, adic subinterval
selection, and the analytic diagnostics (exponential sums, discrepancy upper
bounds) used to audit the construction.

Every position is exact: digit positions come from rigorous ceilings (see
rigmath) and digit values from integer arithmetic, never floats.  Floats
appear only as the final rendering of transcendental diagnostics.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction
from math import pi

from .blocks import DigitBlock
from .errors import InternalInvariantError
from .rigmath import ceil_div_pi_squared, ceil_log_sum, nat_pos


@dataclass(frozen=True)
class SAdicNumber:
    """Exact rational numerator * base^(-prec) in [0, 1)."""

    base: int
    prec: int
    numerator: int

    def __post_init__(self) -> None:
        if self.base < 2:
            raise ValueError(f"base must be >= 2, got {self.base}")
        if self.prec < 0:
            raise ValueError(f"precision must be >= 0, got {self.prec}")
        if not 0 <= self.numerator < self.base**self.prec:
            raise ValueError("numerator out of range for the stated precision")

    def as_fraction(self) -> Fraction:
        return Fraction(self.numerator, self.base**self.prec)

    def ulp(self) -> Fraction:
        """Length of the adic interval this number is the left endpoint of."""
        return Fraction(1, self.base**self.prec)

    def append_digits(self, digits: list[int]) -> "SAdicNumber":
        """Extend precision by placing the given base digits just below it."""
        num = self.numerator
        for d in digits:
            if not 0 <= d < self.base:
                raise ValueError(f"digit {d} out of range for base {self.base}")
            num = num * self.base + d
        return SAdicNumber(self.base, self.prec + len(digits), num)

    def to_json_dict(self) -> dict:
        return {"base": self.base, "prec": self.prec, "numerator": str(self.numerator)}

    @classmethod
    def from_json_dict(cls, doc: dict) -> "SAdicNumber":
        return cls(int(doc["base"]), int(doc["prec"]), int(doc["numerator"]))


@dataclass(frozen=True)
class AdicInterval:
    """Half-open interval [index * base^(-prec), (index+1) * base^(-prec))."""

    base: int
    prec: int
    index: int

    def __post_init__(self) -> None:
        if self.base < 2:
            raise ValueError(f"base must be >= 2, got {self.base}")
        if not 0 <= self.index < self.base**self.prec:
            raise ValueError("index out of range for the stated precision")

    def lo(self) -> Fraction:
        return Fraction(self.index, self.base**self.prec)

    def hi(self) -> Fraction:
        return Fraction(self.index + 1, self.base**self.prec)

    def length(self) -> Fraction:
        return Fraction(1, self.base**self.prec)


@dataclass(frozen=True)
class ExpSumQuery:
    """Inputs of the quadratic exponential-sum diagnostic."""

    x: Fraction
    bases: tuple[int, ...]
    multipliers: tuple[int, ...]
    a: int
    ell: int

    def __post_init__(self) -> None:
        if not 0 <= self.x < 1:
            raise ValueError("x must lie in [0, 1)")
        if self.ell < 1:
            raise ValueError("window length must be >= 1")
        if self.a < 0:
            raise ValueError("start position must be >= 0")
        if any(r < 2 for r in self.bases):
            raise ValueError("bases must be >= 2")
        if any(t == 0 for t in self.multipliers):
            raise ValueError("multipliers must be non-zero")


def _digits_of_rational(num: int, den: int, r: int, i0: int, i1: int) -> tuple[int, ...]:
    """Base-r digits of num/den at positions i0+1 .. i1 (digit_j is the
    coefficient of r^(-j)), by one integer division."""
    if i0 < 0 or i1 <= i0:
        raise ValueError(f"need 0 <= i0 < i1, got ({i0}, {i1})")
    scaled = num * r**i1 // den
    count = i1 - i0
    digits = []
    for _ in range(count):
        digits.append(scaled % r)
        scaled //= r
    return tuple(reversed(digits))


def extract_digits(x: SAdicNumber, r: int, i0: int, i1: int) -> DigitBlock:
    """Base-r digits of x at positions i0+1 .. i1, computed exactly."""
    return DigitBlock(r, _digits_of_rational(x.numerator, x.base**x.prec, r, i0, i1))


def extract_digits_fraction(x: Fraction, r: int, i0: int, i1: int) -> DigitBlock:
    """Base-r digits of an arbitrary rational in [0, 1)."""
    if not 0 <= x < 1:
        raise ValueError("x must lie in [0, 1)")
    return DigitBlock(r, _digits_of_rational(x.numerator, x.denominator, r, i0, i1))


def _frac_ceil(q: Fraction) -> int:
    return -((-q.numerator) // q.denominator)


def sadic_subinterval(lo: Fraction, hi: Fraction, s: int) -> AdicInterval:
    """An s-adic interval inside [lo, hi) of length at least (hi-lo)/(2s).

    Take the least m with s^-m below the target length.  If a grid cell of
    that size fits, use the leftmost such cell; otherwise exactly one grid
    point falls inside, and one of the two level-(m+1) cells flanking it
    fits.  Inputs with hi - lo >= 1 behave like the full unit interval.
    """
    lo, hi = Fraction(lo), Fraction(hi)
    if not 0 <= lo < hi <= 1:
        raise ValueError("need 0 <= lo < hi <= 1")
    width = hi - lo
    m = 1
    while Fraction(1, s**m) >= width:
        m += 1
    scale = s**m
    k = _frac_ceil(lo * scale)
    if Fraction(k + 1, scale) <= hi:
        return AdicInterval(s, m, k)
    # No cell fits: k/scale is the unique grid point inside; descend one level.
    child_scale = scale * s
    if k >= 1 and Fraction(k * s - 1, child_scale) >= lo:
        return AdicInterval(s, m + 1, k * s - 1)
    if Fraction(k * s + 1, child_scale) <= hi:
        return AdicInterval(s, m + 1, k * s)
    raise InternalInvariantError("neither flanking cell fits the interval")


def leftmost_tadic_subinterval(
    iv: AdicInterval, b: int, t: int
) -> tuple[int, SAdicNumber]:
    """Left endpoint of the leftmost base-t grid cell of nat size a inside iv,
    where a = b + ceil(ln s + 3 ln t) and iv has nat precision b in its base.

    Existence is guaranteed by the choice of a; failure is an internal error.
    """
    if iv.prec != nat_pos(b, iv.base):
        raise ValueError("interval precision does not match the stated nat position")
    a = b + ceil_log_sum([(1, iv.base), (3, t)])
    t_prec = nat_pos(a, t)
    t_scale = t**t_prec
    s_scale = iv.base**iv.prec
    k = -((-iv.index * t_scale) // s_scale)  # ceil(lo * t_scale)
    if (k + 1) * s_scale > (iv.index + 1) * t_scale:
        raise InternalInvariantError("no adic cell of the guaranteed size fits")
    return a, SAdicNumber(t, t_prec, k)


def exp_sum(query: ExpSumQuery) -> float:
    """Sum over multipliers t and bases r of |sum_j e(r^j t x)|^2, the inner
    sum running over digit positions (nat_pos(a,r), nat_pos(a+ell,r)].

    Arguments r^j t x are reduced mod 1 in exact rational arithmetic before
    any transcendental call, in a fixed iteration order (sorted multipliers,
    sorted bases, ascending j) so results do not depend on scheduling.
    """
    x = query.x
    total = 0.0
    for t in sorted(query.multipliers):
        for r in sorted(query.bases):
            j0 = nat_pos(query.a, r)
            j1 = nat_pos(query.a + query.ell, r)
            num, den = x.numerator * t, x.denominator
            power = pow(r, j0 + 1, den) if den > 1 else 0
            acc = 0 + 0j
            for _ in range(j0 + 1, j1 + 1):
                frac = (power * num) % den
                acc += cmath.exp(2j * pi * (frac / den))
                power = (power * r) % den if den > 1 else 0
            total += abs(acc) ** 2
    return total


def leveque_params(eps: Fraction) -> tuple[tuple[int, ...], Fraction]:
    """Multiplier set {1..k} and threshold gamma = eps^3/2 such that small
    normalized exponential sums for all multipliers force discrepancy < eps.

    k = ceil(12 / (eps^3 pi^2)), computed with a rigorous ceiling.
    """
    eps = Fraction(eps)
    if not 0 < eps <= 1:
        raise ValueError("eps must lie in (0, 1]")
    k = ceil_div_pi_squared(12 / eps**3)
    return tuple(range(1, k + 1)), eps**3 / 2


def leveque_bound(w: DigitBlock, x: SAdicNumber, t_cap: int) -> float:
    """Upper bound on the discrepancy of w from truncated exponential sums.

    Appends w to x at positions prec+1 .. prec+|w| (same base), evaluates the
    classical cube-root bound with multipliers 1..t_cap plus the 1/(t_cap+1)
    tail estimate.  Exceeds D(w, B_s) up to float rounding.
    """
    if w.base != x.base:
        raise ValueError("block and context must share a base")
    if t_cap < 1:
        raise ValueError("t_cap must be >= 1")
    s = w.base
    ell = len(w)
    if ell == 0:
        raise ValueError("block must be non-empty")
    x_w = x.append_digits(list(w.digits))
    num = x_w.numerator
    den = s ** x_w.prec
    a = x.prec
    acc_total = 0.0
    for t in range(1, t_cap + 1):
        inner = 0 + 0j
        # s^j * x_w mod 1 = (num mod s^(prec-j)) / s^(prec-j) for j <= prec
        for j in range(a + 1, a + ell + 1):
            rem_scale = s ** (x_w.prec - j)
            frac_num = num % rem_scale
            inner += cmath.exp(2j * pi * ((t * frac_num % rem_scale) / rem_scale))
        acc_total += abs(inner / ell) ** 2 / (t * t)
    acc_total += 1.0 / (t_cap + 1)
    return (6.0 / pi**2 * acc_total) ** (1.0 / 3.0)


__all__ = [
    "SAdicNumber",
    "AdicInterval",
    "ExpSumQuery",
    "nat_pos",
    "extract_digits",
    "extract_digits_fraction",
    "sadic_subinterval",
    "leftmost_tadic_subinterval",
    "exp_sum",
    "leveque_params",
    "leveque_bound",
]
