"""Certified rational enclosures for ln, pi and e, and rigorous ceilings.

Positions in the construction are measured in nats and converted to digit
positions of a base r through ceilings of the form ceil(b / ln r).  Floating
point cannot decide such a ceiling near an integer boundary, so every ceiling
here is computed from exact rational bounds that are refined until the answer
is unambiguous.  All quantities whose ceilings we take (b/ln r, sums of
integer multiples of logs of integers >= 2, 12/(eps^3 pi^2)) are irrational,
so refinement always terminates.
"""

from __future__ import annotations

from fractions import Fraction

_LOG_CACHE: dict[int, tuple[int, Fraction, Fraction]] = {}

_DEFAULT_BITS = 96


def _atanh_bounds(y: Fraction, bits: int) -> tuple[Fraction, Fraction]:
    """Enclosure of atanh(y) for 0 <= y <= 1/3 via the odd power series.

    The truncation error after the term of order 2T+1 is positive and at most
    y^(2T+3) / ((2T+3) (1 - y^2)).
    """
    if y == 0:
        return Fraction(0), Fraction(0)
    # |y| <= 1/3 gives at least ~3.17 bits per term.
    terms = bits // 3 + 4
    acc = Fraction(0)
    power = y
    y2 = y * y
    for i in range(terms):
        acc += power / (2 * i + 1)
        power *= y2
    tail = power / ((2 * terms + 1) * (1 - y2))
    return acc, acc + tail


def _log_frac_bounds(num: int, den: int, bits: int) -> tuple[Fraction, Fraction]:
    """Enclosure of ln(num/den) for 1 <= num/den <= 2."""
    y = Fraction(num - den, num + den)
    lo, hi = _atanh_bounds(y, bits)
    return 2 * lo, 2 * hi


def log_bounds(k: int, bits: int = _DEFAULT_BITS) -> tuple[Fraction, Fraction]:
    """Certified enclosure [lo, hi] of ln k for an integer k >= 2.

    Results are cached per k and only recomputed when more precision is
    requested than is already available.
    """
    if k < 2:
        raise ValueError(f"log_bounds requires k >= 2, got {k}")
    cached = _LOG_CACHE.get(k)
    if cached is not None and cached[0] >= bits:
        return cached[1], cached[2]
    # Reduce to k = 2^e * x with x in [1, 2]; ln k = e ln 2 + ln x.
    e = k.bit_length() - 1
    ln2_lo, ln2_hi = (Fraction(0), Fraction(0))
    if e > 0:
        if k == 1 << e:
            ln2_lo, ln2_hi = _log_frac_bounds(2, 1, bits + e.bit_length() + 2)
            lo, hi = e * ln2_lo, e * ln2_hi
            _LOG_CACHE[k] = (bits, lo, hi)
            return lo, hi
        ln2_lo, ln2_hi = _log_frac_bounds(2, 1, bits + e.bit_length() + 2)
    x_lo, x_hi = _log_frac_bounds(k, 1 << e, bits + 2)
    lo = e * ln2_lo + x_lo
    hi = e * ln2_hi + x_hi
    _LOG_CACHE[k] = (bits, lo, hi)
    return lo, hi


def _frac_ceil(q: Fraction) -> int:
    return -((-q.numerator) // q.denominator)


def _frac_floor(q: Fraction) -> int:
    return q.numerator // q.denominator


def nat_pos(b: int, r: int) -> int:
    """Digit position ceil(b / ln r) of base r corresponding to b nats.

    Exact for every integer b >= 0 and base r >= 2: rational bounds on ln r
    are refined until both bound on b/ln r share a ceiling.  b/ln r is never
    an integer for b >= 1 (that would make e^(b/m) an integer), so the loop
    terminates.
    """
    if r < 2:
        raise ValueError(f"base must be >= 2, got {r}")
    if b < 0:
        raise ValueError(f"position must be >= 0, got {b}")
    if b == 0:
        return 0
    bits = _DEFAULT_BITS
    while True:
        lo, hi = log_bounds(r, bits)
        c_lo = _frac_ceil(Fraction(b) / hi)
        c_hi = _frac_ceil(Fraction(b) / lo)
        if c_lo == c_hi:
            return c_lo
        bits *= 2


def ceil_log_sum(terms: list[tuple[int, int]]) -> int:
    """Rigorous ceil of sum(c * ln k) over (c, k) pairs with c >= 1, k >= 2.

    The sum equals ln(prod k^c), the log of an integer >= 2, hence is
    irrational and the ceiling is decidable.
    """
    if not terms:
        raise ValueError("empty log sum")
    bits = _DEFAULT_BITS
    while True:
        lo = Fraction(0)
        hi = Fraction(0)
        for c, k in terms:
            if c < 1 or k < 2:
                raise ValueError(f"bad log-sum term ({c}, {k})")
            b_lo, b_hi = log_bounds(k, bits)
            lo += c * b_lo
            hi += c * b_hi
        c_lo = _frac_ceil(lo)
        c_hi = _frac_ceil(hi)
        if c_lo == c_hi:
            return c_lo
        bits *= 2


def ceil_mul_log(q: Fraction, r: int) -> int:
    """Rigorous ceil of q * ln r for a positive rational q and base r >= 2."""
    if q <= 0:
        raise ValueError(f"multiplier must be positive, got {q}")
    bits = _DEFAULT_BITS
    while True:
        lo, hi = log_bounds(r, bits)
        c_lo = _frac_ceil(q * lo)
        c_hi = _frac_ceil(q * hi)
        if c_lo == c_hi:
            return c_lo
        bits *= 2


def log_ratio_lower(a: int, b: int, bits: int = _DEFAULT_BITS) -> Fraction:
    """Certified rational lower bound of ln a / ln b for integers a, b >= 2."""
    a_lo, _ = log_bounds(a, bits)
    _, b_hi = log_bounds(b, bits)
    return a_lo / b_hi


def _atan_inv_bounds(m: int, bits: int) -> tuple[Fraction, Fraction]:
    """Enclosure of atan(1/m) via the alternating series (partial sums bracket)."""
    x = Fraction(1, m)
    x2 = x * x
    # terms shrink by m^2 per step
    terms = bits // (2 * m.bit_length() - 1) + 4
    acc = Fraction(0)
    power = x
    below = Fraction(0)
    above = Fraction(0)
    for i in range(terms):
        term = power / (2 * i + 1)
        acc = acc + term if i % 2 == 0 else acc - term
        if i % 2 == 0:
            above = acc
        else:
            below = acc
        power *= x2
    return below, above


def pi_bounds(bits: int = _DEFAULT_BITS) -> tuple[Fraction, Fraction]:
    """Certified enclosure of pi via 16 atan(1/5) - 4 atan(1/239)."""
    a5_lo, a5_hi = _atan_inv_bounds(5, bits + 8)
    a239_lo, a239_hi = _atan_inv_bounds(239, bits + 8)
    return 16 * a5_lo - 4 * a239_hi, 16 * a5_hi - 4 * a239_lo


def e_bounds(terms: int = 30) -> tuple[Fraction, Fraction]:
    """Certified enclosure of e from the factorial series.

    The tail after 1/terms! is below 2/(terms+1)!.
    """
    acc = Fraction(0)
    fact = 1
    for i in range(terms + 1):
        if i > 0:
            fact *= i
        acc += Fraction(1, fact)
    tail = Fraction(2, fact * (terms + 1))
    return acc, acc + tail


def ceil_div_pi_squared(c: Fraction) -> int:
    """Rigorous ceil of c / pi^2 for a positive rational c."""
    if c <= 0:
        raise ValueError(f"numerator must be positive, got {c}")
    bits = _DEFAULT_BITS
    while True:
        pi_lo, pi_hi = pi_bounds(bits)
        c_lo = _frac_ceil(c / (pi_hi * pi_hi))
        c_hi = _frac_ceil(c / (pi_lo * pi_lo))
        if c_lo == c_hi:
            return c_lo
        bits *= 2
