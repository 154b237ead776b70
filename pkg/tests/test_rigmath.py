import random
from fractions import Fraction

import mpmath
import pytest

from simplenorm.rigmath import (
    ceil_div_pi_squared,
    ceil_log_sum,
    ceil_mul_log,
    e_bounds,
    log_bounds,
    log_ratio_lower,
    nat_pos,
    pi_bounds,
)


def test_nat_pos_known_values():
    assert nat_pos(1, 2) == 2
    assert nat_pos(2, 2) == 3
    assert nat_pos(1, 3) == 1
    assert nat_pos(0, 17) == 0


def test_nat_pos_rejects_bad_inputs():
    with pytest.raises(ValueError):
        nat_pos(1, 1)
    with pytest.raises(ValueError):
        nat_pos(-1, 2)


def test_nat_pos_monotone_in_b():
    for r in (2, 3, 10, 64):
        prev = 0
        for b in range(0, 200):
            cur = nat_pos(b, r)
            assert cur >= prev
            prev = cur


def test_nat_pos_against_mpmath():
    mpmath.mp.dps = 60
    rng = random.Random(1)
    for _ in range(300):
        b = rng.randrange(1, 10**6)
        r = rng.randrange(2, 65)
        expected = int(mpmath.ceil(b / mpmath.ln(r)))
        assert nat_pos(b, r) == expected


def test_log_bounds_enclose_mpmath():
    mpmath.mp.dps = 60
    for k in list(range(2, 70)) + [65536, 3**36, 2**200 - 1]:
        lo, hi = log_bounds(k, 128)
        truth = mpmath.ln(k)
        assert lo < hi
        assert mpmath.mpf(lo.numerator) / lo.denominator <= truth
        assert mpmath.mpf(hi.numerator) / hi.denominator >= truth
        assert hi - lo < Fraction(1, 2**100)


def test_ceil_log_sum_known():
    # ln 2 + 3 ln 3 = 3.9889...
    assert ceil_log_sum([(1, 2), (3, 3)]) == 4
    # 4 ln 65536 = 44.36...
    assert ceil_log_sum([(4, 65536)]) == 45
    assert ceil_log_sum([(64, 2)]) == 45


def test_ceil_mul_log_matches_mpmath():
    mpmath.mp.dps = 50
    rng = random.Random(2)
    for _ in range(200):
        q = Fraction(rng.randrange(1, 10**6), rng.randrange(1, 1000))
        r = rng.randrange(2, 65)
        truth = int(mpmath.ceil(mpmath.mpf(q.numerator) / q.denominator * mpmath.ln(r)))
        assert ceil_mul_log(q, r) == truth


def test_pi_and_e_bounds():
    lo, hi = pi_bounds(128)
    assert lo < hi and hi - lo < Fraction(1, 2**100)
    # pi = 3.141592653589793238462...
    assert lo < Fraction(3141592653589793239, 10**18) and hi > Fraction(
        3141592653589793238, 10**18
    )
    elo, ehi = e_bounds()
    assert elo < ehi
    # e = 2.718281828459045235360...
    assert elo < Fraction(2718281828459045236, 10**18) and ehi > Fraction(
        2718281828459045235, 10**18
    )


def test_ceil_div_pi_squared_known():
    assert ceil_div_pi_squared(Fraction(12)) == 2
    assert ceil_div_pi_squared(Fraction(96)) == 10


def test_log_ratio_lower_is_lower_bound():
    mpmath.mp.dps = 50
    for a, b in [(65534, 65536), (3**36 - 2, 3**36), (7, 11)]:
        bound = log_ratio_lower(a, b)
        truth = mpmath.ln(a) / mpmath.ln(b)
        assert mpmath.mpf(bound.numerator) / bound.denominator <= truth
        assert truth - (mpmath.mpf(bound.numerator) / bound.denominator) < mpmath.mpf(10) ** -20
