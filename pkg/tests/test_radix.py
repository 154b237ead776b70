import cmath
import math
import random
from fractions import Fraction

import pytest

from simplenorm.blocks import DigitBlock, block_discrepancy
from simplenorm.radix import (
    AdicInterval,
    ExpSumQuery,
    SAdicNumber,
    exp_sum,
    extract_digits,
    extract_digits_fraction,
    leftmost_tadic_subinterval,
    leveque_bound,
    leveque_params,
    nat_pos,
    sadic_subinterval,
)
from simplenorm.rigmath import ceil_log_sum


def test_sadic_number_validation():
    with pytest.raises(ValueError):
        SAdicNumber(2, 2, 4)
    with pytest.raises(ValueError):
        SAdicNumber(2, -1, 0)
    x = SAdicNumber(3, 2, 5)
    assert x.as_fraction() == Fraction(5, 9)
    assert x.ulp() == Fraction(1, 9)
    y = x.append_digits([1, 2])
    assert y.as_fraction() == Fraction(5 * 9 + 5, 81)


def test_sadic_json_round_trip():
    x = SAdicNumber(65536, 3, 123456789)
    assert SAdicNumber.from_json_dict(x.to_json_dict()) == x


def test_extract_digits_examples():
    quarter = SAdicNumber(2, 2, 1)
    assert extract_digits(quarter, 3, 0, 4).to_string() == "0202"
    assert extract_digits(SAdicNumber(7, 1, 0), 5, 0, 6).to_string() == "000000"
    assert extract_digits(SAdicNumber(2, 1, 1), 2, 0, 3).to_string() == "100"
    with pytest.raises(ValueError):
        extract_digits(quarter, 3, 3, 3)


def test_extract_digits_truncation_bound():
    rng = random.Random(21)
    for _ in range(200):
        base = rng.choice([2, 3, 5, 65536])
        prec = rng.randrange(1, 5)
        x = SAdicNumber(base, prec, rng.randrange(base**prec))
        r = rng.choice([2, 3, 7, 10])
        i1 = rng.randrange(1, 30)
        digits = extract_digits(x, r, 0, i1)
        partial = sum(
            Fraction(d, r ** (j + 1)) for j, d in enumerate(digits.digits)
        )
        assert partial <= x.as_fraction() < partial + Fraction(1, r**i1)


def test_extract_digits_windows_are_consistent():
    rng = random.Random(22)
    for _ in range(100):
        x = SAdicNumber(3, 6, rng.randrange(3**6))
        r = rng.choice([2, 5])
        full = extract_digits(x, r, 0, 24).digits
        i0 = rng.randrange(0, 23)
        i1 = rng.randrange(i0 + 1, 25 - 0)
        window = extract_digits(x, r, i0, min(i1, 24)).digits
        assert window == full[i0 : min(i1, 24)]


def test_sadic_subinterval_examples():
    iv = sadic_subinterval(Fraction(1, 10), Fraction(2, 5), 2)
    assert (iv.lo(), iv.hi()) == (Fraction(1, 8), Fraction(1, 4))
    iv = sadic_subinterval(Fraction(0), Fraction(1), 2)
    assert iv.length() == Fraction(1, 2) and iv.lo() == 0
    with pytest.raises(ValueError):
        sadic_subinterval(Fraction(1, 2), Fraction(1, 2), 2)


def test_sadic_subinterval_contract_randomized():
    rng = random.Random(23)
    for _ in range(500):
        s = rng.choice([2, 3, 5, 10])
        den = rng.randrange(2, 10**6)
        a, b = sorted(rng.sample(range(den + 1), 2))
        lo, hi = Fraction(a, den), Fraction(b, den)
        if lo == hi:
            continue
        iv = sadic_subinterval(lo, hi, s)
        assert lo <= iv.lo() and iv.hi() <= hi
        assert iv.length() >= (hi - lo) / (2 * s)


def test_leftmost_tadic_example():
    iv = AdicInterval(2, 2, 0)  # [0, 1/4) with prec nat_pos(1,2)=2
    a, y = leftmost_tadic_subinterval(iv, 1, 3)
    assert a == 5
    assert y == SAdicNumber(3, 5, 0)


def test_leftmost_tadic_contract_randomized():
    rng = random.Random(24)
    for _ in range(300):
        s = rng.choice([2, 3, 5])
        t = rng.choice([2, 3, 5, 7])
        b = rng.randrange(1, 60)
        prec = nat_pos(b, s)
        iv = AdicInterval(s, prec, rng.randrange(s**prec))
        a, y = leftmost_tadic_subinterval(iv, b, t)
        assert a == b + ceil_log_sum([(1, s), (3, t)])
        assert y.base == t and y.prec == nat_pos(a, t)
        lo, hi = y.as_fraction(), y.as_fraction() + y.ulp()
        assert iv.lo() <= lo and hi <= iv.hi()
        # leftmost: the next cell to the left pokes out of the interval
        assert y.numerator == 0 or Fraction(y.numerator - 1, t**y.prec) < iv.lo()


def test_position_growth_bound():
    # re-anchoring moves any base's digit position by at most twice the gap
    rng = random.Random(25)
    for _ in range(200):
        s = rng.choice([2, 3, 5])
        t = rng.choice([2, 3, 5, 7])
        b = rng.randrange(1, 10**4)
        gap = ceil_log_sum([(1, s), (3, t)])
        a = b + gap
        for r in (2, 3, 5, 7, 11):
            assert nat_pos(a, r) - nat_pos(b, r) <= 2 * gap


def test_exp_sum_examples():
    q = ExpSumQuery(Fraction(1, 2), (3,), (1,), 1, 2)
    assert abs(exp_sum(q) - 4.0) < 1e-9
    q0 = ExpSumQuery(Fraction(0), (2, 3), (1, 2), 2, 5)
    expected = sum(
        (nat_pos(7, r) - nat_pos(2, r)) ** 2 for r in (2, 3) for _ in (1, 2)
    )
    assert abs(exp_sum(q0) - expected) < 1e-9


def test_exp_sum_against_direct_float_evaluation():
    rng = random.Random(26)
    for _ in range(20):
        x = Fraction(rng.randrange(0, 512), 512)
        bases = (2, 3)
        mult = (1, 2, 3)
        a, ell = rng.randrange(0, 5), rng.randrange(1, 12)
        total = 0.0
        for t in mult:
            for r in bases:
                acc = 0j
                for j in range(nat_pos(a, r) + 1, nat_pos(a + ell, r) + 1):
                    frac = (r**j * t * x) % 1
                    acc += cmath.exp(2j * math.pi * float(frac))
                total += abs(acc) ** 2
        assert abs(exp_sum(ExpSumQuery(x, bases, mult, a, ell)) - total) < 1e-7


def test_exp_sum_validation():
    with pytest.raises(ValueError):
        ExpSumQuery(Fraction(1, 2), (3,), (0,), 1, 2)
    with pytest.raises(ValueError):
        ExpSumQuery(Fraction(3, 2), (3,), (1,), 1, 2)


def test_leveque_params():
    t_set, gamma = leveque_params(Fraction(1))
    assert t_set == (1, 2) and gamma == Fraction(1, 2)
    t_set, gamma = leveque_params(Fraction(1, 2))
    assert t_set == tuple(range(1, 11)) and gamma == Fraction(1, 16)
    with pytest.raises(ValueError):
        leveque_params(Fraction(0))
    # monotone: smaller eps never shrinks the multiplier set
    sizes = [len(leveque_params(Fraction(k, 10))[0]) for k in range(10, 0, -1)]
    assert sizes == sorted(sizes)


def test_leveque_bound_dominates_discrepancy():
    rng = random.Random(27)
    x0 = SAdicNumber(2, 0, 0)
    for _ in range(60):
        s = rng.choice([2, 3])
        length = rng.randrange(1, 65)
        w = DigitBlock(s, tuple(rng.randrange(s) for _ in range(length)))
        prec = rng.randrange(0, 6)
        x = SAdicNumber(s, prec, rng.randrange(s**prec) if prec else 0)
        bound = leveque_bound(w, x, 40)
        assert float(block_discrepancy(w, 1)) <= bound + 1e-9
        assert bound <= (6 / math.pi**2 * (40 + 1)) ** (1 / 3) + 1e-9


def test_leveque_bound_against_direct_summation():
    # independent double-sum oracle for the alternating block
    w = DigitBlock.from_string("01" * 16, 2)
    x = SAdicNumber(2, 0, 0)
    t_cap = 50
    x_w = Fraction(w.value(), 2 ** len(w))
    total = 0.0
    for t in range(1, t_cap + 1):
        acc = 0j
        for j in range(1, len(w) + 1):
            acc += cmath.exp(2j * math.pi * float((2**j * t * x_w) % 1))
        total += abs(acc / len(w)) ** 2 / t**2
    total += 1 / (t_cap + 1)
    expected = (6 / math.pi**2 * total) ** (1 / 3)
    assert abs(leveque_bound(w, x, t_cap) - expected) < 1e-9
