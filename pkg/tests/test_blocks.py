import random
from collections import Counter
from fractions import Fraction
from math import lcm

import pytest

from simplenorm.blocks import (
    DigitBlock,
    block_discrepancy,
    chunk_values,
    count_low_discrepancy,
    discrepancy,
    inequivalent_block_pair,
    is_balanced,
    is_block_equivalent,
    occurrences,
    parse_blocks,
)
from simplenorm.errors import EnumerationTooLarge


def blk(text, base=2):
    return DigitBlock.from_string(text, base)


def test_digit_block_validation():
    with pytest.raises(ValueError):
        DigitBlock(1, (0,))
    with pytest.raises(ValueError):
        DigitBlock(2, (0, 2))
    assert DigitBlock(2, ()).value() == 0
    assert blk("1101").value() == 13
    assert DigitBlock.from_value(3, 14, 4).to_string() == "0112"
    with pytest.raises(ValueError):
        DigitBlock.from_value(2, 9, 3)


def test_parse_blocks_examples():
    assert [b.to_string() for b in parse_blocks(blk("110100"), 2)] == ["11", "01", "00"]
    assert [b.to_string() for b in parse_blocks(blk("10111"), 2)] == ["10", "11"]
    assert [b.to_string() for b in parse_blocks(blk("011"), 1)] == ["0", "1", "1"]
    assert parse_blocks(blk("1"), 2) == []


def test_discrepancy_examples():
    assert discrepancy([0, 0, 1, 1], 2) == 0
    assert discrepancy([0, 0, 0, 1], 2) == Fraction(1, 4)
    assert discrepancy([0, 0, 0, 0], 2) == Fraction(1, 2)
    with pytest.raises(ValueError):
        discrepancy([], 2)


def test_discrepancy_range_and_zero_iff_uniform():
    rng = random.Random(11)
    for _ in range(300):
        size = rng.randrange(2, 6)
        length = rng.randrange(1, 40)
        items = [rng.randrange(size) for _ in range(length)]
        d = discrepancy(items, size)
        assert 0 <= d <= 1 - Fraction(1, size)
        counts = Counter(items)
        uniform = len(counts) == size and len(set(counts.values())) == 1
        assert (d == 0) == uniform


def test_occurrence_counts_sum():
    rng = random.Random(12)
    for _ in range(100):
        base = rng.choice([2, 3, 5])
        w = DigitBlock(base, tuple(rng.randrange(base) for _ in range(rng.randrange(1, 60))))
        m = rng.randrange(1, 5)
        assert sum(occurrences(w, m).values()) == len(w) // m


def test_block_equivalence_examples():
    assert is_block_equivalent(blk("10"), blk("01"), {1})
    assert not is_block_equivalent(blk("10"), blk("01"), {2})
    w = blk("110100")
    assert is_block_equivalent(w, w, {1, 2, 3})
    with pytest.raises(ValueError):
        is_block_equivalent(blk("10"), blk("0110"), {1})
    with pytest.raises(ValueError):
        is_block_equivalent(blk("10"), blk("01"), {4})


def test_inequivalent_pair_small():
    for s in (2, 3, 7):
        u, v = inequivalent_block_pair(s, {1}, 2)
        assert u.to_string() == "10" and v.to_string() == "01"
        u, v = inequivalent_block_pair(s, set(), 1)
        assert u.to_string() == "0" and v.to_string() == "1"


def test_inequivalent_pair_worked_example():
    u, v = inequivalent_block_pair(2, {2, 3}, 4)
    assert len(u) == len(v) == 48
    assert [i for i, d in enumerate(u.digits) if d == 1] == [0, 15, 28, 41]
    assert is_block_equivalent(u, v, {1, 2, 3})
    assert not is_block_equivalent(u, v, {4})


def test_inequivalent_pair_grid_contract():
    cases = [
        (2, set(), 2),
        (2, set(), 3),
        (3, {1}, 3),
        (5, {1, 2}, 3),
        (2, {1, 3}, 2),
        (3, {1, 2, 3}, 4),
    ]
    for s, moduli, n in cases:
        u, v = inequivalent_block_pair(s, moduli, n)
        assert len(u) == len(v)
        assert len(u) % lcm(*(moduli | {n})) == 0
        assert is_block_equivalent(u, v, moduli)
        assert not is_block_equivalent(u, v, {n})


def test_inequivalent_pair_rejects_divisible():
    with pytest.raises(ValueError):
        inequivalent_block_pair(2, {4}, 2)
    with pytest.raises(ValueError):
        inequivalent_block_pair(2, {1}, 1)


def test_is_balanced():
    assert is_balanced(blk("00011011"), 2)
    assert not is_balanced(blk("0000"), 1)
    assert is_balanced(blk("0011"), 1)
    assert not is_balanced(blk("001"), 1)  # length not a multiple of s^m count
    with pytest.raises(ValueError):
        is_balanced(blk("0011"), 3)


def test_count_low_discrepancy():
    assert count_low_discrepancy(2, 2, Fraction(6, 10)) == 4
    assert count_low_discrepancy(2, 2, Fraction(3, 10)) == 2
    assert count_low_discrepancy(3, 2, Fraction(2)) == 9
    with pytest.raises(EnumerationTooLarge):
        count_low_discrepancy(2, 30, Fraction(1, 10))


def test_count_low_discrepancy_matches_direct_scan():
    # independent re-count via binomial structure for the binary alphabet
    from math import comb

    length, eps = 12, Fraction(15, 100)
    lo = length * (Fraction(1, 2) - eps)
    hi = length * (Fraction(1, 2) + eps)
    expected = sum(comb(length, k) for k in range(length + 1) if lo < k < hi)
    assert count_low_discrepancy(2, length, eps) == expected


def test_chunk_values_match_parse_blocks():
    rng = random.Random(13)
    for _ in range(50):
        base = rng.choice([2, 3, 4])
        w = DigitBlock(base, tuple(rng.randrange(base) for _ in range(rng.randrange(1, 30))))
        m = rng.randrange(1, 4)
        assert chunk_values(w, m) == [b.value() for b in parse_blocks(w, m)]
        if len(w) >= m:
            assert block_discrepancy(w, m) == discrepancy(chunk_values(w, m), base**m)
