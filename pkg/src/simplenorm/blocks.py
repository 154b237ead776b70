"""Digit blocks: chunk parsing, occurrence counts, discrepancy, equivalence.

A block is a finite digit sequence over a base.  Identifying a block
b_0 .. b_(l-1) with the integer b_0 s^(l-1) + ... + b_(l-1) lets every
length-m chunk of a block double as a digit of base s^m, which is how all
frequency statistics in higher bases are computed.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .errors import EnumerationTooLarge
from .residues import fair_extension, is_residue_equivalent, minimal_residue_sets


@dataclass(frozen=True)
class DigitBlock:
    """Immutable digit sequence over a fixed base."""

    base: int
    digits: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.base < 2:
            raise ValueError(f"base must be >= 2, got {self.base}")
        for d in self.digits:
            if not 0 <= d < self.base:
                raise ValueError(f"digit {d} out of range for base {self.base}")

    def __len__(self) -> int:
        return len(self.digits)

    def value(self) -> int:
        """The integer the block spells in its base (empty block is 0)."""
        v = 0
        for d in self.digits:
            v = v * self.base + d
        return v

    @classmethod
    def from_value(cls, base: int, value: int, length: int) -> "DigitBlock":
        """Length-`length` block spelling `value`; requires value < base**length."""
        if value < 0:
            raise ValueError("value must be non-negative")
        digits = []
        for _ in range(length):
            digits.append(value % base)
            value //= base
        if value:
            raise ValueError("value does not fit in the requested length")
        return cls(base, tuple(reversed(digits)))

    @classmethod
    def from_string(cls, text: str, base: int) -> "DigitBlock":
        """Parse "110100" (bases <= 10) or comma-separated digits."""
        if "," in text:
            digits = tuple(int(part) for part in text.split(","))
        else:
            digits = tuple(int(ch) for ch in text)
        return cls(base, digits)

    def to_string(self) -> str:
        if self.base <= 10:
            return "".join(str(d) for d in self.digits)
        return ",".join(str(d) for d in self.digits)

    def concat(self, other: "DigitBlock") -> "DigitBlock":
        if other.base != self.base:
            raise ValueError("cannot concatenate blocks of different bases")
        return DigitBlock(self.base, self.digits + other.digits)


def chunk_values(w: DigitBlock, m: int) -> list[int]:
    """Values of the consecutive length-m chunks covering the largest prefix
    of w whose length is a multiple of m (trailing remainder dropped)."""
    if m < 1:
        raise ValueError(f"chunk length must be >= 1, got {m}")
    s = w.base
    out = []
    digits = w.digits
    for start in range(0, len(digits) - m + 1, m):
        v = 0
        for d in digits[start : start + m]:
            v = v * s + d
        out.append(v)
    return out


def parse_blocks(w: DigitBlock, m: int) -> list[DigitBlock]:
    """The chunk sequence of w as blocks, trailing remainder dropped."""
    if m < 1:
        raise ValueError(f"chunk length must be >= 1, got {m}")
    digits = w.digits
    return [
        DigitBlock(w.base, digits[start : start + m])
        for start in range(0, len(digits) - m + 1, m)
    ]


def occurrences(w: DigitBlock, m: int) -> Counter[int]:
    """Counter of chunk values in the chunk sequence of w."""
    return Counter(chunk_values(w, m))


def discrepancy(items, alphabet_size: int) -> Fraction:
    """Largest deviation of symbol frequencies in `items` from uniform.

    max over the alphabet of |occ/len - 1/alphabet_size| as an exact rational;
    symbols absent from `items` contribute 1/alphabet_size.
    """
    items = list(items)
    if not items:
        raise ValueError("discrepancy of an empty sequence is undefined")
    if alphabet_size < 1:
        raise ValueError("alphabet must be non-empty")
    counts = Counter(items)
    length = len(items)
    uniform = Fraction(1, alphabet_size)
    worst = max(abs(Fraction(c, length) - uniform) for c in counts.values())
    if len(counts) < alphabet_size:
        worst = max(worst, uniform)
    return worst


def block_discrepancy(w: DigitBlock, m: int) -> Fraction:
    """Discrepancy of the chunk sequence of w over the s^m chunk values."""
    return discrepancy(chunk_values(w, m), w.base**m)


def is_block_equivalent(u: DigitBlock, v: DigitBlock, moduli: set[int]) -> bool:
    """True iff u and v have identical chunk-value multisets for every
    chunk length in `moduli`.  Lengths must match and be divisible by the lcm
    of the moduli."""
    if u.base != v.base:
        raise ValueError("blocks must share a base")
    if len(u) != len(v):
        raise ValueError(f"length mismatch: {len(u)} vs {len(v)}")
    period = lcm(*moduli) if moduli else 1
    if len(u) % period:
        raise ValueError(f"length {len(u)} is not a multiple of lcm {period}")
    return all(occurrences(u, m) == occurrences(v, m) for m in moduli)


def is_balanced(w: DigitBlock, m: int) -> bool:
    """True iff every length-m chunk value occurs exactly |w|/(m s^m) times."""
    if m < 1 or len(w) % m:
        raise ValueError(f"chunk length {m} does not divide block length {len(w)}")
    total = len(w) // m
    symbols = w.base**m
    if total % symbols:
        return False
    target = total // symbols
    counts = occurrences(w, m)
    return len(counts) == symbols and all(c == target for c in counts.values())


def inequivalent_block_pair(
    s: int, moduli: set[int], n: int
) -> tuple[DigitBlock, DigitBlock]:
    """Blocks over base s that are chunk-equivalent for every m in `moduli`
    but not for n; their common length is a multiple of every m and of n.

    For n = 1 (forcing an empty modulus set) the single-digit blocks (0) and
    (1) already differ in digit counts.  Otherwise each element x of the
    residue-separated sets is encoded as a one-hot block of length l (a
    multiple of lcm of all moduli involved, exceeding every element), and the
    encodings are concatenated in ascending element order.  The resulting
    blocks are 0/1-valued, hence valid in any base.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if any(m % n == 0 for m in moduli):
        raise ValueError(f"{n} divides an element of {sorted(moduli)}")
    if n == 1:
        if moduli:
            raise ValueError("n = 1 requires an empty modulus set")
        return DigitBlock(s, (0,)), DigitBlock(s, (1,))
    extended = fair_extension(set(moduli), n)
    x_set, y_set = minimal_residue_sets(extended, n)
    period = lcm(*extended, n)
    top = max(max(x_set), max(y_set))
    length = period * (top // period + 1)

    def encode(elems: frozenset[int]) -> DigitBlock:
        digits = []
        for x in sorted(elems):
            one_hot = [0] * length
            one_hot[x] = 1
            digits.extend(one_hot)
        return DigitBlock(s, tuple(digits))

    return encode(x_set), encode(y_set)


def inequivalence_certificate(
    u: DigitBlock, v: DigitBlock, moduli: set[int], n: int
) -> bool:
    """Check the full contract of an inequivalent pair in one call."""
    return is_block_equivalent(u, v, moduli) and not is_block_equivalent(u, v, {n})


def count_low_discrepancy(alphabet_size: int, length: int, eps: Fraction) -> int:
    """Number of length-`length` words over an alphabet of the given size with
    discrepancy strictly below eps, by direct enumeration.

    Test oracle only; refuses alphabets with more than 2^24 words.
    """
    if length < 1:
        raise ValueError("length must be >= 1")
    total = alphabet_size**length
    if total > 1 << 24:
        raise EnumerationTooLarge(f"{alphabet_size}^{length} words exceed the 2^24 guard")
    eps = Fraction(eps)
    count = 0
    for word in itertools.product(range(alphabet_size), repeat=length):
        if discrepancy(word, alphabet_size) < eps:
            count += 1
    return count


__all__ = [
    "DigitBlock",
    "chunk_values",
    "parse_blocks",
    "occurrences",
    "discrepancy",
    "block_discrepancy",
    "is_block_equivalent",
    "is_balanced",
    "inequivalent_block_pair",
    "inequivalence_certificate",
    "count_low_discrepancy",
]
