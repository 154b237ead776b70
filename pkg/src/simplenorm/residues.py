"""Residue-class combinatorics over integer sets and multisets.

Builds pairs of integer sets that have identical residue statistics modulo
every element of a given set M but different statistics modulo a chosen n.
The engine turns such pairs into digit blocks; the counting routines here are
deliberately brute-force or plain dynamic programming so they can serve as
independent oracles.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from math import comb, gcd, lcm


@dataclass(frozen=True)
class IntMultiset:
    """Multiset of non-negative integers as a value -> multiplicity map."""

    entries: dict[int, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for value, mult in self.entries.items():
            if value < 0:
                raise ValueError(f"negative value {value} in multiset")
            if mult < 1:
                raise ValueError(f"non-positive multiplicity for {value}")

    def total(self) -> int:
        return sum(self.entries.values())

    def residue_counts(self, m: int) -> list[int]:
        counts = [0] * m
        for value, mult in self.entries.items():
            counts[value % m] += mult
        return counts


@dataclass(frozen=True)
class PartitionSpec:
    """Parameters of a restricted sum count: sums of v elements drawn from the
    multiset containing each of 1..n-1 exactly k times, with total sigma."""

    n: int
    sigma: int
    v: int
    k: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"modulus must be >= 1, got {self.n}")
        if self.sigma < 0:
            raise ValueError(f"target sum must be >= 0, got {self.sigma}")
        if self.v < 0:
            raise ValueError(f"summand count must be >= 0, got {self.v}")
        if self.k < 1:
            raise ValueError(f"repetition count must be >= 1, got {self.k}")


def euler_phi(n: int) -> int:
    """Count of 1 <= j <= n with gcd(j, n) = 1."""
    if n < 1:
        raise ValueError(f"euler_phi requires n >= 1, got {n}")
    result = n
    p = 2
    remaining = n
    while p * p <= remaining:
        if remaining % p == 0:
            while remaining % p == 0:
                remaining //= p
            result -= result // p
        p += 1
    if remaining > 1:
        result -= result // remaining
    return result


def partition_count(spec: PartitionSpec) -> int:
    """Number of ways sigma is a sum of exactly v elements of the multiset
    {1..n-1, each k times}, copies of a value being distinguishable.

    Dynamic programming over (value, used count, partial sum); choosing j of
    the k copies of one value contributes a binomial factor C(k, j).
    """
    n, sigma, v, k = spec.n, spec.sigma, spec.v, spec.k
    # dp maps (used, partial_sum) -> selection count
    dp: dict[tuple[int, int], int] = {(0, 0): 1}
    for value in range(1, n):
        nxt: dict[tuple[int, int], int] = {}
        for (used, total), ways in dp.items():
            for j in range(k + 1):
                used2 = used + j
                total2 = total + j * value
                if used2 > v or total2 > sigma:
                    break
                key = (used2, total2)
                nxt[key] = nxt.get(key, 0) + ways * comb(k, j)
        dp = nxt
    return dp.get((v, sigma), 0)


def parity_partition_difference(n: int, k: int) -> int:
    """Signed count of sub-multisets of {1..n-1 each k times} whose sum is a
    multiple of n: even-cardinality selections count +1, odd ones -1.

    The empty selection (sum 0, zero summands) counts as even.  Computed as a
    literal double sum over the partition-count oracle so it stays independent
    of the closed form n^(k-1) * euler_phi(n) it is tested against.
    """
    if n < 1 or k < 1:
        raise ValueError(f"need n >= 1 and k >= 1, got n={n}, k={k}")
    max_sigma = k * n * (n - 1) // 2
    max_v = k * (n - 1)
    diff = 0
    for sigma in range(0, max_sigma + 1, n):
        for v in range(max_v + 1):
            count = partition_count(PartitionSpec(n, sigma, v, k))
            diff += count if v % 2 == 0 else -count
    return diff


def residue_counts(values: set[int] | frozenset[int], m: int) -> list[int]:
    """Entry r is the number of elements of the set congruent to r mod m."""
    if m < 1:
        raise ValueError(f"modulus must be >= 1, got {m}")
    counts = [0] * m
    for x in values:
        counts[x % m] += 1
    return counts


def is_residue_equivalent(
    x: set[int] | frozenset[int], y: set[int] | frozenset[int], moduli: set[int]
) -> bool:
    """True iff x and y have identical residue counts modulo every modulus."""
    return all(residue_counts(x, m) == residue_counts(y, m) for m in moduli)


def fair_extension(values: set[int], n: int) -> set[int]:
    """Smallest deterministic superset whose residues mod n are fair.

    Fair means every residue 1..n-1 occurs with the same multiplicity k, where
    k is the largest residue multiplicity already present (at least 1).  For
    each deficient residue r the added elements are the smallest positive
    integers congruent to r mod n not already present.  Requires n >= 2 and
    that n divide no element.
    """
    if n < 2:
        raise ValueError(f"fair extension requires n >= 2, got {n}")
    counts = [0] * n
    for x in values:
        if x % n == 0:
            raise ValueError(f"{x} is divisible by {n}")
        counts[x % n] += 1
    k = max(1, max(counts[1:]))
    extended = set(values)
    for r in range(1, n):
        candidate = r
        missing = k - counts[r]
        while missing > 0:
            if candidate not in extended:
                extended.add(candidate)
                missing -= 1
            candidate += n
    return extended


def even_odd_sums(values: set[int]) -> tuple[IntMultiset, IntMultiset]:
    """Multisets of subset sums split by subset parity.

    The empty subset counts as even with sum 0; multiplicities count distinct
    subsets achieving the same sum.
    """
    elems = sorted(values)
    even: Counter[int] = Counter()
    odd: Counter[int] = Counter()
    for size in range(len(elems) + 1):
        target = even if size % 2 == 0 else odd
        for combo in itertools.combinations(elems, size):
            target[sum(combo)] += 1
    return IntMultiset(dict(even)), IntMultiset(dict(odd))


def _canonical_set(multiset: IntMultiset, period: int) -> frozenset[int]:
    """Spread multiplicities along arithmetic progressions of step `period`.

    A value class c mod period with total multiplicity mu contributes
    {c, c+period, ..., c+(mu-1)period}; residues modulo every divisor of
    period are preserved.
    """
    by_class: Counter[int] = Counter()
    for value, mult in multiset.entries.items():
        by_class[value % period] += mult
    out: set[int] = set()
    for c, mu in by_class.items():
        out.update(c + i * period for i in range(mu))
    return frozenset(out)


def minimal_residue_sets(values: set[int], n: int) -> tuple[frozenset[int], frozenset[int]]:
    """Integer sets equal in residue statistics for the fair extension of the
    input but provably unequal modulo n.

    Raises ValueError if n divides some element or the input set is empty.
    """
    if not values:
        raise ValueError("input set must be non-empty")
    for x in values:
        if x % n == 0:
            raise ValueError(f"{x} is divisible by {n}")
    extended = fair_extension(values, n) if n >= 2 else set(values)
    even, odd = even_odd_sums(extended)
    period = lcm(*extended, n)
    return _canonical_set(even, period), _canonical_set(odd, period)


__all__ = [
    "IntMultiset",
    "PartitionSpec",
    "euler_phi",
    "partition_count",
    "parity_partition_difference",
    "residue_counts",
    "is_residue_equivalent",
    "fair_extension",
    "even_odd_sums",
    "minimal_residue_sets",
]
