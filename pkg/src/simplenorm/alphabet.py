"""Restricted digit alphabets: all length-L blocks over a base minus one or
two excluded blocks, balanced for a set of chunk lengths M yet biased for a
chunk length n.

The excluded blocks arise as arrangements of a chunk multiset W that holds
every length-l block over the base 2c times, except that a distinguished
block u appears 4c times and its partner v never appears.  Since u and v are
chunk-equivalent for M but not for n, every arrangement of W is balanced for
every m in M and carries the same n-bias.

z is the least arrangement with an even integer value; for an even base a
second excluded block z~ (the least odd-valued arrangement above z) is
needed.  Both are represented symbolically: an ascending arrangement with one
final chunk pulled out, plus for z~ a single "bump" position where the
sequence first exceeds z.  All chunk statistics follow from closed-form
counts, so alphabets whose blocks could never be written out still get exact
balance and bias numbers.  Materialization to explicit digits is guarded.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, replace
from fractions import Fraction

from .blocks import DigitBlock, is_block_equivalent, inequivalent_block_pair, occurrences
from .errors import EnumerationTooLarge, InternalInvariantError

# Largest explicit digit expansion we are willing to build (digits).
MATERIALIZE_DIGIT_LIMIT = 2_000_000
# Guard for integers of roughly base**ell_u size (bits).
VALUE_BIT_LIMIT = 1 << 23


@dataclass(frozen=True)
class AlphabetU:
    """All length-ell_u blocks over base s except one or two excluded blocks.

    Never materialized: membership is "differs from every excluded block".
    ``z_final`` is the chunk value ending z; ``bump`` (even s only) encodes z~
    as (position, inserted chunk, final chunk) relative to z's chunk sequence.
    """

    s: int
    M: tuple[int, ...]
    n: int
    c: int
    u: DigitBlock
    v: DigitBlock
    ell: int
    ell_u: int
    chunk_count: int
    num_values: int
    removed_count: int
    z_final: int
    bump: tuple[int, int, int] | None
    d: DigitBlock
    c_def: Fraction

    def chunk_mult(self, w: int) -> int:
        """Multiplicity of chunk value w in the arrangement multiset W."""
        if not 0 <= w < self.num_values:
            return 0
        if w == self.v.value():
            return 0
        if w == self.u.value():
            return 4 * self.c
        return 2 * self.c

    def bias_eps(self) -> Fraction:
        """Exact frequency margin by which the bias chunk is under-represented
        across the alphabet.  Needs an integer of ell_u digits; guarded."""
        return self.c_def / (2 * self.alphabet_size() * (self.ell_u // self.n))

    def alphabet_size(self) -> int:
        """s^ell_u minus the removed blocks; guarded against absurd sizes."""
        bits = self.ell_u * (self.s.bit_length())
        if bits > VALUE_BIT_LIMIT:
            raise EnumerationTooLarge(
                f"alphabet of size {self.s}^{self.ell_u} cannot be evaluated"
            )
        return self.s**self.ell_u - self.removed_count


def _mult_rest(alpha: AlphabetU, w: int) -> int:
    """Multiplicity of w in W minus the final chunk of z."""
    return alpha.chunk_mult(w) - (1 if w == alpha.z_final else 0)


def _count_greater(alpha: AlphabetU, w: int) -> int:
    """Number of chunks with value > w in W minus z's final chunk."""
    n_vals = alpha.num_values
    base = 2 * alpha.c * (n_vals - 1 - w)
    if alpha.u.value() > w:
        base += 2 * alpha.c
    if alpha.v.value() > w:
        base -= 2 * alpha.c
    if alpha.z_final > w:
        base -= 1
    return base


def _odd_count_greater(alpha: AlphabetU, w: int) -> int:
    """Number of odd-valued chunks with value > w in W minus z's final chunk
    (that final chunk is even, so it never contributes)."""
    hi = alpha.num_values - 1
    # odd integers in (w, hi]
    odd_values = ((hi + 1) // 2) - ((w + 1) // 2) if hi > w else 0
    base = 2 * alpha.c * odd_values
    uv = alpha.u.value()
    vv = alpha.v.value()
    if uv > w and uv % 2 == 1:
        base += 2 * alpha.c
    if vv > w and vv % 2 == 1:
        base -= 2 * alpha.c
    return base


def _next_value_above(alpha: AlphabetU, w: int, parity: int | None = None) -> int | None:
    """Smallest chunk value > w present in W minus z's final chunk, optionally
    restricted to a parity.  Only v can have multiplicity zero, so a handful
    of probes suffice."""
    cand = w + 1
    while cand < alpha.num_values:
        if (parity is None or cand % 2 == parity) and _mult_rest(alpha, cand) > 0:
            return cand
        cand += 1
    return None


def _max_odd_at_or_above(alpha: AlphabetU, w: int) -> int | None:
    cand = alpha.num_values - 1
    while cand >= w:
        if cand % 2 == 1 and _mult_rest(alpha, cand) > 0:
            return cand
        cand -= 1
    return None


def _bump_search(alpha: AlphabetU) -> tuple[int, int, int]:
    """Least odd-valued arrangement of W strictly above z.

    z's chunk sequence is asc(W - f) + [f].  An arrangement exceeding z must
    match a prefix of z and then place a larger chunk; minimality means the
    bump sits as late as possible, uses the smallest available larger chunk b,
    and finishes with the ascending rest except that the largest odd chunk g
    moves to the end.  Scans distinct chunk values from the top; terminates
    within a few values for every multiset produced here.
    """
    total = alpha.chunk_count
    w = alpha.num_values - 1
    for _ in range(64):
        if w < 0:
            break
        run_mult = _mult_rest(alpha, w)
        if run_mult <= 0:
            w -= 1
            continue
        # Deepest index of the w-run inside asc(W - f); index total-1 holds f.
        i_hi = total - 2 - _count_greater(alpha, w)
        odd_above = _odd_count_greater(alpha, w)
        oc = odd_above + (1 if w % 2 == 1 else 0)
        cand = _next_value_above(alpha, w)
        if cand is not None:
            if oc - (cand % 2) >= 1:
                return _finish_bump(alpha, i_hi, w, cand)
            even_cand = _next_value_above(alpha, w, parity=0)
            if even_cand is not None and oc >= 1:
                return _finish_bump(alpha, i_hi, w, even_cand)
            if w % 2 == 1 and run_mult >= 2 and oc + 1 - (cand % 2) >= 1:
                return _finish_bump(alpha, i_hi - 1, w, cand)
        w -= 1
    raise InternalInvariantError("no odd-valued arrangement exceeds z")


def _finish_bump(alpha: AlphabetU, pos: int, run_value: int, b: int) -> tuple[int, int, int]:
    g = run_value if run_value % 2 == 1 else None
    above = _max_odd_at_or_above(alpha, run_value + 1)
    if above is not None:
        g = above
    if g is None:
        raise InternalInvariantError("bump found but no odd final chunk available")
    return (pos, b, g)


def _bias_constants(
    u: DigitBlock, v: DigitBlock, n: int, c: int, removed: int
) -> tuple[int, int]:
    """Bias chunk value and the integer chunk-count excess it enjoys.

    Counting length-n chunks across any arrangement of W, value d occurs
    2c (l/n) s^(l-n) + 2c (occ(u,d) - occ(v,d)) times; the all-blocks term is
    uniform, so the most over-represented chunk maximizes occ(u) - occ(v).
    Ties break to the smallest chunk value.
    """
    delta: Counter[int] = Counter(occurrences(u, n))
    delta.subtract(occurrences(v, n))
    best_value: int | None = None
    best_delta = 0
    for value in sorted(delta):
        dv = delta[value]
        if dv > best_delta:
            best_value, best_delta = value, dv
    if best_value is None or best_delta <= 0:
        raise InternalInvariantError("excluded blocks show no bias chunk")
    return best_value, removed * 2 * c * best_delta


def balanced_alphabet(s: int, M: set[int], n: int, c: int = 1) -> AlphabetU:
    """Build the restricted alphabet for base s, balanced chunk lengths M and
    biased chunk length n, with block length 2 c l s^l.

    Requires that n divide no element of M and c >= 1.  For s = 2 with n = 1
    the generic pair construction would give length-1 blocks, too short for
    two excluded blocks of both parities, so the pair (0,1), (1,1) is used.
    """
    if c < 1:
        raise ValueError(f"c must be >= 1, got {c}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if any(m % n == 0 for m in M):
        raise ValueError(f"{n} divides an element of {sorted(M)}")
    if s == 2 and n == 1:
        u = DigitBlock(2, (0, 1))
        v = DigitBlock(2, (1, 1))
    else:
        u, v = inequivalent_block_pair(s, set(M), n)
    ell = len(u)
    num_values = s**ell
    chunk_count = 2 * c * num_values
    ell_u = chunk_count * ell
    removed = 1 if s % 2 == 1 else 2

    def mult(w: int) -> int:
        if w == v.value():
            return 0
        if w == u.value():
            return 4 * c
        return 2 * c

    # Final chunk of z: the largest present value of the required parity.
    # For odd s every arrangement has even digit sum, hence even value, and
    # the least arrangement is the fully ascending one (largest final chunk).
    want_even = s % 2 == 0
    f = num_values - 1
    while f >= 0 and (mult(f) == 0 or (want_even and f % 2 == 1)):
        f -= 1
    if f < 0:
        raise InternalInvariantError("no admissible final chunk for z")

    d_value, excess = _bias_constants(u, v, n, c, removed)
    alpha = AlphabetU(
        s=s,
        M=tuple(sorted(M)),
        n=n,
        c=c,
        u=u,
        v=v,
        ell=ell,
        ell_u=ell_u,
        chunk_count=chunk_count,
        num_values=num_values,
        removed_count=removed,
        z_final=f,
        bump=None,
        d=DigitBlock.from_value(s, d_value, n),
        c_def=Fraction(excess),
    )
    if s % 2 == 0:
        alpha = replace(alpha, bump=_bump_search(alpha))
    return alpha


def bias_constants(alpha: AlphabetU) -> tuple[DigitBlock, Fraction, Fraction]:
    """Bias chunk d, frequency margin eps and count excess for the alphabet."""
    return alpha.d, alpha.bias_eps(), alpha.c_def


def excluded_chunk_count(alpha: AlphabetU, m: int, value: int) -> int:
    """Exact occurrences of chunk `value` among the length-m chunks of z (the
    same for z~, which is a rearrangement of the same chunk multiset).

    Exact for every alphabet, however large: for m dividing the inner block
    length l, chunking never crosses inner-block boundaries, so counts follow
    from the multiset alone.
    """
    if alpha.ell % m:
        raise ValueError(f"chunk length {m} does not divide inner length {alpha.ell}")
    if not 0 <= value < alpha.s**m:
        raise ValueError(f"chunk value {value} out of range for length {m}")
    uniform = 2 * alpha.c * (alpha.ell // m) * alpha.s ** (alpha.ell - m)
    delta = occurrences(alpha.u, m)[value] - occurrences(alpha.v, m)[value]
    return uniform + 2 * alpha.c * delta


def excluded_balanced_for(alpha: AlphabetU, m: int) -> bool:
    """Whether z (and z~) is balanced for chunk length m, decided exactly from
    chunk counts without materializing the block."""
    if alpha.ell % m:
        return False
    return occurrences(alpha.u, m) == occurrences(alpha.v, m)


def _z_chunks(alpha: AlphabetU) -> list[int]:
    chunks: list[int] = []
    for w in range(alpha.num_values):
        chunks.extend([w] * _mult_rest(alpha, w))
    chunks.append(alpha.z_final)
    return chunks


def _chunks_to_block(alpha: AlphabetU, chunks: list[int]) -> DigitBlock:
    digits: list[int] = []
    for chunk in chunks:
        digits.extend(DigitBlock.from_value(alpha.s, chunk, alpha.ell).digits)
    return DigitBlock(alpha.s, tuple(digits))


def _check_materializable(alpha: AlphabetU) -> None:
    if alpha.ell_u > MATERIALIZE_DIGIT_LIMIT:
        raise EnumerationTooLarge(
            f"excluded blocks have {alpha.ell_u} digits; explicit form refused"
        )


def z_block(alpha: AlphabetU) -> DigitBlock:
    """Explicit digits of z (guarded by MATERIALIZE_DIGIT_LIMIT)."""
    _check_materializable(alpha)
    return _chunks_to_block(alpha, _z_chunks(alpha))


def z_tilde_block(alpha: AlphabetU) -> DigitBlock | None:
    """Explicit digits of z~ for even bases (guarded), else None."""
    if alpha.bump is None:
        return None
    _check_materializable(alpha)
    pos, b, g = alpha.bump
    chunks = _z_chunks(alpha)
    rest = Counter(chunks[pos:])
    rest[b] -= 1
    rest[g] -= 1
    if min(rest.values()) < 0:
        raise InternalInvariantError("bump metadata inconsistent with chunk multiset")
    tail: list[int] = []
    for w in sorted(rest):
        tail.extend([w] * rest[w])
    return _chunks_to_block(alpha, chunks[:pos] + [b] + tail + [g])


def excluded_values(alpha: AlphabetU) -> tuple[int, int | None]:
    """Integer values of the excluded blocks (guarded: needs ell_u digits)."""
    zb = z_block(alpha)
    ztb = z_tilde_block(alpha)
    return zb.value(), None if ztb is None else ztb.value()


def alphabet_to_json(alpha: AlphabetU) -> dict:
    """JSON document for the alphabet; excluded blocks appear as digit strings
    and therefore require a materializable size."""
    zb = z_block(alpha)
    ztb = z_tilde_block(alpha)
    return {
        "s": alpha.s,
        "M": list(alpha.M),
        "n": alpha.n,
        "c": alpha.c,
        "ell_u": alpha.ell_u,
        "z": zb.to_string(),
        "z_tilde": None if ztb is None else ztb.to_string(),
        "d": alpha.d.to_string(),
        "c_def": _frac_str(alpha.c_def),
        "eps": _frac_str(alpha.bias_eps()),
    }


def _frac_str(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def verify_alphabet(alpha: AlphabetU) -> None:
    """Cheap structural sanity checks; raises on violation."""
    if not is_block_equivalent(alpha.u, alpha.v, set(alpha.M)):
        raise InternalInvariantError("generator pair is not chunk-equivalent for M")
    if is_block_equivalent(alpha.u, alpha.v, {alpha.n}):
        raise InternalInvariantError("generator pair is chunk-equivalent for n")
    if alpha.ell_u % alpha.n:
        raise InternalInvariantError("block length not divisible by n")
    for m in alpha.M:
        if alpha.ell_u % m:
            raise InternalInvariantError(f"block length not divisible by {m}")
    if alpha.c_def <= 0:
        raise InternalInvariantError("no positive bias excess")


__all__ = [
    "AlphabetU",
    "MATERIALIZE_DIGIT_LIMIT",
    "balanced_alphabet",
    "bias_constants",
    "excluded_chunk_count",
    "excluded_balanced_for",
    "z_block",
    "z_tilde_block",
    "excluded_values",
    "alphabet_to_json",
    "verify_alphabet",
]
