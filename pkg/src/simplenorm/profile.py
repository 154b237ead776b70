"""Run profiles: which bases the constructed number must be simply normal to.

A profile lists entries (s, M(s)) with s not a perfect power and M(s) a
divisor-closed set of exponents (or "all" with a tracking cap), plus the run
parameters.  The constructed number is simply normal to base s^m exactly for
m in M(s) among the tracked pairs.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ProfileError


def perfect_power_root(s: int) -> tuple[int, int] | None:
    """(root, exponent) with root**exponent == s and exponent >= 2, or None."""
    if s < 4:
        return None
    for e in range(2, s.bit_length() + 1):
        lo, hi = 2, 1 << (s.bit_length() // e + 1)
        while lo <= hi:
            mid = (lo + hi) // 2
            p = mid**e
            if p == s:
                return mid, e
            if p < s:
                lo = mid + 1
            else:
                hi = mid - 1
    return None


@dataclass(frozen=True)
class ProfileEntry:
    """One tracked base with its exponent set; exponents is None for "all"."""

    s: int
    exponents: tuple[int, ...] | None
    m_max: int | None = None

    def is_all(self) -> bool:
        return self.exponents is None


@dataclass(frozen=True)
class NormalityProfile:
    entries: tuple[ProfileEntry, ...]
    n_max: int
    c: int
    seed: int
    until_b: int

    def exponent_set(self, s: int) -> frozenset[int] | None:
        for entry in self.entries:
            if entry.s == s:
                return None if entry.is_all() else frozenset(entry.exponents)
        raise KeyError(s)


def validate_profile(raw: dict) -> NormalityProfile:
    """Normalize and validate a raw profile document.

    Rejects perfect-power bases (naming the root), exponent sets that miss a
    divisor (naming it), duplicate bases, empty entry lists, and finite
    entries for which no n <= n_max lies outside the exponent set.
    """
    if not isinstance(raw, dict):
        raise ProfileError("profile must be a JSON object")
    entries_raw = raw.get("entries")
    if not isinstance(entries_raw, list) or not entries_raw:
        raise ProfileError("profile needs a non-empty 'entries' list")
    n_max = raw.get("n_max")
    if not isinstance(n_max, int) or n_max < 1:
        raise ProfileError(f"n_max must be a positive integer, got {n_max!r}")
    c = raw.get("c", 1)
    if not isinstance(c, int) or c < 1:
        raise ProfileError(f"c must be a positive integer, got {c!r}")
    seed = raw.get("seed", 0)
    if not isinstance(seed, int) or not -(1 << 63) <= seed < 1 << 64:
        raise ProfileError(f"seed must be a 64-bit integer, got {seed!r}")
    until_b = raw.get("until_b")
    if not isinstance(until_b, int) or until_b < 1:
        raise ProfileError(f"until_b must be a positive integer, got {until_b!r}")

    seen: set[int] = set()
    entries: list[ProfileEntry] = []
    for doc in entries_raw:
        if not isinstance(doc, dict) or "s" not in doc:
            raise ProfileError(f"malformed entry {doc!r}")
        s = doc["s"]
        if not isinstance(s, int) or s < 2:
            raise ProfileError(f"base must be an integer >= 2, got {s!r}")
        root = perfect_power_root(s)
        if root is not None:
            raise ProfileError(
                f"base {s} = {root[0]}^{root[1]} is a perfect power; "
                "declare the root base instead"
            )
        if s in seen:
            raise ProfileError(f"base {s} declared twice")
        seen.add(s)
        m_spec = doc.get("M")
        if m_spec == "all":
            m_max = doc.get("m_max")
            if not isinstance(m_max, int) or m_max < 1:
                raise ProfileError(
                    f"entry for base {s}: 'all' needs a positive m_max"
                )
            entries.append(ProfileEntry(s, None, m_max))
            continue
        if not isinstance(m_spec, list) or not all(
            isinstance(m, int) and m >= 1 for m in m_spec
        ):
            raise ProfileError(f"entry for base {s}: M must be 'all' or a list of positive integers")
        exponents = tuple(sorted(set(m_spec)))
        for m in exponents:
            for div in range(1, m + 1):
                if m % div == 0 and div not in exponents:
                    raise ProfileError(
                        f"entry for base {s}: divisor {div} of {m} missing from M"
                    )
        if all(n in exponents for n in range(1, n_max + 1)):
            raise ProfileError(
                f"entry for base {s}: every n <= n_max={n_max} lies in M; "
                "no bias target exists (raise n_max or drop exponents)"
            )
        entries.append(ProfileEntry(s, exponents))
    return NormalityProfile(tuple(entries), n_max, c, seed, until_b)


def profile_to_json(profile: NormalityProfile) -> dict:
    entries = []
    for entry in profile.entries:
        if entry.is_all():
            entries.append({"s": entry.s, "M": "all", "m_max": entry.m_max})
        else:
            entries.append({"s": entry.s, "M": list(entry.exponents)})
    return {
        "entries": entries,
        "n_max": profile.n_max,
        "c": profile.c,
        "seed": profile.seed,
        "until_b": profile.until_b,
    }


__all__ = [
    "ProfileEntry",
    "NormalityProfile",
    "validate_profile",
    "profile_to_json",
    "perfect_power_root",
]
