import pytest

from simplenorm.errors import ProfileError
from simplenorm.profile import (
    NormalityProfile,
    ProfileEntry,
    perfect_power_root,
    profile_to_json,
    validate_profile,
)


def base_doc(**overrides):
    doc = {
        "entries": [{"s": 2, "M": [1]}],
        "n_max": 2,
        "c": 1,
        "seed": 42,
        "until_b": 100,
    }
    doc.update(overrides)
    return doc


def test_perfect_power_root():
    assert perfect_power_root(4) == (2, 2)
    assert perfect_power_root(8) == (2, 3)
    assert perfect_power_root(9) == (3, 2)
    assert perfect_power_root(64) in ((2, 6), (8, 2))
    for s in (2, 3, 5, 6, 7, 10, 11, 12):
        assert perfect_power_root(s) is None


def test_accepts_valid_profile():
    profile = validate_profile(base_doc(entries=[{"s": 2, "M": [1, 2]}], n_max=4))
    assert profile.entries[0].exponents == (1, 2)
    assert profile.exponent_set(2) == frozenset({1, 2})


def test_rejects_perfect_power_base():
    with pytest.raises(ProfileError, match=r"4 = 2\^2"):
        validate_profile(base_doc(entries=[{"s": 4, "M": [1]}]))
    with pytest.raises(ProfileError, match=r"9 = 3\^2"):
        validate_profile(base_doc(entries=[{"s": 9, "M": [1]}]))


def test_rejects_missing_divisor():
    with pytest.raises(ProfileError, match="divisor 1 of 2"):
        validate_profile(base_doc(entries=[{"s": 2, "M": [2]}]))
    with pytest.raises(ProfileError, match="divisor 2 of 4"):
        validate_profile(base_doc(entries=[{"s": 3, "M": [1, 4]}]))


def test_rejects_structural_problems():
    with pytest.raises(ProfileError, match="non-empty"):
        validate_profile(base_doc(entries=[]))
    with pytest.raises(ProfileError, match="n_max"):
        validate_profile(base_doc(n_max=0))
    with pytest.raises(ProfileError, match="until_b"):
        validate_profile(base_doc(until_b=0))
    with pytest.raises(ProfileError, match="twice"):
        validate_profile(base_doc(entries=[{"s": 2, "M": [1]}, {"s": 2, "M": [1]}]))
    with pytest.raises(ProfileError, match="m_max"):
        validate_profile(base_doc(entries=[{"s": 2, "M": "all"}]))


def test_rejects_entry_without_bias_target():
    with pytest.raises(ProfileError, match="no bias target"):
        validate_profile(base_doc(entries=[{"s": 2, "M": [1, 2]}], n_max=2))


def test_empty_exponent_set_is_allowed():
    profile = validate_profile(base_doc(entries=[{"s": 2, "M": []}]))
    assert profile.exponent_set(2) == frozenset()


def test_all_marker():
    profile = validate_profile(
        base_doc(entries=[{"s": 2, "M": [1]}, {"s": 3, "M": "all", "m_max": 2}])
    )
    assert profile.exponent_set(3) is None
    assert profile.entries[1].m_max == 2


def test_json_round_trip():
    doc = base_doc(entries=[{"s": 2, "M": [1]}, {"s": 3, "M": "all", "m_max": 2}])
    profile = validate_profile(doc)
    assert validate_profile(profile_to_json(profile)) == profile
