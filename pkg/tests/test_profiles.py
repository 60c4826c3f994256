"""Profile presets, overrides, and the profiles config file format."""

import pytest

from friendsim.errors import ConfigError, ParseError
from friendsim.graph import AttributeKey
from friendsim.profiles import (
    NetworkProfile,
    apply_override,
    apply_overrides,
    facebook_like,
    format_profile,
    get_profile,
    linkedin_like,
    parse_profiles,
    preset_names,
)
from friendsim.scoring import MismatchMode


def test_presets_exist_and_validate():
    assert preset_names() == ["facebook-like", "linkedin-like"]
    li = get_profile("linkedin-like")
    assert li.degree_filter == 2
    assert li.first_k_known == 2
    fb = get_profile("facebook-like")
    assert fb.degree_filter is None
    assert fb.weights.interestingness_weight > fb.weights.foaf_weight


def test_unknown_preset_rejected():
    with pytest.raises(ConfigError):
        get_profile("myspace-like")


def test_invariant_validation():
    with pytest.raises(ConfigError):
        NetworkProfile(name="x", list_capacity=0)
    with pytest.raises(ConfigError):
        NetworkProfile(name="x", pool_size=10, list_capacity=20)
    with pytest.raises(ConfigError):
        NetworkProfile(name="x", churn_fraction=1.5)
    with pytest.raises(ConfigError):
        NetworkProfile(name="x", degree_filter=0)
    with pytest.raises(ConfigError):
        NetworkProfile(name="x", foaf_cap=0.0)


def test_apply_override_round_trips_values():
    p = linkedin_like()
    p = apply_override(p, "churn_fraction", "0.25")
    assert p.churn_fraction == 0.25
    p = apply_override(p, "degree_filter", "none")
    assert p.degree_filter is None
    p = apply_override(p, "weight.foaf", "2.5")
    assert p.weights.foaf_weight == 2.5
    p = apply_override(p, "attr_weight.employer", "0.75")
    assert p.weights.attribute_weights[AttributeKey.EMPLOYER] == 0.75
    p = apply_override(p, "interest.mismatch_mode", "unshared_fraction")
    assert p.interest_params.mismatch_mode is MismatchMode.UNSHARED_FRACTION


def test_bad_overrides_rejected():
    p = facebook_like()
    with pytest.raises(ConfigError):
        apply_override(p, "nonsense_key", "1")
    with pytest.raises(ConfigError):
        apply_override(p, "pool_size", "many")
    with pytest.raises(ConfigError):
        apply_override(p, "churn_fraction", "2.0")


def test_apply_overrides_in_sorted_key_order():
    p = apply_overrides(facebook_like(), {"pool_size": "120", "list_capacity": "60"})
    assert (p.list_capacity, p.pool_size) == (60, 120)


def test_format_profile_covers_every_override_key():
    p = linkedin_like()
    rebuilt = facebook_like()
    for line in format_profile(p):
        key, value = (s.strip() for s in line.split("=", 1))
        rebuilt = apply_override(rebuilt, key, value)
    assert rebuilt == p


PROFILE_TEXT = """\
# friendsim-profiles v1

[profile my-net]
base = linkedin-like
churn_fraction = 0.3
weight.foaf = 0.8
degree_filter = none

[profile other]
list_capacity = 10
pool_size = 15
"""


def test_parse_profiles():
    table = parse_profiles(PROFILE_TEXT)
    assert set(table) == {"my-net", "other"}
    mine = table["my-net"]
    assert mine.name == "my-net"
    assert mine.churn_fraction == 0.3
    assert mine.weights.foaf_weight == 0.8
    assert mine.degree_filter is None
    # untouched base values survive
    assert mine.first_k_known == linkedin_like().first_k_known
    assert table["other"].list_capacity == 10


def test_parse_profiles_requires_header():
    with pytest.raises(ParseError):
        parse_profiles("[profile x]\nlist_capacity = 10\npool_size = 10\n")


def test_parse_profiles_errors_name_lines():
    text = "# friendsim-profiles v1\n[profile x]\nchurn_fraction = nope\n"
    with pytest.raises(ParseError) as exc:
        parse_profiles(text)
    assert "line 3" in str(exc.value)
    with pytest.raises(ParseError):
        parse_profiles("# friendsim-profiles v1\nstray = 1\n")
