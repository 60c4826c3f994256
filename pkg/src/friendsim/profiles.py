"""Network profiles: the policy bundle emulating one social network.

A profile fixes everything the generation pipeline needs: list capacity and
grade threshold, scoring weights, candidate-pool behavior (size, churn,
degree filtering, random injection) and the positional known-candidate
trends. Two presets ship built in:

  * ``linkedin-like`` — degree-2 filtered pool, friend-of-a-friend
    dominated weights, the first two slots biased toward known candidates;
    degree comes out near constant.
  * ``facebook-like`` — unfiltered pool with interestingness-dominated
    weights; shared connections come out as a low-peaked unimodal spread.

Users author further profiles in a flat key=value text format, one
``[profile NAME]`` section per profile (see :func:`parse_profiles`).
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field, replace
from pathlib import Path

from .errors import ConfigError, ParseError
from .graph import AttributeKey
from .scoring import InterestParams, MismatchMode, ScoreWeights

PROFILES_HEADER = "# friendsim-profiles v1"


@dataclass(frozen=True)
class NetworkProfile:
    """All knobs of one simulated network's recommendation technique."""

    name: str
    list_capacity: int = 50
    grade_threshold: float = 0.0
    weights: ScoreWeights = field(default_factory=ScoreWeights)
    interest_params: InterestParams = field(default_factory=InterestParams)
    pool_size: int = 80
    random_injection_fraction: float = 0.0  # fresh draws made without the degree filter
    first_k_known: int = 0
    first_k_known_prob: float = 0.0
    known_random_fraction: float = 0.0
    degree_filter: int | None = None
    churn_fraction: float = 0.6
    foaf_cap: float = 20.0

    def __post_init__(self):
        if self.list_capacity < 1:
            raise ConfigError("list_capacity must be >= 1")
        if self.pool_size < self.list_capacity:
            raise ConfigError("pool_size must be >= list_capacity")
        if self.first_k_known < 0:
            raise ConfigError("first_k_known must be >= 0")
        if self.foaf_cap <= 0:
            raise ConfigError("foaf_cap must be > 0")
        for name in (
            "grade_threshold",
            "random_injection_fraction",
            "first_k_known_prob",
            "known_random_fraction",
            "churn_fraction",
        ):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ConfigError(f"{name} must be in [0, 1], got {v}")
        if self.degree_filter is not None and self.degree_filter < 1:
            raise ConfigError("degree_filter must be a positive degree class")


def linkedin_like() -> NetworkProfile:
    return NetworkProfile(
        name="linkedin-like",
        list_capacity=50,
        grade_threshold=0.02,
        weights=ScoreWeights(
            foaf_weight=0.6,
            interestingness_weight=0.1,
            match_weight=0.2,
            known_bonus=0.1,
        ),
        interest_params=InterestParams(),
        pool_size=70,
        random_injection_fraction=0.05,
        first_k_known=2,
        first_k_known_prob=0.6,
        known_random_fraction=0.02,
        degree_filter=2,
        churn_fraction=0.6,
        foaf_cap=20.0,
    )


def facebook_like() -> NetworkProfile:
    return NetworkProfile(
        name="facebook-like",
        list_capacity=50,
        grade_threshold=0.0,
        weights=ScoreWeights(
            foaf_weight=0.3,
            interestingness_weight=0.45,
            match_weight=0.15,
            known_bonus=0.1,
        ),
        interest_params=InterestParams(),
        pool_size=100,
        random_injection_fraction=0.0,
        first_k_known=0,
        first_k_known_prob=0.0,
        known_random_fraction=0.06,
        degree_filter=None,
        churn_fraction=0.6,
        foaf_cap=20.0,
    )


_PRESETS = {
    "linkedin-like": linkedin_like,
    "facebook-like": facebook_like,
}


def preset_names() -> list[str]:
    return sorted(_PRESETS)


def get_profile(name: str) -> NetworkProfile:
    try:
        return _PRESETS[name]()
    except KeyError:
        raise ConfigError(
            f"unknown profile {name!r}; built-in presets: {', '.join(preset_names())}"
        ) from None


# ---------------------------------------------------------------------------
# key=value access (config files and --set overrides share the key names)

_INT_FIELDS = {"list_capacity", "pool_size", "first_k_known"}
_FLOAT_FIELDS = {
    "grade_threshold",
    "random_injection_fraction",
    "first_k_known_prob",
    "known_random_fraction",
    "churn_fraction",
    "foaf_cap",
}
_WEIGHT_KEYS = {
    "foaf": "foaf_weight",
    "interestingness": "interestingness_weight",
    "match": "match_weight",
    "known": "known_bonus",
}


def apply_override(profile: NetworkProfile, key: str, value: str) -> NetworkProfile:
    """Return a copy of `profile` with one key=value override applied.

    Recognized keys: the plain profile fields, ``weight.<foaf|
    interestingness|match|known>``, ``attr_weight.<attribute key>``,
    ``interest.norm_f`` and ``interest.mismatch_mode``.
    """
    key = key.strip()
    value = value.strip()
    try:
        if key in _INT_FIELDS:
            return replace(profile, **{key: int(value)})
        if key in _FLOAT_FIELDS:
            return replace(profile, **{key: float(value)})
        if key == "degree_filter":
            filt = None if value.lower() in ("none", "off", "") else int(value)
            return replace(profile, degree_filter=filt)
        if key == "name":
            return replace(profile, name=value)
        if key.startswith("weight."):
            attr = _WEIGHT_KEYS.get(key.split(".", 1)[1])
            if attr is None:
                raise ConfigError(f"unknown weight key: {key}")
            return replace(profile, weights=replace(profile.weights, **{attr: float(value)}))
        if key.startswith("attr_weight."):
            attr_key = AttributeKey(key.split(".", 1)[1])
            new_attr = dict(profile.weights.attribute_weights)
            new_attr[attr_key] = float(value)
            return replace(
                profile, weights=replace(profile.weights, attribute_weights=new_attr)
            )
        if key == "interest.norm_f":
            return replace(
                profile, interest_params=replace(profile.interest_params, norm_f=float(value))
            )
        if key == "interest.mismatch_mode":
            mode = MismatchMode(value.lower())
            return replace(
                profile, interest_params=replace(profile.interest_params, mismatch_mode=mode)
            )
    except (ValueError, TypeError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"bad value for {key!r}: {value!r} ({exc})") from None
    raise ConfigError(f"unknown profile key: {key!r}")


def apply_overrides(profile: NetworkProfile, overrides: dict[str, str]) -> NetworkProfile:
    for key in sorted(overrides):
        profile = apply_override(profile, key, overrides[key])
    return profile


def format_profile(profile: NetworkProfile) -> list[str]:
    """Flat key=value dump of the effective profile, one entry per line."""
    lines = [f"name = {profile.name}"]
    for f in dataclasses.fields(NetworkProfile):
        if f.name in ("name", "weights", "interest_params"):
            continue
        lines.append(f"{f.name} = {getattr(profile, f.name)}")
    w = profile.weights
    lines.append(f"weight.foaf = {w.foaf_weight}")
    lines.append(f"weight.interestingness = {w.interestingness_weight}")
    lines.append(f"weight.match = {w.match_weight}")
    lines.append(f"weight.known = {w.known_bonus}")
    for key in AttributeKey:
        lines.append(f"attr_weight.{key.value} = {w.attribute_weights[key]}")
    lines.append(f"interest.norm_f = {profile.interest_params.norm_f}")
    lines.append(f"interest.mismatch_mode = {profile.interest_params.mismatch_mode.value}")
    return lines


def parse_profiles(text: str) -> dict[str, NetworkProfile]:
    """Parse a profiles file into name -> profile.

    Format: a ``# friendsim-profiles v1`` header line, then ``[profile
    NAME]`` sections of ``key = value`` lines. An optional ``base = PRESET``
    line (first in its section) starts from a built-in preset; otherwise
    library defaults apply. ``#`` lines and blank lines are ignored.
    """
    profiles: dict[str, NetworkProfile] = {}
    current: NetworkProfile | None = None
    saw_header = False

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            if line == PROFILES_HEADER:
                saw_header = True
            continue
        if line.startswith("[profile ") and line.endswith("]"):
            if current is not None:
                profiles[current.name] = current
            name = line[len("[profile ") : -1].strip()
            if not name:
                raise ParseError("empty profile name", line_no)
            current = NetworkProfile(name=name)
            continue
        if current is None:
            raise ParseError("key=value line before any [profile ...] section", line_no)
        if "=" not in line:
            raise ParseError(f"expected key = value, got {line!r}", line_no)
        key, value = (part.strip() for part in line.split("=", 1))
        try:
            if key == "base":
                current = replace(get_profile(value), name=current.name)
            else:
                current = apply_override(current, key, value)
        except ConfigError as exc:
            raise ParseError(str(exc), line_no) from None

    if current is not None:
        profiles[current.name] = current
    if not saw_header:
        raise ParseError(f"missing format header {PROFILES_HEADER!r}", 1)
    return profiles


def load_profiles(path: str | Path) -> dict[str, NetworkProfile]:
    return parse_profiles(Path(path).read_text(encoding="utf-8"))
