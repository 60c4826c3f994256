"""Candidate scoring: match/mismatch, interestingness, friend-of-a-friend,
and the normalized linear combination into a single grade.

Interestingness is a bipolar function: it vanishes when the candidate fully
matches the receiver's contents (nothing unexpected) and when nothing
matches at all (nothing relevant), peaking between the extremes. The
product form ``match * mismatch / norm_f`` with the complement mismatch
peaks at match = 0.5, so ``norm_f = 0.25`` maps that peak to exactly 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping

from .errors import ConfigError, InvalidPairError
from .features import attribute_overlap
from .graph import AttributeKey, Member, SocialGraph

_TOP_LEVEL_TOL = 1e-9


class MismatchMode(Enum):
    """How unexpectedness is derived from the match quantity."""

    COMPLEMENT = "complement"
    UNSHARED_FRACTION = "unshared_fraction"


@dataclass(frozen=True)
class InterestParams:
    """Normalization factor and mismatch flavor for interestingness."""

    norm_f: float = 0.25
    mismatch_mode: MismatchMode = MismatchMode.COMPLEMENT

    def __post_init__(self):
        if self.norm_f <= 0:
            raise ConfigError("norm_f must be > 0")


def _default_attribute_weights() -> dict[AttributeKey, float]:
    return {key: 1.0 for key in AttributeKey}


@dataclass(frozen=True)
class ScoreWeights:
    """Raw (pre-normalization) coefficients of the combined grade.

    The four top-level coefficients are normalized to sum to 1 at use time;
    scaling all of them by a positive constant never changes a grade. The
    per-attribute weights drive the match score, and the employer entry
    doubles as the workplace bonus inside the friend-of-a-friend score.
    """

    foaf_weight: float = 1.0
    interestingness_weight: float = 1.0
    match_weight: float = 1.0
    known_bonus: float = 0.0
    attribute_weights: Mapping[AttributeKey, float] = field(
        default_factory=_default_attribute_weights
    )

    def __post_init__(self):
        for name in ("foaf_weight", "interestingness_weight", "match_weight", "known_bonus"):
            if getattr(self, name) < 0:
                raise ConfigError(f"{name} must be >= 0")
        attr = dict(self.attribute_weights)
        for key in AttributeKey:
            attr.setdefault(key, 0.0)
            if attr[key] < 0:
                raise ConfigError(f"attribute weight for {key.value} must be >= 0")
        object.__setattr__(self, "attribute_weights", attr)

    def normalized_top_level(self) -> tuple[float, float, float, float]:
        """(foaf, interestingness, match, known) scaled to sum to 1."""
        raw = (self.foaf_weight, self.interestingness_weight, self.match_weight, self.known_bonus)
        total = sum(raw)
        if total <= 0:
            raise ConfigError("all top-level weights are zero")
        return tuple(w / total for w in raw)

    @property
    def workplace_bonus(self) -> float:
        return self.attribute_weights[AttributeKey.EMPLOYER]


def match_score(receiver: Member, candidate: Member, weights: ScoreWeights) -> float:
    """Weighted mean of per-key attribute overlaps, in [0, 1]."""
    total = sum(weights.attribute_weights[key] for key in AttributeKey)
    if total <= 0:
        raise ConfigError("all attribute weights are zero")
    acc = 0.0
    for key in AttributeKey:
        w = weights.attribute_weights[key]
        if w:
            acc += w * attribute_overlap(receiver, candidate, key)
    return acc / total


def mismatch_score(
    match: float, receiver: Member, candidate: Member, params: InterestParams
) -> float:
    """Unexpectedness of the candidate relative to the receiver, in [0, 1].

    Complement mode is simply ``1 - match``. Unshared-fraction mode averages
    ``|candidate \\ receiver| / |candidate|`` over the attribute keys where
    the candidate has any values (0 if it has none anywhere).
    """
    if not 0.0 <= match <= 1.0:
        raise ValueError("match must lie in [0, 1]")
    if params.mismatch_mode is MismatchMode.COMPLEMENT:
        return 1.0 - match
    acc = 0.0
    populated = 0
    for key in AttributeKey:
        vc = candidate.values(key)
        if not vc:
            continue
        populated += 1
        acc += len(vc - receiver.values(key)) / len(vc)
    return acc / populated if populated else 0.0


def interestingness(match: float, mismatch: float, params: InterestParams) -> float:
    """``match * mismatch / norm_f`` clamped into [0, 1].

    Clamping is reachable only when norm_f is below the product's actual
    peak; with the defaults it is exact normalization, not a cap.
    """
    if params.norm_f <= 0:
        raise ConfigError("norm_f must be > 0")
    if not 0.0 <= match <= 1.0 or not 0.0 <= mismatch <= 1.0:
        raise ValueError("match and mismatch must lie in [0, 1]")
    value = match * mismatch / params.norm_f
    return min(1.0, max(0.0, value))


def foaf_score(graph: SocialGraph, receiver: int, candidate: int, weights: ScoreWeights) -> float:
    """Common-neighbor score, optionally boosted per workplace-sharing friend.

    Each common neighbor contributes 1, plus the workplace bonus when that
    neighbor shares an employer value with the receiver. With a zero bonus
    this is exactly the shared-connections count.
    """
    if receiver == candidate:
        raise InvalidPairError("foaf_score needs two distinct members")
    common = graph.neighbors(receiver) & graph.neighbors(candidate)
    bonus = weights.workplace_bonus
    if bonus == 0:
        return float(len(common))
    receiver_employers = graph.member(receiver).values(AttributeKey.EMPLOYER)
    score = 0.0
    for mid in common:
        score += 1.0
        if receiver_employers & graph.member(mid).values(AttributeKey.EMPLOYER):
            score += bonus
    return score


def combined_score(
    features,
    match: float,
    interest: float,
    foaf: float,
    weights: ScoreWeights,
    foaf_cap: float,
) -> float:
    """Normalized linear combination of the component scores, in [0, 1].

    The unbounded friend-of-a-friend count saturates at ``foaf_cap`` before
    entering the combination.
    """
    if foaf_cap <= 0:
        raise ConfigError("foaf_cap must be > 0")
    w_foaf, w_interest, w_match, w_known = weights.normalized_top_level()
    foaf_term = min(foaf / foaf_cap, 1.0)
    grade = (
        w_foaf * foaf_term
        + w_interest * interest
        + w_match * match
        + w_known * (1.0 if features.known else 0.0)
    )
    return min(1.0, max(0.0, grade))
