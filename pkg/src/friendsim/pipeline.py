"""Recommendation-list generation: randomize, grade, sort, inject, decorate.

One :class:`SimState` owns the whole visit-to-visit evolution for a single
receiver: the candidate pool carries over between visits minus a churned
fraction, fresh candidates are drawn at random (honoring the profile's
degree filter), everything is graded and sorted, positional known-candidate
trends are injected, and the surviving candidates are decorated for
display.

The entire visit sequence is a pure function of (graph, receiver, profile,
seed): replays are bit-identical. A SimState is single-owner and mutated
sequentially; run distinct states in parallel, never one state from two
threads.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from datetime import datetime, timedelta
from typing import Mapping, Sequence

import numpy as np

from .errors import InvalidPairError, UnderPopulatedError
from .features import extract_features_batch
from .graph import AttributeKey, SocialGraph
from .profiles import NetworkProfile
from .scoring import combined_score, foaf_score, interestingness, match_score, mismatch_score

log = logging.getLogger(__name__)

DEFAULT_START_TIME = datetime(2021, 3, 1, 9, 0)
DEFAULT_VISIT_INTERVAL = timedelta(hours=6)


@dataclass
class RecommendationEntry:
    """One decorated, graded row of a recommendation list."""

    candidate_id: int
    grade: float
    position: int
    injected_known: bool
    display_name: str
    occupation_line: str
    picture_id: str


@dataclass
class RecommendationList:
    """Time-stamped ordered list of decorated entries for one receiver."""

    receiver_id: int
    visit_index: int
    timestamp: datetime
    entries: list[RecommendationEntry]

    def candidate_ids(self) -> list[int]:
        return [e.candidate_id for e in self.entries]


@dataclass
class SimState:
    """Single-owner simulation state for one (graph, receiver, profile, seed)."""

    graph: SocialGraph
    receiver_id: int
    profile: NetworkProfile
    rng: np.random.Generator
    previous_list: RecommendationList | None = None
    visit_index: int = 0
    start_time: datetime = DEFAULT_START_TIME
    visit_interval: timedelta = field(default_factory=lambda: DEFAULT_VISIT_INTERVAL)

    @classmethod
    def create(
        cls,
        graph: SocialGraph,
        receiver_id: int,
        profile: NetworkProfile,
        seed: int,
        start_time: datetime | None = None,
        visit_interval: timedelta | None = None,
    ) -> "SimState":
        graph.member(receiver_id)
        return cls(
            graph=graph,
            receiver_id=receiver_id,
            profile=profile,
            rng=np.random.default_rng(seed),
            start_time=start_time or DEFAULT_START_TIME,
            visit_interval=visit_interval or DEFAULT_VISIT_INTERVAL,
        )


# ---------------------------------------------------------------------------
# stages


def randomize_inputs(state: SimState) -> list[int]:
    """Assemble the candidate pool for the next visit.

    Carried-over candidates are the previous list's members minus a churned
    random subset (and minus anyone who became a friend). Fresh draws top
    the pool up to ``pool_size``; they exclude everyone from the previous
    list, so ``churn_fraction`` is exactly the fraction of the old list
    replaced. With a degree filter set, a ``random_injection_fraction`` of
    the fresh draws deliberately ignores the filter.
    """
    graph, profile, receiver = state.graph, state.profile, state.receiver_id
    if profile.pool_size > graph.member_count - 1:
        raise UnderPopulatedError(
            f"pool_size {profile.pool_size} exceeds member count minus one"
        )
    friends = graph.neighbors(receiver)
    eligible = [m for m in graph.member_ids if m != receiver and m not in friends]
    if len(eligible) < profile.pool_size:
        raise UnderPopulatedError(
            f"only {len(eligible)} eligible members for a pool of {profile.pool_size}"
        )
    eligible_set = set(eligible)

    prev_ids: list[int] = []
    if state.previous_list is not None:
        prev_ids = [c for c in state.previous_list.candidate_ids() if c in eligible_set]

    carried = list(prev_ids)
    if carried:
        n_churn = int(round(profile.churn_fraction * len(carried)))
        if n_churn:
            drop = set(state.rng.choice(len(carried), size=n_churn, replace=False).tolist())
            carried = [c for i, c in enumerate(carried) if i not in drop]

    fresh_needed = profile.pool_size - len(carried)
    previous_members = set(prev_ids)
    universe = sorted(eligible_set - previous_members)
    pool = list(carried)
    if fresh_needed > 0:
        if len(universe) < fresh_needed:
            raise UnderPopulatedError(
                f"only {len(universe)} fresh candidates available, need {fresh_needed}"
            )
        if profile.degree_filter is None:
            picks = state.rng.choice(len(universe), size=fresh_needed, replace=False)
            pool.extend(universe[i] for i in sorted(picks.tolist()))
        else:
            degrees = graph.degree_classes(receiver, universe)
            in_class = [m for m, d in zip(universe, degrees) if d == profile.degree_filter]
            n_unfiltered = int(round(profile.random_injection_fraction * fresh_needed))
            n_filtered = min(fresh_needed - n_unfiltered, len(in_class))
            drawn: list[int] = []
            if n_filtered > 0:
                picks = state.rng.choice(len(in_class), size=n_filtered, replace=False)
                drawn.extend(in_class[i] for i in sorted(picks.tolist()))
            rest = sorted(set(universe) - set(drawn))
            n_rest = fresh_needed - len(drawn)
            picks = state.rng.choice(len(rest), size=n_rest, replace=False)
            drawn.extend(rest[i] for i in sorted(picks.tolist()))
            pool.extend(drawn)
    return pool


def calculate_recommendation(state: SimState, pool: Sequence[int]) -> dict[int, float]:
    """Grade every pool candidate with the profile's combined score."""
    graph, profile, receiver = state.graph, state.profile, state.receiver_id
    receiver_member = graph.member(receiver)
    for cid in pool:
        if cid == receiver:
            raise InvalidPairError("pool contains the receiver")
        if graph.is_friends(receiver, cid):
            raise InvalidPairError(f"pool contains current friend {cid}")
    feats = extract_features_batch(graph, receiver, list(pool))
    graded: dict[int, float] = {}
    for f in feats:
        candidate = graph.member(f.candidate_id)
        match = match_score(receiver_member, candidate, profile.weights)
        mismatch = mismatch_score(match, receiver_member, candidate, profile.interest_params)
        interest = interestingness(match, mismatch, profile.interest_params)
        foaf = foaf_score(graph, receiver, f.candidate_id, profile.weights)
        graded[f.candidate_id] = combined_score(
            f, match, interest, foaf, profile.weights, profile.foaf_cap
        )
    return graded


def sort_and_threshold(graded: Mapping[int, float], profile: NetworkProfile) -> list[int]:
    """Candidates at or above the grade threshold, best first, capped.

    Ties break by ascending candidate id so ordering is total.
    """
    kept = [cid for cid, g in graded.items() if g >= profile.grade_threshold]
    kept.sort(key=lambda cid: (-graded[cid], cid))
    return kept[: profile.list_capacity]


def _known_non_friends(graph: SocialGraph, receiver: int) -> list[int]:
    out = []
    for mid, _label in graph.known_contacts(receiver):
        if not graph.is_friends(receiver, mid):
            out.append(mid)
    return sorted(out)


def apply_positional_trends(ordered: Sequence[int], state: SimState) -> tuple[list[int], set[int]]:
    """Inject known candidates into leading and random slots.

    Each of the first ``first_k_known`` slots is, with probability
    ``first_k_known_prob``, guaranteed a known candidate: slots already
    holding one are left alone, others get a replacement drawn uniformly
    from the receiver's known non-friends (any degree class). A further
    ``known_random_fraction`` of the remaining slots is swapped the same
    way at random positions. Replaced candidates are dropped; the length
    never changes. With no known candidates available the injection
    silently no-ops (logged).
    """
    profile, rng = state.profile, state.rng
    result = list(ordered)
    injected: set[int] = set()
    if not result or (profile.first_k_known == 0 and profile.known_random_fraction == 0):
        return result, injected

    known_ids = _known_non_friends(state.graph, state.receiver_id)
    known_set = set(known_ids)
    in_list = set(result)
    available = [m for m in known_ids if m not in in_list]

    def inject_at(slot: int) -> None:
        if result[slot] in known_set:
            return  # slot already exhibits the trend
        if not available:
            log.debug(
                "known-candidate injection skipped at position %d: none available", slot + 1
            )
            return
        pick = available.pop(int(rng.integers(0, len(available))))
        result[slot] = pick
        injected.add(pick)

    for slot in range(min(profile.first_k_known, len(result))):
        if rng.random() < profile.first_k_known_prob:
            inject_at(slot)

    remaining = list(range(profile.first_k_known, len(result)))
    n_swap = int(round(profile.known_random_fraction * len(remaining)))
    if n_swap > 0 and remaining:
        picks = rng.choice(len(remaining), size=min(n_swap, len(remaining)), replace=False)
        for i in sorted(picks.tolist()):
            inject_at(remaining[i])
    return result, injected


def occupation_line(graph: SocialGraph, member_id: int) -> str:
    """Render the display line shown under a candidate's name."""
    m = graph.member(member_id)
    occ = sorted(m.values(AttributeKey.OCCUPATION))
    emp = sorted(m.values(AttributeKey.EMPLOYER))
    prof = sorted(m.values(AttributeKey.PROFESSION))
    if occ and emp:
        return f"{', '.join(occ)} at {emp[0]}"
    if occ:
        return ", ".join(occ)
    if emp:
        return f"Works at {emp[0]}"
    if prof:
        return prof[0].capitalize()
    return "Network member"


def decorate(
    ordered: Sequence[int],
    graph: SocialGraph,
    grades: Mapping[int, float],
    injected: set[int] = frozenset(),
) -> list[RecommendationEntry]:
    """Attach display decoration and consecutive positions."""
    entries = []
    for i, cid in enumerate(ordered):
        m = graph.member(cid)
        entries.append(
            RecommendationEntry(
                candidate_id=cid,
                grade=grades[cid],
                position=i + 1,
                injected_known=cid in injected,
                display_name=m.display_name,
                occupation_line=occupation_line(graph, cid),
                picture_id=m.picture_id,
            )
        )
    return entries


def next_visit(state: SimState) -> RecommendationList:
    """Run the full pipeline for one page visit and advance the state."""
    pool = randomize_inputs(state)
    graded = calculate_recommendation(state, pool)
    ordered = sort_and_threshold(graded, state.profile)
    ordered, injected = apply_positional_trends(ordered, state)
    ungraded = [cid for cid in ordered if cid not in graded]
    if ungraded:
        graded.update(calculate_recommendation(state, ungraded))
    entries = decorate(ordered, state.graph, graded, injected)
    result = RecommendationList(
        receiver_id=state.receiver_id,
        visit_index=state.visit_index,
        timestamp=state.start_time + state.visit_index * state.visit_interval,
        entries=entries,
    )
    state.previous_list = result
    state.visit_index += 1
    return result


def validate_list(rec: RecommendationList, graph: SocialGraph, profile: NetworkProfile) -> None:
    """Raise AssertionError if `rec` violates any structural invariant."""
    assert len(rec.entries) <= profile.list_capacity, "capacity exceeded"
    ids = rec.candidate_ids()
    assert len(set(ids)) == len(ids), "duplicate candidates"
    for e in rec.entries:
        assert not graph.is_friends(rec.receiver_id, e.candidate_id), "friend in list"
        assert e.candidate_id != rec.receiver_id, "receiver in its own list"
    assert [e.position for e in rec.entries] == list(range(1, len(rec.entries) + 1)), (
        "positions not consecutive"
    )
    tail = [
        e
        for e in rec.entries
        if e.position > profile.first_k_known and not e.injected_known
    ]
    keys = [(-e.grade, e.candidate_id) for e in tail]
    assert keys == sorted(keys), "graded tail not sorted"
