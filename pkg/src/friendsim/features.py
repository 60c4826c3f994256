"""Per-pair candidate features: the reduced variable vector behind all scoring.

Everything here is a pure function over an immutable graph and is safe to
call from parallel workers. ``extract_features_batch`` is the hot path used
by the recommendation pipeline; it feeds one BFS row and one batched
common-neighbor count through the CSR kernels instead of per-pair lookups.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import InvalidPairError
from .graph import AttributeKey, Member, SocialGraph


@dataclass(frozen=True)
class CandidateFeatures:
    """Feature vector for one (receiver, candidate) pair."""

    candidate_id: int
    degree: int
    shared_connections: int
    known: bool
    known_from: str | None
    attribute_overlap: Mapping[AttributeKey, float]


def attribute_overlap(x: Member, y: Member, key: AttributeKey) -> float:
    """Jaccard similarity of the two members' value sets under `key`.

    Defined as 0 when both sets are empty: absence of information must not
    read as similarity.
    """
    vx, vy = x.values(key), y.values(key)
    union = len(vx | vy)
    if union == 0:
        return 0.0
    return len(vx & vy) / union


def shared_connections(graph: SocialGraph, a: int, b: int) -> int:
    """Number of common friends of `a` and `b`."""
    if a == b:
        raise InvalidPairError("shared_connections needs two distinct members")
    return len(graph.neighbors(a) & graph.neighbors(b))


def is_known(graph: SocialGraph, receiver: int, candidate: int) -> tuple[bool, str | None]:
    """Whether the receiver personally knows the candidate, plus provenance.

    True iff the pair's interaction record carries an offline acquaintance
    flag or at least one joint publication. The label echoes the record's
    generation-time provenance when present.
    """
    if receiver == candidate:
        raise InvalidPairError("is_known needs two distinct members")
    rec = graph.interaction(receiver, candidate)
    if rec is None:
        return (False, None)
    known = rec.offline_acquaintance or rec.joint_publications > 0
    return (known, rec.known_from if known else None)


def extract_features(graph: SocialGraph, receiver: int, candidate: int) -> CandidateFeatures:
    """Assemble the full feature vector for one pair."""
    return extract_features_batch(graph, receiver, [candidate])[0]


def extract_features_batch(
    graph: SocialGraph, receiver: int, candidates: Sequence[int]
) -> list[CandidateFeatures]:
    """Feature vectors for many candidates of one receiver.

    Field-by-field equal to the standalone operations; degree classes and
    shared-connection counts come from the batched kernels.
    """
    receiver_member = graph.member(receiver)
    if any(c == receiver for c in candidates):
        raise InvalidPairError("candidate set must not contain the receiver")
    degrees = graph.degree_classes(receiver, candidates)
    shared = graph.shared_connection_counts(receiver, candidates)
    out = []
    for i, cid in enumerate(candidates):
        cand = graph.member(cid)
        known, label = is_known(graph, receiver, cid)
        overlaps = {key: attribute_overlap(receiver_member, cand, key) for key in AttributeKey}
        out.append(
            CandidateFeatures(
                candidate_id=cid,
                degree=int(degrees[i]),
                shared_connections=int(shared[i]),
                known=known,
                known_from=label,
                attribute_overlap=overlaps,
            )
        )
    return out
