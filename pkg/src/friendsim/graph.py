"""Synthetic social-graph model: members, friendships, interactions.

A ``SocialGraph`` is immutable after construction and safe to share across
workers. Traversal (degree classes, common-neighbor counts) runs over a
lazily built CSR index through :mod:`friendsim.kernels`; the internal CSR
and per-source BFS caches are idempotent, so a duplicated build under
concurrent first use is harmless.

Degree classes: the shortest-path length between two members in the
friendship graph, with everything past ``DEGREE_CAP`` (including
unreachable pairs) collapsed into the single class ``DEGREE_BEYOND``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from . import kernels
from .errors import ConfigError, InvalidPairError, UnknownMemberError

DEGREE_CAP = 3
DEGREE_BEYOND = DEGREE_CAP + 1  # any distance > DEGREE_CAP, or unreachable


def degree_label(value: int) -> str:
    """Human-readable label for a degree class (``4`` renders as ``"3+"``)."""
    return f"{DEGREE_CAP}+" if value >= DEGREE_BEYOND else str(value)


class AttributeKey(str, Enum):
    """The closed set of per-member categorical attribute families."""

    PROFESSION = "profession"
    EDUCATION_INSTITUTION = "education_institution"
    EMPLOYER = "employer"
    OCCUPATION = "occupation"
    SKILL = "skill"
    LANGUAGE = "language"
    HOBBY = "hobby"
    LOCATION = "location"


def _normalize_attributes(attrs: Mapping | None) -> dict:
    out = {}
    for key in AttributeKey:
        values = (attrs or {}).get(key, ())
        out[key] = frozenset(str(v) for v in values)
    return out


@dataclass(frozen=True)
class Member:
    """One network member: opaque id, display name, attribute sets."""

    id: int
    display_name: str
    attributes: Mapping[AttributeKey, frozenset] = field(default_factory=dict)
    picture_id: str = ""

    def __post_init__(self):
        object.__setattr__(self, "attributes", _normalize_attributes(self.attributes))

    def values(self, key: AttributeKey) -> frozenset:
        return self.attributes[key]


@dataclass(frozen=True)
class InteractionRecord:
    """Interaction history of one unordered member pair.

    ``known_from`` keeps the generation-time provenance of an acquaintance
    (e.g. "studies") so downstream feature extraction can echo it.
    """

    a: int
    b: int
    joint_publications: int = 0
    exchanged_messages: int = 0
    common_search_topics: int = 0
    offline_acquaintance: bool = False
    known_from: str | None = None

    def __post_init__(self):
        if self.a == self.b:
            raise InvalidPairError(f"interaction record with identical pair: {self.a}")
        for name in ("joint_publications", "exchanged_messages", "common_search_topics"):
            if getattr(self, name) < 0:
                raise ConfigError(f"{name} must be >= 0")
        if self.a > self.b:
            a, b = self.a, self.b
            object.__setattr__(self, "a", b)
            object.__setattr__(self, "b", a)

    @property
    def pair(self) -> tuple[int, int]:
        return (self.a, self.b)


class SocialGraph:
    """Members plus undirected friendship edges and interaction records."""

    def __init__(
        self,
        members: Iterable[Member],
        friendships: Iterable[tuple[int, int]] = (),
        interactions: Iterable[InteractionRecord] = (),
    ):
        self._members: dict[int, Member] = {}
        for m in members:
            if m.id in self._members:
                raise ConfigError(f"duplicate member id: {m.id}")
            self._members[m.id] = m

        self._adj: dict[int, set[int]] = {mid: set() for mid in self._members}
        for a, b in friendships:
            if a == b:
                raise ConfigError(f"self-friendship on member {a}")
            if a not in self._members or b not in self._members:
                raise ConfigError(f"friendship references unknown member: ({a}, {b})")
            self._adj[a].add(b)
            self._adj[b].add(a)

        self._interactions: dict[tuple[int, int], InteractionRecord] = {}
        for rec in interactions:
            if rec.a not in self._members or rec.b not in self._members:
                raise ConfigError(f"interaction references unknown member: {rec.pair}")
            if rec.pair in self._interactions:
                raise ConfigError(f"duplicate interaction record for pair {rec.pair}")
            self._interactions[rec.pair] = rec

        # CSR index and per-source BFS rows are built on first use.
        self._ids: list[int] = sorted(self._members)
        self._index: dict[int, int] = {mid: i for i, mid in enumerate(self._ids)}
        self._csr: tuple[np.ndarray, np.ndarray] | None = None
        self._level_rows: dict[int, np.ndarray] = {}

    # -- basic accessors ----------------------------------------------------

    @property
    def member_count(self) -> int:
        return len(self._members)

    @property
    def edge_count(self) -> int:
        return sum(len(s) for s in self._adj.values()) // 2

    @property
    def member_ids(self) -> list[int]:
        return list(self._ids)

    def members(self) -> Iterator[Member]:
        for mid in self._ids:
            yield self._members[mid]

    def member(self, member_id: int) -> Member:
        try:
            return self._members[member_id]
        except KeyError:
            raise UnknownMemberError(member_id) from None

    def __contains__(self, member_id: int) -> bool:
        return member_id in self._members

    def edges(self) -> Iterator[tuple[int, int]]:
        """All friendship edges as sorted (a, b) pairs, a < b, in id order."""
        for a in self._ids:
            for b in sorted(self._adj[a]):
                if a < b:
                    yield (a, b)

    def interactions(self) -> Iterator[InteractionRecord]:
        for pair in sorted(self._interactions):
            yield self._interactions[pair]

    def interaction(self, a: int, b: int) -> InteractionRecord | None:
        self.member(a)
        self.member(b)
        return self._interactions.get((min(a, b), max(a, b)))

    def interactions_of(self, member_id: int) -> list[InteractionRecord]:
        self.member(member_id)
        return [r for r in self.interactions() if member_id in r.pair]

    # -- traversal ----------------------------------------------------------

    def neighbors(self, member_id: int) -> frozenset:
        """Ids sharing a friendship edge with `member_id`."""
        self.member(member_id)
        return frozenset(self._adj[member_id])

    def is_friends(self, a: int, b: int) -> bool:
        self.member(a)
        return b in self._adj[a]

    def csr_adjacency(self) -> tuple[np.ndarray, np.ndarray]:
        """(indptr, indices) over dense indices aligned with sorted member ids."""
        return self._csr_arrays()

    def _csr_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        if self._csr is None:
            n = len(self._ids)
            counts = np.zeros(n + 1, dtype=np.int64)
            for mid in self._ids:
                counts[self._index[mid] + 1] = len(self._adj[mid])
            indptr = np.cumsum(counts)
            indices = np.empty(int(indptr[-1]), dtype=np.int64)
            for mid in self._ids:
                i = self._index[mid]
                row = sorted(self._index[nb] for nb in self._adj[mid])
                indices[indptr[i] : indptr[i + 1]] = row
            self._csr = (indptr, indices)
        return self._csr

    def _level_row(self, source_id: int) -> np.ndarray:
        row = self._level_rows.get(source_id)
        if row is None:
            indptr, indices = self._csr_arrays()
            row = kernels.bfs_levels(indptr, indices, self._index[source_id], DEGREE_CAP)
            self._level_rows[source_id] = row
        return row

    def degree_classes(self, source_id: int, target_ids: Sequence[int]) -> np.ndarray:
        """Degree class from `source_id` to each target (int32 array)."""
        self.member(source_id)
        row = self._level_row(source_id)
        idx = np.fromiter((self._index[self.member(t).id] for t in target_ids), dtype=np.int64)
        return row[idx] if idx.size else np.empty(0, dtype=np.int32)

    def network_degree(self, a: int, b: int) -> int:
        """Shortest-path degree class between two members (4 means "3+")."""
        self.member(a)
        self.member(b)
        if a == b:
            return 0
        return int(self._level_row(a)[self._index[b]])

    def shared_connection_counts(self, source_id: int, target_ids: Sequence[int]) -> np.ndarray:
        """Common-neighbor count between `source_id` and each target."""
        self.member(source_id)
        indptr, indices = self._csr_arrays()
        idx = np.fromiter((self._index[self.member(t).id] for t in target_ids), dtype=np.int64)
        if idx.size == 0:
            return np.empty(0, dtype=np.int64)
        return kernels.common_neighbor_counts(indptr, indices, self._index[source_id], idx)

    # -- derived views ------------------------------------------------------

    def known_contacts(self, member_id: int) -> list[tuple[int, str | None]]:
        """Members personally known to `member_id` (offline acquaintance or
        joint publications), with the provenance label when recorded."""
        out = []
        for rec in self.interactions_of(member_id):
            if rec.offline_acquaintance or rec.joint_publications > 0:
                other = rec.b if rec.a == member_id else rec.a
                out.append((other, rec.known_from))
        return out

    def with_friendship(self, a: int, b: int) -> "SocialGraph":
        """A new graph with one extra friendship edge (inputs are immutable)."""
        self.member(a)
        self.member(b)
        if a == b:
            raise InvalidPairError("cannot befriend a member with itself")
        edges = list(self.edges())
        edges.append((min(a, b), max(a, b)))
        return SocialGraph(self.members(), edges, self.interactions())


# ---------------------------------------------------------------------------
# generation


@dataclass
class AttributeSpec:
    """Sampling spec for one attribute family: vocabulary plus count range."""

    values: Sequence[str]
    weights: Sequence[float] | None = None
    min_count: int = 0
    max_count: int = 1


def default_attribute_specs() -> dict[AttributeKey, AttributeSpec]:
    return {
        AttributeKey.PROFESSION: AttributeSpec(
            ["software engineering", "law", "medicine", "accounting", "teaching",
             "architecture", "nursing", "journalism"],
            min_count=1, max_count=1,
        ),
        AttributeKey.EDUCATION_INSTITUTION: AttributeSpec(
            ["State University", "City College", "Tech Institute", "Riverside High",
             "Polytechnic", "Hill Academy", "Lakeside School", "Open University"],
            min_count=1, max_count=2,
        ),
        AttributeKey.EMPLOYER: AttributeSpec(
            ["Northwind", "Contoso", "Initech", "Globex", "Acme", "Aperture",
             "Umbrella", "Soylent", "Hooli", "Vandelay"],
            min_count=1, max_count=1,
        ),
        AttributeKey.OCCUPATION: AttributeSpec(
            ["Software Developer", "Project Manager", "Data Analyst", "College Student",
             "Sales Representative", "Web Market Expert", "Computer Software Professional",
             "Graphic Designer", "Accountant", "Teacher"],
            min_count=1, max_count=1,
        ),
        AttributeKey.SKILL: AttributeSpec(
            ["python", "sql", "negotiation", "public speaking", "statistics",
             "design", "devops", "copywriting", "budgeting", "recruiting"],
            min_count=1, max_count=3,
        ),
        AttributeKey.LANGUAGE: AttributeSpec(
            ["english", "spanish", "french", "german", "hebrew", "russian",
             "arabic", "mandarin"],
            weights=[8, 4, 3, 3, 2, 2, 1, 1],
            min_count=1, max_count=2,
        ),
        AttributeKey.HOBBY: AttributeSpec(
            ["hiking", "chess", "photography", "cooking", "running", "guitar",
             "gardening", "sailing", "painting", "climbing"],
            min_count=0, max_count=2,
        ),
        # Home country dominates, tail countries are rare.
        AttributeKey.LOCATION: AttributeSpec(
            ["United States", "Israel", "Germany", "France", "Brazil", "India",
             "Canada", "Spain"],
            weights=[62, 10, 7, 6, 5, 4, 3, 3],
            min_count=1, max_count=1,
        ),
    }


KNOWN_FROM_LABELS = ("studies", "work", "army", "family", "brother", "neighborhood")

_FIRST_NAMES = (
    "Avery", "Dana", "Jordan", "Casey", "Riley", "Morgan", "Quinn", "Rowan",
    "Noa", "Omer", "Lior", "Maya", "Ethan", "Grace", "Felix", "Irene",
    "Hugo", "Clara", "Ivan", "Nadia", "Pavel", "Sofia", "Marco", "Elena",
    "Tariq", "Amara", "Kenji", "Yuki", "Ravi", "Priya", "Sean", "Bridget",
)
_LAST_NAMES = (
    "Levin", "Navarro", "Okafor", "Kimura", "Haddad", "Novak", "Silva", "Weber",
    "Moreau", "Rossi", "Kovacs", "Petrov", "Lindqvist", "Fischer", "Doyle", "Costa",
    "Mizrahi", "Schmidt", "Olsen", "Vargas", "Tanaka", "Ibrahim", "Kaur", "Nguyen",
    "Baranov", "Carver", "Duarte", "Egan", "Farkas", "Galanos", "Horvat", "Iyer",
)


@dataclass
class GraphGenConfig:
    """Parameters of the seeded synthetic-graph generator."""

    member_count: int
    target_mean_degree: float = 8.0
    attributes: dict[AttributeKey, AttributeSpec] = field(default_factory=default_attribute_specs)
    offline_acquaintance_prob: float = 0.5
    interaction_rate: float = 4.0
    degree_skew: float = 0.0  # lognormal sigma of edge-endpoint propensity; 0 = uniform
    seed: int = 0

    def validate(self) -> None:
        if self.member_count < 0:
            raise ConfigError("member_count must be >= 0")
        if self.target_mean_degree < 0:
            raise ConfigError("target_mean_degree must be >= 0")
        if not 0.0 <= self.offline_acquaintance_prob <= 1.0:
            raise ConfigError("offline_acquaintance_prob must be in [0, 1]")
        if self.interaction_rate < 0:
            raise ConfigError("interaction_rate must be >= 0")
        if self.degree_skew < 0:
            raise ConfigError("degree_skew must be >= 0")
        for key, spec in self.attributes.items():
            if spec.min_count > spec.max_count:
                raise ConfigError(f"{key.value}: min_count > max_count")
            if spec.min_count < 0:
                raise ConfigError(f"{key.value}: min_count must be >= 0")
            if spec.min_count > 0 and len(spec.values) == 0:
                raise ConfigError(f"{key.value}: empty vocabulary with min_count > 0")
            if spec.max_count > len(spec.values):
                raise ConfigError(f"{key.value}: max_count exceeds vocabulary size")
            if spec.weights is not None and len(spec.weights) != len(spec.values):
                raise ConfigError(f"{key.value}: weights length mismatch")


def _sample_attributes(rng: np.random.Generator, specs) -> dict:
    attrs = {}
    for key in AttributeKey:
        spec = specs.get(key)
        if spec is None or not spec.values:
            attrs[key] = frozenset()
            continue
        count = int(rng.integers(spec.min_count, spec.max_count + 1))
        if count == 0:
            attrs[key] = frozenset()
            continue
        if spec.weights is not None:
            p = np.asarray(spec.weights, dtype=float)
            p = p / p.sum()
        else:
            p = None
        picks = rng.choice(len(spec.values), size=count, replace=False, p=p)
        attrs[key] = frozenset(spec.values[i] for i in picks)
    return attrs


def _sample_distinct_pairs(rng: np.random.Generator, n: int, count: int,
                           weights: np.ndarray | None = None) -> list[tuple[int, int]]:
    """`count` distinct unordered pairs over 0..n-1, by rejection."""
    max_pairs = n * (n - 1) // 2
    count = min(count, max_pairs)
    seen: set[tuple[int, int]] = set()
    out: list[tuple[int, int]] = []
    while len(out) < count:
        if weights is None:
            i, j = rng.integers(0, n, size=2)
        else:
            i, j = rng.choice(n, size=2, p=weights)
        if i == j:
            continue
        pair = (int(min(i, j)), int(max(i, j)))
        if pair in seen:
            continue
        seen.add(pair)
        out.append(pair)
    return out


def generate_graph(config: GraphGenConfig) -> SocialGraph:
    """Build a deterministic synthetic graph from `config`.

    Pure function of the config: identical configs (seed included) produce
    structurally identical graphs. Wiring is configuration-model style:
    ``round(member_count * target_mean_degree / 2)`` distinct random edges,
    self-loops and duplicates rejected. With ``degree_skew > 0`` edge
    endpoints are drawn with lognormal member propensities, which produces
    hub members and heavy-tailed shared-connection counts.
    """
    config.validate()
    rng = np.random.default_rng(config.seed)
    n = config.member_count

    members = []
    taken_names: dict[str, int] = {}
    for i in range(n):
        first = _FIRST_NAMES[int(rng.integers(0, len(_FIRST_NAMES)))]
        last = _LAST_NAMES[int(rng.integers(0, len(_LAST_NAMES)))]
        name = f"{first} {last}"
        bump = taken_names.get(name, 0)
        taken_names[name] = bump + 1
        if bump:
            name = f"{name} {bump + 1}"
        members.append(
            Member(
                id=i,
                display_name=name,
                attributes=_sample_attributes(rng, config.attributes),
                picture_id=f"pic-{i:05d}",
            )
        )

    edge_target = int(round(n * config.target_mean_degree / 2))
    if n >= 2 and edge_target > 0:
        if config.degree_skew > 0:
            w = rng.lognormal(mean=0.0, sigma=config.degree_skew, size=n)
            weights = w / w.sum()
        else:
            weights = None
        friendships = _sample_distinct_pairs(rng, n, edge_target, weights)
    else:
        friendships = []

    interactions = []
    record_target = int(round(n * config.interaction_rate / 2))
    if n >= 2 and record_target > 0:
        for a, b in _sample_distinct_pairs(rng, n, record_target):
            offline = bool(rng.random() < config.offline_acquaintance_prob)
            joint = int(rng.poisson(0.25))
            if offline:
                label = KNOWN_FROM_LABELS[int(rng.integers(0, len(KNOWN_FROM_LABELS)))]
            elif joint > 0:
                label = "publications"
            else:
                label = None
            interactions.append(
                InteractionRecord(
                    a=a,
                    b=b,
                    joint_publications=joint,
                    exchanged_messages=int(rng.poisson(1.5)),
                    common_search_topics=int(rng.poisson(0.8)),
                    offline_acquaintance=offline,
                    known_from=label,
                )
            )

    return SocialGraph(members, friendships, interactions)
