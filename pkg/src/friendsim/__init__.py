"""friendsim: deterministic simulation and analysis of social-network
friend-recommendation lists.

The pieces compose bottom-up: a seeded synthetic :class:`SocialGraph`,
per-pair candidate features, the interestingness/friend-of-a-friend scoring
algebra, a visit pipeline driven by a :class:`NetworkProfile`, sample-form
I/O bridging simulation and analysis, and statistical tooling to compare
simulated output against collected forms. ``friendsim.cli`` ties it all
into the ``friendsim`` command.
"""

from .errors import (
    ConfigError,
    FormParseError,
    FriendsimError,
    InsufficientDataError,
    InvalidPairError,
    ParseError,
    UnderPopulatedError,
    UnknownMemberError,
    ValidationError,
)
from .features import CandidateFeatures, attribute_overlap, extract_features, is_known, shared_connections
from .graph import (
    DEGREE_BEYOND,
    DEGREE_CAP,
    AttributeKey,
    AttributeSpec,
    GraphGenConfig,
    InteractionRecord,
    Member,
    SocialGraph,
    degree_label,
    generate_graph,
)
from .pipeline import (
    RecommendationEntry,
    RecommendationList,
    SimState,
    next_visit,
)
from .profiles import NetworkProfile, facebook_like, get_profile, linkedin_like
from .scoring import (
    InterestParams,
    MismatchMode,
    ScoreWeights,
    combined_score,
    foaf_score,
    interestingness,
    match_score,
    mismatch_score,
)

__version__ = "0.1.0"

__all__ = [
    "AttributeKey",
    "AttributeSpec",
    "CandidateFeatures",
    "ConfigError",
    "DEGREE_BEYOND",
    "DEGREE_CAP",
    "FormParseError",
    "FriendsimError",
    "GraphGenConfig",
    "InsufficientDataError",
    "InteractionRecord",
    "InterestParams",
    "InvalidPairError",
    "Member",
    "MismatchMode",
    "NetworkProfile",
    "ParseError",
    "RecommendationEntry",
    "RecommendationList",
    "ScoreWeights",
    "SimState",
    "SocialGraph",
    "UnderPopulatedError",
    "UnknownMemberError",
    "ValidationError",
    "attribute_overlap",
    "combined_score",
    "degree_label",
    "extract_features",
    "facebook_like",
    "foaf_score",
    "generate_graph",
    "get_profile",
    "interestingness",
    "is_known",
    "linkedin_like",
    "match_score",
    "mismatch_score",
    "next_visit",
    "shared_connections",
]
