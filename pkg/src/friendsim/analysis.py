"""Statistical characterization of sample forms, real or simulated.

Three tools live here: exact value histograms, a trend classifier that
sorts a column of observations into constant / random / recognizable-trend
behavior, and distribution comparisons (category-share anomaly flagging and
simulated-vs-observed similarity reports).

The trend classifier is deliberately threshold-based and every threshold is
exposed in :class:`TrendThresholds` so it can be re-fitted: constant means
the modal value covers >= 90% of the sample; a unimodal low peak means a
unique histogram peak at least twice the median bin count sitting in the
lowest quartile of the value range; first-k-special means the leading two
ranks deviate from the sample mode significantly more (or less) than the
rest, by Fisher's exact test. Anything else is called random - a rejection
class, not a distribution fit.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping, Sequence

from scipy.stats import fisher_exact

from .errors import InsufficientDataError, ValidationError
from .forms import SampleForm
from .graph import AttributeKey, SocialGraph

SHARE_SUM_TOL = 1e-9
SHARE_EPSILON = 1e-6


# ---------------------------------------------------------------------------
# histograms


@dataclass
class Histogram:
    """Exact counts per distinct value, labels sorted ascending."""

    labels: list
    counts: list[int]
    total: int

    def shares(self) -> dict:
        if self.total == 0:
            return {}
        return {l: c / self.total for l, c in zip(self.labels, self.counts)}

    @property
    def mode(self):
        """Label with the highest count; ties break toward the smaller label."""
        best = max(self.counts)
        for l, c in zip(self.labels, self.counts):
            if c == best:
                return l
        return None

    def to_csv(self) -> str:
        lines = ["label,count"]
        lines.extend(f"{label},{count}" for label, count in zip(self.labels, self.counts))
        return "\n".join(lines) + "\n"


def histogram(values: Sequence) -> Histogram:
    counts: dict = {}
    for v in values:
        counts[v] = counts.get(v, 0) + 1
    labels = sorted(counts)
    return Histogram(labels=labels, counts=[counts[l] for l in labels], total=len(values))


def tv_distance(a: Histogram, b: Histogram) -> float:
    """Total-variation distance between two normalized histograms, in [0, 1]."""
    pa, pb = a.shares(), b.shares()
    labels = set(pa) | set(pb)
    return 0.5 * sum(abs(pa.get(l, 0.0) - pb.get(l, 0.0)) for l in labels)


# ---------------------------------------------------------------------------
# trend classification


class TrendTag(Enum):
    CONSTANT = "constant"
    RANDOM = "random"
    RECOGNIZABLE_TREND = "recognizable_trend"


class TrendKind(Enum):
    UNIMODAL_LOW_PEAK = "unimodal_low_peak"
    FIRST_K_SPECIAL = "first_k_special"


@dataclass(frozen=True)
class TrendClass:
    tag: TrendTag
    kind: TrendKind | None = None
    evidence: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if (self.kind is not None) != (self.tag is TrendTag.RECOGNIZABLE_TREND):
            raise ValueError("kind must be present iff tag is RECOGNIZABLE_TREND")

    def describe(self) -> str:
        if self.kind is not None:
            return f"{self.tag.value}({self.kind.value})"
        return self.tag.value


@dataclass(frozen=True)
class TrendThresholds:
    constant_modal_fraction: float = 0.9
    peak_median_ratio: float = 2.0
    low_peak_quantile: float = 0.25
    # 0.02 keeps the head test reachable on a single 50-row form (the most
    # extreme admissible table has p = 0.0122) while the strongest table
    # i.i.d. noise can produce stays above it (p = 0.0367).
    first_k: int = 2
    first_k_alpha: float = 0.02
    min_observations: int = 5


DEFAULT_THRESHOLDS = TrendThresholds()


def _is_numeric(label) -> bool:
    return isinstance(label, (int, float)) and not isinstance(label, bool)


def classify_trend(
    values: Sequence,
    positions: Sequence[int] | None = None,
    thresholds: TrendThresholds = DEFAULT_THRESHOLDS,
) -> TrendClass:
    """Classify one column of observations; see the module docstring.

    `positions` are 1-based ranks within each list; when omitted the values
    are assumed to be one list in rank order.
    """
    n = len(values)
    if n < thresholds.min_observations:
        raise InsufficientDataError(
            f"need at least {thresholds.min_observations} observations, got {n}"
        )
    if positions is None:
        positions = range(1, n + 1)
    elif len(positions) != n:
        raise ValidationError("positions must align with values")

    hist = histogram(values)
    modal_count = max(hist.counts)
    evidence: dict[str, float] = {
        "n": float(n),
        "modal_fraction": modal_count / n,
    }

    if modal_count / n >= thresholds.constant_modal_fraction:
        return TrendClass(TrendTag.CONSTANT, evidence=evidence)

    if len(hist.labels) >= 2 and all(_is_numeric(l) for l in hist.labels):
        median_count = statistics.median(hist.counts)
        peak_ratio = modal_count / median_count
        lo, hi = hist.labels[0], hist.labels[-1]
        cutoff = lo + thresholds.low_peak_quantile * (hi - lo)
        peak_unique = hist.counts.count(modal_count) == 1
        evidence["peak_value"] = float(hist.mode)
        evidence["peak_ratio"] = peak_ratio
        if peak_unique and peak_ratio >= thresholds.peak_median_ratio and hist.mode <= cutoff:
            return TrendClass(
                TrendTag.RECOGNIZABLE_TREND, TrendKind.UNIMODAL_LOW_PEAK, evidence
            )

    mode = hist.mode
    head = [v != mode for v, p in zip(values, positions) if p <= thresholds.first_k]
    tail = [v != mode for v, p in zip(values, positions) if p > thresholds.first_k]
    if head and tail:
        table = [
            [sum(head), len(head) - sum(head)],
            [sum(tail), len(tail) - sum(tail)],
        ]
        _, p_value = fisher_exact(table, alternative="two-sided")
        evidence["first_k_p"] = float(p_value)
        if p_value < thresholds.first_k_alpha:
            return TrendClass(
                TrendTag.RECOGNIZABLE_TREND, TrendKind.FIRST_K_SPECIAL, evidence
            )

    return TrendClass(TrendTag.RANDOM, evidence=evidence)


# ---------------------------------------------------------------------------
# category-share comparison


@dataclass
class DistributionComparison:
    """Per-category shares of two sources plus anomaly flags."""

    categories: list[str]
    reference_shares: list[float]
    observed_shares: list[float]
    ratios: list[float]
    flagged: list[bool]

    def flagged_categories(self) -> list[str]:
        return [c for c, f in zip(self.categories, self.flagged) if f]


def shares_from_counts(counts: Mapping[str, float]) -> dict[str, float]:
    """Normalize raw category counts into shares summing to 1."""
    total = float(sum(counts.values()))
    if total <= 0:
        raise ValidationError("counts must sum to a positive total")
    return {k: v / total for k, v in counts.items()}


def _check_shares(shares: Mapping[str, float], what: str) -> None:
    total = sum(shares.values())
    if abs(total - 1.0) > SHARE_SUM_TOL:
        raise ValidationError(f"{what} shares sum to {total!r}, expected 1")
    for k, v in shares.items():
        if v < 0:
            raise ValidationError(f"{what} share for {k!r} is negative")


def location_interestingness(
    reference: Mapping[str, float],
    observed: Mapping[str, float],
    ratio_threshold: float,
) -> DistributionComparison:
    """Flag categories whose observed share is disproportionately high.

    Both inputs must be probability vectors; missing categories on either
    side count as 0. A category is flagged when
    ``observed / max(reference, 1e-6) >= ratio_threshold`` - relevant
    enough to appear on both sides, unexpected in its observed magnitude.
    """
    if ratio_threshold <= 1.0:
        raise ValidationError("ratio_threshold must be > 1")
    _check_shares(reference, "reference")
    _check_shares(observed, "observed")
    categories = sorted(set(reference) | set(observed))
    ref = [float(reference.get(c, 0.0)) for c in categories]
    obs = [float(observed.get(c, 0.0)) for c in categories]
    ratios = [o / max(r, SHARE_EPSILON) for r, o in zip(ref, obs)]
    flagged = [ratio >= ratio_threshold for ratio in ratios]
    return DistributionComparison(categories, ref, obs, ratios, flagged)


def location_shares(graph: SocialGraph, member_ids: Sequence[int]) -> dict[str, float]:
    """Share of each location value across the given members."""
    counts: dict[str, float] = {}
    for mid in member_ids:
        for loc in sorted(graph.member(mid).values(AttributeKey.LOCATION)):
            counts[loc] = counts.get(loc, 0) + 1
    return shares_from_counts(counts)


# ---------------------------------------------------------------------------
# form-set analysis and comparison

FORM_VARIABLES = ("degree", "shared_connections", "known")


def variable_column(forms: Sequence[SampleForm], variable: str) -> tuple[list, list[int]]:
    """Pooled (values, ranks) of one variable across forms; missing skipped.

    ``known`` is derived per row from the presence of a known-from label.
    """
    if variable not in FORM_VARIABLES:
        raise ValidationError(f"unknown variable {variable!r}")
    values: list = []
    positions: list[int] = []
    for form in forms:
        for row in form.rows:
            if variable == "degree":
                v = row.degree
            elif variable == "shared_connections":
                v = row.shared_connections
            else:
                v = row.known_from is not None
            if v is None:
                continue
            values.append(v)
            positions.append(row.rank)
    return values, positions


def mean_visit_churn(forms: Sequence[SampleForm]) -> float | None:
    """Mean 1 - Jaccard of consecutive candidate-name sets, by time stamp.

    Names are the only cross-form candidate identity available in collected
    data. None when fewer than two forms exist.
    """
    ordered = sorted(forms, key=lambda f: f.timestamp)
    if len(ordered) < 2:
        return None
    churns = []
    for prev, cur in zip(ordered, ordered[1:]):
        a = {r.name for r in prev.rows}
        b = {r.name for r in cur.rows}
        union = a | b
        jac = len(a & b) / len(union) if union else 1.0
        churns.append(1.0 - jac)
    return sum(churns) / len(churns)


def _single_network_name(forms: Sequence[SampleForm], what: str) -> str:
    names = {f.network_name for f in forms}
    if len(names) != 1:
        raise ValidationError(f"{what} forms mix network names: {sorted(names)}")
    return names.pop()


def _classify_or_none(values, positions, thresholds) -> TrendClass | None:
    try:
        return classify_trend(values, positions, thresholds)
    except InsufficientDataError:
        return None


@dataclass
class VariableComparison:
    variable: str
    simulated_trend: TrendClass | None
    observed_trend: TrendClass | None
    trends_agree: bool | None
    tv_distance: float


@dataclass
class ComparisonReport:
    """Similarity measurements between simulated and observed form sets.

    A measurement artifact: no pass/fail verdict is attached.
    """

    network_name: str
    variables: list[VariableComparison]
    simulated_churn: float | None
    observed_churn: float | None

    def to_dict(self) -> dict:
        def trend_dict(t: TrendClass | None):
            if t is None:
                return None
            return {
                "tag": t.tag.value,
                "kind": t.kind.value if t.kind else None,
                "evidence": dict(t.evidence),
            }

        return {
            "format": "friendsim-similarity",
            "version": 1,
            "network": self.network_name,
            "variables": [
                {
                    "variable": v.variable,
                    "simulated": trend_dict(v.simulated_trend),
                    "observed": trend_dict(v.observed_trend),
                    "trends_agree": v.trends_agree,
                    "tv_distance": v.tv_distance,
                }
                for v in self.variables
            ],
            "churn": {
                "simulated": self.simulated_churn,
                "observed": self.observed_churn,
            },
        }

    def to_text(self) -> str:
        lines = [f"Similarity report - network: {self.network_name}", ""]
        header = f"{'variable':<20} {'simulated':<36} {'observed':<36} {'agree':<6} {'tv-dist':<8}"
        lines.append(header)
        lines.append("-" * len(header))
        for v in self.variables:
            sim = v.simulated_trend.describe() if v.simulated_trend else "(insufficient data)"
            obs = v.observed_trend.describe() if v.observed_trend else "(insufficient data)"
            agree = "-" if v.trends_agree is None else ("yes" if v.trends_agree else "no")
            lines.append(f"{v.variable:<20} {sim:<36} {obs:<36} {agree:<6} {v.tv_distance:<8.4f}")
        lines.append("")

        def churn_text(c):
            return "n/a (fewer than 2 forms)" if c is None else f"{c:.4f}"

        lines.append(f"mean per-visit churn, simulated: {churn_text(self.simulated_churn)}")
        lines.append(f"mean per-visit churn, observed:  {churn_text(self.observed_churn)}")
        return "\n".join(lines) + "\n"


def compare_lists(
    simulated: Sequence[SampleForm],
    observed: Sequence[SampleForm],
    thresholds: TrendThresholds = DEFAULT_THRESHOLDS,
) -> ComparisonReport:
    """Characterize how similar two form sets are, per variable."""
    if not simulated or not observed:
        raise ValidationError("both form sets must be non-empty")
    sim_name = _single_network_name(simulated, "simulated")
    obs_name = _single_network_name(observed, "observed")
    if sim_name != obs_name:
        raise ValidationError(
            f"network name mismatch: simulated {sim_name!r} vs observed {obs_name!r}"
        )

    variables = []
    for variable in FORM_VARIABLES:
        sim_values, sim_pos = variable_column(simulated, variable)
        obs_values, obs_pos = variable_column(observed, variable)
        sim_trend = _classify_or_none(sim_values, sim_pos, thresholds)
        obs_trend = _classify_or_none(obs_values, obs_pos, thresholds)
        agree = None
        if sim_trend is not None and obs_trend is not None:
            agree = (sim_trend.tag, sim_trend.kind) == (obs_trend.tag, obs_trend.kind)
        variables.append(
            VariableComparison(
                variable=variable,
                simulated_trend=sim_trend,
                observed_trend=obs_trend,
                trends_agree=agree,
                tv_distance=tv_distance(histogram(sim_values), histogram(obs_values)),
            )
        )

    return ComparisonReport(
        network_name=sim_name,
        variables=variables,
        simulated_churn=mean_visit_churn(simulated),
        observed_churn=mean_visit_churn(observed),
    )
