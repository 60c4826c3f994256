"""Histogramming, trend classification, and distribution comparisons."""

import datetime as dt

import numpy as np
import pytest

from friendsim.analysis import (
    TrendKind,
    TrendTag,
    TrendThresholds,
    classify_trend,
    compare_lists,
    histogram,
    location_interestingness,
    location_shares,
    mean_visit_churn,
    shares_from_counts,
    tv_distance,
    variable_column,
)
from friendsim.errors import InsufficientDataError, ValidationError
from friendsim.forms import SampleForm, SampleRow
from friendsim.graph import AttributeKey, Member, SocialGraph


class TestHistogram:
    def test_empty(self):
        h = histogram([])
        assert h.labels == [] and h.counts == [] and h.total == 0

    def test_hand_count(self):
        h = histogram([3, 3, 1])
        assert h.labels == [1, 3]
        assert h.counts == [1, 2]
        assert h.total == 3

    def test_counts_sum_to_total(self):
        rng = np.random.default_rng(1)
        for _ in range(20):
            values = rng.integers(0, 10, size=rng.integers(0, 80)).tolist()
            h = histogram(values)
            assert sum(h.counts) == h.total == len(values)

    def test_mode_breaks_ties_low(self):
        assert histogram([2, 2, 5, 5, 9]).mode == 2

    def test_csv_export(self):
        assert histogram([1, 1, 4]).to_csv() == "label,count\n1,2\n4,1\n"


class TestClassifyTrend:
    def test_constant_single_value(self):
        t = classify_trend([2] * 50)
        assert t.tag is TrendTag.CONSTANT
        assert t.evidence["modal_fraction"] == 1.0

    def test_constant_with_few_exceptions(self):
        # 47 of 50 identical: modal fraction 0.94 >= 0.9
        t = classify_trend(["unknown"] * 47 + ["known"] * 3)
        assert t.tag is TrendTag.CONSTANT
        assert t.evidence["modal_fraction"] == pytest.approx(0.94)

    def test_unimodal_low_peak_shape(self):
        # mode at 1 with 10 of 50, long sparse tail: the target histogram shape.
        # By the stated rule: peak 10 unique, median bin count 3 (10 >= 6),
        # value range 0..21 so the lowest quartile reaches 5.25 >= 1.
        values = (
            [0] * 6 + [1] * 10 + [2] * 7 + [3] * 6 + [4] * 5 + [5] * 4 + [6] * 3
            + [7] * 2 + [8] * 2 + [10] * 2 + [12] * 1 + [15] * 1 + [21] * 1
        )
        assert len(values) == 50
        t = classify_trend(values)
        assert t.tag is TrendTag.RECOGNIZABLE_TREND
        assert t.kind is TrendKind.UNIMODAL_LOW_PEAK
        assert t.evidence["peak_value"] == 1.0

    def test_high_peak_not_low(self):
        # same mass but the peak sits at the top of the range
        values = [20] * 10 + [0, 1, 2, 3, 4, 5, 6, 7] * 5
        t = classify_trend(values)
        assert t.kind is not TrendKind.UNIMODAL_LOW_PEAK

    def test_first_k_special(self):
        # mode 20 (44 of 50, below the constant bar), head ranks deviate;
        # the mode sits high so the low-peak branch cannot fire first
        values = [7, 9] + [20] * 44 + [18] * 4
        t = classify_trend(values)
        assert t.tag is TrendTag.RECOGNIZABLE_TREND
        assert t.kind is TrendKind.FIRST_K_SPECIAL
        assert t.evidence["first_k_p"] < 0.02

    def test_first_k_only_head_deviation_stays_constant(self):
        # with just the two leading deviants the modal fraction is 0.96,
        # so the constant rule wins by construction
        t = classify_trend([7, 9] + [20] * 48)
        assert t.tag is TrendTag.CONSTANT

    def test_first_k_uses_positions_across_forms(self):
        # two pooled lists of 25, each with deviant ranks 1-2
        values = ([7, 9] + [20] * 21 + [18, 19]) * 2
        positions = list(range(1, 26)) * 2
        t = classify_trend(values, positions)
        assert t.kind is TrendKind.FIRST_K_SPECIAL

    def test_insufficient_data(self):
        with pytest.raises(InsufficientDataError):
            classify_trend([1, 2, 3, 4])

    def test_misaligned_positions_rejected(self):
        with pytest.raises(ValidationError):
            classify_trend([1] * 10, positions=[1, 2, 3])

    def test_uniform_data_classified_random(self):
        # calibration: i.i.d. uniform over 5 values, n=50, 1000 seeded trials
        rng = np.random.default_rng(2718)
        random_count = 0
        for _ in range(1000):
            values = rng.integers(0, 5, size=50).tolist()
            random_count += classify_trend(values).tag is TrendTag.RANDOM
        assert random_count >= 950

    def test_constant_data_always_classified_constant(self):
        rng = np.random.default_rng(577)
        for _ in range(1000):
            value = int(rng.integers(0, 100))
            t = classify_trend([value] * 50)
            assert t.tag is TrendTag.CONSTANT

    def test_thresholds_configurable(self):
        loose = TrendThresholds(constant_modal_fraction=0.5)
        t = classify_trend([1] * 30 + [2] * 20, thresholds=loose)
        assert t.tag is TrendTag.CONSTANT

    def test_categorical_values_skip_low_peak(self):
        # strings can be constant or random but never unimodal-low-peak
        values = ["a"] * 20 + ["b"] * 10 + ["c"] * 8 + ["d"] * 7 + ["e"] * 5
        t = classify_trend(values)
        assert t.tag is TrendTag.RANDOM

    def test_boolean_values_classify(self):
        t = classify_trend([False] * 47 + [True] * 3)
        assert t.tag is TrendTag.CONSTANT


class TestTvDistance:
    def test_identical_is_zero(self):
        h = histogram([1, 2, 2, 3])
        assert tv_distance(h, h) == 0.0

    def test_disjoint_point_masses(self):
        assert tv_distance(histogram([2] * 10), histogram([5] * 7)) == 1.0

    def test_symmetric_and_bounded(self):
        rng = np.random.default_rng(12)
        for _ in range(30):
            a = histogram(rng.integers(0, 6, size=40).tolist())
            b = histogram(rng.integers(0, 6, size=25).tolist())
            d = tv_distance(a, b)
            assert 0.0 <= d <= 1.0
            assert d == pytest.approx(tv_distance(b, a))


class TestLocationInterestingness:
    def reference(self):
        return {
            "home": 0.82, "B": 0.08, "C": 0.04, "D": 0.03, "E": 0.02, "F": 0.01,
        }

    def observed(self):
        return {"home": 0.55, "B": 0.30, "C": 0.10, "D": 0.05}

    def test_identical_distributions_nothing_flagged(self):
        ref = self.reference()
        cmp = location_interestingness(ref, ref, ratio_threshold=3.0)
        assert not any(cmp.flagged)

    def test_disproportionate_second_country_flagged(self):
        # reference share below 0.10 versus observed 0.30 -> ratio 3.75
        cmp = location_interestingness(self.reference(), self.observed(), ratio_threshold=3.0)
        flagged = cmp.flagged_categories()
        assert "B" in flagged
        idx = cmp.categories.index("B")
        assert cmp.ratios[idx] == pytest.approx(0.30 / 0.08)
        assert cmp.ratios[idx] >= 3.0
        assert "home" not in flagged

    def test_epsilon_guard_for_zero_reference(self):
        ref = {"a": 1.0}
        obs = {"a": 0.9, "new": 0.1}
        cmp = location_interestingness(ref, obs, ratio_threshold=3.0)
        assert "new" in cmp.flagged_categories()

    def test_non_normalized_inputs_rejected(self):
        with pytest.raises(ValidationError):
            location_interestingness({"a": 0.5}, {"a": 1.0}, ratio_threshold=3.0)
        with pytest.raises(ValidationError):
            location_interestingness({"a": 1.0}, {"a": 0.7}, ratio_threshold=3.0)

    def test_threshold_must_exceed_one(self):
        with pytest.raises(ValidationError):
            location_interestingness({"a": 1.0}, {"a": 1.0}, ratio_threshold=1.0)

    def test_scale_consistency(self):
        counts_ref = {"a": 41, "b": 4, "c": 5}
        counts_obs = {"a": 11, "b": 6, "c": 3}
        base = location_interestingness(
            shares_from_counts(counts_ref), shares_from_counts(counts_obs), 3.0
        )
        scaled = location_interestingness(
            shares_from_counts({k: v * 17 for k, v in counts_ref.items()}),
            shares_from_counts({k: v * 3 for k, v in counts_obs.items()}),
            3.0,
        )
        assert base.flagged == scaled.flagged
        assert base.ratios == pytest.approx(scaled.ratios)

    def test_location_shares_from_graph(self):
        g = SocialGraph([
            Member(0, "A", {AttributeKey.LOCATION: {"X"}}),
            Member(1, "B", {AttributeKey.LOCATION: {"X"}}),
            Member(2, "C", {AttributeKey.LOCATION: {"Y"}}),
        ])
        assert location_shares(g, [0, 1, 2]) == {"X": pytest.approx(2 / 3), "Y": pytest.approx(1 / 3)}


def make_form(names, degrees, shared, knowns, when, network="net"):
    rows = [
        SampleRow(
            rank=i + 1,
            name=names[i],
            degree=degrees[i],
            shared_connections=shared[i],
            known_from=knowns[i],
            position_title="X",
        )
        for i in range(len(names))
    ]
    return SampleForm(network, when.date(), when.time(), rows)


def constant_form_set(count=3, network="net", degree=2):
    forms = []
    base = dt.datetime(2020, 1, 1, 8, 0)
    for k in range(count):
        n = 10
        names = [f"P{k}-{i}" for i in range(n)]
        forms.append(
            make_form(
                names,
                [degree] * n,
                [1, 1, 1, 2, 1, 1, 2, 1, 1, 1],
                [None] * n,
                base + dt.timedelta(hours=6 * k),
                network,
            )
        )
    return forms


class TestCompareLists:
    def test_self_comparison(self):
        forms = constant_form_set()
        report = compare_lists(forms, forms)
        for v in report.variables:
            assert v.tv_distance == 0.0
            assert v.trends_agree is True
        assert report.simulated_churn == report.observed_churn

    def test_constant_degree_agreement(self):
        report = compare_lists(constant_form_set(degree=2), constant_form_set(degree=2))
        degree_cmp = next(v for v in report.variables if v.variable == "degree")
        assert degree_cmp.simulated_trend.tag is TrendTag.CONSTANT
        assert degree_cmp.trends_agree is True

    def test_disjoint_histograms_have_tv_one(self):
        report = compare_lists(constant_form_set(degree=2), constant_form_set(degree=5))
        degree_cmp = next(v for v in report.variables if v.variable == "degree")
        assert degree_cmp.tv_distance == 1.0

    def test_mixed_network_names_rejected(self):
        with pytest.raises(ValidationError):
            compare_lists(constant_form_set(network="a"), constant_form_set(network="b"))
        mixed = constant_form_set(network="a") + constant_form_set(network="b")
        with pytest.raises(ValidationError):
            compare_lists(mixed, mixed)

    def test_empty_sets_rejected(self):
        with pytest.raises(ValidationError):
            compare_lists([], constant_form_set())

    def test_report_serializes(self):
        forms = constant_form_set()
        report = compare_lists(forms, forms)
        doc = report.to_dict()
        assert doc["network"] == "net"
        assert {v["variable"] for v in doc["variables"]} == {
            "degree", "shared_connections", "known"
        }
        text = report.to_text()
        assert "degree" in text and "churn" in text


class TestFormColumns:
    def test_variable_column_skips_missing(self):
        form = make_form(
            ["a", "b"], [2, None], [None, 3], ["work", None], dt.datetime(2020, 1, 1, 8)
        )
        values, positions = variable_column([form], "degree")
        assert values == [2] and positions == [1]
        values, positions = variable_column([form], "shared_connections")
        assert values == [3] and positions == [2]
        values, _ = variable_column([form], "known")
        assert values == [True, False]

    def test_unknown_variable_rejected(self):
        with pytest.raises(ValidationError):
            variable_column([], "salary")

    def test_churn_is_one_minus_jaccard(self):
        base = dt.datetime(2020, 1, 1, 8)
        f1 = make_form(["a", "b"], [2, 2], [1, 1], [None] * 2, base)
        f2 = make_form(["b", "c"], [2, 2], [1, 1], [None] * 2, base + dt.timedelta(hours=6))
        churn = mean_visit_churn([f2, f1])  # unsorted input on purpose
        assert churn == pytest.approx(1 - 1 / 3)

    def test_churn_undefined_for_single_form(self):
        f = make_form(["a"], [2], [1], [None], dt.datetime(2020, 1, 1, 8))
        assert mean_visit_churn([f]) is None
