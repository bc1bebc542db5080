from __future__ import annotations

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from concierge.evaluation import (
    EvaluationError,
    class_metrics,
    compare_groups,
    intent_distribution,
    per_word_errors,
    render_class_metrics_table,
    wer_corpus,
)
from tests.test_textproc import brute_force_distance


class TestWerCorpus:
    def test_identity_pair(self):
        assert wer_corpus([("any text here", "any text here")]).wer == 0.0

    def test_single_substitution_pair(self):
        report = wer_corpus(
            [
                (
                    "contact hotel for reservation details",
                    "contact hotel for registration details",
                )
            ]
        )
        assert report.wer == pytest.approx(0.2)
        assert report.substitutions == 1
        assert report.total_ref_words == 5

    def test_empty_hypothesis_all_deletions(self):
        report = wer_corpus([("a b", "")])
        assert report.wer == 1.0
        assert report.deletions == 2

    def test_rejects_empty_corpus(self):
        with pytest.raises(EvaluationError):
            wer_corpus([])

    def test_rejects_all_empty_references(self):
        with pytest.raises(EvaluationError):
            wer_corpus([("", "something"), ("  !!", "else")])

    def test_micro_average_not_mean_of_per_pair_wers(self):
        # Per-pair WERs are 0.0 and 1.0 (mean 0.5); micro average is 1/5.
        report = wer_corpus([("a b c d", "a b c d"), ("x", "y")])
        assert report.wer == pytest.approx(0.2)

    words = st.sampled_from(["a", "b", "c", "d"])

    @given(st.lists(st.tuples(st.lists(words, max_size=8), st.lists(words, max_size=8)), min_size=1, max_size=20))
    @settings(max_examples=150)
    def test_matches_bruteforce_oracle_on_corpora(self, token_pairs):
        pairs = [(" ".join(r), " ".join(h)) for r, h in token_pairs]
        total_ref = sum(len(r) for r, _ in token_pairs)
        if total_ref == 0:
            with pytest.raises(EvaluationError):
                wer_corpus(pairs)
            return
        report = wer_corpus(pairs)
        oracle_edits = sum(
            brute_force_distance(tuple(r), tuple(h)) for r, h in token_pairs
        )
        assert report.substitutions + report.deletions + report.insertions == oracle_edits
        assert report.wer == pytest.approx(oracle_edits / total_ref)


class TestPerWordErrors:
    def test_formatting_shape(self):
        pairs = [("my booking please", "my booking please")] * 3 + [
            ("my booking please", "my book please")
        ]
        (report,) = per_word_errors(pairs, ["booking"])
        assert report.errors == 1
        assert report.occurrences == 4
        assert report.formatted == "1/4 (25.0%)"

    def test_absent_word(self):
        (report,) = per_word_errors([("a b", "a b")], ["missing"])
        assert report.formatted == "0/0 (–)"
        assert report.rate is None

    def test_insertions_do_not_count_against_word(self):
        (report,) = per_word_errors([("say it", "say booking it")], ["booking"])
        assert report.occurrences == 0

    def test_deletion_counts(self):
        (report,) = per_word_errors([("cancel my booking", "cancel my")], ["booking"])
        assert report.errors == 1
        assert report.occurrences == 1


class TestClassMetrics:
    def test_perfect_predictions(self):
        metrics = class_metrics(["a", "b", "a"], ["a", "b", "a"])
        for m in metrics:
            assert m.precision == 1.0
            assert m.recall == 1.0

    def test_hand_counted_confusion(self):
        metrics = {m.label: m for m in class_metrics(["a", "a", "b"], ["a", "b", "b"])}
        assert metrics["a"].precision == 1.0
        assert metrics["a"].recall == 0.5
        assert metrics["b"].precision == 0.5
        assert metrics["b"].recall == 1.0

    def test_precision_from_constructed_counts(self):
        # 79 correct "x" predictions plus 21 spurious ones: p = 79%.
        gold = ["x"] * 79 + ["y"] * 21 + ["y"] * 10
        pred = ["x"] * 79 + ["x"] * 21 + ["y"] * 10
        metrics = {m.label: m for m in class_metrics(gold, pred)}
        assert metrics["x"].precision == pytest.approx(0.79)
        assert f"{metrics['x'].precision * 100:.0f}%" == "79%"

    def test_sum_identities(self):
        gold = ["a", "b", "c", "a", "b", "a"]
        pred = ["a", "c", "c", "b", "b", "a"]
        metrics = class_metrics(gold, pred)
        correct = sum(1 for g, p in zip(gold, pred) if g == p)
        assert sum(m.true_positives for m in metrics) == correct
        assert sum(m.support for m in metrics) == len(gold)

    def test_rejects_length_mismatch(self):
        with pytest.raises(EvaluationError):
            class_metrics(["a"], ["a", "b"])

    def test_rejects_empty(self):
        with pytest.raises(EvaluationError):
            class_metrics([], [])

    def test_table_render_shape(self):
        table = render_class_metrics_table(class_metrics(["a", "a"], ["a", "a"]))
        lines = table.splitlines()
        assert lines[0].split() == ["Intent", "p", "r"]
        assert "100%" in lines[1]


class TestIntentDistribution:
    def test_single_label(self):
        report = intent_distribution(["greeting"] * 7)
        assert report.rows == (("greeting", 7, 100.0),)

    def test_exclusion_reported_separately(self):
        labels = ["pre_book"] * 3 + ["unintelligible"] * 2
        report = intent_distribution(labels, {"unintelligible"})
        assert report.excluded_count == 2
        assert report.rows == (("pre_book", 3, 100.0),)
        assert "unintelligible" in report.excluded_reason

    def test_rejects_all_excluded(self):
        with pytest.raises(EvaluationError):
            intent_distribution(["x", "x"], {"x"})

    def test_rejects_empty(self):
        with pytest.raises(EvaluationError):
            intent_distribution([])

    @given(st.lists(st.sampled_from(["a", "b", "c", "d"]), min_size=1, max_size=200))
    def test_percents_sum_to_100_up_to_rounding(self, labels):
        report = intent_distribution(labels)
        # Each row is rounded to one decimal, so drift is at most 0.05/row.
        tolerance = 0.05 * len(report.rows) + 1e-9
        assert sum(percent for _, _, percent in report.rows) == pytest.approx(
            100.0, abs=tolerance
        )
        assert sum(count for _, count, _ in report.rows) == len(labels)


class TestCompareGroups:
    def test_equal_proportions(self):
        comparison = compare_groups((50, 1000), (50, 1000))
        assert comparison.z_statistic == 0.0
        assert not comparison.significant_at_5pct
        assert comparison.render().endswith("not significant (z=0.00)")

    def test_known_comparison(self):
        comparison = compare_groups((60, 500), (90, 500))
        assert comparison.z_statistic == pytest.approx(-2.6568, abs=1e-3)
        assert comparison.significant_at_5pct

    def test_degenerate_all_failures(self):
        comparison = compare_groups((0, 10), (0, 10))
        assert comparison.z_statistic == 0.0
        assert comparison.p_value == 1.0

    def test_degenerate_all_successes(self):
        comparison = compare_groups((10, 10), (5, 5))
        assert comparison.p_value == 1.0

    def test_rejects_zero_trials(self):
        with pytest.raises(EvaluationError):
            compare_groups((0, 0), (1, 10))

    def test_rejects_successes_above_trials(self):
        with pytest.raises(EvaluationError):
            compare_groups((11, 10), (1, 10))

    def test_p_value_matches_normal_tail(self):
        comparison = compare_groups((60, 500), (90, 500))
        expected = math.erfc(abs(comparison.z_statistic) / math.sqrt(2))
        assert comparison.p_value == pytest.approx(expected)

    @given(
        st.integers(min_value=0, max_value=50),
        st.integers(min_value=1, max_value=50),
        st.integers(min_value=0, max_value=50),
        st.integers(min_value=1, max_value=50),
    )
    @settings(max_examples=200)
    def test_antisymmetry(self, sa, extra_a, sb, extra_b):
        a = (sa, sa + extra_a)
        b = (sb, sb + extra_b)
        forward = compare_groups(a, b)
        backward = compare_groups(b, a)
        assert forward.z_statistic == pytest.approx(-backward.z_statistic)
        assert forward.p_value == pytest.approx(backward.p_value)
