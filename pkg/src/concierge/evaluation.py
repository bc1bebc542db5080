"""Measurement harness for transcription and intent quality.

Covers corpus word error rate with per-word error drilldown, per-class
precision/recall for intent classifiers, intent distribution reporting,
and a two-proportion z-test for comparing experiment groups. Each report
renders as an aligned plain-text table and round-trips through a JSON
dictionary.

Corpus WER is micro-averaged: integer edit counts are summed over the
whole corpus before the single division by total reference length, so
batch evaluation can process pairs in any order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .textproc import EditOp, align, tokenize


class EvaluationError(ValueError):
    """An evaluation precondition does not hold for the given inputs."""


@dataclass(frozen=True)
class WerReport:
    """Corpus-level word error rate: (S + D + I) / reference words."""

    pair_count: int
    total_ref_words: int
    substitutions: int
    deletions: int
    insertions: int

    @property
    def wer(self) -> float:
        return (self.substitutions + self.deletions + self.insertions) / self.total_ref_words

    def to_dict(self) -> dict:
        return {
            "pair_count": self.pair_count,
            "total_ref_words": self.total_ref_words,
            "substitutions": self.substitutions,
            "deletions": self.deletions,
            "insertions": self.insertions,
            "wer": self.wer,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "WerReport":
        return cls(
            pair_count=data["pair_count"],
            total_ref_words=data["total_ref_words"],
            substitutions=data["substitutions"],
            deletions=data["deletions"],
            insertions=data["insertions"],
        )

    def render(self) -> str:
        return "\n".join(
            [
                f"pairs:         {self.pair_count}",
                f"ref words:     {self.total_ref_words}",
                f"substitutions: {self.substitutions}",
                f"deletions:     {self.deletions}",
                f"insertions:    {self.insertions}",
                f"WER {self.wer * 100:.1f}%",
            ]
        )


@dataclass(frozen=True)
class PerWordErrorReport:
    """Errors over reference occurrences of one target word.

    A reference occurrence counts as an error when its alignment op is a
    substitution or a deletion; insertions of the word elsewhere do not
    count against it.
    """

    word: str
    errors: int
    occurrences: int

    def __post_init__(self) -> None:
        if self.errors > self.occurrences:
            raise ValueError(f"errors exceed occurrences for {self.word!r}")

    @property
    def rate(self) -> float | None:
        """Error rate as a percent rounded to one decimal; None for 0 occurrences."""
        if self.occurrences == 0:
            return None
        return round(100.0 * self.errors / self.occurrences, 1)

    @property
    def formatted(self) -> str:
        if self.occurrences == 0:
            return "0/0 (–)"
        return f"{self.errors}/{self.occurrences} ({100.0 * self.errors / self.occurrences:.1f}%)"

    def to_dict(self) -> dict:
        return {
            "word": self.word,
            "errors": self.errors,
            "occurrences": self.occurrences,
            "rate": self.rate,
            "formatted": self.formatted,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PerWordErrorReport":
        return cls(word=data["word"], errors=data["errors"], occurrences=data["occurrences"])


@dataclass(frozen=True)
class ClassMetrics:
    """Precision/recall/F1 for one intent label."""

    label: str
    true_positives: int
    false_positives: int
    false_negatives: int
    support: int

    @property
    def precision(self) -> float:
        denominator = self.true_positives + self.false_positives
        return self.true_positives / denominator if denominator else 0.0

    @property
    def recall(self) -> float:
        denominator = self.true_positives + self.false_negatives
        return self.true_positives / denominator if denominator else 0.0

    @property
    def f1(self) -> float:
        if self.precision + self.recall == 0:
            return 0.0
        return 2 * self.precision * self.recall / (self.precision + self.recall)

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "true_positives": self.true_positives,
            "false_positives": self.false_positives,
            "false_negatives": self.false_negatives,
            "support": self.support,
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ClassMetrics":
        return cls(
            label=data["label"],
            true_positives=data["true_positives"],
            false_positives=data["false_positives"],
            false_negatives=data["false_negatives"],
            support=data["support"],
        )


@dataclass(frozen=True)
class DistributionReport:
    """Share of each intent label, with excluded labels reported apart."""

    rows: tuple[tuple[str, int, float], ...]
    excluded_count: int
    excluded_reason: str

    def to_dict(self) -> dict:
        return {
            "rows": [
                {"label": label, "count": count, "percent": percent}
                for label, count, percent in self.rows
            ],
            "excluded_count": self.excluded_count,
            "excluded_reason": self.excluded_reason,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "DistributionReport":
        return cls(
            rows=tuple((r["label"], r["count"], r["percent"]) for r in data["rows"]),
            excluded_count=data["excluded_count"],
            excluded_reason=data["excluded_reason"],
        )

    def render(self) -> str:
        width = max((len(label) for label, _, _ in self.rows), default=10)
        lines = [f"{'Intent':<{width}}  Count  Prevalence"]
        for label, count, percent in self.rows:
            lines.append(f"{label:<{width}}  {count:>5}  {percent:.1f}%")
        if self.excluded_count:
            lines.append(f"excluded: {self.excluded_count} ({self.excluded_reason})")
        return "\n".join(lines)


@dataclass(frozen=True)
class ExperimentComparison:
    """Two-proportion z-test between experiment groups A and B.

    Pooled-variance normal approximation, two-sided p-value, no
    continuity correction. When the pooled proportion is degenerate
    (0 or 1) the statistic is defined as z = 0 with p = 1.
    """

    group_a: tuple[int, int]
    group_b: tuple[int, int]
    z_statistic: float
    p_value: float

    @property
    def significant_at_5pct(self) -> bool:
        return self.p_value < 0.05

    def to_dict(self) -> dict:
        return {
            "group_a": {"successes": self.group_a[0], "trials": self.group_a[1]},
            "group_b": {"successes": self.group_b[0], "trials": self.group_b[1]},
            "z_statistic": self.z_statistic,
            "p_value": self.p_value,
            "significant_at_5pct": self.significant_at_5pct,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentComparison":
        return cls(
            group_a=(data["group_a"]["successes"], data["group_a"]["trials"]),
            group_b=(data["group_b"]["successes"], data["group_b"]["trials"]),
            z_statistic=data["z_statistic"],
            p_value=data["p_value"],
        )

    def render(self) -> str:
        (sa, na), (sb, nb) = self.group_a, self.group_b
        verdict = "significant" if self.significant_at_5pct else "not significant"
        return "\n".join(
            [
                f"group a: {sa}/{na} ({100.0 * sa / na:.2f}%)",
                f"group b: {sb}/{nb} ({100.0 * sb / nb:.2f}%)",
                f"p-value: {self.p_value:.4f}",
                f"{verdict} (z={self.z_statistic:.2f})",
            ]
        )


def _aligned_pairs(pairs: list[tuple[str, str]]):
    for reference, hypothesis in pairs:
        ref_tokens = tokenize(reference)
        hyp_tokens = tokenize(hypothesis)
        yield ref_tokens, align(ref_tokens, hyp_tokens)


def wer_corpus(pairs: list[tuple[str, str]]) -> WerReport:
    """Micro-averaged WER over ``(reference, hypothesis)`` text pairs."""
    if not pairs:
        raise EvaluationError("need at least one transcript pair")
    total_ref = substitutions = deletions = insertions = 0
    for ref_tokens, alignment in _aligned_pairs(pairs):
        total_ref += len(ref_tokens)
        substitutions += alignment.substitutions
        deletions += alignment.deletions
        insertions += alignment.insertions
    if total_ref == 0:
        raise EvaluationError("all references are empty")
    return WerReport(
        pair_count=len(pairs),
        total_ref_words=total_ref,
        substitutions=substitutions,
        deletions=deletions,
        insertions=insertions,
    )


def per_word_errors(
    pairs: list[tuple[str, str]], target_words: list[str]
) -> list[PerWordErrorReport]:
    """Error/occurrence counts for each target word across the corpus."""
    if not pairs:
        raise EvaluationError("need at least one transcript pair")
    targets = {word: [0, 0] for word in target_words}  # word -> [errors, occurrences]
    total_ref = 0
    for ref_tokens, alignment in _aligned_pairs(pairs):
        total_ref += len(ref_tokens)
        for step in alignment.steps:
            if step.ref_index is None:
                continue
            word = ref_tokens[step.ref_index]
            if word not in targets:
                continue
            targets[word][1] += 1
            if step.op in (EditOp.SUBSTITUTE, EditOp.DELETE):
                targets[word][0] += 1
    if total_ref == 0:
        raise EvaluationError("all references are empty")
    return [
        PerWordErrorReport(word=w, errors=targets[w][0], occurrences=targets[w][1])
        for w in target_words
    ]


def render_per_word_table(reports: list[PerWordErrorReport]) -> str:
    width = max((len(r.word) for r in reports), default=10)
    lines = [f"{'Error word':<{width}}  errors/occurrences (rate)"]
    for report in reports:
        lines.append(f"{report.word:<{width}}  {report.formatted}")
    return "\n".join(lines)


def class_metrics(gold: list[str], predicted: list[str]) -> list[ClassMetrics]:
    """Per-label true/false positive counting over paired label lists."""
    if not gold:
        raise EvaluationError("need at least one labeled example")
    if len(gold) != len(predicted):
        raise EvaluationError(
            f"gold and predicted lengths differ: {len(gold)} vs {len(predicted)}"
        )
    labels = sorted(set(gold) | set(predicted))
    metrics = []
    for label in labels:
        tp = sum(1 for g, p in zip(gold, predicted) if g == label and p == label)
        fp = sum(1 for g, p in zip(gold, predicted) if g != label and p == label)
        fn = sum(1 for g, p in zip(gold, predicted) if g == label and p != label)
        metrics.append(
            ClassMetrics(
                label=label,
                true_positives=tp,
                false_positives=fp,
                false_negatives=fn,
                support=gold.count(label),
            )
        )
    return metrics


def render_class_metrics_table(metrics: list[ClassMetrics]) -> str:
    """Percent columns with no decimals, one row per intent."""
    width = max((len(m.label) for m in metrics), default=10)
    lines = [f"{'Intent':<{width}}  {'p':>4}  {'r':>4}"]
    for m in metrics:
        lines.append(f"{m.label:<{width}}  {m.precision * 100:.0f}%  {m.recall * 100:.0f}%")
    return "\n".join(lines)


def intent_distribution(
    labels: list[str], exclude: frozenset[str] | set[str] = frozenset()
) -> DistributionReport:
    """Label proportions over the non-excluded rows.

    Percentages are computed over included rows only and rounded to one
    decimal; excluded rows are counted separately.
    """
    if not labels:
        raise EvaluationError("need at least one label")
    excluded_count = sum(1 for label in labels if label in exclude)
    included = [label for label in labels if label not in exclude]
    if not included:
        raise EvaluationError("all labels excluded")
    counts: dict[str, int] = {}
    for label in included:
        counts[label] = counts.get(label, 0) + 1
    total = len(included)
    rows = tuple(
        (label, count, round(100.0 * count / total, 1))
        for label, count in sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    )
    reason = f"excluded labels: {', '.join(sorted(exclude))}" if excluded_count else ""
    return DistributionReport(rows=rows, excluded_count=excluded_count, excluded_reason=reason)


def compare_groups(a: tuple[int, int], b: tuple[int, int]) -> ExperimentComparison:
    """Two-proportion z-test with pooled variance over (successes, trials)."""
    for successes, trials in (a, b):
        if trials <= 0:
            raise EvaluationError("each group needs at least one trial")
        if not 0 <= successes <= trials:
            raise EvaluationError(f"successes out of range: {successes}/{trials}")
    (sa, na), (sb, nb) = a, b
    pooled = (sa + sb) / (na + nb)
    if pooled == 0.0 or pooled == 1.0:
        z, p = 0.0, 1.0
    else:
        se = math.sqrt(pooled * (1.0 - pooled) * (1.0 / na + 1.0 / nb))
        z = (sa / na - sb / nb) / se
        p = math.erfc(abs(z) / math.sqrt(2.0))
    return ExperimentComparison(group_a=a, group_b=b, z_statistic=z, p_value=p)
