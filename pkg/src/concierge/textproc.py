"""Tokenization and word-level alignment shared by all stages.

Transcription scoring and the NLU stages operate on the same normalized
word units, so error attribution in evaluation reports lines up with what
the classifiers actually saw.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass
from enum import Enum


def _is_punct(ch: str) -> bool:
    return unicodedata.category(ch).startswith("P")


def tokenize(text: str) -> list[str]:
    """Normalize text into lowercase word tokens.

    Splits on Unicode whitespace and strips leading/trailing punctuation
    from each chunk; internal apostrophes and hyphens survive ("can't",
    "check-in"). Chunks that are punctuation-only are dropped, so the
    result never contains empty tokens.
    """
    tokens: list[str] = []
    for chunk in text.lower().split():
        start, end = 0, len(chunk)
        while start < end and _is_punct(chunk[start]):
            start += 1
        while end > start and _is_punct(chunk[end - 1]):
            end -= 1
        if start < end:
            tokens.append(chunk[start:end])
    return tokens


class EditOp(Enum):
    CORRECT = "correct"
    SUBSTITUTE = "substitute"
    DELETE = "delete"
    INSERT = "insert"


@dataclass(frozen=True)
class AlignStep:
    """One aligned position: the op plus the indices it consumed.

    ``ref_index`` is None for insertions, ``hyp_index`` is None for
    deletions; both are set for correct/substitute steps.
    """

    op: EditOp
    ref_index: int | None
    hyp_index: int | None


@dataclass(frozen=True)
class Alignment:
    """Minimal-cost word alignment between a reference and a hypothesis."""

    steps: tuple[AlignStep, ...]
    correct: int
    substitutions: int
    deletions: int
    insertions: int

    @property
    def edit_cost(self) -> int:
        return self.substitutions + self.deletions + self.insertions


def align(reference: list[str], hypothesis: list[str]) -> Alignment:
    """Align two token sequences with unit costs for each edit type.

    When several alignments share the minimal cost, ties break toward
    Correct, then Substitute, then Delete, then Insert, which keeps
    per-word error attribution reproducible across runs.
    """
    n, m = len(reference), len(hypothesis)
    dp = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(1, n + 1):
        dp[i][0] = i
    for j in range(1, m + 1):
        dp[0][j] = j
    for i in range(1, n + 1):
        ref_tok = reference[i - 1]
        row, prev = dp[i], dp[i - 1]
        for j in range(1, m + 1):
            sub = prev[j - 1] + (ref_tok != hypothesis[j - 1])
            dele = prev[j] + 1
            ins = row[j - 1] + 1
            row[j] = sub if sub <= dele and sub <= ins else (dele if dele <= ins else ins)

    steps: list[AlignStep] = []
    i, j = n, m
    while i > 0 or j > 0:
        if i > 0 and j > 0 and reference[i - 1] == hypothesis[j - 1] and dp[i][j] == dp[i - 1][j - 1]:
            steps.append(AlignStep(EditOp.CORRECT, i - 1, j - 1))
            i, j = i - 1, j - 1
        elif i > 0 and j > 0 and reference[i - 1] != hypothesis[j - 1] and dp[i][j] == dp[i - 1][j - 1] + 1:
            steps.append(AlignStep(EditOp.SUBSTITUTE, i - 1, j - 1))
            i, j = i - 1, j - 1
        elif i > 0 and dp[i][j] == dp[i - 1][j] + 1:
            steps.append(AlignStep(EditOp.DELETE, i - 1, None))
            i -= 1
        else:
            steps.append(AlignStep(EditOp.INSERT, None, j - 1))
            j -= 1
    steps.reverse()

    counts = {op: 0 for op in EditOp}
    for step in steps:
        counts[step.op] += 1
    return Alignment(
        steps=tuple(steps),
        correct=counts[EditOp.CORRECT],
        substitutions=counts[EditOp.SUBSTITUTE],
        deletions=counts[EditOp.DELETE],
        insertions=counts[EditOp.INSERT],
    )
