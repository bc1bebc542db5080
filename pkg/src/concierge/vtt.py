"""Transcription-stage backends.

Real ASR is out of scope: transcription is either replayed from a corpus
of recorded utterances (reference text plus per-backend hypotheses) or
synthesized by a seeded word-confusion simulator. The simulator exists to
manufacture domain-mismatched hypotheses for the evaluation harness; it
perturbs each word independently and supports hint phrases that dampen
the confusion probability of expected vocabulary.

Randomness contract: ``simulate`` uses ``random.Random(seed)`` (Mersenne
Twister) and draws in a fixed order — one uniform per insertion slot
(only when ``insertion_rate > 0`` and the model has insertion vocabulary),
then one uniform per input token that has a confusion row. The
seed-to-output mapping is therefore stable for a given model and input.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable

from .textproc import tokenize

#: Marker used in confusion rows for "the word is dropped entirely".
DELETION = "<del>"


class UnknownReplayId(KeyError):
    """Raised when a replay reference is not present in the corpus."""


@dataclass(frozen=True)
class ConfusionModel:
    """Per-word substitution/deletion table plus global insertion noise.

    ``entries`` maps a word to its alternatives in file order, each an
    ``(alternative, probability)`` pair where the alternative is either a
    replacement word or :data:`DELETION`. Residual probability mass means
    the word is emitted unchanged. ``hint_damping`` scales the confusion
    probabilities of words appearing in any hint phrase.
    """

    entries: dict[str, tuple[tuple[str, float], ...]] = field(default_factory=dict)
    insertion_rate: float = 0.0
    hint_damping: float = 1.0

    def __post_init__(self) -> None:
        if not 0.0 <= self.insertion_rate < 1.0:
            raise ValueError(f"insertion_rate must be in [0, 1): {self.insertion_rate}")
        if not 0.0 <= self.hint_damping <= 1.0:
            raise ValueError(f"hint_damping must be in [0, 1]: {self.hint_damping}")
        for word, alternatives in self.entries.items():
            total = 0.0
            for alt, prob in alternatives:
                if not 0.0 <= prob <= 1.0:
                    raise ValueError(f"probability out of [0, 1] for {word!r}: {prob}")
                total += prob
            if total > 1.0 + 1e-9:
                raise ValueError(f"probabilities for {word!r} sum to {total} > 1")

    @property
    def insertion_vocabulary(self) -> tuple[str, ...]:
        """Sorted candidate words for spurious insertions."""
        vocab = set(self.entries)
        for alternatives in self.entries.values():
            vocab.update(alt for alt, _ in alternatives if alt != DELETION)
        return tuple(sorted(vocab))


@dataclass(frozen=True)
class ReplayEntry:
    reference: str
    hyp_by_backend: dict[str, str] = field(default_factory=dict)


@dataclass(frozen=True)
class ReplayCorpus:
    """Recorded utterances keyed by replay id, standing in for audio."""

    entries: dict[str, ReplayEntry]


def transcribe_replay(replay_ref: str, corpus: ReplayCorpus, backend_name: str) -> str:
    """Return the stored hypothesis of ``backend_name`` for ``replay_ref``.

    Falls back to the reference text when no hypothesis was recorded for
    that backend. Unknown ids raise :class:`UnknownReplayId`; the pipeline
    degrades such utterances to an unintelligible decision.
    """
    entry = corpus.entries.get(replay_ref)
    if entry is None:
        raise UnknownReplayId(replay_ref)
    return entry.hyp_by_backend.get(backend_name, entry.reference)


def simulate(
    reference: list[str],
    model: ConfusionModel,
    hints: Iterable[str] = (),
    seed: int = 0,
) -> list[str]:
    """Produce a noisy transcription of ``reference`` tokens.

    Each token with a confusion row is independently replaced or deleted
    according to its row, with probabilities multiplied by
    ``model.hint_damping`` when the token occurs in any hint phrase.
    Spurious tokens are inserted at each of the ``len(reference) + 1``
    slot positions with probability ``insertion_rate``, drawn from the
    model's insertion vocabulary. Deterministic for a given seed.
    """
    rng = random.Random(seed)
    hinted: set[str] = set()
    for phrase in hints:
        hinted.update(tokenize(phrase))
    vocab = model.insertion_vocabulary
    insertions_enabled = model.insertion_rate > 0.0 and bool(vocab)

    out: list[str] = []
    for pos in range(len(reference) + 1):
        if insertions_enabled and rng.random() < model.insertion_rate:
            out.append(vocab[rng.randrange(len(vocab))])
        if pos == len(reference):
            break
        token = reference[pos]
        row = model.entries.get(token)
        if not row:
            out.append(token)
            continue
        damping = model.hint_damping if token in hinted else 1.0
        draw = rng.random()
        cumulative = 0.0
        chosen: str | None = None
        for alt, prob in row:
            cumulative += prob * damping
            if draw < cumulative:
                chosen = alt
                break
        if chosen is None:
            out.append(token)
        elif chosen != DELETION:
            out.append(chosen)
    return out
