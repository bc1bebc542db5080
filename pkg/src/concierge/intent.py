"""Intent classifiers and the exact-keyword override table.

Two lightweight classifiers cover the two traffic sub-domains: a cue-word
vote for whether the user wants to book a flight or a hotel (or neither),
and a rule lexicon for intents about existing bookings. An exact keyword
table supplements them for words strongly correlated with customer-service
intents. A multinomial bag-of-words model with additive smoothing serves
as the learned direct-to-intent arm for experiment comparisons.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .textproc import tokenize


class PreBook(Enum):
    FLIGHT = "flight"
    HOTEL = "hotel"
    NONE = "none"


class PostBook(Enum):
    CANCEL_BOOKING = "cancel_booking"
    CHANGE_BOOKING = "change_booking"
    PAYMENTS = "payments"
    CHECK_BOOKING_STATUS = "check_booking_status"
    REQUEST_HUMAN_AGENT = "request_human_agent"
    OTHER_POST_BOOK = "other_post_book"
    GREETING = "greeting"
    UNKNOWN = "unknown"


#: Special keyword target that routes to the COVID information page.
COVID_INFO = "covid_info"

#: Labels accepted in annotated-intent corpora. Aggregated "pre_book"
#: appears in distribution reports; the split flight/hotel labels are what
#: a routing-capable learned model trains on; "unintelligible" marks
#: utterances excluded from distribution reports.
ANNOTATION_LABELS = frozenset(
    {"pre_book", PreBook.FLIGHT.value, PreBook.HOTEL.value, "unintelligible"}
    | {intent.value for intent in PostBook}
)

FLIGHT_CUES = frozenset({"flight", "flights", "fly", "plane"})
HOTEL_CUES = frozenset({"hotel", "room", "stay", "apartment", "accommodation"})

# Checked in this order; first intent with a cue hit wins.
POSTBOOK_CUES: tuple[tuple[PostBook, frozenset[str]], ...] = (
    (PostBook.CANCEL_BOOKING, frozenset({"cancel", "cancellation"})),
    (PostBook.CHANGE_BOOKING, frozenset({"change", "amend", "modify"})),
    (PostBook.PAYMENTS, frozenset({"pay", "payment", "refund", "charge", "credit"})),
    (PostBook.CHECK_BOOKING_STATUS, frozenset({"status", "confirmation"})),
    (PostBook.REQUEST_HUMAN_AGENT, frozenset({"agent", "human", "representative"})),
    (PostBook.GREETING, frozenset({"hi", "hello", "hey"})),
)


@dataclass(frozen=True)
class PreBookIntent:
    value: PreBook
    confidence: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.confidence <= 1.0:
            raise ValueError(f"confidence out of [0, 1]: {self.confidence}")


@dataclass(frozen=True)
class PostBookIntent:
    value: PostBook
    confidence: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.confidence <= 1.0:
            raise ValueError(f"confidence out of [0, 1]: {self.confidence}")


@dataclass(frozen=True)
class KeywordRule:
    """Exact keyword (token or phrase) mapped to an intent or covid_info."""

    keyword: str
    target: str

    def __post_init__(self) -> None:
        if not self.keyword:
            raise ValueError("keyword must be nonempty")


def classify_prebook(tokens: list[str]) -> PreBookIntent:
    """Cue-word vote between flight and hotel; tie or no cue means none.

    Confidence is the winning side's cue hits over the token count.
    """
    flight_hits = sum(1 for t in tokens if t in FLIGHT_CUES)
    hotel_hits = sum(1 for t in tokens if t in HOTEL_CUES)
    if flight_hits == hotel_hits:
        return PreBookIntent(PreBook.NONE, 0.0)
    if flight_hits > hotel_hits:
        return PreBookIntent(PreBook.FLIGHT, min(1.0, flight_hits / len(tokens)))
    return PreBookIntent(PreBook.HOTEL, min(1.0, hotel_hits / len(tokens)))


def classify_postbook(tokens: list[str]) -> PostBookIntent:
    """First post-book intent whose cue lexicon hits, in priority order."""
    token_set = set(tokens)
    for intent_value, cues in POSTBOOK_CUES:
        hits = len(token_set & cues)
        if hits:
            return PostBookIntent(intent_value, min(1.0, hits / len(tokens)))
    return PostBookIntent(PostBook.UNKNOWN, 0.0)


def keyword_match(tokens: list[str], rules: list[KeywordRule]) -> str | None:
    """Exact token/phrase containment; first rule in file order wins."""
    for rule in rules:
        keyword_tokens = rule.keyword.split(" ")
        span = len(keyword_tokens)
        if span == 1:
            if keyword_tokens[0] in tokens:
                return rule.target
        else:
            for i in range(len(tokens) - span + 1):
                if tokens[i : i + span] == keyword_tokens:
                    return rule.target
    return None


@dataclass(frozen=True)
class LearnedModel:
    """Multinomial bag-of-words intent model with additive smoothing.

    Only integer counts are authoritative; log priors and likelihoods are
    recomputed from them, so a persisted model classifies bit-identically
    after a round trip through disk.
    """

    classes: tuple[str, ...]
    vocabulary: tuple[str, ...]
    smoothing_alpha: float
    class_doc_counts: dict[str, int]
    token_counts: dict[str, dict[str, int]]
    class_log_prior: dict[str, float]
    token_log_likelihood: dict[str, dict[str, float]]

    @classmethod
    def from_counts(
        cls,
        alpha: float,
        class_doc_counts: dict[str, int],
        token_counts: dict[str, dict[str, int]],
    ) -> "LearnedModel":
        if alpha <= 0:
            raise ValueError(f"smoothing alpha must be positive: {alpha}")
        classes = tuple(sorted(class_doc_counts))
        if not classes:
            raise ValueError("model needs at least one class")
        vocabulary = tuple(sorted({t for counts in token_counts.values() for t in counts}))
        total_docs = sum(class_doc_counts.values())
        log_prior = {c: math.log(class_doc_counts[c] / total_docs) for c in classes}
        vocab_size = len(vocabulary)
        log_likelihood: dict[str, dict[str, float]] = {}
        for c in classes:
            counts = token_counts.get(c, {})
            total = sum(counts.values())
            denominator = total + alpha * vocab_size
            log_likelihood[c] = {
                t: math.log((counts.get(t, 0) + alpha) / denominator) for t in vocabulary
            }
        return cls(
            classes=classes,
            vocabulary=vocabulary,
            smoothing_alpha=alpha,
            class_doc_counts=dict(class_doc_counts),
            token_counts={c: dict(token_counts.get(c, {})) for c in classes},
            class_log_prior=log_prior,
            token_log_likelihood=log_likelihood,
        )


def train_learned(corpus: list[tuple[str, str]], alpha: float) -> LearnedModel:
    """Fit the multinomial model on ``(text, intent label)`` pairs.

    Class priors are proportional to label counts; token likelihoods are
    additively smoothed with ``alpha`` over the corpus vocabulary. Fully
    deterministic.
    """
    if alpha <= 0:
        raise ValueError(f"smoothing alpha must be positive: {alpha}")
    if not corpus:
        raise ValueError("training corpus must be nonempty")
    class_doc_counts: dict[str, int] = {}
    token_counts: dict[str, dict[str, int]] = {}
    for text, label in corpus:
        if not label:
            raise ValueError("every training label must be nonempty")
        class_doc_counts[label] = class_doc_counts.get(label, 0) + 1
        counts = token_counts.setdefault(label, {})
        for token in tokenize(text):
            counts[token] = counts.get(token, 0) + 1
    return LearnedModel.from_counts(alpha, class_doc_counts, token_counts)


def classify_learned(model: LearnedModel, tokens: list[str]) -> tuple[str, dict[str, float]]:
    """Argmax of class log prior plus summed token log likelihoods.

    Tokens outside the model vocabulary are skipped. Ties break toward
    the lexicographically smallest label. Returns the winning label and
    the per-class log scores.
    """
    vocabulary = set(model.vocabulary)
    scores: dict[str, float] = {}
    for c in model.classes:
        score = model.class_log_prior[c]
        likelihoods = model.token_log_likelihood[c]
        for token in tokens:
            if token in vocabulary:
                score += likelihoods[token]
        scores[c] = score
    best = max(sorted(scores), key=lambda c: scores[c])
    return best, scores
