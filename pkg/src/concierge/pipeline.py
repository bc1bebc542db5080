"""Four-stage interpretation chain from raw utterance to routed action.

Stages run in a fixed order — transcription, translation, entity
resolution, intent classification — and the router turns their combined
annotations into one :class:`~concierge.types.ActionDecision`. Stage
backends are swappable through :class:`PipelineConfig`; every stage
consumes text plus annotations and contributes annotations back, so a
backend can be replaced without touching the orchestration.

Failure policy: a transcription failure (or an empty transcript) ends the
run with an unintelligible decision; any later stage that cannot do its
job forwards its input unchanged and marks its record degraded. A run
therefore always terminates in exactly one decision.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, replace
from pathlib import Path

from . import corpus_io
from .intent import (
    LearnedModel,
    PostBook,
    PostBookIntent,
    PreBook,
    PreBookIntent,
    classify_learned,
    classify_postbook,
    classify_prebook,
    keyword_match,
)
from .ner import Gazetteer, ResolutionError, assign_roles, recognize, resolve
from .router import RoutingInput, route
from .textproc import tokenize
from .translation import Lexicon, is_english, primary_subtag, translate
from .types import (
    ActionDecision,
    PipelineTrace,
    Stage,
    StageRecord,
    StageStatus,
    Utterance,
    clip_snapshot,
)
from .vtt import ReplayCorpus, UnknownReplayId, transcribe_replay

TRANSLATION_BACKENDS = ("lexicon",)
NER_BACKENDS = ("gazetteer",)
INTENT_BACKENDS = ("composite", "learned")

#: Labels a routing-capable learned model may predict: the split pre-book
#: intents, the post-book intents, or explicit unintelligible.
ROUTABLE_LABELS = frozenset(
    {PreBook.FLIGHT.value, PreBook.HOTEL.value, "unintelligible"}
    | {intent.value for intent in PostBook}
)


class ConfigError(ValueError):
    """The pipeline configuration cannot produce a runnable pipeline."""


@dataclass(frozen=True)
class PipelineConfig:
    """One-document pipeline configuration.

    Paths are kept as written in the file and resolved against
    ``base_dir`` when resources are loaded, so a config round-trips
    through serialization unchanged.
    """

    vtt_backend: str
    translation_backend: str
    ner_backend: str
    intent_backend: str
    default_language: str = "en"
    seed: int = 0
    experiment_salt: str = "concierge"
    gazetteer_path: str | None = None
    lexicon_path: str | None = None
    keywords_path: str | None = None
    model_path: str | None = None
    replay_path: str | None = None
    log_path: str | None = None
    base_dir: str = "."

    def resolve_path(self, value: str | None) -> Path | None:
        if value is None:
            return None
        path = Path(value)
        return path if path.is_absolute() else Path(self.base_dir) / path


class Pipeline:
    """A loaded, immutable interpretation pipeline.

    Safe to share across request handlers: configuration and resources
    never change after construction, and ``run`` keeps all per-utterance
    state on the stack.
    """

    def __init__(
        self,
        config: PipelineConfig,
        gazetteer: Gazetteer,
        lexicon: Lexicon | None = None,
        keywords: list | None = None,
        model: LearnedModel | None = None,
        replay: ReplayCorpus | None = None,
    ):
        if not config.vtt_backend:
            raise ConfigError("missing vtt backend")
        if config.translation_backend not in TRANSLATION_BACKENDS:
            raise ConfigError(f"unknown translation backend {config.translation_backend!r}")
        if config.ner_backend not in NER_BACKENDS:
            raise ConfigError(f"unknown ner backend {config.ner_backend!r}")
        if config.intent_backend not in INTENT_BACKENDS:
            raise ConfigError(f"unknown intent backend {config.intent_backend!r}")
        if config.intent_backend == "learned" and model is None:
            raise ConfigError("intent backend 'learned' requires a model")
        if model is not None:
            bad = set(model.classes) - ROUTABLE_LABELS
            if bad:
                raise ConfigError(f"model predicts unroutable labels: {sorted(bad)}")
        self.config = config
        self.gazetteer = gazetteer
        self.lexicon = lexicon
        self.keywords = list(keywords or [])
        self.model = model
        self.replay = replay

    @classmethod
    def from_config(cls, config: PipelineConfig) -> "Pipeline":
        """Load every referenced resource file and validate the backends."""
        gazetteer_path = config.resolve_path(config.gazetteer_path)
        if gazetteer_path is None:
            raise ConfigError("gazetteer_path is required")
        gazetteer = corpus_io.load_gazetteer(gazetteer_path)
        lexicon_path = config.resolve_path(config.lexicon_path)
        lexicon = corpus_io.load_lexicon(lexicon_path) if lexicon_path else None
        keywords_path = config.resolve_path(config.keywords_path)
        keywords = corpus_io.load_keywords(keywords_path) if keywords_path else []
        model_path = config.resolve_path(config.model_path)
        model = corpus_io.load_model(model_path) if model_path else None
        replay_path = config.resolve_path(config.replay_path)
        replay = corpus_io.load_replay(replay_path) if replay_path else None
        return cls(config, gazetteer, lexicon, keywords, model, replay)

    @classmethod
    def from_config_file(cls, path: str | Path) -> "Pipeline":
        return cls.from_config(corpus_io.load_pipeline_config(path))

    def with_intent_backend(self, backend: str) -> "Pipeline":
        """Sibling pipeline sharing all loaded resources."""
        if backend == self.config.intent_backend:
            return self
        return Pipeline(
            replace(self.config, intent_backend=backend),
            self.gazetteer,
            self.lexicon,
            self.keywords,
            self.model,
            self.replay,
        )

    # -- stage bodies ------------------------------------------------------

    def _transcribe(self, utterance: Utterance) -> tuple[str | None, StageRecord]:
        started = time.perf_counter()
        if utterance.replay_ref is not None:
            if self.replay is None:
                return None, self._record(
                    Stage.VTT,
                    utterance.replay_ref,
                    "failed: no replay corpus configured",
                    StageStatus.FAILED,
                    started,
                )
            try:
                text = transcribe_replay(utterance.replay_ref, self.replay, self.config.vtt_backend)
            except UnknownReplayId:
                return None, self._record(
                    Stage.VTT,
                    utterance.replay_ref,
                    f"failed: unknown replay id {utterance.replay_ref!r}",
                    StageStatus.FAILED,
                    started,
                )
            return text, self._record(Stage.VTT, utterance.replay_ref, text, StageStatus.OK, started)
        return utterance.text, self._record(
            Stage.VTT, utterance.text, utterance.text, StageStatus.OK, started
        )

    def _translate(self, text: str, language: str) -> tuple[str, StageRecord]:
        started = time.perf_counter()
        if is_english(language):
            return text, self._record(Stage.TRANSLATION, text, text, StageStatus.OK, started)
        lexicon = self.lexicon
        if lexicon is None or primary_subtag(lexicon.source_language) != primary_subtag(language):
            # No usable lexicon: forward the original text untouched.
            return text, self._record(Stage.TRANSLATION, text, text, StageStatus.DEGRADED, started)
        translated = translate(text, language, lexicon)
        return translated, self._record(
            Stage.TRANSLATION, text, translated, StageStatus.OK, started
        )

    def _resolve_entities(self, text: str, tokens: list[str]) -> tuple[list, StageRecord]:
        started = time.perf_counter()
        mentions = recognize(tokens, self.gazetteer)
        resolved = []
        dropped = 0
        for mention in mentions:
            try:
                resolved.append(resolve(mention, self.gazetteer))
            except ResolutionError:
                dropped += 1
        entities = assign_roles(resolved, tokens)
        status = StageStatus.DEGRADED if dropped else StageStatus.OK
        summary = (
            "; ".join(
                f"{e.entry_id}[{e.role.value}] span={e.mention.start}..{e.mention.end}"
                f" score={e.score}"
                for e in entities
            )
            or "no entities"
        )
        if dropped:
            summary += f" (dropped {dropped} unresolvable)"
        return entities, self._record(Stage.NER, text, summary, status, started)

    def _classify(self, tokens: list[str], entities: list) -> tuple[RoutingInput, StageRecord]:
        started = time.perf_counter()
        backend = self.config.intent_backend
        if backend == "composite":
            prebook = classify_prebook(tokens)
            postbook = classify_postbook(tokens)
            keyword_hit = (
                keyword_match(tokens, self.keywords) if prebook.value is PreBook.NONE else None
            )
        else:
            label, scores = classify_learned(self.model, tokens)
            prebook, postbook = _learned_to_intents(label, scores)
            keyword_hit = None
        routing_input = RoutingInput(
            prebook=prebook,
            postbook=postbook,
            keyword_hit=keyword_hit,
            entities=tuple(entities),
        )
        summary = f"backend={backend} {routing_input.describe()}"
        return routing_input, self._record(
            Stage.INTENT, " ".join(tokens), summary, StageStatus.OK, started
        )

    def _route(self, routing_input: RoutingInput) -> tuple[ActionDecision, StageRecord]:
        started = time.perf_counter()
        decision = route(routing_input)
        return decision, self._record(
            Stage.ROUTE, routing_input.describe(), decision.describe(), StageStatus.OK, started
        )

    def _record(
        self, stage: Stage, input_snapshot: str, output_snapshot: str, status: StageStatus, started: float
    ) -> StageRecord:
        return StageRecord(
            stage=stage,
            input_snapshot=clip_snapshot(input_snapshot),
            output_snapshot=clip_snapshot(output_snapshot),
            status=status,
            duration_ms=(time.perf_counter() - started) * 1000.0,
        )

    # -- orchestration -----------------------------------------------------

    def run(self, utterance: Utterance) -> tuple[ActionDecision, PipelineTrace]:
        """Interpret one utterance, returning the decision and full trace.

        Total: every input string yields exactly one decision. Stage
        failures degrade per the failure policy and never raise.
        """
        records: list[StageRecord] = []

        text, record = self._transcribe(utterance)
        records.append(record)
        if text is None or not text.strip():
            decision = ActionDecision.unintelligible()
            return decision, PipelineTrace(utterance.id, tuple(records), decision)

        text, record = self._translate(text, utterance.language)
        records.append(record)

        tokens = tokenize(text)
        entities, record = self._resolve_entities(text, tokens)
        records.append(record)

        routing_input, record = self._classify(tokens, entities)
        records.append(record)

        decision, record = self._route(routing_input)
        records.append(record)
        return decision, PipelineTrace(utterance.id, tuple(records), decision)


def _learned_to_intents(label: str, scores: dict[str, float]) -> tuple[PreBookIntent, PostBookIntent]:
    """Map a learned-model label onto the two routing intents.

    The winning label's posterior (softmax over log scores) becomes the
    confidence of whichever intent it maps to.
    """
    peak = max(scores.values())
    total = sum(math.exp(s - peak) for s in scores.values())
    confidence = min(1.0, 1.0 / total)
    if label in (PreBook.FLIGHT.value, PreBook.HOTEL.value):
        return PreBookIntent(PreBook(label), confidence), PostBookIntent(PostBook.UNKNOWN, 0.0)
    if label == "unintelligible":
        return PreBookIntent(PreBook.NONE, 0.0), PostBookIntent(PostBook.UNKNOWN, 0.0)
    return PreBookIntent(PreBook.NONE, 0.0), PostBookIntent(PostBook(label), confidence)
