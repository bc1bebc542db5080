from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from concierge.intent import PostBook
from concierge.pipeline import ConfigError, Pipeline, PipelineConfig
from concierge.types import ActionKind, Stage, StageStatus, Utterance

from tests.conftest import FIXTURES


def utterance(text, lang="en", replay_ref=None, uid="u-test"):
    return Utterance(id=uid, text=text, language=lang, replay_ref=replay_ref)


@pytest.fixture(scope="module")
def pipeline():
    return Pipeline.from_config_file(FIXTURES / "config.jsonl")


class TestRunHappyPaths:
    def test_hotel_in_paris(self, pipeline):
        decision, trace = pipeline.run(utterance("I need to book a hotel in Paris"))
        assert decision.kind is ActionKind.SEARCH_HOTELS
        assert decision.destination == "paris-fr"
        assert [r.stage for r in trace.records] == list(Stage)

    def test_flight_with_origin(self, pipeline):
        decision, _ = pipeline.run(utterance("flight from london to paris"))
        assert decision.kind is ActionKind.SEARCH_FLIGHTS
        assert decision.origin == "london-gb"
        assert decision.destination == "paris-fr"

    def test_dutch_through_lexicon(self, pipeline):
        decision, trace = pipeline.run(utterance("ik wil een hotel in parijs", lang="nl"))
        assert decision.kind is ActionKind.SEARCH_HOTELS
        assert decision.destination == "paris-fr"
        translation = trace.records[1]
        assert translation.stage is Stage.TRANSLATION
        assert translation.status is StageStatus.OK
        assert translation.input_snapshot == "ik wil een hotel in parijs"
        assert translation.output_snapshot == "i want a hotel in paris"

    def test_empty_text_short_circuits(self, pipeline):
        decision, trace = pipeline.run(utterance(""))
        assert decision.kind is ActionKind.UNINTELLIGIBLE
        assert [r.stage for r in trace.records] == [Stage.VTT]

    def test_whitespace_only_short_circuits(self, pipeline):
        decision, trace = pipeline.run(utterance("   \t  "))
        assert decision.kind is ActionKind.UNINTELLIGIBLE
        assert len(trace.records) == 1


class TestReplayPaths:
    def test_replay_hypothesis_flows_through(self, pipeline):
        decision, trace = pipeline.run(utterance("", replay_ref="u4"))
        assert trace.records[0].output_snapshot == "please cancel my book"
        assert decision.kind is ActionKind.OPEN_FAQ
        assert decision.faq_intent is PostBook.CANCEL_BOOKING

    def test_replay_falls_back_to_reference(self, pipeline):
        decision, _ = pipeline.run(utterance("", replay_ref="u5"))
        assert decision.kind is ActionKind.SEARCH_HOTELS

    def test_unknown_replay_id_degrades_to_unintelligible(self, pipeline):
        decision, trace = pipeline.run(utterance("", replay_ref="nope"))
        assert decision.kind is ActionKind.UNINTELLIGIBLE
        assert trace.records[0].status is StageStatus.FAILED
        assert "nope" in trace.records[0].output_snapshot

    def test_replay_without_corpus_fails_softly(self, pipeline):
        bare = Pipeline(
            PipelineConfig(
                vtt_backend="tpv",
                translation_backend="lexicon",
                ner_backend="gazetteer",
                intent_backend="composite",
            ),
            pipeline.gazetteer,
        )
        decision, trace = bare.run(utterance("", replay_ref="u1"))
        assert decision.kind is ActionKind.UNINTELLIGIBLE
        assert trace.records[0].status is StageStatus.FAILED


class TestDegradation:
    def test_missing_lexicon_degrades_translation(self, pipeline):
        no_lexicon = Pipeline(
            pipeline.config, pipeline.gazetteer, None, pipeline.keywords, pipeline.model
        )
        decision, trace = no_lexicon.run(utterance("ik wil een hotel in parijs", lang="nl"))
        translation = trace.records[1]
        assert translation.status is StageStatus.DEGRADED
        # Text forwarded verbatim.
        assert translation.output_snapshot == translation.input_snapshot
        assert decision is not None

    def test_wrong_language_lexicon_degrades(self, pipeline):
        decision, trace = pipeline.run(utterance("guten tag", lang="de"))
        assert trace.records[1].status is StageStatus.DEGRADED
        assert decision.kind is ActionKind.UNINTELLIGIBLE


class TestDeterminism:
    def test_identical_runs_identical_traces(self, pipeline):
        texts = ["book a hotel in amsterdam", "credit", "", "vlucht naar parijs"]
        for text in texts:
            first_decision, first_trace = pipeline.run(utterance(text, lang="nl"))
            second_decision, second_trace = pipeline.run(utterance(text, lang="nl"))
            assert first_decision == second_decision
            assert [
                (r.stage, r.status, r.input_snapshot, r.output_snapshot)
                for r in first_trace.records
            ] == [
                (r.stage, r.status, r.input_snapshot, r.output_snapshot)
                for r in second_trace.records
            ]


_TOTALITY_ENGINE = Pipeline.from_config_file(FIXTURES / "config.jsonl")


class TestTotality:
    @given(st.text(max_size=200), st.sampled_from(["en", "nl", "de", "fr"]))
    @settings(max_examples=150, deadline=None)
    def test_every_string_yields_one_decision(self, text, lang):
        decision, trace = _TOTALITY_ENGINE.run(utterance(text, lang=lang))
        assert decision.kind in ActionKind
        assert trace.decision == decision
        assert 1 <= len(trace.records) <= 5
        for record in trace.records:
            assert record.duration_ms >= 0


class TestConfigValidation:
    def test_unknown_intent_backend(self):
        with pytest.raises(ConfigError):
            Pipeline(
                PipelineConfig(
                    vtt_backend="passthrough",
                    translation_backend="lexicon",
                    ner_backend="gazetteer",
                    intent_backend="neural",
                ),
                gazetteer=Pipeline.from_config_file(FIXTURES / "config.jsonl").gazetteer,
            )

    def test_learned_requires_model(self, pipeline):
        with pytest.raises(ConfigError):
            Pipeline(
                PipelineConfig(
                    vtt_backend="passthrough",
                    translation_backend="lexicon",
                    ner_backend="gazetteer",
                    intent_backend="learned",
                ),
                gazetteer=pipeline.gazetteer,
            )

    def test_missing_gazetteer_path(self):
        with pytest.raises(ConfigError):
            Pipeline.from_config(
                PipelineConfig(
                    vtt_backend="passthrough",
                    translation_backend="lexicon",
                    ner_backend="gazetteer",
                    intent_backend="composite",
                )
            )


class TestLearnedArm:
    def test_variant_switch_shares_resources(self, pipeline):
        learned = pipeline.with_intent_backend("learned")
        assert learned.gazetteer is pipeline.gazetteer
        decision, trace = learned.run(utterance("i want to fly to paris tomorrow"))
        assert decision.kind is ActionKind.SEARCH_FLIGHTS
        assert "backend=learned" in trace.records[3].output_snapshot

    def test_learned_postbook_routes_to_faq(self, pipeline):
        learned = pipeline.with_intent_backend("learned")
        decision, _ = learned.run(utterance("where is my invoice"))
        assert decision.kind is ActionKind.OPEN_FAQ
        assert decision.faq_intent is PostBook.PAYMENTS

    def test_composite_is_default_and_reused(self, pipeline):
        assert pipeline.with_intent_backend("composite") is pipeline


class TestTraceSnapshots:
    def test_snapshots_are_capped(self, pipeline):
        decision, trace = pipeline.run(utterance("word " * 5000))
        for record in trace.records:
            assert len(record.input_snapshot) <= 2048
            assert len(record.output_snapshot) <= 2048
        assert decision is not None

    def test_intent_record_names_backend(self, pipeline):
        _, trace = pipeline.run(utterance("hello"))
        assert "backend=composite" in trace.records[3].output_snapshot
