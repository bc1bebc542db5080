#!/usr/bin/env python3
"""Regenerate the shipped demo fixtures under fixtures/.

Everything here is deterministic; run it after changing a format or a
dumper so the canonical files stay byte-identical with the serializers.
"""

from __future__ import annotations

from pathlib import Path

from concierge.corpus_io import (
    canonical_json,
    dump_confusion,
    dump_gazetteer,
    dump_keywords,
    dump_labeled_intents,
    dump_lexicon,
    dump_model,
    dump_replay,
    dump_transcript_pairs,
)
from concierge.intent import KeywordRule, train_learned
from concierge.ner import EntryKind, Gazetteer, GazetteerEntry
from concierge.translation import Lexicon
from concierge.vtt import ConfusionModel, ReplayCorpus, ReplayEntry

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def gazetteer() -> Gazetteer:
    entry = GazetteerEntry
    return Gazetteer(
        [
            entry("france-fr", "France", EntryKind.COUNTRY, ("france",), "FR", 67.0),
            entry("netherlands-nl", "Netherlands", EntryKind.COUNTRY, ("netherlands", "holland"), "NL", 17.5),
            entry("paris-fr", "Paris", EntryKind.CITY, ("paris",), "FR", 2.1, "france-fr"),
            entry("london-gb", "London", EntryKind.CITY, ("london",), "GB", 8.9),
            entry("amsterdam-nl", "Amsterdam", EntryKind.CITY, ("amsterdam",), "NL", 0.95, "netherlands-nl"),
            entry("amsterdam-us-ny", "Amsterdam (New York)", EntryKind.CITY, ("amsterdam",), "US", 0.05),
            entry("new-york-us", "New York City", EntryKind.CITY, ("new york", "new york city", "nyc"), "US", 8.4),
            entry("tuscany-it", "Tuscany", EntryKind.REGION, ("tuscany",), "IT", 3.7),
            entry("hotel-okura-nl", "Hotel Okura Amsterdam", EntryKind.HOTEL, ("hotel okura", "okura"), "NL", 0.01, "amsterdam-nl"),
        ]
    )


def lexicon_nl() -> Lexicon:
    return Lexicon(
        source_language="nl",
        entries={
            "ik": "i",
            "wil": "want",
            "een": "a",
            "het": "the",
            "mijn": "my",
            "hotel": "hotel",
            "kamer": "room",
            "in": "in",
            "naar": "to",
            "van": "from",
            "parijs": "paris",
            "londen": "london",
            "amsterdam": "amsterdam",
            "vlucht": "flight",
            "vliegen": "fly",
            "boek": "book",
            "boeken": "book",
            "annuleer": "cancel",
            "annulering": "cancellation",
            "betaling": "payment",
            "status": "status",
            "graag": "please",
        },
    )


def keyword_rules() -> list[KeywordRule]:
    return [
        KeywordRule("credit", "payments"),
        KeywordRule("invoice", "payments"),
        KeywordRule("receipt", "payments"),
        KeywordRule("coronavirus", "covid_info"),
        KeywordRule("covid", "covid_info"),
        KeywordRule("quarantine", "covid_info"),
    ]


def confusion_model() -> ConfusionModel:
    return ConfusionModel(
        entries={
            "booking": (("book", 0.35), ("looking", 0.1), ("<del>", 0.05)),
            "cancellation": (("consolation", 0.3), ("constellation", 0.1)),
            "reservation": (("registration", 0.3), ("reservations", 0.1)),
            "confirmation": (("information", 0.25), ("conformation", 0.1)),
            "hotel": (("motel", 0.15),),
            "flight": (("fright", 0.1), ("light", 0.1)),
        },
        insertion_rate=0.02,
        hint_damping=0.5,
    )


def replay_corpus() -> ReplayCorpus:
    return ReplayCorpus(
        entries={
            "u1": ReplayEntry(
                "contact hotel for reservation details",
                {"tpv": "contact hotel for registration details"},
            ),
            "u2": ReplayEntry(
                "can i have the confirmation", {"tpv": "can i have the information"}
            ),
            "u3": ReplayEntry("cancellation", {"tpv": "consolation"}),
            "u4": ReplayEntry(
                "please cancel my booking",
                {"tpv": "please cancel my book", "kaldi": "please cancel my booking"},
            ),
            "u5": ReplayEntry("i need to book a hotel in paris", {}),
        }
    )


BOOKING_TEMPLATES = (
    "is my booking confirmed yet",
    "please move my booking to friday",
    "the booking reference is wrong",
    "can you resend my booking details",
    "i made a booking for two nights",
)
CANCELLATION_TEMPLATES = (
    "i would like a cancellation",
    "what is your cancellation policy",
    "the cancellation fee seems high",
    "please confirm the cancellation",
)


def _degrade(reference: str, word: str, mode: str, substitute: str) -> str:
    tokens = reference.split(" ")
    index = tokens.index(word)
    if mode == "substitute":
        tokens[index] = substitute
    else:
        del tokens[index]
    return " ".join(tokens)


def wer_demo_pairs() -> list[tuple[str, str, str]]:
    """Corpus where 'booking' errs on 31/415 refs and 'cancellation' on 23/108."""
    rows: list[tuple[str, str, str]] = []
    for i in range(415):
        ref = BOOKING_TEMPLATES[i % len(BOOKING_TEMPLATES)]
        if i < 20:
            hyp = _degrade(ref, "booking", "substitute", "book")
        elif i < 31:
            hyp = _degrade(ref, "booking", "delete", "")
        else:
            hyp = ref
        rows.append((f"b{i:04d}", ref, hyp))
    for i in range(108):
        ref = CANCELLATION_TEMPLATES[i % len(CANCELLATION_TEMPLATES)]
        if i < 15:
            hyp = _degrade(ref, "cancellation", "substitute", "consolation")
        elif i < 23:
            hyp = _degrade(ref, "cancellation", "delete", "")
        else:
            hyp = ref
        rows.append((f"c{i:04d}", ref, hyp))
    return rows


#: Intent prevalence of the annotated demo corpus (counts per thousand).
DISTRIBUTION_COUNTS = {
    "pre_book": 669,
    "request_human_agent": 87,
    "check_booking_status": 71,
    "payments": 30,
    "change_booking": 19,
    "other_post_book": 100,
    "greeting": 24,
}


def labeled_rows(include_unintelligible: bool) -> list[tuple[str, str, str]]:
    rows: list[tuple[str, str, str]] = []
    index = 0
    for label, count in DISTRIBUTION_COUNTS.items():
        for _ in range(count):
            rows.append((f"li{index:05d}", f"annotated utterance {index}", label))
            index += 1
    if include_unintelligible:
        for _ in range(667):
            rows.append((f"li{index:05d}", f"annotated utterance {index}", "unintelligible"))
            index += 1
    return rows


INTENT_TRAINING_CORPUS = [
    ("i need to book a hotel in paris", "hotel"),
    ("find me a room in amsterdam", "hotel"),
    ("book accommodation for two nights", "hotel"),
    ("looking for a hotel near the beach", "hotel"),
    ("reserve a room in london", "hotel"),
    ("book a flight to london", "flight"),
    ("i want to fly to paris tomorrow", "flight"),
    ("find flights from amsterdam to new york", "flight"),
    ("need a plane ticket to france", "flight"),
    ("flight to tuscany next week", "flight"),
    ("cancel my booking", "cancel_booking"),
    ("i want a cancellation", "cancel_booking"),
    ("please cancel the reservation", "cancel_booking"),
    ("cancel everything now", "cancel_booking"),
    ("change my booking to friday", "change_booking"),
    ("amend the reservation dates", "change_booking"),
    ("modify my booking please", "change_booking"),
    ("can i change the dates", "change_booking"),
    ("i have a question about payment", "payments"),
    ("refund my credit card", "payments"),
    ("the charge looks wrong", "payments"),
    ("where is my invoice", "payments"),
    ("pay the remaining balance", "payments"),
    ("what is my booking status", "check_booking_status"),
    ("did you send the confirmation", "check_booking_status"),
    ("is my reservation confirmed", "check_booking_status"),
    ("status of my booking", "check_booking_status"),
    ("talk to a human agent", "request_human_agent"),
    ("i want a representative", "request_human_agent"),
    ("connect me with an agent", "request_human_agent"),
    ("human please", "request_human_agent"),
    ("hello", "greeting"),
    ("hi there", "greeting"),
    ("hey", "greeting"),
    ("good morning hello", "greeting"),
    ("is parking available at the property", "other_post_book"),
    ("can i bring my dog", "other_post_book"),
    ("what time is checkout", "other_post_book"),
    ("late checkout question", "other_post_book"),
    ("mmm hmm uh", "unintelligible"),
    ("asdblk qpwoe", "unintelligible"),
]


def pipeline_config_document() -> str:
    header = canonical_json({"format": "pipeline_config", "version": 1})
    document = canonical_json(
        {
            "vtt_backend": "tpv",
            "translation_backend": "lexicon",
            "ner_backend": "gazetteer",
            "intent_backend": "composite",
            "default_language": "en",
            "seed": 42,
            "experiment_salt": "demo",
            "gazetteer_path": "gazetteer.jsonl",
            "lexicon_path": "lexicon_nl.jsonl",
            "keywords_path": "keywords.tsv",
            "model_path": "learned_model.jsonl",
            "replay_path": "replay.jsonl",
        }
    )
    return header + "\n" + document + "\n"


def main() -> None:
    FIXTURES.mkdir(exist_ok=True)
    (FIXTURES / "gazetteer.jsonl").write_text(dump_gazetteer(gazetteer()), encoding="utf-8")
    (FIXTURES / "lexicon_nl.jsonl").write_text(dump_lexicon(lexicon_nl()), encoding="utf-8")
    (FIXTURES / "keywords.tsv").write_text(dump_keywords(keyword_rules()), encoding="utf-8")
    (FIXTURES / "confusion.tsv").write_text(dump_confusion(confusion_model()), encoding="utf-8")
    (FIXTURES / "replay.jsonl").write_text(dump_replay(replay_corpus()), encoding="utf-8")
    (FIXTURES / "transcripts_wer_demo.jsonl").write_text(
        dump_transcript_pairs(wer_demo_pairs()), encoding="utf-8"
    )
    (FIXTURES / "labeled_intents_demo.jsonl").write_text(
        dump_labeled_intents(labeled_rows(include_unintelligible=False)), encoding="utf-8"
    )
    (FIXTURES / "labeled_intents_demo_full.jsonl").write_text(
        dump_labeled_intents(labeled_rows(include_unintelligible=True)), encoding="utf-8"
    )
    (FIXTURES / "intent_corpus.jsonl").write_text(
        dump_labeled_intents(
            (f"tc{i:03d}", text, label) for i, (text, label) in enumerate(INTENT_TRAINING_CORPUS)
        ),
        encoding="utf-8",
    )
    model = train_learned(INTENT_TRAINING_CORPUS, alpha=1.0)
    (FIXTURES / "learned_model.jsonl").write_text(dump_model(model), encoding="utf-8")
    (FIXTURES / "config.jsonl").write_text(pipeline_config_document(), encoding="utf-8")
    (FIXTURES / "hints.txt").write_text(
        "booking\ncancellation\nreservation details\n", encoding="utf-8"
    )
    print(f"wrote fixtures to {FIXTURES}")


if __name__ == "__main__":
    main()
