"""Loading, validation, and canonical serialization of all file formats.

Every file starts with a one-line JSON header ``{"format": ..., "version":
...}`` (plus format-specific settings). Record streams are JSON-lines;
the keyword and confusion tables are TAB-separated for hand-editing.
Loading is strict and all-or-nothing: unknown fields, duplicate ids,
labels outside the frozen taxonomy, and type-invariant violations abort
with a :class:`LoadError` naming the first offending line, and no partial
object is ever returned.

``dump_*`` functions emit the canonical byte form (sorted keys, compact
separators, ``ensure_ascii=False``); files written by them round-trip
byte-identically through their loader.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Any, Iterable

from .intent import ANNOTATION_LABELS, COVID_INFO, KeywordRule, LearnedModel, PostBook
from .ner import EntryKind, Gazetteer, GazetteerEntry
from .textproc import tokenize
from .translation import Lexicon
from .vtt import ConfusionModel, ReplayCorpus, ReplayEntry

FORMAT_VERSION = 1

#: Keyword rules may target any actionable post-book intent or the COVID
#: information page; "unknown" is a classifier output, not a rule target.
KEYWORD_TARGETS = frozenset(
    {intent.value for intent in PostBook if intent is not PostBook.UNKNOWN} | {COVID_INFO}
)


class LoadReason(Enum):
    MALFORMED_RECORD = "malformed_record"
    DUPLICATE_ID = "duplicate_id"
    UNKNOWN_LABEL = "unknown_label"
    INVARIANT_VIOLATION = "invariant_violation"


@dataclass
class LoadError(Exception):
    file: str
    line: int
    reason: LoadReason
    detail: str

    def __str__(self) -> str:
        return f"{self.file}:{self.line}: {self.reason.value}: {self.detail}"


def canonical_json(value: Any) -> str:
    return json.dumps(value, ensure_ascii=False, sort_keys=True, separators=(",", ":"))


def _sorted_list(values: Iterable[str]) -> str:
    return ", ".join(sorted(values))


def _read_lines(path: str | Path) -> list[str]:
    text = Path(path).read_text(encoding="utf-8")
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    return lines


def _parse_json(path: str, lineno: int, line: str) -> dict:
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise LoadError(path, lineno, LoadReason.MALFORMED_RECORD, f"invalid JSON: {exc}")
    if not isinstance(obj, dict):
        raise LoadError(path, lineno, LoadReason.MALFORMED_RECORD, "record is not an object")
    return obj


def _check_fields(
    path: str,
    lineno: int,
    obj: dict,
    required: dict[str, type | tuple[type, ...]],
    optional: dict[str, type | tuple[type, ...]] | None = None,
) -> None:
    optional = optional or {}
    unknown = set(obj) - set(required) - set(optional)
    if unknown:
        raise LoadError(
            path, lineno, LoadReason.MALFORMED_RECORD, f"unknown fields: {_sorted_list(unknown)}"
        )
    missing = set(required) - set(obj)
    if missing:
        raise LoadError(
            path, lineno, LoadReason.MALFORMED_RECORD, f"missing fields: {_sorted_list(missing)}"
        )
    for name, expected in {**required, **optional}.items():
        if name in obj and not isinstance(obj[name], expected):
            raise LoadError(
                path, lineno, LoadReason.MALFORMED_RECORD, f"field {name!r} has wrong type"
            )
        if name in obj and expected is not bool and isinstance(obj[name], bool):
            raise LoadError(
                path, lineno, LoadReason.MALFORMED_RECORD, f"field {name!r} has wrong type"
            )


def _read_header(path: str, lines: list[str], expected_format: str) -> dict:
    if not lines:
        raise LoadError(path, 1, LoadReason.MALFORMED_RECORD, "empty file, header expected")
    header = _parse_json(path, 1, lines[0])
    if header.get("format") != expected_format:
        raise LoadError(
            path,
            1,
            LoadReason.MALFORMED_RECORD,
            f"expected format {expected_format!r}, got {header.get('format')!r}",
        )
    if header.get("version") != FORMAT_VERSION:
        raise LoadError(
            path, 1, LoadReason.MALFORMED_RECORD, f"unsupported version {header.get('version')!r}"
        )
    return header


def _header_line(format_name: str, **extra: Any) -> str:
    return canonical_json({"format": format_name, "version": FORMAT_VERSION, **extra})


# --- replay corpus -------------------------------------------------------


def load_replay(path: str | Path) -> ReplayCorpus:
    path = str(path)
    lines = _read_lines(path)
    _read_header(path, lines, "replay_corpus")
    entries: dict[str, ReplayEntry] = {}
    for lineno, line in enumerate(lines[1:], start=2):
        obj = _parse_json(path, lineno, line)
        _check_fields(path, lineno, obj, {"id": str, "ref": str}, {"hyp_by_backend": dict})
        if obj["id"] in entries:
            raise LoadError(path, lineno, LoadReason.DUPLICATE_ID, f"id {obj['id']!r}")
        hyps = obj.get("hyp_by_backend", {})
        for backend, hyp in hyps.items():
            if not isinstance(backend, str) or not isinstance(hyp, str):
                raise LoadError(
                    path, lineno, LoadReason.MALFORMED_RECORD, "hyp_by_backend must map str to str"
                )
        entries[obj["id"]] = ReplayEntry(reference=obj["ref"], hyp_by_backend=dict(hyps))
    return ReplayCorpus(entries=entries)


def dump_replay(corpus: ReplayCorpus) -> str:
    lines = [_header_line("replay_corpus")]
    for rid, entry in corpus.entries.items():
        record: dict[str, Any] = {"id": rid, "ref": entry.reference}
        if entry.hyp_by_backend:
            record["hyp_by_backend"] = entry.hyp_by_backend
        lines.append(canonical_json(record))
    return "\n".join(lines) + "\n"


# --- transcript pairs ----------------------------------------------------


def load_transcript_pairs(path: str | Path) -> list[tuple[str, str, str]]:
    """Scored (id, reference, hypothesis) rows for the WER reports."""
    path = str(path)
    lines = _read_lines(path)
    _read_header(path, lines, "transcript_pairs")
    rows: list[tuple[str, str, str]] = []
    seen: set[str] = set()
    for lineno, line in enumerate(lines[1:], start=2):
        obj = _parse_json(path, lineno, line)
        _check_fields(path, lineno, obj, {"id": str, "ref": str, "hyp": str})
        if obj["id"] in seen:
            raise LoadError(path, lineno, LoadReason.DUPLICATE_ID, f"id {obj['id']!r}")
        seen.add(obj["id"])
        rows.append((obj["id"], obj["ref"], obj["hyp"]))
    return rows


def dump_transcript_pairs(rows: Iterable[tuple[str, str, str]]) -> str:
    lines = [_header_line("transcript_pairs")]
    for rid, ref, hyp in rows:
        lines.append(canonical_json({"id": rid, "ref": ref, "hyp": hyp}))
    return "\n".join(lines) + "\n"


# --- labeled intents -----------------------------------------------------


def load_labeled_intents(path: str | Path) -> list[tuple[str, str, str]]:
    """Annotated (id, text, intent) rows; intents must be in the taxonomy."""
    path = str(path)
    lines = _read_lines(path)
    _read_header(path, lines, "labeled_intents")
    rows: list[tuple[str, str, str]] = []
    seen: set[str] = set()
    for lineno, line in enumerate(lines[1:], start=2):
        obj = _parse_json(path, lineno, line)
        _check_fields(path, lineno, obj, {"id": str, "text": str, "intent": str})
        if obj["id"] in seen:
            raise LoadError(path, lineno, LoadReason.DUPLICATE_ID, f"id {obj['id']!r}")
        seen.add(obj["id"])
        if obj["intent"] not in ANNOTATION_LABELS:
            raise LoadError(
                path, lineno, LoadReason.UNKNOWN_LABEL, f"intent {obj['intent']!r}"
            )
        rows.append((obj["id"], obj["text"], obj["intent"]))
    return rows


def dump_labeled_intents(rows: Iterable[tuple[str, str, str]]) -> str:
    lines = [_header_line("labeled_intents")]
    for rid, text, label in rows:
        lines.append(canonical_json({"id": rid, "intent": label, "text": text}))
    return "\n".join(lines) + "\n"


# --- gazetteer -----------------------------------------------------------


def load_gazetteer(path: str | Path) -> Gazetteer:
    path = str(path)
    lines = _read_lines(path)
    _read_header(path, lines, "gazetteer")
    entries: list[GazetteerEntry] = []
    seen: set[str] = set()
    for lineno, line in enumerate(lines[1:], start=2):
        obj = _parse_json(path, lineno, line)
        _check_fields(
            path,
            lineno,
            obj,
            {
                "id": str,
                "name": str,
                "kind": str,
                "aliases": list,
                "country": str,
                "prior": (int, float),
            },
            {"parent": str},
        )
        if obj["id"] in seen:
            raise LoadError(path, lineno, LoadReason.DUPLICATE_ID, f"id {obj['id']!r}")
        seen.add(obj["id"])
        try:
            kind = EntryKind(obj["kind"])
        except ValueError:
            raise LoadError(path, lineno, LoadReason.UNKNOWN_LABEL, f"kind {obj['kind']!r}")
        if not all(isinstance(alias, str) for alias in obj["aliases"]):
            raise LoadError(path, lineno, LoadReason.MALFORMED_RECORD, "aliases must be strings")
        try:
            entries.append(
                GazetteerEntry(
                    id=obj["id"],
                    canonical_name=obj["name"],
                    kind=kind,
                    aliases=tuple(obj["aliases"]),
                    country_code=obj["country"],
                    prior=obj["prior"],
                    parent_id=obj.get("parent"),
                )
            )
        except ValueError as exc:
            raise LoadError(path, lineno, LoadReason.INVARIANT_VIOLATION, str(exc))
    return Gazetteer(entries)


def dump_gazetteer(gazetteer: Gazetteer) -> str:
    lines = [_header_line("gazetteer")]
    for entry in gazetteer.entries.values():
        record: dict[str, Any] = {
            "id": entry.id,
            "name": entry.canonical_name,
            "kind": entry.kind.value,
            "aliases": list(entry.aliases),
            "country": entry.country_code,
            "prior": entry.prior,
        }
        if entry.parent_id is not None:
            record["parent"] = entry.parent_id
        lines.append(canonical_json(record))
    return "\n".join(lines) + "\n"


# --- lexicon -------------------------------------------------------------


def load_lexicon(path: str | Path) -> Lexicon:
    path = str(path)
    lines = _read_lines(path)
    header = _read_header(path, lines, "lexicon")
    language = header.get("language")
    if not isinstance(language, str) or not language:
        raise LoadError(path, 1, LoadReason.MALFORMED_RECORD, "header needs a language tag")
    entries: dict[str, str] = {}
    for lineno, line in enumerate(lines[1:], start=2):
        obj = _parse_json(path, lineno, line)
        _check_fields(path, lineno, obj, {"src": str, "dst": str})
        if obj["src"] in entries:
            raise LoadError(path, lineno, LoadReason.DUPLICATE_ID, f"src {obj['src']!r}")
        if not obj["dst"]:
            raise LoadError(path, lineno, LoadReason.INVARIANT_VIOLATION, "empty dst")
        if [obj["src"]] != tokenize(obj["src"]):
            raise LoadError(
                path, lineno, LoadReason.INVARIANT_VIOLATION, f"src not normalized: {obj['src']!r}"
            )
        entries[obj["src"]] = obj["dst"]
    try:
        return Lexicon(source_language=language, entries=entries)
    except ValueError as exc:
        raise LoadError(path, 1, LoadReason.INVARIANT_VIOLATION, str(exc))


def dump_lexicon(lexicon: Lexicon) -> str:
    lines = [_header_line("lexicon", language=lexicon.source_language)]
    for src, dst in lexicon.entries.items():
        lines.append(canonical_json({"dst": dst, "src": src}))
    return "\n".join(lines) + "\n"


# --- keyword rules (TAB table) -------------------------------------------


def load_keywords(path: str | Path) -> list[KeywordRule]:
    path = str(path)
    lines = _read_lines(path)
    _read_header(path, lines, "keyword_rules")
    rules: list[KeywordRule] = []
    seen: set[str] = set()
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split("\t")
        if len(parts) != 2 or not parts[0]:
            raise LoadError(
                path, lineno, LoadReason.MALFORMED_RECORD, "expected keyword<TAB>target"
            )
        keyword, target = parts
        if keyword != " ".join(tokenize(keyword)):
            raise LoadError(
                path, lineno, LoadReason.INVARIANT_VIOLATION, f"keyword not normalized: {keyword!r}"
            )
        if keyword in seen:
            raise LoadError(path, lineno, LoadReason.DUPLICATE_ID, f"keyword {keyword!r}")
        seen.add(keyword)
        if target not in KEYWORD_TARGETS:
            raise LoadError(path, lineno, LoadReason.UNKNOWN_LABEL, f"target {target!r}")
        rules.append(KeywordRule(keyword=keyword, target=target))
    return rules


def dump_keywords(rules: Iterable[KeywordRule]) -> str:
    lines = [_header_line("keyword_rules")]
    for rule in rules:
        lines.append(f"{rule.keyword}\t{rule.target}")
    return "\n".join(lines) + "\n"


# --- confusion model (TAB table) -----------------------------------------


def load_confusion(path: str | Path) -> ConfusionModel:
    path = str(path)
    lines = _read_lines(path)
    header = _read_header(path, lines, "confusion_model")
    insertion_rate = header.get("insertion_rate", 0.0)
    hint_damping = header.get("hint_damping", 1.0)
    for name, value in (("insertion_rate", insertion_rate), ("hint_damping", hint_damping)):
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise LoadError(path, 1, LoadReason.MALFORMED_RECORD, f"{name} must be a number")
    entries: dict[str, tuple[tuple[str, float], ...]] = {}
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split("\t")
        if len(parts) != 2 or not parts[0] or not parts[1]:
            raise LoadError(
                path, lineno, LoadReason.MALFORMED_RECORD, "expected word<TAB>alt:prob,..."
            )
        word = parts[0]
        if word in entries:
            raise LoadError(path, lineno, LoadReason.DUPLICATE_ID, f"word {word!r}")
        alternatives: list[tuple[str, float]] = []
        total = 0.0
        for pair in parts[1].split(","):
            alt, sep, prob_text = pair.rpartition(":")
            if not sep or not alt:
                raise LoadError(
                    path, lineno, LoadReason.MALFORMED_RECORD, f"bad alt:prob pair {pair!r}"
                )
            try:
                prob = float(prob_text)
            except ValueError:
                raise LoadError(
                    path, lineno, LoadReason.MALFORMED_RECORD, f"bad probability {prob_text!r}"
                )
            if not 0.0 <= prob <= 1.0:
                raise LoadError(
                    path, lineno, LoadReason.INVARIANT_VIOLATION, f"probability {prob} out of [0, 1]"
                )
            total += prob
            alternatives.append((alt, prob))
        if total > 1.0 + 1e-9:
            raise LoadError(
                path, lineno, LoadReason.INVARIANT_VIOLATION, f"probabilities sum to {total} > 1"
            )
        entries[word] = tuple(alternatives)
    try:
        return ConfusionModel(
            entries=entries, insertion_rate=insertion_rate, hint_damping=hint_damping
        )
    except ValueError as exc:
        raise LoadError(path, 1, LoadReason.INVARIANT_VIOLATION, str(exc))


def dump_confusion(model: ConfusionModel) -> str:
    lines = [
        _header_line(
            "confusion_model",
            hint_damping=model.hint_damping,
            insertion_rate=model.insertion_rate,
        )
    ]
    for word, alternatives in model.entries.items():
        pairs = ",".join(f"{alt}:{prob!r}" for alt, prob in alternatives)
        lines.append(f"{word}\t{pairs}")
    return "\n".join(lines) + "\n"


# --- learned model -------------------------------------------------------


def load_model(path: str | Path) -> LearnedModel:
    path = str(path)
    lines = _read_lines(path)
    _read_header(path, lines, "learned_model")
    if len(lines) != 2:
        raise LoadError(
            path, max(2, len(lines)), LoadReason.MALFORMED_RECORD, "expected a single document line"
        )
    obj = _parse_json(path, 2, lines[1])
    _check_fields(
        path,
        2,
        obj,
        {
            "alpha": (int, float),
            "classes": list,
            "class_doc_counts": dict,
            "token_counts": dict,
            "vocabulary": list,
        },
    )
    for label, count in obj["class_doc_counts"].items():
        if not isinstance(count, int) or count <= 0:
            raise LoadError(
                path, 2, LoadReason.INVARIANT_VIOLATION, f"bad doc count for {label!r}"
            )
    for label, counts in obj["token_counts"].items():
        if label not in obj["class_doc_counts"]:
            raise LoadError(path, 2, LoadReason.UNKNOWN_LABEL, f"counts for unknown {label!r}")
        for token, count in counts.items():
            if not isinstance(count, int) or count < 0:
                raise LoadError(
                    path, 2, LoadReason.INVARIANT_VIOLATION, f"bad count for {token!r}"
                )
    try:
        model = LearnedModel.from_counts(
            alpha=obj["alpha"],
            class_doc_counts=obj["class_doc_counts"],
            token_counts=obj["token_counts"],
        )
    except ValueError as exc:
        raise LoadError(path, 2, LoadReason.INVARIANT_VIOLATION, str(exc))
    if list(model.classes) != obj["classes"]:
        raise LoadError(path, 2, LoadReason.INVARIANT_VIOLATION, "classes do not match counts")
    if list(model.vocabulary) != obj["vocabulary"]:
        raise LoadError(path, 2, LoadReason.INVARIANT_VIOLATION, "vocabulary does not match counts")
    return model


def dump_model(model: LearnedModel) -> str:
    document = {
        "alpha": model.smoothing_alpha,
        "class_doc_counts": model.class_doc_counts,
        "classes": list(model.classes),
        "token_counts": model.token_counts,
        "vocabulary": list(model.vocabulary),
    }
    return _header_line("learned_model") + "\n" + canonical_json(document) + "\n"


# --- pipeline config -----------------------------------------------------


def load_pipeline_config(path: str | Path):
    """Parse a pipeline config document; paths stay relative to the file."""
    from .pipeline import PipelineConfig

    path_str = str(path)
    lines = _read_lines(path_str)
    _read_header(path_str, lines, "pipeline_config")
    if len(lines) != 2:
        raise LoadError(
            path_str,
            max(2, len(lines)),
            LoadReason.MALFORMED_RECORD,
            "expected a single document line",
        )
    obj = _parse_json(path_str, 2, lines[1])
    _check_fields(
        path_str,
        2,
        obj,
        {
            "vtt_backend": str,
            "translation_backend": str,
            "ner_backend": str,
            "intent_backend": str,
        },
        {
            "default_language": str,
            "seed": int,
            "experiment_salt": str,
            "gazetteer_path": str,
            "lexicon_path": str,
            "keywords_path": str,
            "model_path": str,
            "replay_path": str,
            "log_path": str,
        },
    )
    for field_name in ("vtt_backend", "translation_backend", "ner_backend", "intent_backend"):
        if not obj[field_name]:
            raise LoadError(
                path_str, 2, LoadReason.INVARIANT_VIOLATION, f"{field_name} must be nonempty"
            )
    if "default_language" in obj and not obj["default_language"]:
        raise LoadError(
            path_str, 2, LoadReason.INVARIANT_VIOLATION, "default_language must be nonempty"
        )
    return PipelineConfig(base_dir=str(Path(path_str).parent), **obj)


def dump_pipeline_config(config) -> str:
    document: dict[str, Any] = {
        "vtt_backend": config.vtt_backend,
        "translation_backend": config.translation_backend,
        "ner_backend": config.ner_backend,
        "intent_backend": config.intent_backend,
        "default_language": config.default_language,
        "seed": config.seed,
        "experiment_salt": config.experiment_salt,
    }
    for name in (
        "gazetteer_path",
        "lexicon_path",
        "keywords_path",
        "model_path",
        "replay_path",
        "log_path",
    ):
        value = getattr(config, name)
        if value is not None:
            document[name] = value
    return _header_line("pipeline_config") + "\n" + canonical_json(document) + "\n"
