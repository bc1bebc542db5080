"""Core domain types: utterances, action decisions, and pipeline traces."""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum

from .intent import PostBook

#: Maximum characters kept per trace snapshot (two snapshots per record,
#: so one record stays within 4 KiB of text).
SNAPSHOT_LIMIT = 2048


class ActionKind(Enum):
    SEARCH_HOTELS = "search_hotels"
    SEARCH_FLIGHTS = "search_flights"
    OPEN_FAQ = "open_faq"
    HUMAN_AGENT = "human_agent"
    COVID_INFO = "covid_info"
    CLARIFY = "clarify"
    GREETING = "greeting"
    UNINTELLIGIBLE = "unintelligible"


class MissingSlot(Enum):
    DESTINATION = "destination"
    ORIGIN = "origin"


class Stage(Enum):
    VTT = "vtt"
    TRANSLATION = "translation"
    NER = "ner"
    INTENT = "intent"
    ROUTE = "route"


STAGE_ORDER = tuple(Stage)


class StageStatus(Enum):
    OK = "ok"
    DEGRADED = "degraded"
    FAILED = "failed"


def _utcnow() -> datetime:
    return datetime.now(timezone.utc)


@dataclass(frozen=True)
class Utterance:
    """One user input: raw text plus language, optionally a replay id.

    ``replay_ref`` points into a replay corpus and stands in for recorded
    audio. Ids must be unique within a session; the service and CLI mint
    fresh ones per request.
    """

    id: str
    text: str
    language: str
    replay_ref: str | None = None
    received_at: datetime = field(default_factory=_utcnow)

    def __post_init__(self) -> None:
        if not self.id:
            raise ValueError("utterance id must be nonempty")
        if not self.language:
            raise ValueError("utterance language must be nonempty")


@dataclass(frozen=True)
class ActionDecision:
    """The routed action, an enumerated case with optional slots.

    Slot discipline: hotel search requires a destination; flight search
    requires a destination and may carry an origin; FAQ requires the
    intent; clarification requires the missing slot; every other kind
    carries no slots at all.
    """

    kind: ActionKind
    destination: str | None = None
    origin: str | None = None
    faq_intent: PostBook | None = None
    missing_slot: MissingSlot | None = None

    def __post_init__(self) -> None:
        set_slots = {
            name
            for name, value in (
                ("destination", self.destination),
                ("origin", self.origin),
                ("faq_intent", self.faq_intent),
                ("missing_slot", self.missing_slot),
            )
            if value is not None
        }
        allowed = {
            ActionKind.SEARCH_HOTELS: {"destination"},
            ActionKind.SEARCH_FLIGHTS: {"destination", "origin"},
            ActionKind.OPEN_FAQ: {"faq_intent"},
            ActionKind.CLARIFY: {"missing_slot"},
        }.get(self.kind, set())
        required = {
            ActionKind.SEARCH_HOTELS: {"destination"},
            ActionKind.SEARCH_FLIGHTS: {"destination"},
            ActionKind.OPEN_FAQ: {"faq_intent"},
            ActionKind.CLARIFY: {"missing_slot"},
        }.get(self.kind, set())
        if set_slots - allowed:
            raise ValueError(f"{self.kind.value} must not carry {sorted(set_slots - allowed)}")
        if required - set_slots:
            raise ValueError(f"{self.kind.value} requires {sorted(required - set_slots)}")

    @classmethod
    def search_hotels(cls, destination: str) -> "ActionDecision":
        return cls(ActionKind.SEARCH_HOTELS, destination=destination)

    @classmethod
    def search_flights(cls, destination: str, origin: str | None = None) -> "ActionDecision":
        return cls(ActionKind.SEARCH_FLIGHTS, destination=destination, origin=origin)

    @classmethod
    def open_faq(cls, faq_intent: PostBook) -> "ActionDecision":
        return cls(ActionKind.OPEN_FAQ, faq_intent=faq_intent)

    @classmethod
    def clarify(cls, missing_slot: MissingSlot) -> "ActionDecision":
        return cls(ActionKind.CLARIFY, missing_slot=missing_slot)

    @classmethod
    def human_agent(cls) -> "ActionDecision":
        return cls(ActionKind.HUMAN_AGENT)

    @classmethod
    def covid_info(cls) -> "ActionDecision":
        return cls(ActionKind.COVID_INFO)

    @classmethod
    def greeting(cls) -> "ActionDecision":
        return cls(ActionKind.GREETING)

    @classmethod
    def unintelligible(cls) -> "ActionDecision":
        return cls(ActionKind.UNINTELLIGIBLE)

    def describe(self) -> str:
        parts = [self.kind.value]
        if self.destination:
            parts.append(f"destination={self.destination}")
        if self.origin:
            parts.append(f"origin={self.origin}")
        if self.faq_intent:
            parts.append(f"faq_intent={self.faq_intent.value}")
        if self.missing_slot:
            parts.append(f"missing={self.missing_slot.value}")
        return " ".join(parts)


def clip_snapshot(text: str) -> str:
    if len(text) <= SNAPSHOT_LIMIT:
        return text
    return text[: SNAPSHOT_LIMIT - 1] + "…"


@dataclass(frozen=True)
class StageRecord:
    """Observability record for one executed stage."""

    stage: Stage
    input_snapshot: str
    output_snapshot: str
    status: StageStatus
    duration_ms: float

    def __post_init__(self) -> None:
        if self.duration_ms < 0:
            raise ValueError("duration must be >= 0")
        if self.status is StageStatus.FAILED and not self.output_snapshot:
            raise ValueError("failed stages must carry a reason in output_snapshot")


@dataclass(frozen=True)
class PipelineTrace:
    """Ordered per-stage records for one interpretation, plus the decision."""

    utterance_id: str
    records: tuple[StageRecord, ...]
    decision: ActionDecision

    def __post_init__(self) -> None:
        order = [STAGE_ORDER.index(r.stage) for r in self.records]
        if order != sorted(set(order)):
            raise ValueError("stage records out of pipeline order or duplicated")


def decision_to_dict(decision: ActionDecision) -> dict:
    return {
        "kind": decision.kind.value,
        "destination": decision.destination,
        "origin": decision.origin,
        "faq_intent": decision.faq_intent.value if decision.faq_intent else None,
        "missing_slot": decision.missing_slot.value if decision.missing_slot else None,
    }


def decision_from_dict(data: dict) -> ActionDecision:
    return ActionDecision(
        kind=ActionKind(data["kind"]),
        destination=data.get("destination"),
        origin=data.get("origin"),
        faq_intent=PostBook(data["faq_intent"]) if data.get("faq_intent") else None,
        missing_slot=MissingSlot(data["missing_slot"]) if data.get("missing_slot") else None,
    )


def trace_to_dict(trace: PipelineTrace) -> dict:
    return {
        "utterance_id": trace.utterance_id,
        "records": [
            {
                "stage": r.stage.value,
                "input_snapshot": r.input_snapshot,
                "output_snapshot": r.output_snapshot,
                "status": r.status.value,
                "duration_ms": r.duration_ms,
            }
            for r in trace.records
        ],
        "decision": decision_to_dict(trace.decision),
    }


def trace_from_dict(data: dict) -> PipelineTrace:
    return PipelineTrace(
        utterance_id=data["utterance_id"],
        records=tuple(
            StageRecord(
                stage=Stage(r["stage"]),
                input_snapshot=r["input_snapshot"],
                output_snapshot=r["output_snapshot"],
                status=StageStatus(r["status"]),
                duration_ms=r["duration_ms"],
            )
            for r in data["records"]
        ),
        decision=decision_from_dict(data["decision"]),
    )
