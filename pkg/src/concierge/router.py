"""Business logic combining classifier outputs into one action.

A fixed decision table, evaluated top-down. Booking searches come first
because pre-book traffic dominates; keyword overrides and the post-book
intents only apply once the pre-book classifier has said "neither".
"""

from __future__ import annotations

from dataclasses import dataclass

from .intent import COVID_INFO, PostBook, PostBookIntent, PreBook, PreBookIntent
from .ner import ResolvedEntity, Role
from .types import ActionDecision, MissingSlot


@dataclass(frozen=True)
class RoutingInput:
    """Everything the router consults for one utterance."""

    prebook: PreBookIntent
    postbook: PostBookIntent
    keyword_hit: str | None
    entities: tuple[ResolvedEntity, ...]

    def __post_init__(self) -> None:
        for role in (Role.ORIGIN, Role.DESTINATION):
            if sum(1 for e in self.entities if e.role is role) > 1:
                raise ValueError(f"more than one {role.value} entity")

    def entity(self, role: Role) -> ResolvedEntity | None:
        return next((e for e in self.entities if e.role is role), None)

    def describe(self) -> str:
        entities = ", ".join(f"{e.entry_id}[{e.role.value}]" for e in self.entities) or "none"
        return (
            f"prebook={self.prebook.value.value}({self.prebook.confidence:.2f}) "
            f"postbook={self.postbook.value.value}({self.postbook.confidence:.2f}) "
            f"keyword={self.keyword_hit or 'none'} entities={entities}"
        )


def route(routing_input: RoutingInput) -> ActionDecision:
    """Map classifier outputs and resolved entities to one decision.

    Total over valid inputs: every combination lands on exactly one case.
    """
    destination = routing_input.entity(Role.DESTINATION)
    origin = routing_input.entity(Role.ORIGIN)
    prebook = routing_input.prebook.value
    postbook = routing_input.postbook.value

    if prebook is PreBook.HOTEL and destination is not None:
        return ActionDecision.search_hotels(destination.entry_id)
    if prebook is PreBook.FLIGHT and destination is not None:
        return ActionDecision.search_flights(
            destination.entry_id, origin.entry_id if origin else None
        )
    if prebook is not PreBook.NONE:
        return ActionDecision.clarify(MissingSlot.DESTINATION)
    if routing_input.keyword_hit == COVID_INFO:
        return ActionDecision.covid_info()
    if routing_input.keyword_hit is not None:
        return ActionDecision.open_faq(PostBook(routing_input.keyword_hit))
    if postbook is PostBook.REQUEST_HUMAN_AGENT:
        return ActionDecision.human_agent()
    if postbook is PostBook.GREETING:
        return ActionDecision.greeting()
    if postbook is not PostBook.UNKNOWN:
        return ActionDecision.open_faq(postbook)
    return ActionDecision.unintelligible()
