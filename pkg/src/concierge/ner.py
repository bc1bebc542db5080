"""Destination recognition and resolution against a closed gazetteer.

Recognition finds mentions of known destination aliases in a token
sequence (left-to-right, longest match wins). Resolution maps each
mention to a single gazetteer entry by prior weight, which is how an
ambiguous city name like "amsterdam" lands on the entry travellers
almost always mean. Role assignment then decides which resolved entity
is a flight origin and which is the destination.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum

from .textproc import tokenize


class EntryKind(Enum):
    COUNTRY = "country"
    CITY = "city"
    REGION = "region"
    HOTEL = "hotel"


class Role(Enum):
    ORIGIN = "origin"
    DESTINATION = "destination"
    NONE = "none"


class ResolutionError(ValueError):
    """No gazetteer entry can be chosen for a mention."""


@dataclass(frozen=True)
class GazetteerEntry:
    id: str
    canonical_name: str
    kind: EntryKind
    aliases: tuple[str, ...]
    country_code: str
    prior: float
    parent_id: str | None = None

    def __post_init__(self) -> None:
        if not self.id:
            raise ValueError("entry id must be nonempty")
        if self.prior < 0:
            raise ValueError(f"prior must be >= 0 for {self.id!r}: {self.prior}")
        if len(self.country_code) != 2 or not self.country_code.isalpha():
            raise ValueError(f"country_code must be two letters for {self.id!r}")
        for alias in self.aliases:
            if alias != " ".join(tokenize(alias)) or not alias:
                raise ValueError(f"alias not normalized for {self.id!r}: {alias!r}")


class Gazetteer:
    """Closed destination set with an alias index for recognition."""

    def __init__(self, entries: list[GazetteerEntry]):
        self.entries: dict[str, GazetteerEntry] = {}
        for entry in entries:
            if entry.id in self.entries:
                raise ValueError(f"duplicate gazetteer id {entry.id!r}")
            self.entries[entry.id] = entry
        self._alias_index: dict[tuple[str, ...], list[str]] = {}
        self._max_alias_len = 0
        for entry in entries:
            for alias in entry.aliases:
                key = tuple(alias.split(" "))
                self._alias_index.setdefault(key, []).append(entry.id)
                self._max_alias_len = max(self._max_alias_len, len(key))

    def candidates(self, surface_tokens: tuple[str, ...]) -> list[GazetteerEntry]:
        return [self.entries[eid] for eid in self._alias_index.get(surface_tokens, [])]

    @property
    def max_alias_len(self) -> int:
        return self._max_alias_len

    def scaled(self, factor: float) -> "Gazetteer":
        """Copy with all priors multiplied by ``factor`` (> 0)."""
        if factor <= 0:
            raise ValueError("scale factor must be positive")
        return Gazetteer(
            [replace(e, prior=e.prior * factor) for e in self.entries.values()]
        )


@dataclass(frozen=True)
class Mention:
    """A recognized alias occurrence: token span [start, end)."""

    start: int
    end: int
    surface: str

    def __post_init__(self) -> None:
        if not 0 <= self.start < self.end:
            raise ValueError(f"invalid mention span {self.start}..{self.end}")


@dataclass(frozen=True)
class ResolvedEntity:
    mention: Mention
    entry_id: str
    score: float
    role: Role = Role.NONE

    def __post_init__(self) -> None:
        if self.score <= 0:
            raise ValueError(f"resolution score must be positive: {self.score}")


def recognize(tokens: list[str], gazetteer: Gazetteer) -> list[Mention]:
    """Find non-overlapping alias matches, longest match first.

    Scans left to right; at each position the longest alias starting
    there wins and the scan resumes after it, so "new york city" beats
    both "new york" and any single-token alias inside it.
    """
    mentions: list[Mention] = []
    i = 0
    n = len(tokens)
    while i < n:
        matched = None
        for length in range(min(gazetteer.max_alias_len, n - i), 0, -1):
            key = tuple(tokens[i : i + length])
            if gazetteer.candidates(key):
                matched = length
                break
        if matched:
            mentions.append(Mention(i, i + matched, " ".join(tokens[i : i + matched])))
            i += matched
        else:
            i += 1
    return mentions


def resolve(mention: Mention, gazetteer: Gazetteer) -> ResolvedEntity:
    """Pick the gazetteer entry for a mention by highest prior.

    Ties break toward the lexicographically smallest entry id. Raises
    :class:`ResolutionError` when no candidate shares the alias or every
    candidate has zero prior (a zero-weight entry carries no resolution
    mass, and resolved entities must have a positive score).
    """
    candidates = gazetteer.candidates(tuple(mention.surface.split(" ")))
    if not candidates:
        raise ResolutionError(f"no gazetteer entry for {mention.surface!r}")
    best = min(candidates, key=lambda e: (-e.prior, e.id))
    if best.prior <= 0:
        raise ResolutionError(f"all candidates for {mention.surface!r} have zero prior")
    return ResolvedEntity(mention=mention, entry_id=best.id, score=best.prior)


_ORIGIN_MARKERS = frozenset({"from"})
_DESTINATION_MARKERS = frozenset({"to", "in", "at"})


def assign_roles(entities: list[ResolvedEntity], tokens: list[str]) -> list[ResolvedEntity]:
    """Assign origin/destination roles from nearby prepositions.

    A mention preceded within two tokens by "from" becomes the origin;
    by "to"/"in"/"at" the destination (the nearer marker wins). A sole
    unmarked mention defaults to destination. At most one origin and one
    destination are kept — first in text order wins per role — and
    mentions left without a role are dropped.
    """
    roled: list[ResolvedEntity] = []
    for entity in sorted(entities, key=lambda e: e.mention.start):
        role = Role.NONE
        for back in (1, 2):
            idx = entity.mention.start - back
            if idx < 0:
                break
            word = tokens[idx]
            if word in _ORIGIN_MARKERS:
                role = Role.ORIGIN
                break
            if word in _DESTINATION_MARKERS:
                role = Role.DESTINATION
                break
        roled.append(replace(entity, role=role))

    if len(roled) == 1 and roled[0].role is Role.NONE:
        roled[0] = replace(roled[0], role=Role.DESTINATION)

    kept: list[ResolvedEntity] = []
    seen: set[Role] = set()
    for entity in roled:
        if entity.role is Role.NONE or entity.role in seen:
            continue
        seen.add(entity.role)
        kept.append(entity)
    return kept
