from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from concierge.ner import (
    EntryKind,
    Gazetteer,
    GazetteerEntry,
    Mention,
    ResolutionError,
    Role,
    assign_roles,
    recognize,
    resolve,
)


def city(entry_id, aliases, prior, country="XX"):
    return GazetteerEntry(
        id=entry_id,
        canonical_name=entry_id,
        kind=EntryKind.CITY,
        aliases=tuple(aliases),
        country_code=country,
        prior=prior,
    )


@pytest.fixture
def gazetteer():
    return Gazetteer(
        [
            city("paris-fr", ["paris"], 2.1, "FR"),
            city("london-gb", ["london"], 8.9, "GB"),
            city("amsterdam-nl", ["amsterdam"], 0.95, "NL"),
            city("amsterdam-us-ny", ["amsterdam"], 0.05, "US"),
            city("new-york-us", ["new york", "new york city"], 8.4, "US"),
        ]
    )


class TestRecognize:
    def test_single_alias(self, gazetteer):
        mentions = recognize(["hotel", "in", "amsterdam"], gazetteer)
        assert mentions == [Mention(2, 3, "amsterdam")]

    def test_no_match(self, gazetteer):
        assert recognize(["hello", "there"], gazetteer) == []

    def test_longest_match_wins(self, gazetteer):
        # Candidates at position 0: "new york" and "new york city"; the
        # three-token alias must win and absorb all of them.
        mentions = recognize(["new", "york", "city", "hotels"], gazetteer)
        assert mentions == [Mention(0, 3, "new york city")]

    def test_multiple_mentions_never_overlap(self, gazetteer):
        mentions = recognize(["from", "london", "to", "paris"], gazetteer)
        assert [m.surface for m in mentions] == ["london", "paris"]
        for first, second in zip(mentions, mentions[1:]):
            assert first.end <= second.start

    def test_spans_index_valid_tokens(self, gazetteer):
        tokens = ["go", "to", "new", "york", "then", "amsterdam"]
        for mention in recognize(tokens, gazetteer):
            assert 0 <= mention.start < mention.end <= len(tokens)
            assert mention.surface == " ".join(tokens[mention.start : mention.end])


class TestResolve:
    def test_prior_argmax(self, gazetteer):
        entity = resolve(Mention(0, 1, "amsterdam"), gazetteer)
        assert entity.entry_id == "amsterdam-nl"
        assert entity.score == 0.95

    def test_singleton(self, gazetteer):
        assert resolve(Mention(0, 1, "paris"), gazetteer).entry_id == "paris-fr"

    def test_tie_breaks_to_smallest_id(self):
        gaz = Gazetteer([city("city-b", ["x"], 0.5), city("city-a", ["x"], 0.5)])
        assert resolve(Mention(0, 1, "x"), gaz).entry_id == "city-a"

    def test_unknown_surface(self, gazetteer):
        with pytest.raises(ResolutionError):
            resolve(Mention(0, 1, "atlantis"), gazetteer)

    def test_zero_prior_candidates_fail(self):
        gaz = Gazetteer([city("ghost", ["x"], 0.0)])
        with pytest.raises(ResolutionError):
            resolve(Mention(0, 1, "x"), gaz)

    @given(st.floats(min_value=0.001, max_value=1000.0))
    def test_scale_invariance(self, factor):
        gaz = Gazetteer(
            [
                city("amsterdam-nl", ["amsterdam"], 0.95),
                city("amsterdam-us-ny", ["amsterdam"], 0.05),
            ]
        )
        baseline = resolve(Mention(0, 1, "amsterdam"), gaz).entry_id
        scaled = resolve(Mention(0, 1, "amsterdam"), gaz.scaled(factor)).entry_id
        assert baseline == scaled


def brute_force_recognize_resolve(tokens, entries):
    """Enumerate every substring and candidate entry, longest-leftmost first."""
    alias_map = {}
    for entry in entries:
        for alias in entry.aliases:
            alias_map.setdefault(tuple(alias.split(" ")), []).append(entry)
    results = []
    i = 0
    while i < len(tokens):
        best = None
        for j in range(len(tokens), i, -1):
            key = tuple(tokens[i:j])
            if key in alias_map:
                best = (i, j, key)
                break
        if best is None:
            i += 1
            continue
        i, j, key = best
        candidates = [e for e in alias_map[key] if e.prior > 0]
        if candidates:
            chosen = sorted(candidates, key=lambda e: (-e.prior, e.id))[0]
            results.append((i, j, chosen.id))
        i = j
    return results


class TestAgainstBruteForce:
    @given(
        st.lists(
            st.sampled_from(["new", "york", "city", "amsterdam", "paris", "hotel", "in"]),
            max_size=10,
        )
    )
    @settings(max_examples=200)
    def test_recognize_resolve_matches_oracle(self, tokens):
        entries = [
            city("amsterdam-nl", ["amsterdam"], 0.95),
            city("amsterdam-us-ny", ["amsterdam"], 0.05),
            city("new-york-us", ["new york", "new york city"], 8.4),
            city("york-gb", ["york"], 0.2),
            city("paris-fr", ["paris"], 2.1),
        ]
        gaz = Gazetteer(entries)
        got = []
        for mention in recognize(tokens, gaz):
            try:
                entity = resolve(mention, gaz)
            except ResolutionError:
                continue
            got.append((mention.start, mention.end, entity.entry_id))
        assert got == brute_force_recognize_resolve(tokens, entries)


class TestAssignRoles:
    def resolved(self, gazetteer, tokens):
        return [resolve(m, gazetteer) for m in recognize(tokens, gazetteer)]

    def test_origin_and_destination(self, gazetteer):
        tokens = ["flight", "from", "london", "to", "paris"]
        roled = assign_roles(self.resolved(gazetteer, tokens), tokens)
        assert [(e.entry_id, e.role) for e in roled] == [
            ("london-gb", Role.ORIGIN),
            ("paris-fr", Role.DESTINATION),
        ]

    def test_sole_unmarked_defaults_to_destination(self, gazetteer):
        tokens = ["paris", "please"]
        roled = assign_roles(self.resolved(gazetteer, tokens), tokens)
        assert [(e.entry_id, e.role) for e in roled] == [("paris-fr", Role.DESTINATION)]

    def test_preposition_rule(self, gazetteer):
        tokens = ["hotel", "in", "amsterdam"]
        roled = assign_roles(self.resolved(gazetteer, tokens), tokens)
        assert [(e.entry_id, e.role) for e in roled] == [("amsterdam-nl", Role.DESTINATION)]

    def test_order_independent_roles(self, gazetteer):
        # Same roles as from-london-to-paris, markers permuted.
        tokens = ["to", "paris", "from", "london"]
        roled = assign_roles(self.resolved(gazetteer, tokens), tokens)
        assert {(e.entry_id, e.role) for e in roled} == {
            ("paris-fr", Role.DESTINATION),
            ("london-gb", Role.ORIGIN),
        }

    def test_marker_within_two_tokens(self, gazetteer):
        tokens = ["from", "old", "london"]
        roled = assign_roles(self.resolved(gazetteer, tokens), tokens)
        assert [(e.entry_id, e.role) for e in roled] == [("london-gb", Role.ORIGIN)]

    def test_first_wins_per_role(self, gazetteer):
        tokens = ["in", "paris", "in", "london"]
        roled = assign_roles(self.resolved(gazetteer, tokens), tokens)
        assert [(e.entry_id, e.role) for e in roled] == [("paris-fr", Role.DESTINATION)]

    def test_multiple_unmarked_dropped(self, gazetteer):
        tokens = ["paris", "london"]
        roled = assign_roles(self.resolved(gazetteer, tokens), tokens)
        assert roled == []

    @given(
        st.lists(
            st.sampled_from(["from", "to", "in", "at", "paris", "london", "amsterdam", "x"]),
            max_size=10,
        )
    )
    @settings(max_examples=200)
    def test_at_most_one_per_role(self, tokens):
        gaz = Gazetteer(
            [
                city("paris-fr", ["paris"], 2.1),
                city("london-gb", ["london"], 8.9),
                city("amsterdam-nl", ["amsterdam"], 0.95),
            ]
        )
        resolved = [resolve(m, gaz) for m in recognize(tokens, gaz)]
        roled = assign_roles(resolved, tokens)
        roles = [e.role for e in roled]
        assert roles.count(Role.ORIGIN) <= 1
        assert roles.count(Role.DESTINATION) <= 1
        assert Role.NONE not in roles
