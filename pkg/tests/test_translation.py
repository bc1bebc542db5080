from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from concierge.textproc import tokenize
from concierge.translation import Lexicon, LexiconMismatch, translate


@pytest.fixture
def nl_lexicon():
    return Lexicon(
        source_language="nl",
        entries={
            "ik": "i",
            "wil": "want",
            "een": "a",
            "hotel": "hotel",
            "in": "in",
            "parijs": "paris",
        },
    )


class TestTranslate:
    def test_english_verbatim(self, nl_lexicon):
        assert translate("book a hotel", "en", nl_lexicon) == "book a hotel"

    def test_english_keeps_casing_and_spacing(self, nl_lexicon):
        assert translate("Book  A   Hotel!", "en", nl_lexicon) == "Book  A   Hotel!"

    def test_lexicon_lookup(self, nl_lexicon):
        assert (
            translate("ik wil een hotel in parijs", "nl", nl_lexicon)
            == "i want a hotel in paris"
        )

    def test_oov_passthrough(self, nl_lexicon):
        assert translate("xyzzy hotel", "nl", nl_lexicon) == "xyzzy hotel"

    def test_language_mismatch_raises(self, nl_lexicon):
        with pytest.raises(LexiconMismatch):
            translate("hallo", "de", nl_lexicon)

    def test_regional_subtag_matches(self, nl_lexicon):
        assert translate("parijs", "nl-BE", nl_lexicon) == "paris"

    @given(st.text())
    def test_idempotent_on_english(self, text):
        lexicon = Lexicon(source_language="nl", entries={"een": "a"})
        once = translate(text, "en", lexicon)
        assert once == text
        assert translate(once, "en", lexicon) == once

    @given(st.text())
    def test_no_token_silently_dropped(self, text):
        lexicon = Lexicon(source_language="nl", entries={"een": "a", "hotel": "hotel"})
        source_count = len(tokenize(text))
        translated_count = len(tokenize(translate(text, "nl", lexicon)))
        if source_count >= 1:
            assert translated_count >= 1


class TestLexiconInvariants:
    def test_empty_value_rejected(self):
        with pytest.raises(ValueError):
            Lexicon(source_language="nl", entries={"een": ""})

    def test_unnormalized_key_rejected(self):
        with pytest.raises(ValueError):
            Lexicon(source_language="nl", entries={"Een": "a"})
