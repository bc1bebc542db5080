"""Translation stage: identity for English, lexicon lookup otherwise.

Downstream models only understand English, so non-English transcripts are
mapped token by token through a per-language lexicon. Out-of-vocabulary
tokens pass through unchanged so that named entities survive to entity
resolution even when untranslated.
"""

from __future__ import annotations

from dataclasses import dataclass

from .textproc import tokenize


def primary_subtag(language: str) -> str:
    return language.split("-", 1)[0].lower()


def is_english(language: str) -> bool:
    return primary_subtag(language) == "en"


class LexiconMismatch(ValueError):
    """Lexicon exists but covers a different source language."""


@dataclass(frozen=True)
class Lexicon:
    """Word-level source-to-English mapping for one language."""

    source_language: str
    entries: dict[str, str]

    def __post_init__(self) -> None:
        if not self.source_language:
            raise ValueError("lexicon source_language must be nonempty")
        for src, dst in self.entries.items():
            if not src or not dst:
                raise ValueError(f"empty lexicon pair: {src!r} -> {dst!r}")
            if [src] != tokenize(src):
                raise ValueError(f"lexicon key not normalized: {src!r}")


def translate(text: str, language: str, lexicon: Lexicon) -> str:
    """Map ``text`` to English through the lexicon.

    English input is returned verbatim. Otherwise the text is normalized
    into tokens, each looked up in the lexicon (missing tokens pass
    through), and the result re-joined with single spaces.
    """
    if is_english(language):
        return text
    if primary_subtag(lexicon.source_language) != primary_subtag(language):
        raise LexiconMismatch(
            f"lexicon covers {lexicon.source_language!r}, utterance is {language!r}"
        )
    return " ".join(lexicon.entries.get(token, token) for token in tokenize(text))
