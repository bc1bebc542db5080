"""Concierge: a travel voice-assistant interpretation engine.

Maps user utterances to structured app actions through a four-stage chain
(transcription, translation, entity resolution, intent classification)
plus a rule-based router, and ships the measurement harness (WER,
per-word errors, per-class precision/recall, intent distributions,
two-group experiment comparison) used to compare interchangeable stage
backends.
"""

__version__ = "0.1.0"
