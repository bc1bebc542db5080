"""HTTP service: interpretation, health, config introspection, metrics.

Each request is served by one of two experiment arms — the composite
classifier chain or the learned direct-to-intent model — chosen by an
explicit override, else by a deterministic hash of the user id, else
defaulting to composite. Stage failures never surface as server errors;
degraded traces are returned with their status markers intact.

Shared state is limited to the immutable pipelines plus monotonically
increasing request counters, so concurrent handlers need no further
coordination.
"""

from __future__ import annotations

import hashlib
import json
import logging
import threading
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path
from uuid import uuid4

from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from .pipeline import ConfigError, Pipeline
from .types import Utterance, decision_to_dict, trace_to_dict

logger = logging.getLogger("concierge.service")


class Variant(Enum):
    COMPOSITE = "composite"
    LEARNED = "learned"


def assign_variant(user_id: str, salt: str) -> Variant:
    """Stable hash bucketing of a user into one of the two arms.

    SHA-256 of ``salt:user_id``; the low bit of the digest selects the
    variant, giving an approximately balanced split. Reassignment across
    different salts is allowed.
    """
    digest = hashlib.sha256(f"{salt}:{user_id}".encode("utf-8")).digest()
    return Variant.LEARNED if digest[-1] & 1 else Variant.COMPOSITE


class InterpretRequest(BaseModel):
    text: str
    lang: str | None = None
    user_id: str | None = None
    variant_override: Variant | None = None
    replay_ref: str | None = None


class _Metrics:
    def __init__(self) -> None:
        self._lock = threading.Lock()
        self.by_variant: dict[str, int] = {v.value: 0 for v in Variant}
        self.by_action: dict[str, int] = {}

    def count(self, variant: Variant, action_kind: str) -> None:
        with self._lock:
            self.by_variant[variant.value] += 1
            self.by_action[action_kind] = self.by_action.get(action_kind, 0) + 1

    def snapshot(self) -> dict:
        with self._lock:
            return {
                "requests_total": sum(self.by_variant.values()),
                "by_variant": dict(self.by_variant),
                "by_action": dict(self.by_action),
            }


def _file_digests(pipeline: Pipeline) -> dict[str, dict[str, str]]:
    digests: dict[str, dict[str, str]] = {}
    config = pipeline.config
    for name in ("gazetteer_path", "lexicon_path", "keywords_path", "model_path", "replay_path"):
        resolved = config.resolve_path(getattr(config, name))
        if resolved is None:
            continue
        digest = hashlib.sha256(Path(resolved).read_bytes()).hexdigest()
        digests[name.removesuffix("_path")] = {"path": str(resolved), "sha256": digest}
    return digests


def create_app(pipeline: Pipeline) -> FastAPI:
    """Build the service around a loaded pipeline.

    Both classifier arms must be constructible: the learned arm needs a
    model, so serving requires ``model_path`` in the config.
    """
    if pipeline.model is None:
        raise ConfigError("serving requires model_path so both classifier arms exist")
    arms = {
        Variant.COMPOSITE: pipeline.with_intent_backend("composite"),
        Variant.LEARNED: pipeline.with_intent_backend("learned"),
    }
    config = pipeline.config
    metrics = _Metrics()
    digests = _file_digests(pipeline)
    log_path = config.resolve_path(config.log_path)

    app = FastAPI(title="concierge", version="0.1.0")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    app.state.metrics = metrics

    def _log_interaction(record: dict) -> None:
        line = json.dumps(record, ensure_ascii=False, sort_keys=True)
        logger.info("%s", line)
        if log_path is not None:
            with open(log_path, "a", encoding="utf-8") as handle:
                handle.write(line + "\n")

    @app.post("/v1/interpret")
    def interpret(request: InterpretRequest) -> dict:
        if request.variant_override is not None:
            variant, source = request.variant_override, "override"
        elif request.user_id:
            variant, source = assign_variant(request.user_id, config.experiment_salt), "assignment"
        else:
            variant, source = Variant.COMPOSITE, "default"
        utterance = Utterance(
            id=f"req-{uuid4().hex}",
            text=request.text,
            language=request.lang or config.default_language,
            replay_ref=request.replay_ref,
        )
        decision, trace = arms[variant].run(utterance)
        metrics.count(variant, decision.kind.value)
        _log_interaction(
            {
                "id": utterance.id,
                "ts": datetime.now(timezone.utc).isoformat(),
                "text": request.text,
                "lang": utterance.language,
                "variant": variant.value,
                "action": decision.kind.value,
            }
        )
        return {
            "action": decision_to_dict(decision),
            "variant": variant.value,
            "variant_source": source,
            "trace": trace_to_dict(trace),
        }

    @app.get("/v1/health")
    def health() -> dict:
        return {"status": "ok"}

    @app.get("/v1/config")
    def config_info() -> dict:
        return {
            "backends": {
                "vtt": config.vtt_backend,
                "translation": config.translation_backend,
                "ner": config.ner_backend,
                "intent_default": config.intent_backend,
            },
            "default_language": config.default_language,
            "experiment_salt": config.experiment_salt,
            "files": digests,
        }

    @app.get("/v1/metrics")
    def metrics_info() -> dict:
        return metrics.snapshot()

    return app


def create_app_from_config(path: str | Path) -> FastAPI:
    return create_app(Pipeline.from_config_file(path))
