"""Operator command line: interpret, serve, evaluate, simulate, compare.

Exit codes are stable: 0 success, 1 validation or load error (corrupt
input files abort before any partial output), 2 evaluation precondition
failure. Every reporting subcommand can emit machine-readable JSON with
``--json``.
"""

from __future__ import annotations

import functools
import json
import sys
from uuid import uuid4

import click

from . import evaluation
from .corpus_io import (
    LoadError,
    dump_transcript_pairs,
    load_confusion,
    load_labeled_intents,
    load_transcript_pairs,
)
from .evaluation import EvaluationError
from .pipeline import ConfigError, Pipeline
from .textproc import tokenize
from .types import Utterance, decision_to_dict, trace_to_dict
from .vtt import simulate


def _guarded(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (LoadError, ConfigError) as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(1)
        except OSError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(1)
        except EvaluationError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(2)

    return wrapper


@click.group()
def main() -> None:
    """Travel voice-assistant interpretation engine and evaluation harness."""


@main.command()
@click.option("--config", "config_path", required=True, envvar="CONCIERGE_CONFIG")
@click.option("--text", default=None, help="Utterance text; read from stdin when omitted.")
@click.option("--lang", default=None, help="IETF language tag; defaults to the config.")
@click.option("--replay-ref", default=None, help="Replay corpus id standing in for audio.")
@click.option(
    "--variant",
    type=click.Choice(["composite", "learned"]),
    default=None,
    help="Intent-stage arm; defaults to the config's intent backend.",
)
@click.option("--json", "as_json", is_flag=True)
@_guarded
def interpret(config_path, text, lang, replay_ref, variant, as_json) -> None:
    """Run one utterance through the pipeline and print decision + trace."""
    pipeline = Pipeline.from_config_file(config_path)
    if variant:
        pipeline = pipeline.with_intent_backend(variant)
    if text is None and replay_ref is None:
        text = sys.stdin.read()
    utterance = Utterance(
        id=f"cli-{uuid4().hex}",
        text=text or "",
        language=lang or pipeline.config.default_language,
        replay_ref=replay_ref,
    )
    decision, trace = pipeline.run(utterance)
    if as_json:
        click.echo(
            json.dumps(
                {"action": decision_to_dict(decision), "trace": trace_to_dict(trace)},
                ensure_ascii=False,
            )
        )
        return
    click.echo(f"action: {decision.describe()}")
    for record in trace.records:
        click.echo(f"[{record.stage.value:<11}] {record.status.value:<8} {record.output_snapshot}")


@main.command()
@click.option("--config", "config_path", required=True, envvar="CONCIERGE_CONFIG")
@click.option("--port", default=8080, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@_guarded
def serve(config_path, port, host) -> None:
    """Start the interpretation service."""
    import uvicorn

    from .service import create_app_from_config

    app = create_app_from_config(config_path)
    uvicorn.run(app, host=host, port=port)


@main.group(name="eval")
def eval_group() -> None:
    """Transcription and intent-quality evaluation."""


@eval_group.command(name="wer")
@click.option("--pairs", "pairs_path", required=True, type=click.Path())
@click.option("--words", default=None, help="Comma-separated target words to drill into.")
@click.option("--json", "as_json", is_flag=True)
@_guarded
def eval_wer(pairs_path, words, as_json) -> None:
    """Corpus WER, optionally with per-word error drilldown."""
    rows = load_transcript_pairs(pairs_path)
    pairs = [(ref, hyp) for _, ref, hyp in rows]
    report = evaluation.wer_corpus(pairs)
    word_reports = []
    if words:
        targets = [w for w in (t.strip() for t in words.split(",")) if w]
        word_reports = evaluation.per_word_errors(pairs, targets)
    if as_json:
        document = report.to_dict()
        if word_reports:
            document["per_word"] = [r.to_dict() for r in word_reports]
        click.echo(json.dumps(document, ensure_ascii=False))
        return
    click.echo(report.render())
    if word_reports:
        click.echo("")
        click.echo(evaluation.render_per_word_table(word_reports))


@eval_group.command(name="intents")
@click.option("--gold", "gold_path", required=True, type=click.Path())
@click.option("--pred", "pred_path", required=True, type=click.Path())
@click.option("--json", "as_json", is_flag=True)
@_guarded
def eval_intents(gold_path, pred_path, as_json) -> None:
    """Per-class precision/recall of predicted intents against gold labels."""
    gold_rows = load_labeled_intents(gold_path)
    pred_rows = load_labeled_intents(pred_path)
    pred_by_id = {rid: label for rid, _, label in pred_rows}
    if set(pred_by_id) != {rid for rid, _, _ in gold_rows} or len(pred_rows) != len(gold_rows):
        raise EvaluationError("gold and predicted files must cover the same ids")
    gold = [label for _, _, label in gold_rows]
    predicted = [pred_by_id[rid] for rid, _, _ in gold_rows]
    metrics = evaluation.class_metrics(gold, predicted)
    if as_json:
        click.echo(json.dumps([m.to_dict() for m in metrics], ensure_ascii=False))
        return
    click.echo(evaluation.render_class_metrics_table(metrics))


@main.group()
def report() -> None:
    """Distribution reports over annotated corpora."""


@report.command(name="distribution")
@click.option("--labels", "labels_path", required=True, type=click.Path())
@click.option("--exclude", default="", help="Comma-separated labels to exclude.")
@click.option("--json", "as_json", is_flag=True)
@_guarded
def report_distribution(labels_path, exclude, as_json) -> None:
    """Intent prevalence over a labeled corpus."""
    rows = load_labeled_intents(labels_path)
    excluded = {label for label in (t.strip() for t in exclude.split(",")) if label}
    dist = evaluation.intent_distribution([label for _, _, label in rows], excluded)
    if as_json:
        click.echo(json.dumps(dist.to_dict(), ensure_ascii=False))
        return
    click.echo(dist.render())


@main.group()
def compare() -> None:
    """Two-group experiment analysis."""


def _parse_group(value: str) -> tuple[int, int]:
    try:
        successes_text, trials_text = value.split(",")
        return int(successes_text), int(trials_text)
    except ValueError:
        raise click.BadParameter("expected SUCCESSES,TRIALS")


@compare.command(name="experiment")
@click.option("--a", "group_a", required=True, help="Group A as SUCCESSES,TRIALS.")
@click.option("--b", "group_b", required=True, help="Group B as SUCCESSES,TRIALS.")
@click.option("--json", "as_json", is_flag=True)
@_guarded
def compare_experiment(group_a, group_b, as_json) -> None:
    """Two-proportion z-test between experiment groups."""
    comparison = evaluation.compare_groups(_parse_group(group_a), _parse_group(group_b))
    if as_json:
        click.echo(json.dumps(comparison.to_dict(), ensure_ascii=False))
        return
    click.echo(comparison.render())


@main.group(name="simulate")
def simulate_group() -> None:
    """Synthetic transcription for harness experiments."""


@simulate_group.command(name="vtt")
@click.option("--refs", "refs_path", required=True, type=click.Path(), help="Replay corpus file.")
@click.option("--confusion", "confusion_path", required=True, type=click.Path())
@click.option("--hints", "hints_path", default=None, type=click.Path(), help="One phrase per line.")
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--out", "out_path", default=None, type=click.Path(), help="Default stdout.")
@_guarded
def simulate_vtt(refs_path, confusion_path, hints_path, seed, out_path) -> None:
    """Generate noisy hypotheses for a replay corpus as transcript pairs."""
    from .corpus_io import load_replay

    corpus = load_replay(refs_path)
    model = load_confusion(confusion_path)
    hints: list[str] = []
    if hints_path:
        with open(hints_path, encoding="utf-8") as handle:
            hints = [line.strip() for line in handle if line.strip()]
    rows = []
    for index, (rid, entry) in enumerate(corpus.entries.items()):
        hypothesis = simulate(tokenize(entry.reference), model, hints, seed + index)
        rows.append((rid, entry.reference, " ".join(hypothesis)))
    payload = dump_transcript_pairs(rows)
    if out_path:
        with open(out_path, "w", encoding="utf-8") as handle:
            handle.write(payload)
    else:
        click.echo(payload, nl=False)


if __name__ == "__main__":
    main()
