"""Offline evaluation, report aggregation, and heuristic labeling.

``run_offline_eval`` replays a benchmark dataset against the backends
and scores every prediction.  ``analyze_telemetry`` does the same for
exported real-usage records: it applies the validity filter, scores
each prediction against the ground-truth remainder, classifies how the
completion was invoked relative to the same-line right context, and
applies machine-checkable failure heuristics.

The heuristics are calibrated approximations of behaviors that were
originally judged by humans; every threshold lives in
:class:`FailureThresholds` and the defaults are documented there.
Failure modes needing semantic judgment (wrong identifier choice,
insufficient context, style preference, ...) are not computed; records
carry a free-form ``manual_labels`` field for annotators instead.
"""

from __future__ import annotations

import json
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Sequence

from linecomp.benchmark import BenchmarkSample
from linecomp.gateway import ModelGateway, ModelPrediction
from linecomp.metrics import (
    acceptance_rate,
    bleu4,
    edit_similarity,
    exact_match,
    meteor,
    rouge_l,
)
from linecomp.store import TelemetryRecord, load_records, validity
from linecomp.tokenizer import Tokenizer, tokenize
from linecomp.triggers import is_mid_token


class Scenario(Enum):
    """How a completion sits relative to same-line right context."""

    FULL_LINE = "full_line"      # nothing (but whitespace) right of the cursor
    PARTIAL_LINE = "partial_line"  # insertion up to preserved right context
    LINE_EDIT = "line_edit"      # the right context itself had to change


class NotClassifiable(ValueError):
    """Raised when a record lacks the stored contexts or ground truth."""


class FailureLabel(Enum):
    MID_TOKEN_INVOCATION = "mid_token_invocation"
    LOOPED_REPETITION = "looped_repetition"
    COPIED_INPUT_CONTEXT = "copied_input_context"
    EARLY_TERMINATION = "early_termination"
    LATE_TERMINATION = "late_termination"
    CORRECT_NOT_ACCEPTED = "correct_not_accepted"
    REDUNDANT_INVOCATION = "redundant_invocation"


@dataclass(frozen=True)
class FailureThresholds:
    """Knobs for the failure heuristics.

    Defaults: a token n-gram (n >= 2) repeating three times in a row
    counts as looping; a 10+ character verbatim substring of the last
    200 left-context characters counts as copying; predictions shorter
    than 0.5x / longer than 1.5x the truth token count with a 0.8
    precision / recall gate count as early / late termination.
    """

    loop_min_ngram: int = 2
    loop_min_repeats: int = 3
    copy_min_chars: int = 10
    copy_window_chars: int = 200
    early_ratio: float = 0.5
    late_ratio: float = 1.5
    early_precision_gate: float = 0.8
    late_recall_gate: float = 0.8


DEFAULT_THRESHOLDS = FailureThresholds()


@dataclass
class MetricRow:
    sample_id: str
    model_id: str
    language: str
    trigger: str | None
    exact_match: float
    edit_similarity: float
    rouge_f1: float
    bleu4: float
    meteor: float
    accepted: bool | None = None
    failed: bool = False
    trigger_kind: str | None = None
    labels: set[FailureLabel] = field(default_factory=set)

    def to_dict(self) -> dict:
        return {
            "sample_id": self.sample_id,
            "model_id": self.model_id,
            "language": self.language,
            "trigger": self.trigger,
            "exact_match": self.exact_match,
            "edit_similarity": self.edit_similarity,
            "rouge_f1": self.rouge_f1,
            "bleu4": self.bleu4,
            "meteor": self.meteor,
            "accepted": self.accepted,
            "failed": self.failed,
            "trigger_kind": self.trigger_kind,
            "labels": sorted(label.value for label in self.labels),
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "MetricRow":
        return cls(
            sample_id=obj["sample_id"],
            model_id=obj["model_id"],
            language=obj["language"],
            trigger=obj.get("trigger"),
            exact_match=obj["exact_match"],
            edit_similarity=obj["edit_similarity"],
            rouge_f1=obj["rouge_f1"],
            bleu4=obj["bleu4"],
            meteor=obj["meteor"],
            accepted=obj.get("accepted"),
            failed=obj.get("failed", False),
            trigger_kind=obj.get("trigger_kind"),
            labels={FailureLabel(v) for v in obj.get("labels", [])},
        )


_METRIC_NAMES = ("exact_match", "edit_similarity", "rouge_f1", "bleu4", "meteor")


def score_prediction(
    prediction_text: str, truth: str, tokenizer: Tokenizer = tokenize
) -> dict[str, float]:
    """All five text metrics of a prediction against its comparand."""
    pred_tokens = tokenizer(prediction_text)
    truth_tokens = tokenizer(truth)
    return {
        "exact_match": float(exact_match(prediction_text, truth)),
        "edit_similarity": edit_similarity(prediction_text, truth),
        "rouge_f1": rouge_l(pred_tokens, truth_tokens).f1,
        "bleu4": bleu4(pred_tokens, truth_tokens),
        "meteor": meteor(pred_tokens, truth_tokens),
    }


def run_offline_eval(
    samples: Sequence[BenchmarkSample],
    gateway: ModelGateway,
    tokenizer: Tokenizer = tokenize,
) -> list[MetricRow]:
    """Score every sample x backend pair; backend failures yield zero rows.

    Raises when the dataset is empty or no backend ever answered.
    """
    if not samples:
        raise ValueError("dataset is empty")
    rows: list[MetricRow] = []
    any_success = False
    for sample in samples:
        predictions = gateway.request_completions(sample.left_context, sample.right_context)
        for pred in predictions:
            if pred.failed:
                rows.append(
                    MetricRow(
                        sample_id=sample.sample_id,
                        model_id=pred.model_id,
                        language=sample.language,
                        trigger=sample.trigger,
                        exact_match=0.0,
                        edit_similarity=0.0,
                        rouge_f1=0.0,
                        bleu4=0.0,
                        meteor=0.0,
                        failed=True,
                    )
                )
                continue
            any_success = True
            scores = score_prediction(pred.text, sample.target, tokenizer)
            rows.append(
                MetricRow(
                    sample_id=sample.sample_id,
                    model_id=pred.model_id,
                    language=sample.language,
                    trigger=sample.trigger,
                    **scores,
                )
            )
    if not any_success:
        raise RuntimeError("every backend failed for every sample; nothing was evaluated")
    return rows


@dataclass(frozen=True)
class GroupStats:
    group: str
    model_id: str
    n: int
    exact_match: float
    edit_similarity: float
    rouge_f1: float
    bleu4: float
    meteor: float
    acceptance_rate: float | None

    def to_dict(self) -> dict:
        row = {
            "group": self.group,
            "model_id": self.model_id,
            "n": self.n,
            "exact_match": self.exact_match,
            "edit_similarity": self.edit_similarity,
            "rouge_f1": self.rouge_f1,
            "bleu4": self.bleu4,
            "meteor": self.meteor,
        }
        if self.acceptance_rate is not None:
            row["acceptance_rate"] = self.acceptance_rate
        return row


@dataclass
class Report:
    group_by: str
    groups: list[GroupStats]

    def to_text(self) -> str:
        headers = [self.group_by, "model", "n", *(name for name in _METRIC_NAMES), "accept"]
        table = [headers]
        for g in self.groups:
            table.append(
                [
                    g.group,
                    g.model_id,
                    str(g.n),
                    *(f"{getattr(g, name):.4f}" for name in _METRIC_NAMES),
                    "-" if g.acceptance_rate is None else f"{g.acceptance_rate:.4f}",
                ]
            )
        widths = [max(len(row[i]) for row in table) for i in range(len(headers))]
        lines = []
        for row_no, row in enumerate(table):
            lines.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip())
            if row_no == 0:
                lines.append("  ".join("-" * w for w in widths))
        return "\n".join(lines)

    def write_jsonl(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for g in self.groups:
                fh.write(json.dumps(g.to_dict(), ensure_ascii=False) + "\n")


_GROUP_KEYS = {
    "language": lambda row: row.language,
    "trigger": lambda row: row.trigger if row.trigger is not None else "(none)",
    "model": lambda row: row.model_id,
}


def aggregate(rows: Iterable[MetricRow], group_by: str) -> Report:
    """Mean of each metric per (group, model), largest groups first.

    Acceptance rate appears only where acceptance data exists.
    """
    if group_by not in _GROUP_KEYS:
        raise ValueError(f"group_by must be one of {sorted(_GROUP_KEYS)}")
    key_of = _GROUP_KEYS[group_by]
    buckets: dict[tuple[str, str], list[MetricRow]] = defaultdict(list)
    for row in rows:
        buckets[(key_of(row), row.model_id)].append(row)

    group_totals = Counter()
    for (group, _), members in buckets.items():
        group_totals[group] += len(members)

    stats = []
    for (group, model_id), members in buckets.items():
        n = len(members)
        means = {
            name: sum(getattr(m, name) for m in members) / n for name in _METRIC_NAMES
        }
        with_acceptance = [m for m in members if m.accepted is not None]
        rate = (
            acceptance_rate(len(with_acceptance), sum(m.accepted for m in with_acceptance))
            if with_acceptance
            else None
        )
        stats.append(
            GroupStats(group=group, model_id=model_id, n=n, acceptance_rate=rate, **means)
        )
    stats.sort(key=lambda s: (-group_totals[s.group], s.group, s.model_id))
    return Report(group_by=group_by, groups=stats)


def classify_scenario(record: TelemetryRecord) -> Scenario:
    """One of the three invocation scenarios; needs stored contexts.

    Full line: nothing but whitespace right of the cursor on the line.
    Partial line: the final line is the cursor prefix plus an insertion
    with the same-line right context preserved verbatim.  Anything else
    required editing that right context.
    """
    if (
        record.left_context is None
        or record.right_context is None
        or record.ground_truth_line is None
    ):
        raise NotClassifiable(
            f"record {record.request_id}: contexts or ground truth not stored"
        )
    same_line_right = record.right_context.split("\n", 1)[0]
    if not same_line_right.strip():
        return Scenario.FULL_LINE
    line = record.ground_truth_line
    prefix = record.cursor_line_prefix
    if (
        line.startswith(prefix)
        and line.endswith(same_line_right)
        and len(line) >= len(prefix) + len(same_line_right)
    ):
        return Scenario.PARTIAL_LINE
    return Scenario.LINE_EDIT


def _has_consecutive_repeat(tokens: Sequence[str], min_ngram: int, min_repeats: int) -> bool:
    total = len(tokens)
    for n in range(min_ngram, total // min_repeats + 1):
        span = n * min_repeats
        for start in range(0, total - span + 1):
            gram = tokens[start : start + n]
            if all(
                tokens[start + k * n : start + (k + 1) * n] == gram
                for k in range(1, min_repeats)
            ):
                return True
    return False


def _copies_window(prediction: str, window: str, min_chars: int) -> bool:
    if len(prediction) < min_chars or len(window) < min_chars:
        return False
    return any(
        prediction[i : i + min_chars] in window
        for i in range(len(prediction) - min_chars + 1)
    )


def detect_failures(
    record: TelemetryRecord,
    prediction: ModelPrediction,
    thresholds: FailureThresholds = DEFAULT_THRESHOLDS,
    tokenizer: Tokenizer = tokenize,
) -> set[FailureLabel]:
    """Machine-checkable failure labels for one prediction.

    Heuristics that need context text are skipped when the record was
    stored without it.
    """
    if record.ground_truth_remainder is None:
        raise ValueError(f"record {record.request_id}: ground truth not resolved")
    truth = record.ground_truth_remainder
    pred_text = prediction.text
    pred_tokens = tokenizer(pred_text)
    truth_tokens = tokenizer(truth)
    matched_exactly = exact_match(pred_text, truth) == 1
    rouge = rouge_l(pred_tokens, truth_tokens)

    labels: set[FailureLabel] = set()
    left = record.left_context
    if left is not None and is_mid_token(left):
        labels.add(FailureLabel.MID_TOKEN_INVOCATION)
    if _has_consecutive_repeat(pred_tokens, thresholds.loop_min_ngram, thresholds.loop_min_repeats):
        labels.add(FailureLabel.LOOPED_REPETITION)
    if (
        left is not None
        and not matched_exactly
        and _copies_window(pred_text, left[-thresholds.copy_window_chars:], thresholds.copy_min_chars)
    ):
        labels.add(FailureLabel.COPIED_INPUT_CONTEXT)
    if truth_tokens:
        if (
            len(pred_tokens) < thresholds.early_ratio * len(truth_tokens)
            and rouge.precision >= thresholds.early_precision_gate
        ):
            labels.add(FailureLabel.EARLY_TERMINATION)
        if (
            len(pred_tokens) > thresholds.late_ratio * len(truth_tokens)
            and rouge.recall >= thresholds.late_recall_gate
        ):
            labels.add(FailureLabel.LATE_TERMINATION)
    accepted_this = record.chosen_text is not None and record.chosen_text == pred_text
    if matched_exactly and not accepted_this:
        labels.add(FailureLabel.CORRECT_NOT_ACCEPTED)
    right = record.right_context
    if right is not None and truth.strip():
        same_line_right = right.split("\n", 1)[0].lstrip()
        if same_line_right.startswith(truth):
            labels.add(FailureLabel.REDUNDANT_INVOCATION)
    return labels


@dataclass
class TelemetryReport:
    n_records: int
    n_valid: int
    acceptance_rate: float
    rows: list[MetricRow]
    scenario_counts: dict[str, int]
    n_unclassifiable: int
    label_counts: dict[str, int]
    by_language: Report
    by_trigger: Report
    by_trigger_auto: Report
    by_model: Report

    def summary_dict(self) -> dict:
        return {
            "n_records": self.n_records,
            "n_valid": self.n_valid,
            "acceptance_rate": self.acceptance_rate,
            "scenario_counts": self.scenario_counts,
            "n_unclassifiable": self.n_unclassifiable,
            "label_counts": self.label_counts,
        }


def analyze_telemetry(
    export_path: str | Path,
    out_dir: str | Path | None = None,
    thresholds: FailureThresholds = DEFAULT_THRESHOLDS,
    tokenizer: Tokenizer = tokenize,
) -> TelemetryReport:
    """Evaluate an exported telemetry file end to end.

    Invalid records (empty ground truth or no predictions) are dropped
    first; every surviving prediction is scored against the ground-truth
    remainder.  Acceptance rate is the share of valid records whose user
    selected a suggestion.
    """
    records = load_records(export_path)
    valid = [r for r in records if validity(r).valid]

    rows: list[MetricRow] = []
    scenario_counts: Counter = Counter()
    label_counts: Counter = Counter()
    unclassifiable = 0
    for record in valid:
        try:
            scenario_counts[classify_scenario(record).value] += 1
        except NotClassifiable:
            unclassifiable += 1
        for pred in record.predictions:
            if pred.failed:
                continue
            labels = detect_failures(record, pred, thresholds, tokenizer)
            for label in labels:
                label_counts[label.value] += 1
            scores = score_prediction(pred.text, record.ground_truth_remainder, tokenizer)
            rows.append(
                MetricRow(
                    sample_id=record.request_id,
                    model_id=pred.model_id,
                    language=record.language,
                    trigger=record.detected_trigger,
                    accepted=record.chosen_text == pred.text
                    if record.chosen_text
                    else False,
                    trigger_kind=record.trigger_kind,
                    labels=labels,
                    **scores,
                )
            )

    accepted_records = sum(1 for r in valid if r.chosen_text)
    report = TelemetryReport(
        n_records=len(records),
        n_valid=len(valid),
        acceptance_rate=acceptance_rate(len(valid), accepted_records),
        rows=rows,
        scenario_counts=dict(scenario_counts),
        n_unclassifiable=unclassifiable,
        label_counts=dict(label_counts),
        by_language=aggregate(rows, "language"),
        by_trigger=aggregate(rows, "trigger"),
        by_trigger_auto=aggregate(
            [r for r in rows if r.trigger_kind == "auto"], "trigger"
        ),
        by_model=aggregate(rows, "model"),
    )
    if out_dir is not None:
        _write_report(report, Path(out_dir))
    return report


def _write_report(report: TelemetryReport, out_dir: Path) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    write_rows(report.rows, out_dir / "rows.jsonl")
    report.by_language.write_jsonl(out_dir / "by_language.jsonl")
    report.by_trigger.write_jsonl(out_dir / "by_trigger.jsonl")
    report.by_trigger_auto.write_jsonl(out_dir / "by_trigger_auto.jsonl")
    report.by_model.write_jsonl(out_dir / "by_model.jsonl")
    with open(out_dir / "summary.json", "w", encoding="utf-8") as fh:
        json.dump(report.summary_dict(), fh, indent=2)
        fh.write("\n")
    with open(out_dir / "report.txt", "w", encoding="utf-8") as fh:
        for title, table in (
            ("By language", report.by_language),
            ("By trigger", report.by_trigger),
            ("By trigger (automatic only)", report.by_trigger_auto),
            ("By model", report.by_model),
        ):
            fh.write(f"{title}\n{table.to_text()}\n\n")


def write_rows(rows: Iterable[MetricRow], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(json.dumps(row.to_dict(), ensure_ascii=False) + "\n")


def read_rows(path: str | Path) -> list[MetricRow]:
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        for line_number, raw in enumerate(fh, 1):
            raw = raw.strip()
            if not raw:
                continue
            try:
                rows.append(MetricRow.from_dict(json.loads(raw)))
            except (json.JSONDecodeError, KeyError) as exc:
                raise ValueError(f"{path}: corrupt rows line {line_number}: {exc}") from exc
    return rows
