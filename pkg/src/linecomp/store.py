"""Durable append-only store of completion telemetry.

Records land in a JSONL journal, one snapshot per line; updates append a
new snapshot and the last one wins when the journal is replayed, so the
file stays append-only while records remain mutable through the API.
An in-memory index is rebuilt on open.

Each record carries the full per-request field set: timestamp, detected
trigger, language, every model's prediction and inference time, the
user-selected prediction, context character lengths (context text only
when the user opted in), trigger kind, IDE, extension version, and the
ground truth pushed by the client after its delay.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, replace
from enum import Enum
from pathlib import Path

from linecomp.gateway import ModelPrediction


class DuplicateRequestId(ValueError):
    pass


class UnknownRequestId(KeyError):
    pass


@dataclass(frozen=True)
class TelemetryRecord:
    request_id: str
    server_timestamp: str
    language: str
    trigger_kind: str  # "auto" | "manual"
    ide: str
    plugin_version: str
    detected_trigger: str | None
    predictions: tuple[ModelPrediction, ...]
    left_len_chars: int
    right_len_chars: int
    # Final line of the left context up to the cursor; needed to derive the
    # ground-truth remainder, so it is kept regardless of the context opt-in.
    cursor_line_prefix: str
    left_context: str | None = None
    right_context: str | None = None
    chosen_text: str | None = None
    ground_truth_line: str | None = None
    ground_truth_remainder: str | None = None
    ground_truth_mismatch: bool = False
    suppressed: bool = False
    manual_labels: tuple[str, ...] = ()  # free-form annotator labels

    def to_dict(self) -> dict:
        return {
            "request_id": self.request_id,
            "server_timestamp": self.server_timestamp,
            "language": self.language,
            "trigger_kind": self.trigger_kind,
            "ide": self.ide,
            "plugin_version": self.plugin_version,
            "detected_trigger": self.detected_trigger,
            "predictions": [p.to_dict() for p in self.predictions],
            "left_len_chars": self.left_len_chars,
            "right_len_chars": self.right_len_chars,
            "cursor_line_prefix": self.cursor_line_prefix,
            "left_context": self.left_context,
            "right_context": self.right_context,
            "chosen_text": self.chosen_text,
            "ground_truth_line": self.ground_truth_line,
            "ground_truth_remainder": self.ground_truth_remainder,
            "ground_truth_mismatch": self.ground_truth_mismatch,
            "suppressed": self.suppressed,
            "manual_labels": list(self.manual_labels),
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "TelemetryRecord":
        return cls(
            request_id=obj["request_id"],
            server_timestamp=obj["server_timestamp"],
            language=obj["language"],
            trigger_kind=obj["trigger_kind"],
            ide=obj["ide"],
            plugin_version=obj["plugin_version"],
            detected_trigger=obj["detected_trigger"],
            predictions=tuple(ModelPrediction.from_dict(p) for p in obj["predictions"]),
            left_len_chars=obj["left_len_chars"],
            right_len_chars=obj["right_len_chars"],
            cursor_line_prefix=obj["cursor_line_prefix"],
            left_context=obj.get("left_context"),
            right_context=obj.get("right_context"),
            chosen_text=obj.get("chosen_text"),
            ground_truth_line=obj.get("ground_truth_line"),
            ground_truth_remainder=obj.get("ground_truth_remainder"),
            ground_truth_mismatch=obj.get("ground_truth_mismatch", False),
            suppressed=obj.get("suppressed", False),
            manual_labels=tuple(obj.get("manual_labels", ())),
        )


class ValidityReason(Enum):
    EMPTY_GROUND_TRUTH = "empty_ground_truth"
    EMPTY_PREDICTIONS = "empty_predictions"
    OK = "ok"


@dataclass(frozen=True)
class ValidityVerdict:
    valid: bool
    reason: ValidityReason


def validity(record: TelemetryRecord) -> ValidityVerdict:
    """Filter verdict: a record qualifies for evaluation only when the
    ground-truth remainder is non-empty and some prediction is non-empty."""
    remainder = record.ground_truth_remainder
    if remainder is None or not remainder.strip():
        return ValidityVerdict(False, ValidityReason.EMPTY_GROUND_TRUTH)
    if not any(p.text for p in record.predictions):
        return ValidityVerdict(False, ValidityReason.EMPTY_PREDICTIONS)
    return ValidityVerdict(True, ValidityReason.OK)


def derive_remainder(record: TelemetryRecord, ground_truth_line: str) -> TelemetryRecord:
    """Attach the ground-truth line and strip the stored cursor prefix.

    When the developer rewrote the prefix, the remainder falls back to
    the whole line and the mismatch flag is set instead of dropping the
    record.
    """
    prefix = record.cursor_line_prefix
    if ground_truth_line.startswith(prefix):
        remainder = ground_truth_line[len(prefix):]
        mismatch = False
    else:
        remainder = ground_truth_line
        mismatch = True
    return replace(
        record,
        ground_truth_line=ground_truth_line,
        ground_truth_remainder=remainder,
        ground_truth_mismatch=mismatch,
    )


class TelemetryStore:
    """JSONL-journal-backed record store with a single serialized writer."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._lock = threading.RLock()
        self._records: dict[str, TelemetryRecord] = {}
        self._order: list[str] = []
        if self.path.exists():
            self._replay()
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._fh = open(self.path, "a", encoding="utf-8")

    def _replay(self) -> None:
        with open(self.path, "r", encoding="utf-8") as fh:
            for line_number, raw in enumerate(fh, 1):
                raw = raw.strip()
                if not raw:
                    continue
                try:
                    record = TelemetryRecord.from_dict(json.loads(raw))
                except (json.JSONDecodeError, KeyError) as exc:
                    raise ValueError(
                        f"{self.path}: corrupt journal line {line_number}: {exc}"
                    ) from exc
                if record.request_id not in self._records:
                    self._order.append(record.request_id)
                self._records[record.request_id] = record

    def _write(self, record: TelemetryRecord) -> None:
        self._fh.write(json.dumps(record.to_dict(), ensure_ascii=False) + "\n")
        self._fh.flush()

    def append(self, record: TelemetryRecord) -> None:
        """Persist a new record; the request_id must be unused."""
        with self._lock:
            if record.request_id in self._records:
                raise DuplicateRequestId(f"request_id already stored: {record.request_id}")
            self._write(record)
            self._records[record.request_id] = record
            self._order.append(record.request_id)

    def get(self, request_id: str) -> TelemetryRecord:
        with self._lock:
            try:
                return self._records[request_id]
            except KeyError:
                raise UnknownRequestId(request_id) from None

    def resolve_ground_truth(self, request_id: str, ground_truth_line: str) -> TelemetryRecord:
        """Store the pushed line and compute its post-cursor remainder."""
        with self._lock:
            updated = derive_remainder(self.get(request_id), ground_truth_line)
            self._write(updated)
            self._records[request_id] = updated
            return updated

    def apply_feedback(
        self, request_id: str, chosen_text: str | None, ground_truth_line: str
    ) -> TelemetryRecord:
        """Record the user's selection (empty means none) and the ground truth.

        Idempotent per request_id: the last write wins.
        """
        with self._lock:
            record = replace(self.get(request_id), chosen_text=chosen_text or None)
            updated = derive_remainder(record, ground_truth_line)
            self._write(updated)
            self._records[request_id] = updated
            return updated

    def records(self) -> list[TelemetryRecord]:
        """Snapshot of all records in first-seen order."""
        with self._lock:
            return [self._records[rid] for rid in self._order]

    def __len__(self) -> int:
        with self._lock:
            return len(self._records)

    def export_jsonl(
        self,
        path: str | Path,
        *,
        language: str | None = None,
        trigger: str | None = None,
        valid_only: bool = False,
    ) -> int:
        """Write matching records to ``path`` in the journal schema."""
        count = 0
        with open(path, "w", encoding="utf-8") as fh:
            for record in self.records():
                if language is not None and record.language != language:
                    continue
                if trigger is not None and record.detected_trigger != trigger:
                    continue
                if valid_only and not validity(record).valid:
                    continue
                fh.write(json.dumps(record.to_dict(), ensure_ascii=False) + "\n")
                count += 1
        return count

    def close(self) -> None:
        with self._lock:
            self._fh.close()


def load_records(path: str | Path) -> list[TelemetryRecord]:
    """Read an exported file or raw journal back into records.

    Duplicate request_ids are journal update snapshots: the last one
    wins, and first-seen order is kept (a no-op for exports, where every
    record appears once).
    """
    by_id: dict[str, TelemetryRecord] = {}
    order: list[str] = []
    with open(path, "r", encoding="utf-8") as fh:
        for line_number, raw in enumerate(fh, 1):
            raw = raw.strip()
            if not raw:
                continue
            try:
                record = TelemetryRecord.from_dict(json.loads(raw))
            except (json.JSONDecodeError, KeyError) as exc:
                raise ValueError(f"{path}: corrupt export line {line_number}: {exc}") from exc
            if record.request_id not in by_id:
                order.append(record.request_id)
            by_id[record.request_id] = record
    return [by_id[rid] for rid in order]
