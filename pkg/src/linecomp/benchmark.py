"""Offline masked-completion test sets built from a source corpus.

Two masking strategies produce line-completion samples:

- random: mask from a whitespace character strictly inside a line's
  content to the end of the line.  The whitespace itself stays in the
  left context; the target starts at the next non-whitespace character.
- trigger: mask from just after a completion trigger token (plus one
  following space, if present) to the end of the line, simulating where
  the online system would actually fire.

Neither strategy ever masks a whole line or an empty tail, masks are
capped per file so large files cannot dominate, at most one mask is
taken per line, and generation is deterministic for a given seed.
"""

from __future__ import annotations

import json
import logging
import random
from dataclasses import dataclass
from pathlib import Path

from linecomp.triggers import TokenKind, detect_trigger

logger = logging.getLogger(__name__)

DEFAULT_MAX_PER_FILE = 10

EXTENSION_MAP = {
    ".c": "C",
    ".h": "C",
    ".cs": "C#",
    ".cpp": "C++",
    ".cc": "C++",
    ".cxx": "C++",
    ".hpp": "C++",
    ".go": "Go",
    ".java": "Java",
    ".js": "JavaScript",
    ".jsx": "JavaScript",
    ".kt": "Kotlin",
    ".kts": "Kotlin",
    ".php": "PHP",
    ".py": "Python",
    ".rb": "Ruby",
    ".rs": "Rust",
    ".scala": "Scala",
    ".ts": "TypeScript",
    ".tsx": "TypeScript",
}

RANDOM_STRATEGY = "random"
TRIGGER_STRATEGY = "trigger"

_DATASET_FIELDS = (
    "sample_id",
    "language",
    "file_id",
    "line_no",
    "left_context",
    "target",
    "right_context",
    "trigger",
    "strategy",
)

_LINE_WHITESPACE = (" ", "\t")


@dataclass(frozen=True)
class CorpusFile:
    file_id: str
    repo_id: str
    language: str
    text: str


@dataclass(frozen=True)
class BenchmarkSample:
    sample_id: str
    language: str
    file_id: str
    line_no: int  # 1-based
    left_context: str
    target: str
    right_context: str
    trigger: str | None
    strategy: str


@dataclass
class ScanResult:
    files: list[CorpusFile]
    skipped_non_utf8: int


def scan_corpus(root_path: str | Path, extension_map: dict[str, str] | None = None) -> ScanResult:
    """Collect every mapped-extension file under ``root_path``.

    ``repo_id`` is the top-level directory name.  Files that do not
    decode as UTF-8 are skipped and counted.
    """
    root = Path(root_path)
    if not root.is_dir():
        raise NotADirectoryError(f"corpus root is not a readable directory: {root}")
    extensions = EXTENSION_MAP if extension_map is None else extension_map
    files: list[CorpusFile] = []
    skipped = 0
    for path in sorted(root.rglob("*")):
        if not path.is_file():
            continue
        language = extensions.get(path.suffix)
        if language is None:
            continue
        try:
            text = path.read_text(encoding="utf-8")
        except UnicodeDecodeError:
            skipped += 1
            logger.warning("skipping non-UTF-8 file: %s", path)
            continue
        rel = path.relative_to(root)
        repo_id = rel.parts[0] if len(rel.parts) > 1 else ""
        files.append(
            CorpusFile(file_id=rel.as_posix(), repo_id=repo_id, language=language, text=text)
        )
    return ScanResult(files=files, skipped_non_utf8=skipped)


def dedup_repositories(
    files: list[CorpusFile], excluded_repos: set[str]
) -> list[CorpusFile]:
    """Drop every file whose repository is in the exclusion set."""
    return [f for f in files if f.repo_id not in excluded_repos]


def _line_spans(text: str) -> list[tuple[int, int]]:
    """(start, content_end) per line; content excludes the newline and any
    trailing carriage return."""
    spans = []
    start = 0
    while start <= len(text):
        newline = text.find("\n", start)
        end = len(text) if newline == -1 else newline
        content_end = end
        if content_end > start and text[content_end - 1] == "\r":
            content_end -= 1
        spans.append((start, content_end))
        if newline == -1:
            break
        start = newline + 1
    return spans


def _pick_one_per_line(
    candidates: list[tuple[int, int]], rng: random.Random, max_per_file: int
) -> dict[int, int]:
    """Uniformly pick candidate positions, at most one per line."""
    shuffled = list(candidates)
    rng.shuffle(shuffled)
    chosen: dict[int, int] = {}
    for line_no, value in shuffled:
        if line_no in chosen:
            continue
        chosen[line_no] = value
        if len(chosen) == max_per_file:
            break
    return chosen


def gen_random_masks(
    file: CorpusFile, seed: int, max_per_file: int = DEFAULT_MAX_PER_FILE
) -> list[BenchmarkSample]:
    """Random-whitespace masks: up to ``max_per_file`` samples, one per line.

    Eligible positions are whitespace characters with non-whitespace
    content on both sides within the line, so leading indentation and
    trailing spaces never qualify.
    """
    if max_per_file < 1:
        raise ValueError("max_per_file must be >= 1")
    rng = random.Random(f"{seed}:{RANDOM_STRATEGY}:{file.file_id}")
    text = file.text
    candidates: list[tuple[int, int]] = []
    for line_no, (start, content_end) in enumerate(_line_spans(text), 1):
        line = text[start:content_end]
        interior = [i for i, ch in enumerate(line) if ch not in _LINE_WHITESPACE]
        if not interior:
            continue
        first_nw, last_nw = interior[0], interior[-1]
        for col in range(first_nw + 1, last_nw):
            if line[col] in _LINE_WHITESPACE:
                candidates.append((line_no, start + col))
    chosen = _pick_one_per_line(candidates, rng, max_per_file)

    samples = []
    spans = _line_spans(text)
    for line_no in sorted(chosen):
        ws_pos = chosen[line_no]
        _, content_end = spans[line_no - 1]
        target_start = ws_pos + 1
        while text[target_start] in _LINE_WHITESPACE:
            target_start += 1
        samples.append(
            BenchmarkSample(
                sample_id=f"{file.file_id}:{line_no}:{RANDOM_STRATEGY}",
                language=file.language,
                file_id=file.file_id,
                line_no=line_no,
                left_context=text[: ws_pos + 1],
                target=text[target_start:content_end],
                right_context=text[content_end:],
                trigger=None,
                strategy=RANDOM_STRATEGY,
            )
        )
    return samples


def _trigger_cursors(line: str) -> list[tuple[int, str]]:
    """(cursor_column, trigger_text) for every trigger occurrence in the line.

    The cursor sits just after the trigger token plus one following
    space, if present (keywords always require that whitespace).
    """
    cursors: dict[int, str] = {}
    for end in range(1, len(line) + 1):
        prefix = line[:end]
        match = detect_trigger(prefix)
        if match is None:
            continue
        if prefix[-1] in _LINE_WHITESPACE:
            if match.token.kind is not TokenKind.KEYWORD or match.end_offset != end - 1:
                continue
            cursor = end
        else:
            # Symbol ending exactly at the cursor; absorb one following space.
            cursor = end + 1 if line[end : end + 1] == " " else end
        cursors.setdefault(cursor, match.token.text)
    return sorted(cursors.items())


def gen_trigger_masks(
    file: CorpusFile, seed: int, max_per_file: int = DEFAULT_MAX_PER_FILE
) -> list[BenchmarkSample]:
    """Trigger-point masks: the left context ends exactly where the online
    lexer would fire, and non-whitespace content must follow on the line."""
    if max_per_file < 1:
        raise ValueError("max_per_file must be >= 1")
    rng = random.Random(f"{seed}:{TRIGGER_STRATEGY}:{file.file_id}")
    text = file.text
    spans = _line_spans(text)
    candidates: list[tuple[int, int]] = []
    cursor_triggers: dict[tuple[int, int], str] = {}
    for line_no, (start, content_end) in enumerate(spans, 1):
        line = text[start:content_end]
        for cursor, trigger_text in _trigger_cursors(line):
            tail = line[cursor:]
            if not tail.strip():
                continue
            candidates.append((line_no, cursor))
            cursor_triggers[(line_no, cursor)] = trigger_text
    chosen = _pick_one_per_line(candidates, rng, max_per_file)

    samples = []
    for line_no in sorted(chosen):
        cursor = chosen[line_no]
        start, content_end = spans[line_no - 1]
        samples.append(
            BenchmarkSample(
                sample_id=f"{file.file_id}:{line_no}:{TRIGGER_STRATEGY}",
                language=file.language,
                file_id=file.file_id,
                line_no=line_no,
                left_context=text[: start + cursor],
                target=text[start + cursor : content_end],
                right_context=text[content_end:],
                trigger=cursor_triggers[(line_no, cursor)],
                strategy=TRIGGER_STRATEGY,
            )
        )
    return samples


def write_dataset(samples: list[BenchmarkSample], path: str | Path) -> None:
    """Write samples as JSONL, one object per line, fixed field order."""
    with open(path, "w", encoding="utf-8") as fh:
        for s in samples:
            row = {
                "sample_id": s.sample_id,
                "language": s.language,
                "file_id": s.file_id,
                "line_no": s.line_no,
                "left_context": s.left_context,
                "target": s.target,
                "right_context": s.right_context,
                "trigger": s.trigger,
                "strategy": s.strategy,
            }
            fh.write(json.dumps(row, ensure_ascii=False) + "\n")


def read_dataset(path: str | Path) -> list[BenchmarkSample]:
    """Read a dataset back; malformed input raises naming the line number."""
    samples = []
    with open(path, "r", encoding="utf-8") as fh:
        for line_number, raw in enumerate(fh, 1):
            raw = raw.rstrip("\n")
            if not raw:
                continue
            try:
                obj = json.loads(raw)
            except json.JSONDecodeError as exc:
                raise ValueError(f"{path}: malformed dataset line {line_number}: {exc}") from exc
            missing = [f for f in _DATASET_FIELDS if f not in obj]
            if missing:
                raise ValueError(
                    f"{path}: dataset line {line_number} missing fields: {', '.join(missing)}"
                )
            samples.append(
                BenchmarkSample(
                    sample_id=obj["sample_id"],
                    language=obj["language"],
                    file_id=obj["file_id"],
                    line_no=obj["line_no"],
                    left_context=obj["left_context"],
                    target=obj["target"],
                    right_context=obj["right_context"],
                    trigger=obj["trigger"],
                    strategy=obj["strategy"],
                )
            )
    return samples
