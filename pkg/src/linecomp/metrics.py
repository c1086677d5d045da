"""Similarity metrics for comparing a predicted line against the written one.

Six metrics, all mapping into [0, 1]:

- ``exact_match``          string equality after trimming outer whitespace
- ``edit_similarity``      1 - Levenshtein / max(|a|, |b|)
- ``rouge_l``              longest-common-subsequence precision/recall/F1
- ``bleu4``                smoothed n-gram precision up to order 4
- ``meteor``               unigram alignment with a fragmentation penalty
- ``acceptance_rate``      accepted / shown

The token-level metrics (``rouge_l``, ``bleu4``, ``meteor``) operate on
token sequences; callers choose the tokenizer (the default code
tokenizer lives in :mod:`linecomp.tokenizer`) so that no model's own
vocabulary is favored.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

# METEOR parameters: recall weight in the F-mean, fragmentation exponent,
# and penalty weight.  Matching is exact only; stemming or synonym tables
# are meaningless for code tokens.
METEOR_ALPHA = 0.9
METEOR_BETA = 3.0
METEOR_GAMMA = 0.5

BLEU_MAX_ORDER = 4


@dataclass(frozen=True)
class RougeScore:
    precision: float
    recall: float
    f1: float


def exact_match(prediction: str, truth: str) -> int:
    """1 iff the strings are equal after trimming leading/trailing whitespace."""
    return int(prediction.strip() == truth.strip())


def levenshtein(a: str, b: str) -> int:
    """Edit distance with unit-cost insert, delete, and substitute."""
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return len(a)
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        cur = [i]
        for j, cb in enumerate(b, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


def edit_similarity(prediction: str, truth: str) -> float:
    """1 - Levenshtein / max(lengths); defined as 1.0 when both are empty."""
    longest = max(len(prediction), len(truth))
    if longest == 0:
        return 1.0
    return 1.0 - levenshtein(prediction, truth) / longest


def lcs_length(a: Sequence[str], b: Sequence[str]) -> int:
    """Length of the longest common subsequence of two token sequences."""
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return 0
    prev = [0] * (len(b) + 1)
    for x in a:
        cur = [0]
        for j, y in enumerate(b, 1):
            if x == y:
                cur.append(prev[j - 1] + 1)
            else:
                up = prev[j]
                left = cur[j - 1]
                cur.append(up if up >= left else left)
        prev = cur
    return prev[-1]


def rouge_l(prediction: Sequence[str], truth: Sequence[str]) -> RougeScore:
    """LCS-based score with each token acting as a unigram.

    precision = LCS / |prediction|, recall = LCS / |truth| (0 when the
    denominator is 0), f1 = 2PR / (P + R) (0 when P + R = 0).
    """
    lcs = lcs_length(prediction, truth)
    precision = lcs / len(prediction) if prediction else 0.0
    recall = lcs / len(truth) if truth else 0.0
    denom = precision + recall
    f1 = 2.0 * precision * recall / denom if denom > 0 else 0.0
    return RougeScore(precision, recall, f1)


def _ngram_counts(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def bleu4(prediction: Sequence[str], truth: Sequence[str]) -> float:
    """Geometric mean of modified n-gram precisions times a brevity penalty.

    The order is clipped to min(4, |truth|, |prediction|) so identical
    short sequences still score 1.0, and precisions for n >= 2 get
    add-one smoothing.  An empty prediction scores 0.
    """
    if not prediction or not truth:
        return 0.0
    max_order = min(BLEU_MAX_ORDER, len(prediction), len(truth))
    log_sum = 0.0
    for n in range(1, max_order + 1):
        pred_ngrams = _ngram_counts(prediction, n)
        truth_ngrams = _ngram_counts(truth, n)
        total = sum(pred_ngrams.values())
        clipped = sum(min(c, truth_ngrams[g]) for g, c in pred_ngrams.items())
        if n == 1:
            if clipped == 0:
                return 0.0
            precision = clipped / total
        else:
            precision = (clipped + 1) / (total + 1)
        log_sum += math.log(precision)
    geo_mean = math.exp(log_sum / max_order)
    brevity = min(1.0, math.exp(1.0 - len(truth) / len(prediction)))
    return geo_mean * brevity


# Above this many tokens per side, chunk minimization falls back to the
# greedy grouping; minimizing exactly is combinatorial and single-line
# completions stay far below the limit anyway.
_EXACT_ALIGN_LIMIT = 12


def _align_greedy(prediction: Sequence[str], truth: Sequence[str]) -> tuple[int, int]:
    """Group matches by longest common contiguous run first (leftmost on
    ties).  Always reaches the maximum match count; the chunk count is a
    close upper bound on the minimum."""
    pred_free = [True] * len(prediction)
    truth_free = [True] * len(truth)
    matches = 0
    chunks = 0
    while True:
        best_len = 0
        best_i = best_j = -1
        for i in range(len(prediction)):
            if not pred_free[i]:
                continue
            for j in range(len(truth)):
                if not truth_free[j] or truth[j] != prediction[i]:
                    continue
                k = 0
                while (
                    i + k < len(prediction)
                    and j + k < len(truth)
                    and pred_free[i + k]
                    and truth_free[j + k]
                    and prediction[i + k] == truth[j + k]
                ):
                    k += 1
                if k > best_len:
                    best_len, best_i, best_j = k, i, j
        if best_len == 0:
            return matches, chunks
        for offset in range(best_len):
            pred_free[best_i + offset] = False
            truth_free[best_j + offset] = False
        matches += best_len
        chunks += 1


_ALIGN_NODE_BUDGET = 50_000


def _min_chunks_exact(
    prediction: Sequence[str],
    truth: Sequence[str],
    max_matches: int,
    upper_bound: int,
) -> int:
    """Fewest chunks over all maximum matchings (branch and bound).

    The greedy result seeds the bound, so whenever the node budget runs
    out the answer is still a valid (greedy) chunk count.
    """
    best = upper_bound
    nodes = 0
    n_pred = len(prediction)
    free = [True] * len(truth)
    positions: dict[str, list[int]] = {}
    for j, tok in enumerate(truth):
        positions.setdefault(tok, []).append(j)

    def capacity(i: int) -> int:
        remaining = Counter(prediction[i:])
        available = Counter(tok for j, tok in enumerate(truth) if free[j])
        return sum((remaining & available).values())

    def rec(i: int, matched: int, chunks: int, prev_i: int, prev_j: int) -> None:
        nonlocal best, nodes
        nodes += 1
        if nodes > _ALIGN_NODE_BUDGET or chunks >= best:
            return
        if matched == max_matches:
            best = chunks
            return
        if i == n_pred or matched + capacity(i) < max_matches:
            return
        candidates = positions.get(prediction[i], ())
        # Continuing the current chunk is free; try that branch first.
        cont_j = prev_j + 1 if prev_i == i - 1 else -1
        ordered = sorted(candidates, key=lambda j: j != cont_j)
        for j in ordered:
            if not free[j]:
                continue
            free[j] = False
            rec(i + 1, matched + 1, chunks + (0 if j == cont_j else 1), i, j)
            free[j] = True
        rec(i + 1, matched, chunks, prev_i, prev_j)

    rec(0, 0, 0, -2, -2)
    return best


def _align(prediction: Sequence[str], truth: Sequence[str]) -> tuple[int, int]:
    """Exact-match unigram alignment: (matched tokens, chunk count).

    Matches are maximized first; among maximum matchings the number of
    chunks (runs contiguous in both sequences) is minimized, exactly for
    inputs up to ``_EXACT_ALIGN_LIMIT`` tokens per side and greedily
    beyond that.
    """
    max_matches = sum((Counter(prediction) & Counter(truth)).values())
    if max_matches == 0:
        return 0, 0
    greedy_matches, greedy_chunks = _align_greedy(prediction, truth)
    if max(len(prediction), len(truth)) > _EXACT_ALIGN_LIMIT:
        return greedy_matches, greedy_chunks
    chunks = _min_chunks_exact(prediction, truth, max_matches, greedy_chunks)
    return max_matches, chunks


def meteor(prediction: Sequence[str], truth: Sequence[str]) -> float:
    """Alignment-based score: F-mean discounted by a fragmentation penalty.

    F_mean = P*R / (alpha*R + (1-alpha)*P); penalty =
    gamma * (chunks/matches)**beta when there is more than one chunk,
    else 0.  No match at all scores 0.
    """
    matches, chunks = _align(prediction, truth)
    if matches == 0:
        return 0.0
    precision = matches / len(prediction)
    recall = matches / len(truth)
    f_mean = (precision * recall) / (
        METEOR_ALPHA * recall + (1.0 - METEOR_ALPHA) * precision
    )
    penalty = (
        METEOR_GAMMA * (chunks / matches) ** METEOR_BETA if chunks > 1 else 0.0
    )
    return f_mean * (1.0 - penalty)


def acceptance_rate(shown: int, accepted: int) -> float:
    """Accepted completions over completions shown; 0 when nothing was shown."""
    if shown < 0 or accepted < 0:
        raise ValueError("counts must be non-negative")
    if accepted > shown:
        raise ValueError(f"accepted ({accepted}) exceeds shown ({shown})")
    return accepted / shown if shown else 0.0
