"""Independent brute-force oracles used by the test suite.

Deliberately different algorithms from the library: LCS by subsequence
enumeration (not dynamic programming), edit distance by plain recursion,
and alignment by exhaustive search over all maximum matchings.
"""

from __future__ import annotations

from collections import Counter
from functools import lru_cache
from itertools import product


def all_sequences(alphabet: str, max_len: int) -> list[tuple[str, ...]]:
    seqs: list[tuple[str, ...]] = []
    for n in range(max_len + 1):
        seqs.extend(product(alphabet, repeat=n))
    return seqs


def subsequences_by_length(seq: tuple[str, ...]) -> dict[int, frozenset]:
    subs = {()}
    for ch in seq:
        subs |= {s + (ch,) for s in subs}
    by_len: dict[int, set] = {}
    for s in subs:
        by_len.setdefault(len(s), set()).add(s)
    return {k: frozenset(v) for k, v in by_len.items()}


def lcs_by_enumeration(
    a_subs: dict[int, frozenset], b_subs: dict[int, frozenset]
) -> int:
    """Longest length at which the two subsequence sets intersect."""
    for length in range(min(max(a_subs), max(b_subs)), 0, -1):
        sa = a_subs.get(length)
        sb = b_subs.get(length)
        if sa and sb and not sa.isdisjoint(sb):
            return length
    return 0


def oracle_lcs(a: tuple[str, ...], b: tuple[str, ...]) -> int:
    return lcs_by_enumeration(subsequences_by_length(a), subsequences_by_length(b))


def oracle_levenshtein(a: str, b: str) -> int:
    """Edit distance by memoized textbook recursion over edit paths."""

    @lru_cache(maxsize=None)
    def dist(i: int, j: int) -> int:
        if i == 0:
            return j
        if j == 0:
            return i
        substitute = dist(i - 1, j - 1) + (a[i - 1] != b[j - 1])
        delete = dist(i - 1, j) + 1
        insert = dist(i, j - 1) + 1
        return min(substitute, delete, insert)

    return dist(len(a), len(b))


def oracle_align(pred: list[str], truth: list[str]) -> tuple[int, int]:
    """(max matches, min chunks over all maximum matchings), exhaustively."""
    max_matches = sum((Counter(pred) & Counter(truth)).values())
    best_chunks: list[int | None] = [None]

    def rec(i: int, used_truth: frozenset, pairs: list[tuple[int, int]]) -> None:
        if i == len(pred):
            if len(pairs) == max_matches:
                chunks = 0
                prev: tuple[int, int] | None = None
                for a, b in pairs:
                    if prev is None or not (a == prev[0] + 1 and b == prev[1] + 1):
                        chunks += 1
                    prev = (a, b)
                if best_chunks[0] is None or chunks < best_chunks[0]:
                    best_chunks[0] = chunks
            return
        if len(pairs) + (len(pred) - i) < max_matches:
            return
        rec(i + 1, used_truth, pairs)
        for j in range(len(truth)):
            if j not in used_truth and truth[j] == pred[i]:
                rec(i + 1, used_truth | {j}, pairs + [(i, j)])

    rec(0, frozenset(), [])
    return max_matches, (best_chunks[0] if best_chunks[0] is not None else 0)
