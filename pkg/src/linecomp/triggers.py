"""Completion trigger-point detection.

Automatic completion fires when the text left of the cursor ends at one
of the canonical trigger tokens: a fixed set of keywords ("return",
"if", ...) and operator or punctuation symbols ("=", "**", "(", ...).

Matching rules:

- Symbols match when the left context, after stripping at most one
  trailing space, ends with the symbol.  The longest symbol wins, so
  "x <<" fires "<<" rather than "<".
- Keywords only fire once the keyword is a complete word followed by a
  whitespace character, so "delta " never fires "del" and a bare
  "return" (no space yet) does not fire at all.

Identifier characters are [A-Za-z0-9_] for every supported language.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

_KEYWORDS = (
    "await", "assert", "raise", "del", "lambda", "yield", "return",
    "while", "for", "if", "elif", "else", "global", "in", "and", "not",
    "or", "is", "with", "except",
)

_SYMBOLS = (
    ".", "+", "-", "*", "/", "%", "**", "<<", ">>", "&", "|", "^",
    "==", "!=", "<=", ">=", "+=", "-=", "=", "<", ">", ";", ",",
    "[", "(", "{", "~",
)

# Longest-first so that e.g. "**" is tried before "*"; sorted() is stable,
# so tokens of equal length keep their canonical order.
_SYMBOLS_BY_LENGTH = tuple(sorted(_SYMBOLS, key=lambda s: -len(s)))
_KEYWORDS_BY_LENGTH = tuple(sorted(_KEYWORDS, key=lambda s: -len(s)))


class TokenKind(Enum):
    KEYWORD = "keyword"
    SYMBOL = "symbol"


@dataclass(frozen=True)
class TriggerToken:
    text: str
    kind: TokenKind


@dataclass(frozen=True)
class TriggerMatch:
    """A trigger found at the cursor.

    ``end_offset`` is the character index just past the token text in the
    left context (before the optional trailing space).
    """

    token: TriggerToken
    end_offset: int


def _is_ident_char(ch: str) -> bool:
    return ch.isascii() and (ch.isalnum() or ch == "_")


def trigger_vocabulary() -> list[TriggerToken]:
    """The full trigger set: keywords in canonical order, then symbols longest-first."""
    vocab = [TriggerToken(k, TokenKind.KEYWORD) for k in _KEYWORDS]
    vocab.extend(TriggerToken(s, TokenKind.SYMBOL) for s in _SYMBOLS_BY_LENGTH)
    return vocab


def is_trigger(text: str) -> bool:
    return text in _KEYWORDS or text in _SYMBOLS


def detect_trigger(left_context: str) -> TriggerMatch | None:
    """Return the trigger token the left context ends at, or None.

    >>> detect_trigger("x <<").token.text
    '<<'
    >>> detect_trigger("return ").token.text
    'return'
    >>> detect_trigger("myreturn ") is None
    True
    """
    if not left_context:
        return None
    last = left_context[-1]
    if last in (" ", "\t"):
        body = left_context[:-1]
        # Keyword triggers fire only after their trailing whitespace is typed.
        for kw in _KEYWORDS_BY_LENGTH:
            if body.endswith(kw):
                before = body[: len(body) - len(kw)]
                if not before or not _is_ident_char(before[-1]):
                    return TriggerMatch(TriggerToken(kw, TokenKind.KEYWORD), len(body))
        if last == "\t":
            # Only a plain space may sit between a symbol and the cursor.
            return None
        candidate = body
    else:
        candidate = left_context
    for sym in _SYMBOLS_BY_LENGTH:
        if candidate.endswith(sym):
            return TriggerMatch(TriggerToken(sym, TokenKind.SYMBOL), len(candidate))
    return None


def is_mid_token(left_context: str) -> bool:
    """True when the cursor sits immediately after an identifier character.

    Such an invocation lands inside a partially typed identifier or
    literal, which byte-pair models handle poorly.
    """
    return bool(left_context) and _is_ident_char(left_context[-1])
