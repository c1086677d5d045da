"""Pattern-based source-code tokenizer used by the token-level metrics.

Splits code into identifiers, numbers, string/char literals, operators
(maximal munch over a fixed table of multi-character forms) and single
punctuation characters.  Whitespace is never a token.  The tokenizer is
language-agnostic and makes no attempt to understand comments.
"""

from __future__ import annotations

import re
from typing import Callable

Tokenizer = Callable[[str], list[str]]

_MULTI_CHAR_OPERATORS = (
    ">>>=", "<<=", ">>=", ">>>", "**=", "//=", "...", "===", "!==", "<=>",
    "->*", "::", "->", "=>", "++", "--", "**", "//", "<<", ">>", "&&",
    "||", "??", "==", "!=", "<=", ">=", "+=", "-=", "*=", "/=", "%=",
    "&=", "|=", "^=", "..",
)

_TOKEN_RE = re.compile(
    "|".join(
        (
            r'"(?:\\.|[^"\\\n])*"',            # double-quoted string
            r"'(?:\\.|[^'\\\n])*'",            # single-quoted string / char
            r"0[xX][0-9a-fA-F]+",               # hex literal
            r"\d+\.\d+(?:[eE][+-]?\d+)?",      # float
            r"\d+(?:[eE][+-]?\d+)?",           # integer
            r"\.\d+",                            # leading-dot float
            r"[A-Za-z_]\w*",                    # identifier / keyword
            "|".join(
                re.escape(op)
                for op in sorted(_MULTI_CHAR_OPERATORS, key=len, reverse=True)
            ),
            r"\S",                               # any other single character
        )
    )
)


def tokenize(code: str) -> list[str]:
    """Deterministically split ``code`` into tokens; empty input gives [].

    >>> tokenize("a = b+1")
    ['a', '=', 'b', '+', '1']
    """
    return _TOKEN_RE.findall(code)
