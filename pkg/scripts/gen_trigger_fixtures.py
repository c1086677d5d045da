#!/usr/bin/env python3
"""Generate the shared trigger-detection conformance fixtures.

Every client implementation of trigger detection must agree with the
library on these (left context, expected trigger) pairs.  The expected
values are computed by the library itself, so regenerating after a rule
change keeps the corpus consistent; the committed JSON is the contract.

Usage: python3 scripts/gen_trigger_fixtures.py [out_path]
"""

from __future__ import annotations

import json
import random
import sys
from pathlib import Path

from linecomp.triggers import TokenKind, detect_trigger, trigger_vocabulary

_PREFIX_POOL = (
    "",
    "x",
    "foo(bar",
    "if a % 2 ",
    "const total",
    "items[i]",
    "def f():\n    x",
    "a # note",
    "print(value)",
    "\tresult",
    "numbers = [1, 2",
    "while count",
    "obj.method(arg1",
    "s = \"text\"",
    "let y = z",
)

_HAND_CASES = (
    "if a % 2 =",
    "x <<",
    "x <",
    "x <= ",
    "return ",
    "return",
    "return  ",
    "myreturn ",
    "delta ",
    "del ",
    "x.del ",
    "for c in alphebt",
    "x = ",
    "x =",
    "x =\t",
    "a **",
    "a *",
    "foo::",
    "foo.",
    "foo . ",
    "",
    " ",
    "\t",
    "\n",
    "def f():\n    return ",
    "def f():\n    yield ",
    "arr[",
    "call(",
    "dict{",
    "~",
    "x ~",
    "a != ",
    "a !=",
    "a ==",
    "a +=",
    "a -=",
    "b >>",
    "b >> ",
    "b >",
    "value in ",
    "main ",
    "x and ",
    "grand ",
    "x or ",
    "minor ",
    "x is ",
    "axis ",
    "x not ",
    "cannot ",
    "lambda ",
    "except ",
    "x, ",
    "x; ",
    "x | ",
    "x & ",
    "x ^ ",
    "100 % ",
    "path / ",
    "a/",
    "a+",
    "a-",
)


def build_fixture_pairs() -> list[dict]:
    rng = random.Random(977)
    lefts: list[str] = list(_HAND_CASES)

    for token in trigger_vocabulary():
        if token.kind is TokenKind.KEYWORD:
            boundaries = (" ", "(", ".", ";", "\n")
            suffix = " "
        else:
            # A boundary that cannot coalesce with the symbol into a longer one.
            boundaries = ("a", "0", "_", " ")
            suffix = ""
        for boundary in boundaries:
            prefix = rng.choice(_PREFIX_POOL)
            lefts.append(prefix + boundary + token.text + suffix)
        # Bare keyword without trailing whitespace; symbol with one space.
        if token.kind is TokenKind.KEYWORD:
            lefts.append(rng.choice(_PREFIX_POOL) + " " + token.text)
            lefts.append(rng.choice(_PREFIX_POOL) + "_" + token.text + " ")
        else:
            lefts.append(rng.choice(_PREFIX_POOL) + "z" + token.text + " ")

    seen: set[str] = set()
    pairs: list[dict] = []
    for left in lefts:
        if left in seen:
            continue
        seen.add(left)
        match = detect_trigger(left)
        pairs.append({"left": left, "trigger": match.token.text if match else None})
    return pairs


def main() -> int:
    out_path = Path(sys.argv[1]) if len(sys.argv) > 1 else (
        Path(__file__).resolve().parent.parent / "conformance" / "trigger_fixtures.json"
    )
    pairs = build_fixture_pairs()
    out_path.parent.mkdir(parents=True, exist_ok=True)
    with open(out_path, "w", encoding="utf-8") as fh:
        json.dump(pairs, fh, ensure_ascii=False, indent=1)
        fh.write("\n")
    print(f"wrote {len(pairs)} fixture pairs to {out_path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
