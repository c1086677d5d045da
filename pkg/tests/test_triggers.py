from __future__ import annotations

from hypothesis import given
from hypothesis import strategies as st

from linecomp.triggers import (
    TokenKind,
    detect_trigger,
    is_mid_token,
    is_trigger,
    trigger_vocabulary,
)

VOCAB = trigger_vocabulary()
KEYWORDS = [t for t in VOCAB if t.kind is TokenKind.KEYWORD]
SYMBOLS = [t for t in VOCAB if t.kind is TokenKind.SYMBOL]


def test_vocabulary_contents():
    texts = [t.text for t in VOCAB]
    assert texts[0] == "await"
    assert texts[-1] == "~"
    assert len(texts) == len(set(texts)) == 47
    assert is_trigger("elif")
    assert not is_trigger("::")
    assert not is_trigger("def")


def test_vocabulary_keyword_iff_alphabetic():
    for token in VOCAB:
        assert (token.kind is TokenKind.KEYWORD) == token.text.isalpha()


def test_vocabulary_symbols_longest_first():
    lengths = [len(t.text) for t in SYMBOLS]
    assert lengths == sorted(lengths, reverse=True)


def test_vocabulary_stable_across_calls():
    assert trigger_vocabulary() == trigger_vocabulary()


def test_detect_symbol_at_cursor():
    match = detect_trigger("if a % 2 =")
    assert match.token.text == "="
    assert match.token.kind is TokenKind.SYMBOL
    assert match.end_offset == len("if a % 2 =")


def test_detect_longest_symbol_wins():
    assert detect_trigger("x <<").token.text == "<<"
    assert detect_trigger("x <").token.text == "<"
    assert detect_trigger("a **").token.text == "**"
    assert detect_trigger("a ==").token.text == "=="
    assert detect_trigger("a !=").token.text == "!="
    assert detect_trigger("a >=").token.text == ">="
    assert detect_trigger("a +=").token.text == "+="


def test_detect_symbol_tolerates_one_trailing_space():
    with_space = detect_trigger("x = ")
    without = detect_trigger("x =")
    assert with_space.token.text == without.token.text == "="
    assert with_space.end_offset == without.end_offset == 3
    assert detect_trigger("x =  ") is None  # two spaces is out of reach


def test_detect_keyword_requires_trailing_whitespace():
    assert detect_trigger("return ").token.text == "return"
    assert detect_trigger("return") is None
    assert detect_trigger("return\t").token.text == "return"
    assert detect_trigger("return  ") is None


def test_detect_keyword_requires_word_boundary():
    assert detect_trigger("myreturn ") is None
    assert detect_trigger("delta ") is None
    assert detect_trigger("del ").token.text == "del"
    assert detect_trigger("x.del ").token.text == "del"
    assert detect_trigger("foo(return ").token.text == "return"


def test_detect_trigger_empty_and_whitespace():
    assert detect_trigger("") is None
    assert detect_trigger(" ") is None
    assert detect_trigger("\t") is None
    assert detect_trigger("plain text") is None


def test_detect_trigger_multiline_context():
    match = detect_trigger("def f():\n    return ")
    assert match.token.text == "return"


def test_match_invariant_stripping_shortens():
    for left in ("x = ", "x =", "return ", "a **", "call("):
        match = detect_trigger(left)
        assert match is not None
        stripped = left[: match.end_offset - len(match.token.text)]
        assert len(stripped) < len(left)
        assert left[match.end_offset - len(match.token.text) : match.end_offset] == (
            match.token.text
        )


@given(prefix=st.text(alphabet="xyz_09 .(#\n", max_size=12), data=st.data())
def test_every_token_detectable_after_boundary(prefix, data):
    token = data.draw(st.sampled_from(VOCAB))
    if token.kind is TokenKind.KEYWORD:
        boundary = data.draw(st.sampled_from([" ", "(", ".", ";", "\n", ""]))
        if boundary == "" and prefix and (prefix[-1].isalnum() or prefix[-1] == "_"):
            boundary = " "
        left = prefix + boundary + token.text + " "
    else:
        # A boundary that cannot coalesce into a longer symbol.
        boundary = data.draw(st.sampled_from(["a", "0", "_", " "]))
        left = prefix + boundary + token.text
    match = detect_trigger(left)
    assert match is not None
    assert match.token == token


@given(st.text(max_size=30))
def test_longest_match_determinism(left):
    match = detect_trigger(left)
    if match is None or match.token.kind is not TokenKind.SYMBOL:
        return
    candidate = left[: match.end_offset]
    for other in SYMBOLS:
        if len(other.text) > len(match.token.text):
            assert not candidate.endswith(other.text)


def test_is_mid_token():
    assert is_mid_token("for c in alphebt")
    assert not is_mid_token("x = ")
    assert not is_mid_token("")
    assert is_mid_token("foo_1")
    assert is_mid_token("cons_civi")
    assert not is_mid_token("foo(")
    assert not is_mid_token("x +")
