"""The committed trigger fixtures are the cross-component contract: the
library must agree with every pair, and regeneration must reproduce the
committed file exactly (guards against silent rule drift)."""

from __future__ import annotations

import importlib.util
import json
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "conformance" / "trigger_fixtures.json"

from linecomp.triggers import detect_trigger


def load_fixture_pairs():
    with open(FIXTURES, "r", encoding="utf-8") as fh:
        return json.load(fh)


def test_fixture_corpus_is_large_enough():
    assert len(load_fixture_pairs()) >= 200


def test_library_agrees_with_every_fixture():
    for pair in load_fixture_pairs():
        match = detect_trigger(pair["left"])
        detected = match.token.text if match else None
        assert detected == pair["trigger"], f"left={pair['left']!r}"


def test_fixture_file_matches_generator():
    spec = importlib.util.spec_from_file_location(
        "gen_trigger_fixtures", ROOT / "scripts" / "gen_trigger_fixtures.py"
    )
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    assert module.build_fixture_pairs() == load_fixture_pairs()
