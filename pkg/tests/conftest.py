from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from linecomp.mock_backend import MockBackendServer, fixed


class FakeClock:
    """Manually advanced clock for rate-limiter and timing tests."""

    def __init__(self, start: float = 0.0):
        self.now = start

    def __call__(self) -> float:
        return self.now

    def advance(self, seconds: float) -> None:
        self.now += seconds


@pytest.fixture
def fake_clock() -> FakeClock:
    return FakeClock()


@pytest.fixture
def three_mock_backends():
    """Three deterministic mock backend servers with distinct fixed outputs."""
    servers = [
        MockBackendServer(fixed("alpha(a, b)")),
        MockBackendServer(fixed("beta(a)")),
        MockBackendServer(fixed("gamma()")),
    ]
    for server in servers:
        server.start()
    try:
        yield servers
    finally:
        for server in servers:
            server.stop()
