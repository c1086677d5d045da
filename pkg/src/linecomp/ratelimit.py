"""Per-user sliding-window request admission."""

from __future__ import annotations

import threading
import time
from collections import deque
from dataclasses import dataclass
from typing import Callable

DEFAULT_LIMIT = 1000
DEFAULT_WINDOW_S = 3600.0


@dataclass(frozen=True)
class Decision:
    admitted: bool
    retry_after_s: float = 0.0


class SlidingWindowRateLimiter:
    """At most ``limit`` admissions per user within any trailing window.

    Check-and-record is atomic, so concurrent callers can never admit
    more than the limit.  The clock is injectable for tests.
    """

    def __init__(
        self,
        limit: int = DEFAULT_LIMIT,
        window_s: float = DEFAULT_WINDOW_S,
        clock: Callable[[], float] = time.monotonic,
    ):
        if limit < 1:
            raise ValueError("limit must be >= 1")
        self.limit = limit
        self.window_s = window_s
        self._clock = clock
        self._events: dict[str, deque[float]] = {}
        self._lock = threading.Lock()

    def check(self, user_token: str) -> Decision:
        """Admit (recording now) or deny with seconds until a slot frees."""
        with self._lock:
            now = self._clock()
            events = self._events.setdefault(user_token, deque())
            cutoff = now - self.window_s
            while events and events[0] <= cutoff:
                events.popleft()
            if len(events) < self.limit:
                events.append(now)
                return Decision(admitted=True)
            retry_after = events[0] + self.window_s - now
            return Decision(admitted=False, retry_after_s=retry_after)
