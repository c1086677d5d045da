"""Deterministic HTTP backends for tests and demos.

A mock backend speaks the real backend wire contract
(``POST`` body ``{left_context, right_context, max_new_tokens, decoding}``,
response ``{"text": ...}``) so the rest of the stack can run without a
hosted model.  Behaviors are plain ``(left, right) -> str`` callables.
"""

from __future__ import annotations

import json
import threading
import time
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from typing import Callable

Behavior = Callable[[str, str], str]


def fixed(text: str) -> Behavior:
    """Always suggest ``text``."""
    return lambda left, right: text


def echo_tail(n: int = 16) -> Behavior:
    """Suggest the last ``n`` characters of the cursor line, reversed.

    Deterministic output that depends on the input, handy for telling
    several mock backends apart.
    """

    def behavior(left: str, right: str) -> str:
        tail = left.rsplit("\n", 1)[-1][-n:]
        return tail[::-1]

    return behavior


def target_lookup(mapping: dict[str, str], default: str = "") -> Behavior:
    """Suggest a canned completion keyed by the exact left context.

    Built from a benchmark dataset this acts as an oracle backend that
    always answers with the masked target.
    """
    return lambda left, right: mapping.get(left, default)


def oracle_for_samples(samples) -> Behavior:
    """Oracle behavior answering each benchmark sample with its target."""
    return target_lookup({s.left_context: s.target for s in samples})


class MockBackendServer:
    """Threaded HTTP server implementing the backend contract.

    ``delay_ms`` stalls every response (for timeout and concurrency
    tests) and ``status`` forces a non-200 reply.
    """

    def __init__(
        self,
        behavior: Behavior,
        *,
        delay_ms: int = 0,
        status: int = 200,
        host: str = "127.0.0.1",
        port: int = 0,
    ):
        self.behavior = behavior
        self.delay_ms = delay_ms
        self.status = status
        server = self

        class Handler(BaseHTTPRequestHandler):
            def do_POST(self) -> None:  # noqa: N802 (http.server API)
                length = int(self.headers.get("Content-Length", "0"))
                body = self.rfile.read(length)
                try:
                    payload = json.loads(body or b"{}")
                except json.JSONDecodeError:
                    payload = {}
                if server.delay_ms:
                    time.sleep(server.delay_ms / 1000.0)
                if server.status != 200:
                    self.send_response(server.status)
                    self.end_headers()
                    return
                text = server.behavior(
                    payload.get("left_context", ""), payload.get("right_context", "")
                )
                data = json.dumps({"text": text}).encode("utf-8")
                self.send_response(200)
                self.send_header("Content-Type", "application/json")
                self.send_header("Content-Length", str(len(data)))
                self.end_headers()
                self.wfile.write(data)

            def log_message(self, fmt: str, *args) -> None:
                pass

        self._httpd = ThreadingHTTPServer((host, port), Handler)
        self._httpd.daemon_threads = True
        self.port = self._httpd.server_address[1]
        self.endpoint = f"http://{host}:{self.port}/complete"
        # Short poll interval keeps shutdown() snappy in test suites.
        self._thread = threading.Thread(
            target=lambda: self._httpd.serve_forever(poll_interval=0.02), daemon=True
        )

    def start(self) -> "MockBackendServer":
        self._thread.start()
        return self

    def stop(self) -> None:
        self._httpd.shutdown()
        self._httpd.server_close()

    def __enter__(self) -> "MockBackendServer":
        return self.start()

    def __exit__(self, *exc) -> None:
        self.stop()
