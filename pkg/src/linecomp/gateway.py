"""Fan-out of one completion context to every configured model backend.

Backends are independent HTTP services; each call is issued
concurrently, timed, truncated to a single line, and isolated so that a
slow or broken backend never spoils the batch.
"""

from __future__ import annotations

import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import httpx

DEFAULT_TIMEOUT_MS = 3000
DEFAULT_MAX_NEW_TOKENS = 64


@dataclass(frozen=True)
class BackendConfig:
    """One model backend: where to reach it and how it should decode."""

    model_id: str
    endpoint: str
    decoding: dict = field(default_factory=dict)  # {"beam_width": n} or {"top_p": p}
    max_new_tokens: int = DEFAULT_MAX_NEW_TOKENS
    timeout_ms: int = DEFAULT_TIMEOUT_MS

    def __post_init__(self) -> None:
        keys = set(self.decoding)
        if keys not in ({"beam_width"}, {"top_p"}):
            raise ValueError(
                f"backend {self.model_id!r}: decoding must set exactly one of "
                f"beam_width or top_p, got {sorted(keys)}"
            )
        if "beam_width" in keys and self.decoding["beam_width"] < 1:
            raise ValueError(f"backend {self.model_id!r}: beam_width must be >= 1")
        if "top_p" in keys and not 0.0 < self.decoding["top_p"] <= 1.0:
            raise ValueError(f"backend {self.model_id!r}: top_p must be in (0, 1]")
        if self.timeout_ms <= 0:
            raise ValueError(f"backend {self.model_id!r}: timeout_ms must be positive")


@dataclass
class ModelPrediction:
    model_id: str
    text: str  # never contains a newline
    inference_time_ms: int
    failed: bool = False

    def to_dict(self) -> dict:
        return {
            "model_id": self.model_id,
            "text": self.text,
            "inference_time_ms": self.inference_time_ms,
            "failed": self.failed,
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "ModelPrediction":
        return cls(
            model_id=obj["model_id"],
            text=obj["text"],
            inference_time_ms=obj["inference_time_ms"],
            failed=obj.get("failed", False),
        )


def truncate_to_line(generated: str) -> str:
    """Keep only the first line of a generation; idempotent."""
    line = generated.split("\n", 1)[0]
    return line[:-1] if line.endswith("\r") else line


def dedup_and_shuffle(
    predictions: list[ModelPrediction], rng_seed: int | None = None
) -> list[ModelPrediction]:
    """Unique, non-empty, successful predictions in uniform random order.

    The first backend to produce a text keeps the attribution when
    several suggest the same thing.  Pass ``rng_seed`` for a
    reproducible order in tests.
    """
    unique: list[ModelPrediction] = []
    seen: set[str] = set()
    for pred in predictions:
        if pred.failed or not pred.text or pred.text in seen:
            continue
        seen.add(pred.text)
        unique.append(pred)
    rng = random.Random(rng_seed) if rng_seed is not None else random
    rng.shuffle(unique)
    return unique


class ModelGateway:
    """Issues completion requests to all backends concurrently.

    Safe to share across request handlers: configuration is read-only
    after construction and the HTTP client is thread-safe.
    """

    def __init__(self, backends: list[BackendConfig], client: httpx.Client | None = None):
        if not backends:
            raise ValueError("at least one backend must be configured")
        self.backends = list(backends)
        self._client = client if client is not None else httpx.Client()

    def request_completions(self, left: str, right: str) -> list[ModelPrediction]:
        """One prediction per backend, in configuration order.

        Wall time is bounded by the slowest backend's timeout, not the
        sum: calls run concurrently.
        """
        with ThreadPoolExecutor(max_workers=len(self.backends)) as pool:
            futures = [
                pool.submit(self._call_backend, cfg, left, right) for cfg in self.backends
            ]
            return [f.result() for f in futures]

    def _call_backend(self, cfg: BackendConfig, left: str, right: str) -> ModelPrediction:
        payload = {
            "left_context": left,
            "right_context": right,
            "max_new_tokens": cfg.max_new_tokens,
            "decoding": cfg.decoding,
        }
        start = time.monotonic()
        try:
            response = self._client.post(
                cfg.endpoint, json=payload, timeout=cfg.timeout_ms / 1000.0
            )
            elapsed_ms = int((time.monotonic() - start) * 1000)
            if response.status_code != 200:
                return ModelPrediction(cfg.model_id, "", elapsed_ms, failed=True)
            text = truncate_to_line(str(response.json()["text"]))
            return ModelPrediction(cfg.model_id, text, elapsed_ms)
        except (httpx.HTTPError, KeyError, ValueError):
            elapsed_ms = int((time.monotonic() - start) * 1000)
            return ModelPrediction(cfg.model_id, "", elapsed_ms, failed=True)

    def probe(self) -> list[tuple[str, bool]]:
        """(model_id, reachable) per backend, via a tiny completion call."""
        results = []
        for cfg in self.backends:
            pred = self._call_backend(
                BackendConfig(
                    model_id=cfg.model_id,
                    endpoint=cfg.endpoint,
                    decoding=cfg.decoding,
                    max_new_tokens=1,
                    timeout_ms=cfg.timeout_ms,
                ),
                "",
                "",
            )
            results.append((cfg.model_id, not pred.failed))
        return results

    def close(self) -> None:
        self._client.close()
