"""Service configuration from a JSON file with environment overrides.

Recognized environment variables:

- ``LINECOMP_BACKENDS``          JSON array of backend objects
- ``LINECOMP_RATE_LIMIT``        admissions per window per user
- ``LINECOMP_RATE_WINDOW_S``     window length in seconds
- ``LINECOMP_SMART_INVOCATION``  "1"/"true" to suppress mid-token auto calls
- ``LINECOMP_TELEMETRY_PATH``    journal file location
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

from linecomp.gateway import (
    DEFAULT_MAX_NEW_TOKENS,
    DEFAULT_TIMEOUT_MS,
    BackendConfig,
)
from linecomp.ratelimit import DEFAULT_LIMIT, DEFAULT_WINDOW_S

_TRUE_STRINGS = {"1", "true", "yes", "on"}


@dataclass
class RateLimitConfig:
    limit: int = DEFAULT_LIMIT
    window_s: float = DEFAULT_WINDOW_S


@dataclass
class ServiceConfig:
    backends: list[BackendConfig] = field(default_factory=list)
    rate_limit: RateLimitConfig = field(default_factory=RateLimitConfig)
    smart_invocation: bool = False
    telemetry_path: str = "telemetry.jsonl"


def parse_backend(obj: dict) -> BackendConfig:
    return BackendConfig(
        model_id=obj["model_id"],
        endpoint=obj["endpoint"],
        decoding=obj["decoding"],
        max_new_tokens=obj.get("max_new_tokens", DEFAULT_MAX_NEW_TOKENS),
        timeout_ms=obj.get("timeout_ms", DEFAULT_TIMEOUT_MS),
    )


def _parse_bool(value: object) -> bool:
    if isinstance(value, bool):
        return value
    return str(value).strip().lower() in _TRUE_STRINGS


def load_config(
    path: str | Path | None = None, env: Mapping[str, str] | None = None
) -> ServiceConfig:
    env = os.environ if env is None else env
    data: dict = {}
    if path is not None:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)

    backends_data = data.get("backends", [])
    if "LINECOMP_BACKENDS" in env:
        backends_data = json.loads(env["LINECOMP_BACKENDS"])
    backends = [parse_backend(b) for b in backends_data]

    rate_data = data.get("rate_limit", {})
    limit = int(env.get("LINECOMP_RATE_LIMIT", rate_data.get("limit", DEFAULT_LIMIT)))
    window_s = float(
        env.get("LINECOMP_RATE_WINDOW_S", rate_data.get("window_s", DEFAULT_WINDOW_S))
    )

    smart = _parse_bool(
        env.get("LINECOMP_SMART_INVOCATION", data.get("smart_invocation", False))
    )
    telemetry_path = env.get(
        "LINECOMP_TELEMETRY_PATH", data.get("telemetry_path", "telemetry.jsonl")
    )
    return ServiceConfig(
        backends=backends,
        rate_limit=RateLimitConfig(limit=limit, window_s=window_s),
        smart_invocation=smart,
        telemetry_path=telemetry_path,
    )
