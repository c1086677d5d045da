"""HTTP completion service.

Endpoints (JSON in, JSON out):

- ``POST /api/v1/completion``  validate, rate-limit, fan out to the model
  backends, shuffle the unique suggestions, persist telemetry, and
  return ``{request_id, suggestions}``.
- ``POST /api/v1/feedback``    attach the user's selection and the
  ground-truth line to a stored record.
- ``GET /health``              liveness plus per-backend reachability.

Contexts are persisted verbatim only when the request opts in with
``store_context``; otherwise only their character lengths are kept.
With smart invocation enabled, automatic requests arriving mid-token
are answered with an empty suggestion list and flagged in telemetry.
"""

from __future__ import annotations

import math
import uuid
from datetime import datetime, timezone

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from starlette.concurrency import run_in_threadpool

from linecomp.config import ServiceConfig
from linecomp.gateway import ModelGateway, dedup_and_shuffle
from linecomp.ratelimit import SlidingWindowRateLimiter
from linecomp.store import TelemetryRecord, TelemetryStore, UnknownRequestId
from linecomp.triggers import detect_trigger, is_mid_token

_IDES = {"intellij-like", "vscode-like", "other"}
_TRIGGER_KINDS = {"auto", "manual"}

_REQUIRED_COMPLETION_FIELDS = (
    "user_token",
    "ide",
    "plugin_version",
    "language",
    "left_context",
    "right_context",
    "trigger_kind",
    "store_context",
)
_STRING_FIELDS = (
    "user_token",
    "ide",
    "plugin_version",
    "language",
    "left_context",
    "right_context",
    "trigger_kind",
)


def _bad_request(message: str, field: str | None) -> JSONResponse:
    return JSONResponse({"error": message, "field": field}, status_code=400)


def _validate_completion_body(body: object) -> JSONResponse | None:
    if not isinstance(body, dict):
        return _bad_request("request body must be a JSON object", None)
    for name in _REQUIRED_COMPLETION_FIELDS:
        if name not in body or body[name] is None:
            return _bad_request("missing required field", name)
    for name in _STRING_FIELDS:
        if not isinstance(body[name], str):
            return _bad_request("field must be a string", name)
    if not body["user_token"]:
        return _bad_request("user_token must be non-empty", "user_token")
    if body["trigger_kind"] not in _TRIGGER_KINDS:
        return _bad_request('trigger_kind must be "auto" or "manual"', "trigger_kind")
    if not isinstance(body["store_context"], bool):
        return _bad_request("store_context must be a boolean", "store_context")
    return None


def create_app(
    config: ServiceConfig,
    *,
    gateway: ModelGateway | None = None,
    store: TelemetryStore | None = None,
    limiter: SlidingWindowRateLimiter | None = None,
) -> FastAPI:
    """Build the service; collaborators are injectable for tests."""
    gateway = gateway if gateway is not None else ModelGateway(config.backends)
    store = store if store is not None else TelemetryStore(config.telemetry_path)
    limiter = (
        limiter
        if limiter is not None
        else SlidingWindowRateLimiter(config.rate_limit.limit, config.rate_limit.window_s)
    )

    app = FastAPI(title="linecomp completion service")
    app.state.config = config
    app.state.gateway = gateway
    app.state.store = store
    app.state.limiter = limiter

    @app.post("/api/v1/completion")
    async def completion(request: Request):
        try:
            body = await request.json()
        except Exception:
            return _bad_request("request body is not valid JSON", None)
        error = _validate_completion_body(body)
        if error is not None:
            return error

        decision = limiter.check(body["user_token"])
        if not decision.admitted:
            return JSONResponse(
                {"retry_after_s": decision.retry_after_s},
                status_code=429,
                headers={"Retry-After": str(math.ceil(decision.retry_after_s))},
            )

        left = body["left_context"]
        right = body["right_context"]
        trigger_kind = body["trigger_kind"]
        store_context = body["store_context"]
        ide = body["ide"] if body["ide"] in _IDES else "other"

        # The trigger is re-derived server-side; the client is not trusted.
        match = detect_trigger(left)
        suppressed = (
            config.smart_invocation and trigger_kind == "auto" and is_mid_token(left)
        )
        if suppressed:
            predictions = []
        else:
            predictions = await run_in_threadpool(gateway.request_completions, left, right)
        suggestions = dedup_and_shuffle(predictions)

        request_id = uuid.uuid4().hex
        record = TelemetryRecord(
            request_id=request_id,
            server_timestamp=datetime.now(timezone.utc).isoformat(),
            language=body["language"],
            trigger_kind=trigger_kind,
            ide=ide,
            plugin_version=body["plugin_version"],
            detected_trigger=match.token.text if match else None,
            predictions=tuple(predictions),
            left_len_chars=len(left),
            right_len_chars=len(right),
            cursor_line_prefix=left.rsplit("\n", 1)[-1],
            left_context=left if store_context else None,
            right_context=right if store_context else None,
            suppressed=suppressed,
        )
        store.append(record)
        return {
            "request_id": request_id,
            "suggestions": [{"text": p.text, "model_id": p.model_id} for p in suggestions],
        }

    @app.post("/api/v1/feedback")
    async def feedback(request: Request):
        try:
            body = await request.json()
        except Exception:
            return _bad_request("request body is not valid JSON", None)
        if not isinstance(body, dict):
            return _bad_request("request body must be a JSON object", None)
        for name in ("request_id", "ground_truth_line"):
            if name not in body or body[name] is None:
                return _bad_request("missing required field", name)
        chosen = body.get("chosen_text")
        try:
            store.apply_feedback(body["request_id"], chosen, body["ground_truth_line"])
        except UnknownRequestId:
            return JSONResponse({}, status_code=404)
        return {}

    @app.get("/health")
    async def health():
        probes = await run_in_threadpool(gateway.probe)
        return {
            "status": "ok",
            "backends": [{"model_id": mid, "reachable": ok} for mid, ok in probes],
        }

    return app
