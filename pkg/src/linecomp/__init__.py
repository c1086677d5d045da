"""linecomp: line-completion serving, telemetry, benchmarks, and evaluation.

The package is organized around the lifecycle of a completion:

- :mod:`linecomp.triggers` decides where a completion request fires,
- :mod:`linecomp.gateway` fans the context out to model backends,
- :mod:`linecomp.service` exposes the HTTP API and persists telemetry via
  :mod:`linecomp.store`,
- :mod:`linecomp.benchmark` builds offline masked test sets,
- :mod:`linecomp.metrics` and :mod:`linecomp.analysis` score predictions
  and aggregate reports.
"""

from linecomp.triggers import detect_trigger, is_mid_token, trigger_vocabulary
from linecomp.tokenizer import tokenize
from linecomp.metrics import (
    RougeScore,
    acceptance_rate,
    bleu4,
    edit_similarity,
    exact_match,
    meteor,
    rouge_l,
)

__version__ = "0.1.0"

__all__ = [
    "RougeScore",
    "acceptance_rate",
    "bleu4",
    "detect_trigger",
    "edit_similarity",
    "exact_match",
    "is_mid_token",
    "meteor",
    "rouge_l",
    "tokenize",
    "trigger_vocabulary",
]
