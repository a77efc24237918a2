"""Result records shared across modules and their JSON form.

Library code works with 0-based indices; records handed to the outside world
(witness dicts, JSON lines, CSV) carry 1-based index lists.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any, Iterable, Literal

import numpy as np

Exactness = Literal["exact", "lower_bound"]


def one_based(indices: Iterable[int]) -> list[int]:
    return [int(i) + 1 for i in indices]


def zero_based(indices: Iterable[int]) -> tuple[int, ...]:
    return tuple(int(i) - 1 for i in indices)


def jsonable(value: Any) -> Any:
    """Convert numpy scalars/arrays, tuples and non-finite floats into JSON-safe values."""
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [jsonable(v) for v in value.tolist()]
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating, float)):
        value = float(value)
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        if math.isnan(value):
            return "nan"
        return value
    if isinstance(value, (np.bool_,)):
        return bool(value)
    return value


def dumps_record(record: dict[str, Any]) -> str:
    """One JSON line with sorted keys; identical input gives identical text."""
    return json.dumps(jsonable(record), sort_keys=True, separators=(",", ":"))


@dataclass(frozen=True)
class ConstantEstimate:
    kind: str
    value: float
    exactness: Exactness
    witness: dict[str, Any] = field(default_factory=dict)
    budget: dict[str, Any] = field(default_factory=dict)
    seed: int | None = None

    @property
    def is_exact(self) -> bool:
        return self.exactness == "exact"

    def to_record(self) -> dict[str, Any]:
        return {
            "kind": self.kind,
            "value": self.value,
            "exactness": self.exactness,
            "witness": self.witness,
            "budget": self.budget,
            "seed": self.seed,
        }
