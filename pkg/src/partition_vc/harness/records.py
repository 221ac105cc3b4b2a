"""Result records and seed derivation."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any


def derive_seed(master: int, task_id: str) -> int:
    """Per-task seed: first 8 bytes (big-endian) of sha256 of ``"{master}:{task_id}"``."""
    digest = hashlib.sha256(f"{master}:{task_id}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


def to_plain(x: Any) -> Any:
    """JSON-ready copy; Fractions become ``{"num", "den"}``."""
    if isinstance(x, Fraction):
        return {"num": x.numerator, "den": x.denominator}
    if hasattr(x, "to_json"):
        return x.to_json()
    if isinstance(x, dict):
        return {str(k): to_plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_plain(v) for v in x]
    if isinstance(x, (set, frozenset)):
        return sorted(to_plain(v) for v in x)
    return x


def dumps(obj: Any) -> str:
    return json.dumps(to_plain(obj), indent=2, sort_keys=True) + "\n"


@dataclass
class ResultRecord:
    experiment: str
    invariant: str
    parameters: dict
    measured: dict = field(default_factory=dict)
    passed: bool = True
    witness: dict | None = None
    wall_time: float | None = None

    def fail(self, witness: dict) -> None:
        # keep the first failing instance only
        if self.passed:
            self.passed = False
            self.witness = witness

    def to_json(self) -> dict:
        out = {
            "experiment": self.experiment,
            "invariant": self.invariant,
            "parameters": to_plain(self.parameters),
            "measured": to_plain(self.measured),
            "passed": self.passed,
        }
        if self.witness is not None:
            out["witness"] = to_plain(self.witness)
        if self.wall_time is not None:
            out["wall_time"] = self.wall_time
        return out
