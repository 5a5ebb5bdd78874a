"""Structured reports for witness constructions."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from .heyting import HAlg, algebra_to_json
from .poset import canonical_form


@dataclass
class WitnessReport:
    """Named stages, their algebras, boolean verdicts and canonical codes."""

    name: str
    stages: dict[str, HAlg] = field(default_factory=dict)
    verdicts: dict[str, bool] = field(default_factory=dict)
    data: dict[str, Any] = field(default_factory=dict)

    def stage(self, key: str, h: HAlg) -> HAlg:
        self.stages[key] = h
        return h

    @property
    def codes(self) -> dict[str, str]:
        return {k: canonical_form(h.dual).decode() for k, h in self.stages.items()}

    @property
    def ok(self) -> bool:
        return all(self.verdicts.values())

    def to_json(self) -> dict:
        return {
            "witness": self.name,
            "ok": self.ok,
            "verdicts": dict(self.verdicts),
            "stages": {k: algebra_to_json(h) for k, h in self.stages.items()},
            "codes": self.codes,
            "data": self.data,
        }
