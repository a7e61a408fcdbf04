"""Verdict containers and canonical JSON output."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any

PASS = "pass"
FAIL = "fail"
STRUCTURAL = "structural"
PROBE_LIMITED = "probe-limited"

SIGNIFICANT_DIGITS = 12


@dataclass
class Witness:
    """A concrete tuple on which a checked inequality is violated.

    ``points`` and ``scales`` are the inputs, ``values`` the evaluated
    quantities and ``inequality`` a numeric rendering of what broke.
    ``params`` holds the tolerances in force so the witness can be
    replayed without the report around it.
    """

    check: str
    points: tuple
    scales: tuple = ()
    values: dict = field(default_factory=dict)
    inequality: str = ""
    index: int = -1
    params: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "check": self.check,
            "index": self.index,
            "inequality": self.inequality,
            "params": self.params,
            "points": list(self.points),
            "scales": list(self.scales),
            "values": self.values,
        }


@dataclass
class AxiomEntry:
    status: str = PASS
    checked: int = 0
    skipped: int = 0
    violations: int = 0
    witnesses: list[Witness] = field(default_factory=list)
    note: str = ""

    @property
    def failed(self) -> bool:
        return self.status == FAIL

    def to_dict(self) -> dict:
        return {
            "checked": self.checked,
            "note": self.note,
            "skipped": self.skipped,
            "status": self.status,
            "violations": self.violations,
            "witnesses": [w.to_dict() for w in self.witnesses],
        }


@dataclass
class AxiomReport:
    """Per-check verdicts plus the sampling metadata that produced them."""

    entries: dict[str, AxiomEntry]
    meta: dict = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not any(e.failed for e in self.entries.values())

    @property
    def failed(self) -> list[str]:
        return [name for name, e in self.entries.items() if e.failed]

    def witnesses(self) -> list[Witness]:
        return [w for e in self.entries.values() for w in e.witnesses]

    def __getitem__(self, name: str) -> AxiomEntry:
        return self.entries[name]

    def to_dict(self) -> dict:
        return {
            "entries": {k: v.to_dict() for k, v in self.entries.items()},
            "meta": self.meta,
            "notes": list(self.notes),
            "ok": self.ok,
        }


def canonical(obj: Any) -> Any:
    """Convert ``obj`` into plain JSON types with floats at 12 significant digits.

    Non-finite floats become the strings ``"inf"``, ``"-inf"``, ``"nan"``.
    """
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return obj
    if isinstance(obj, float) or hasattr(obj, "dtype"):
        if hasattr(obj, "dtype") and getattr(obj, "ndim", 0):
            return [canonical(x) for x in obj.tolist()]
        if hasattr(obj, "item"):
            obj = obj.item()
            if isinstance(obj, (bool, int)):
                return obj
        if math.isnan(obj):
            return "nan"
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        return float(format(obj, f".{SIGNIFICANT_DIGITS}g"))
    if hasattr(obj, "to_dict"):
        return canonical(obj.to_dict())
    if isinstance(obj, dict):
        return {str(k): canonical(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = sorted(obj, key=repr) if isinstance(obj, (set, frozenset)) else obj
        return [canonical(x) for x in items]
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(obj: Any) -> str:
    return json.dumps(canonical(obj), sort_keys=True, indent=2, allow_nan=False) + "\n"


def fmt(x: float) -> str:
    return format(x, ".6g")
