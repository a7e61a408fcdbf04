"""Simplified neutrosophic numbers (truth, indeterminacy, falsity)."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import UsageError


@dataclass(frozen=True)
class SNN:
    g: float
    b: float
    y: float

    def __post_init__(self):
        for name in ("g", "b", "y"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and 0.0 <= v <= 1.0):
                raise UsageError(f"SNN component {name}={v!r} is outside [0, 1]")
            object.__setattr__(self, name, float(v))

    @classmethod
    def from_list(cls, values) -> "SNN":
        if len(values) != 3:
            raise UsageError(f"an SNN literal has three entries [g, b, y], got {values!r}")
        return cls(*values)

    def to_list(self) -> list[float]:
        return [self.g, self.b, self.y]

    def __iter__(self):
        return iter((self.g, self.b, self.y))


def _psum(x: float, y: float) -> float:
    # x + y - xy, factored so 0 stays the identity and 1 stays absorbing exactly
    return min(1.0, x + y * (1.0 - x))


def snn_add(u: SNN, v: SNN) -> SNN:
    return SNN(_psum(u.g, v.g), _psum(u.b, v.b), _psum(u.y, v.y))


def snn_multiply(u: SNN, v: SNN) -> SNN:
    return SNN(u.g * v.g, u.b * v.b, u.y * v.y)


def _positive(alpha: float) -> float:
    alpha = float(alpha)
    if not (math.isfinite(alpha) and alpha > 0):
        raise UsageError(f"alpha must be a positive real, got {alpha!r}")
    return alpha


def snn_scale(alpha: float, u: SNN) -> SNN:
    a = _positive(alpha)
    return SNN(*(1.0 - (1.0 - x) ** a for x in u))


def snn_power(alpha: float, u: SNN) -> SNN:
    a = _positive(alpha)
    return SNN(*(x ** a for x in u))


def snn_included(u: SNN, v: SNN) -> bool:
    """True iff ``u`` is contained in ``v``: more false and indeterminate, less true."""
    return u.g <= v.g and u.b >= v.b and u.y >= v.y
