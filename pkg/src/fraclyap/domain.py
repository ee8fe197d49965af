"""Validated parameter types: fractional orders and the problem interval."""

from __future__ import annotations

import math
from dataclasses import dataclass

from fraclyap.errors import DomainError


def check_order(p: float) -> float:
    """Return ``p`` as a float after checking ``0 < p <= 1``."""
    p = float(p)
    if not (0.0 < p <= 1.0):
        raise DomainError(f"fractional order must satisfy 0 < p <= 1, got {p!r}")
    return p


@dataclass(frozen=True)
class FracOrders:
    """Orders of the right Caputo (``alpha``) and left RL (``beta``) derivatives."""

    alpha: float
    beta: float

    def __post_init__(self):
        for name in ("alpha", "beta"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and 0.0 < v <= 1.0):
                raise DomainError(f"{name} must satisfy 0 < {name} <= 1, got {v!r}")
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "beta", float(self.beta))
        if not self.alpha + self.beta > 1.0:
            raise DomainError(
                f"alpha+beta must exceed 1, got {self.alpha}+{self.beta}={self.alpha + self.beta:g}"
            )

    @property
    def total(self) -> float:
        """``alpha + beta``."""
        return self.alpha + self.beta


@dataclass(frozen=True)
class Interval:
    a: float
    b: float

    def __post_init__(self):
        a, b = float(self.a), float(self.b)
        if not (math.isfinite(a) and math.isfinite(b)):
            raise DomainError(f"interval endpoints must be finite, got [{a}, {b}]")
        if not a < b:
            raise DomainError(f"interval needs a < b, got [{a}, {b}]")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def length(self) -> float:
        return self.b - self.a

    def contains(self, x: float) -> bool:
        return self.a <= x <= self.b
