"""Physical parameters and oscillator state types."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

# Levi-Civita symbol on the internal plane, eps[0][1] = +1.
EPS = ((0.0, 1.0), (-1.0, 0.0))


class Chirality(enum.IntEnum):
    """Sense of rotation of a chiral oscillator.

    ``PLUS`` rotates counter-clockwise (x1' = -w x2, x2' = +w x1),
    ``MINUS`` clockwise. The integer value is the sign used in formulas.
    """

    PLUS = 1
    MINUS = -1

    @property
    def sign(self) -> int:
        return int(self)

    @property
    def flipped(self) -> "Chirality":
        return Chirality(-int(self))

    @classmethod
    def parse(cls, value) -> "Chirality":
        if isinstance(value, Chirality):
            return value
        text = str(value).strip().lower()
        if text in ("+", "+1", "1", "plus", "left"):
            return cls.PLUS
        if text in ("-", "-1", "minus", "right"):
            return cls.MINUS
        raise ValueError(f"unknown chirality {value!r}")


@dataclass(frozen=True)
class PhysicalParams:
    """Mass, frequency, charge, light speed and reduced Planck constant."""

    M: float = 1.0
    omega: float = 1.0
    e: float = 1.0
    c: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        for name in ("M", "omega", "c", "hbar"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be positive and finite, got {value}")
        if not math.isfinite(self.e):
            raise ValueError(f"e must be finite, got {self.e}")

    @property
    def larmor_per_field(self) -> float:
        """e/(2Mc): Larmor frequency per unit field."""
        return self.e / (2.0 * self.M * self.c)

    def is_unit_normalized(self) -> bool:
        return self.M == 1.0 and self.omega == 1.0


@dataclass(frozen=True)
class CoState:
    """Configuration (x1, x2) of a chiral oscillator with its chirality."""

    x1: float
    x2: float
    chirality: Chirality = Chirality.PLUS

    def __post_init__(self):
        if not (math.isfinite(self.x1) and math.isfinite(self.x2)):
            raise ValueError("CoState components must be finite")
        object.__setattr__(self, "chirality", Chirality.parse(self.chirality))

    @property
    def xy(self) -> tuple[float, float]:
        return (self.x1, self.x2)

    @property
    def radius2(self) -> float:
        return self.x1 * self.x1 + self.x2 * self.x2

    def with_coords(self, x1: float, x2: float) -> "CoState":
        return CoState(x1, x2, self.chirality)


@dataclass(frozen=True)
class HoState:
    """One-dimensional oscillator phase-space point."""

    x: float
    p: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.p)):
            raise ValueError("HoState components must be finite")


def eps_contract(a, b) -> float:
    """eps_{ab} a_a b_b = a1 b2 - a2 b1."""
    return a[0] * b[1] - a[1] * b[0]


def eps_apply(v) -> tuple[float, float]:
    """(eps v)_a = eps_{ab} v_b = (v2, -v1)."""
    return (v[1], -v[0])
