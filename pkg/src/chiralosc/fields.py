"""Magnetic field profiles B(t)."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np
from scipy.interpolate import PchipInterpolator


class FieldProfileError(ValueError):
    """Raised for malformed tables or evaluation outside the defined span."""


@dataclass(frozen=True)
class FieldProfile:
    """Field strength as a function of time.

    Use the ``constant``, ``closed_form`` and ``tabulated`` constructors
    rather than building instances directly.
    """

    kind: str
    func: Callable = field(repr=False)
    span: tuple[float, float] = (-math.inf, math.inf)
    value: float | None = None

    @classmethod
    def constant(cls, B: float) -> "FieldProfile":
        B = float(B)
        if not math.isfinite(B):
            raise FieldProfileError("constant field must be finite")
        return cls("constant", lambda t: np.full_like(np.asarray(t, float), B), value=B)

    @classmethod
    def closed_form(cls, func: Callable, span=(-math.inf, math.inf)) -> "FieldProfile":
        return cls("closed-form", func, span=(float(span[0]), float(span[1])))

    @classmethod
    def tabulated(cls, times, values) -> "FieldProfile":
        """Monotone cubic (PCHIP) interpolation through ``(times, values)``."""
        t = np.asarray(times, dtype=float)
        b = np.asarray(values, dtype=float)
        if t.ndim != 1 or t.shape != b.shape or t.size < 2:
            raise FieldProfileError("need at least two (t, B) samples of equal length")
        if not (np.all(np.isfinite(t)) and np.all(np.isfinite(b))):
            raise FieldProfileError("field table contains non-finite values")
        if np.any(np.diff(t) <= 0):
            raise FieldProfileError("field table times must be strictly increasing")
        interp = PchipInterpolator(t, b, extrapolate=False)
        return cls("tabulated", interp, span=(float(t[0]), float(t[-1])))

    @classmethod
    def from_csv(cls, path) -> "FieldProfile":
        """Read a two-column ``t,B`` CSV with a header line."""
        path = Path(path)
        with path.open(newline="") as fh:
            reader = csv.reader(fh)
            try:
                header = [h.strip() for h in next(reader)]
            except StopIteration:
                raise FieldProfileError(f"{path}: empty field table") from None
            if header != ["t", "B"]:
                raise FieldProfileError(f"{path}: expected header 't,B', got {','.join(header)}")
            rows = []
            for lineno, row in enumerate(reader, start=2):
                if not row or all(not cell.strip() for cell in row):
                    continue
                if len(row) != 2:
                    raise FieldProfileError(f"{path}:{lineno}: expected 2 columns")
                try:
                    rows.append((float(row[0]), float(row[1])))
                except ValueError:
                    raise FieldProfileError(f"{path}:{lineno}: bad number") from None
        if not rows:
            raise FieldProfileError(f"{path}: no data rows")
        t, b = zip(*rows)
        return cls.tabulated(t, b)

    def covers(self, t0: float, t1: float) -> bool:
        return self.span[0] <= t0 and t1 <= self.span[1]

    def __call__(self, t):
        scalar = np.ndim(t) == 0
        t_arr = np.asarray(t, dtype=float)
        out = np.broadcast_to(np.asarray(self.func(t_arr), dtype=float), t_arr.shape)
        if not np.all(np.isfinite(out)):
            raise FieldProfileError(f"field undefined at t={t!r} (span {self.span})")
        return float(out) if scalar else out
