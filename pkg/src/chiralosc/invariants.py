"""Classical angle invariants of the chiral and soldered oscillators.

The raw arctangent of the coordinates rotates with the oscillator, so each
invariant carries an explicit -w t companion term that makes it constant
along the motion. Single evaluations use the principal ``atan2`` branch;
the ``*_series`` helpers unwrap along a trajectory so adjacent samples
never jump by 2 pi.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .numerics import Trajectory
from .params import Chirality, CoState, PhysicalParams

_DEFAULT = PhysicalParams()


class DegenerateInvariant(ValueError):
    """The angle is undefined at the phase-space origin."""


@dataclass(frozen=True)
class InvariantSample:
    t: float
    value: float


def _raw_co_angle(x1, x2, chirality: Chirality):
    # I- is I+ with x1 and x2 interchanged
    if chirality is Chirality.PLUS:
        return np.arctan2(x2, x1)
    return np.arctan2(x1, x2)


def co_invariant(state: CoState, t: float, params: PhysicalParams = _DEFAULT) -> float:
    """arctan(x2/x1) - w t for CO+, arctan(x1/x2) - w t for CO-.

    Both raw angles advance at rate +w along their own chiral motion (the
    interchange reverses orientation), so the time term has the same sign
    for both chiralities.
    """
    if state.x1 == 0.0 and state.x2 == 0.0:
        raise DegenerateInvariant("co_invariant undefined at the origin")
    return float(_raw_co_angle(state.x1, state.x2, state.chirality)) - params.omega * t


def co_invariant_series(times, coords, chirality, params: PhysicalParams = _DEFAULT) -> np.ndarray:
    """Branch-tracked invariant along ``coords`` (shape (n, 2))."""
    chir = Chirality.parse(chirality)
    xy = np.asarray(coords, dtype=float)
    if np.any((xy[:, 0] == 0) & (xy[:, 1] == 0)):
        raise DegenerateInvariant("trajectory passes through the origin")
    raw = np.unwrap(_raw_co_angle(xy[:, 0], xy[:, 1], chir))
    return raw - params.omega * np.asarray(times, dtype=float)


def ho_invariant(x, p, t, mass: float | None = None, params: PhysicalParams = _DEFAULT) -> float:
    """arctan(p / (m w x)) + w t; constant along oscillator motion of mass m."""
    m = params.M if mass is None else mass
    if x == 0 and p == 0:
        raise DegenerateInvariant("ho_invariant undefined at the origin")
    return float(np.arctan2(p, m * params.omega * x)) + params.omega * t


def ho_invariant_series(times, x, p, mass: float | None = None, params: PhysicalParams = _DEFAULT) -> np.ndarray:
    m = params.M if mass is None else mass
    x = np.asarray(x, dtype=float)
    p = np.asarray(p, dtype=float)
    if np.any((x == 0) & (p == 0)):
        raise DegenerateInvariant("trajectory passes through the origin")
    return np.unwrap(np.arctan2(p, m * params.omega * x)) + params.omega * np.asarray(times, dtype=float)


def soldered_invariant(x: CoState, y: CoState, xdot, ydot, t, params: PhysicalParams = _DEFAULT):
    """Pair of oscillator invariants of w = x - y with momentum (M/2) w'.

    Each component is :func:`ho_invariant` with mass M/2. A component whose
    (w_a, w'_a) sits at the origin is returned as NaN; if both do, the
    invariant is undefined and :class:`DegenerateInvariant` is raised.
    """
    mass = 0.5 * params.M
    w = (x.x1 - y.x1, x.x2 - y.x2)
    wd = (xdot[0] - ydot[0], xdot[1] - ydot[1])
    out = []
    for wa, wda in zip(w, wd):
        if wa == 0 and wda == 0:
            out.append(float("nan"))
        else:
            out.append(ho_invariant(wa, mass * wda, t, mass, params))
    if all(np.isnan(v) for v in out):
        raise DegenerateInvariant("soldered invariant undefined for w = w' = 0")
    return tuple(out)


def soldered_invariant_series(w_traj: Trajectory, wdot, params: PhysicalParams = _DEFAULT) -> np.ndarray:
    """Both components along a soldered trajectory; shape (n, 2)."""
    mass = 0.5 * params.M
    w = w_traj.samples
    wd = np.asarray(wdot, dtype=float)
    cols = [ho_invariant_series(w_traj.times, w[:, a], mass * wd[:, a], mass, params) for a in range(2)]
    return np.column_stack(cols)


def drift(values) -> float:
    """Largest deviation of a series from its first value."""
    v = np.asarray(values, dtype=float)
    return float(np.max(np.abs(v - v[0])))
