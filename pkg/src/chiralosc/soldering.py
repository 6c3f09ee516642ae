"""Soldering of a left and a right chiral oscillator into a 2-D oscillator.

Two independent chiral Lagrangians L+(x) and L-(y) are fused through an
auxiliary field B_a. Under the shift x -> x + eta, y -> y + eta each
chiral Lagrangian changes (up to a total derivative) by

    dL+- = M w eps_ab eta_a J+-_b(z),   J+-_b(z) = +-z'_b + w eps_bc z_c,

and the combination J+(x) + J-(y) is what B_a couples to. The Lagrangian
used here is

    L = L+(x) + L-(y) - M w B_a (J+_a(x) + J-_a(y)) - M w^2 B_a B_a
        - (M w / 2) d/dt (eps_ab x_a y_b),

which is exactly invariant under x, y -> x + eta, y + eta together with
B_a -> B_a - eps_ab eta_b (eta may depend on time). Eliminating B_a gives
(M/4)(w'^2 - w^2 w^2) with w = x - y, with no remainder.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .numerics import Trajectory
from .oscillator import co_lagrangian
from .params import Chirality, CoState, PhysicalParams, eps_apply, eps_contract

_DEFAULT = PhysicalParams()


class GridMismatch(ValueError):
    pass


def _vec(v) -> np.ndarray:
    return np.asarray(v, dtype=float).reshape(2)


def noether_current(z: CoState, zdot, params: PhysicalParams = _DEFAULT) -> np.ndarray:
    """J_b = +-z'_b + w eps_bc z_c; vanishes on the chiral equations of motion."""
    zd = _vec(zdot)
    return z.chirality.sign * zd + params.omega * np.array(eps_apply(z.xy))


def gauge_variation(z: CoState, zdot, eta, params: PhysicalParams = _DEFAULT) -> float:
    """First-order change M w eps_ab eta_a J_b of L+-(z) under z -> z + eta.

    Equal to the literal first-order variation of :func:`co_lagrangian`
    minus the total derivative +-(M w / 2) d/dt(eps_ab z_a eta_b).
    """
    return params.M * params.omega * eps_contract(_vec(eta), noether_current(z, zdot, params))


def variation_boundary_rate(z: CoState, zdot, eta, etadot, params: PhysicalParams = _DEFAULT) -> float:
    """d/dt of +-(M w / 2) eps_ab z_a eta_b, the total derivative dropped above."""
    k = 0.5 * z.chirality.sign * params.M * params.omega
    return k * (eps_contract(_vec(zdot), _vec(eta)) + eps_contract(z.xy, _vec(etadot)))


def _require_pair(x: CoState, y: CoState):
    if x.chirality is not Chirality.PLUS or y.chirality is not Chirality.MINUS:
        raise ValueError("soldering needs x with chirality + and y with chirality -")


def solder_constraint(x: CoState, y: CoState, xdot, ydot, params: PhysicalParams = _DEFAULT) -> np.ndarray:
    """x'_a + w eps_ab x_b - y'_a + w eps_ab y_b."""
    return noether_current(x, xdot, params) + noether_current(y, ydot, params)


def cross_boundary_rate(x: CoState, y: CoState, xdot, ydot, params: PhysicalParams = _DEFAULT) -> float:
    """d/dt of (M w / 2) eps_ab x_a y_b."""
    k = 0.5 * params.M * params.omega
    return k * (eps_contract(_vec(xdot), y.xy) + eps_contract(x.xy, _vec(ydot)))


def soldered_lagrangian(x: CoState, y: CoState, xdot, ydot, baux, params: PhysicalParams = _DEFAULT) -> float:
    _require_pair(x, y)
    B = _vec(baux)
    J = solder_constraint(x, y, xdot, ydot, params)
    Mw = params.M * params.omega
    return (
        co_lagrangian(x, xdot, params)
        + co_lagrangian(y, ydot, params)
        - Mw * float(B @ J)
        - Mw * params.omega * float(B @ B)
        - cross_boundary_rate(x, y, xdot, ydot, params)
    )


def gauge_transform(x: CoState, y: CoState, xdot, ydot, baux, eta, etadot=(0.0, 0.0)):
    """Apply x, y -> x + eta, y + eta and B_a -> B_a - eps_ab eta_b.

    Returns ``(x, y, xdot, ydot, baux)`` after the transformation.
    """
    e = _vec(eta)
    ed = _vec(etadot)
    x2 = x.with_coords(x.x1 + e[0], x.x2 + e[1])
    y2 = y.with_coords(y.x1 + e[0], y.x2 + e[1])
    B2 = _vec(baux) - np.array(eps_apply(e))
    return x2, y2, _vec(xdot) + ed, _vec(ydot) + ed, B2


def eliminate_baux(x: CoState, y: CoState, xdot, ydot, params: PhysicalParams = _DEFAULT) -> np.ndarray:
    """Stationary point B_a = -(J+_a(x) + J-_a(y)) / (2 w)."""
    _require_pair(x, y)
    return -solder_constraint(x, y, xdot, ydot, params) / (2.0 * params.omega)


def soldered_ho_lagrangian(w, wdot, params: PhysicalParams = _DEFAULT) -> float:
    """(M/4)(w'_a w'_a - w^2 w_a w_a): a 2-D oscillator of mass M/2."""
    w = _vec(w)
    wd = _vec(wdot)
    return 0.25 * params.M * (float(wd @ wd) - params.omega ** 2 * float(w @ w))


def reduced_lagrangian(x: CoState, y: CoState, xdot, ydot, params: PhysicalParams = _DEFAULT) -> float:
    """Soldered Lagrangian with B_a replaced by its stationary value."""
    B = eliminate_baux(x, y, xdot, ydot, params)
    return soldered_lagrangian(x, y, xdot, ydot, B, params)


@dataclass(frozen=True)
class SolderPair:
    """CO+ and CO- trajectories sampled on a common grid (columns x1, x2)."""

    x_traj: Trajectory
    y_traj: Trajectory

    def __post_init__(self):
        if not self.x_traj.same_grid(self.y_traj):
            raise GridMismatch("x and y trajectories must share a time grid")
        if self.x_traj.dim != 2 or self.y_traj.dim != 2:
            raise ValueError("trajectories must carry (x1, x2) samples")
        for traj, want in ((self.x_traj, 1), (self.y_traj, -1)):
            tag = traj.meta.get("chirality")
            if tag is not None and int(tag) != want:
                raise ValueError("x must be the + oscillator and y the - oscillator")


def solder(pair: SolderPair) -> Trajectory:
    """w_a(t) = x_a(t) - y_a(t)."""
    w = pair.x_traj.samples - pair.y_traj.samples
    return Trajectory(pair.x_traj.times, w, {"producer": "solder", "soldered_mass_factor": 0.5})


def soldered_energy(w, wdot, params: PhysicalParams = _DEFAULT):
    """(M/4) w'^2 + (M w^2 / 4) w^2, the energy of the soldered oscillator."""
    w = np.asarray(w, dtype=float)
    wd = np.asarray(wdot, dtype=float)
    return 0.25 * params.M * (np.sum(wd * wd, axis=-1) + params.omega ** 2 * np.sum(w * w, axis=-1))
