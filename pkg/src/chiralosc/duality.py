"""Electric-magnetic duality analogue of the oscillator.

With M = w = 1 the variables E = x', B = x turn the oscillator into
L = (E^2 - B^2)/2 with equation of motion E' + B = 0 and the identity
B' - E = 0. The discrete duality maps are the SO(2) rotations by +-pi/2
of the pair (E, B); they exchange the two equations but flip the sign of
the Lagrangian. The chiral oscillator is instead invariant under the
continuous rotation generated by Q = x_a x_a / 2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .numerics import Trajectory
from .oscillator import rotate
from .params import Chirality, CoState, PhysicalParams

_UNIT = PhysicalParams()


def _require_unit(params: PhysicalParams | None):
    if params is not None and not params.is_unit_normalized():
        raise ValueError("the E/B sector is defined for M = omega = 1 only")


@dataclass(frozen=True)
class EbState:
    E: float
    B: float


def to_eb(x, xdot, params: PhysicalParams | None = None) -> EbState:
    _require_unit(params)
    return EbState(E=xdot, B=x)


def eb_trajectory(times, x, xdot, params: PhysicalParams | None = None) -> Trajectory:
    """Trajectory with columns (E, B) built from samples of x and x'."""
    _require_unit(params)
    return Trajectory(times, np.column_stack([xdot, x]), {"producer": "to_eb", "columns": ("E", "B")})


def eb_lagrangian(eb: EbState) -> float:
    return 0.5 * (eb.E * eb.E - eb.B * eb.B)


def _derivative(traj: Trajectory, col: int) -> np.ndarray:
    if len(traj) < 3:
        raise ValueError("need at least 3 samples for central differences")
    return np.gradient(traj.samples[:, col], traj.times, edge_order=2)


def eom_residual(eb_traj: Trajectory) -> np.ndarray:
    """E' + B per sample (second-order finite differences)."""
    return _derivative(eb_traj, 0) + eb_traj.samples[:, 1]


def bianchi_residual(eb_traj: Trajectory) -> np.ndarray:
    """B' - E per sample."""
    return _derivative(eb_traj, 1) - eb_traj.samples[:, 0]


def discrete_swap(eb: EbState, sign: int = +1) -> EbState:
    """Rotation of (E, B) by sign * pi/2: E -> -sign B, B -> sign E."""
    if sign not in (+1, -1):
        raise ValueError("sign must be +1 or -1")
    return EbState(E=-sign * eb.B, B=sign * eb.E)


def swap_trajectory(eb_traj: Trajectory, sign: int = +1) -> Trajectory:
    E, B = eb_traj.samples[:, 0], eb_traj.samples[:, 1]
    return Trajectory(eb_traj.times, np.column_stack([-sign * B, sign * E]), dict(eb_traj.meta))


def generator_q(state: CoState) -> float:
    """Q = x_a x_a / 2."""
    return 0.5 * state.radius2


def generator_flow(state: CoState, theta: float, params: PhysicalParams = _UNIT) -> CoState:
    """Flow of dx_a/dtheta = {x_a, Q} under the chirality's own bracket.

    {x1, Q} = -+x2/(wM), {x2, Q} = +-x1/(wM): a rotation by +-theta/(wM).
    """
    angle = state.chirality.sign * theta / (params.omega * params.M)
    x1, x2 = rotate(state.x1, state.x2, angle)
    return state.with_coords(float(x1), float(x2))


def duality_rotate(state: CoState, theta: float) -> CoState:
    """R+(theta) acting on (x1, x2), defined as the Q-flow with M = w = 1."""
    return generator_flow(state, theta, _UNIT)


def rotate_velocity(xdot, theta: float, chirality) -> tuple[float, float]:
    """Rotate a velocity by the same duality rotation as the coordinates."""
    x1, x2 = rotate(xdot[0], xdot[1], Chirality.parse(chirality).sign * theta)
    return float(x1), float(x2)
