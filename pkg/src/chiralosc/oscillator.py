"""Harmonic and chiral oscillator models.

Sign conventions: eps_12 = +1. A ``Chirality.PLUS`` oscillator obeys
x1' = -w x2, x2' = +w x1 (counter-clockwise), which follows from the
bracket {x1, x2}_+ = -1/(wM) and H = (M w^2 / 2)(x1^2 + x2^2).
"""

from __future__ import annotations

import math

import numpy as np

from .params import Chirality, CoState, PhysicalParams, eps_contract

_DEFAULT = PhysicalParams()


def ho_lagrangian(x, xdot, params: PhysicalParams = _DEFAULT):
    return 0.5 * params.M * (xdot * xdot - params.omega ** 2 * x * x)


def first_order_lagrangian(x, xdot, lam, lamdot, params: PhysicalParams = _DEFAULT):
    """Symmetrised first-order form with auxiliary variable ``lam``."""
    return 0.5 * params.M * (lam * xdot - x * lamdot - lam * lam - params.omega ** 2 * x * x)


def relabel_matrix(angle: float, kind: str = "proper") -> np.ndarray:
    """Matrix mapping (x1, x2) to (x, lam/w).

    ``proper`` is the rotation [[cos, sin], [-sin, cos]] (det +1),
    ``improper`` the reflection [[sin, cos], [cos, -sin]] (det -1).
    """
    c, s = math.cos(angle), math.sin(angle)
    if kind == "proper":
        return np.array([[c, s], [-s, c]])
    if kind == "improper":
        return np.array([[s, c], [c, -s]])
    raise ValueError(f"kind must be 'proper' or 'improper', got {kind!r}")


def decompose_ho(x, lam, angle: float, kind: str = "proper", params: PhysicalParams = _DEFAULT):
    """Return (x1, x2) whose image under :func:`relabel_matrix` is (x, lam/w)."""
    R = relabel_matrix(angle, kind)
    # both matrices are orthogonal, so the inverse is the transpose
    x1, x2 = R.T @ np.array([x, lam / params.omega], dtype=float)
    return float(x1), float(x2)


def compose_ho(x1, x2, angle: float, kind: str = "proper", params: PhysicalParams = _DEFAULT):
    """Inverse of :func:`decompose_ho`: returns (x, lam)."""
    x, lam_over_w = relabel_matrix(angle, kind) @ np.array([x1, x2], dtype=float)
    return float(x), float(lam_over_w * params.omega)


def co_lagrangian(state: CoState, xdot, params: PhysicalParams = _DEFAULT) -> float:
    """(M/2)(+-w eps_ab x_a x'_b - w^2 x_a x_a)."""
    w = params.omega
    kinetic = state.chirality.sign * w * eps_contract(state.xy, xdot)
    return 0.5 * params.M * (kinetic - w * w * state.radius2)


def co_bracket(alpha: int, beta: int, chirality=Chirality.PLUS, params: PhysicalParams = _DEFAULT) -> float:
    """Poisson bracket {x_alpha, x_beta} = -+ eps_{alpha beta} / (w M)."""
    if alpha not in (1, 2) or beta not in (1, 2):
        raise ValueError("indices must be 1 or 2")
    eps = 0.0 if alpha == beta else (1.0 if alpha == 1 else -1.0)
    return -Chirality.parse(chirality).sign * eps / (params.omega * params.M)


def co_hamiltonian(state: CoState, params: PhysicalParams = _DEFAULT) -> float:
    return 0.5 * params.M * params.omega ** 2 * state.radius2


def co_velocity(state: CoState, params: PhysicalParams = _DEFAULT) -> tuple[float, float]:
    """Bracket-generated velocity x'_a = {x_a, H} = -+ w eps_ab x_b."""
    s = state.chirality.sign * params.omega
    return (-s * state.x2, s * state.x1)


def co_vector_field(chirality, params: PhysicalParams = _DEFAULT):
    """``rhs(t, y)`` built from the bracket and Hamiltonian, for integrators."""
    chir = Chirality.parse(chirality)
    H_grad = params.M * params.omega ** 2
    b12 = co_bracket(1, 2, chir, params)

    def rhs(t, y):
        # x'_a = {x_a, x_b} dH/dx_b
        return np.array([b12 * H_grad * y[1], -b12 * H_grad * y[0]])

    return rhs


def rotate(x1, x2, angle):
    c, s = np.cos(angle), np.sin(angle)
    return c * x1 - s * x2, s * x1 + c * x2


def co_evolve(state0: CoState, t: float, params: PhysicalParams = _DEFAULT) -> CoState:
    """Analytic evolution: rotation by +w t (PLUS) or -w t (MINUS)."""
    x1, x2 = rotate(state0.x1, state0.x2, state0.chirality.sign * params.omega * t)
    return state0.with_coords(float(x1), float(x2))


def co_evolve_series(state0: CoState, times, params: PhysicalParams = _DEFAULT) -> np.ndarray:
    """Analytic states at each of ``times`` as an (n, 2) array."""
    angle = state0.chirality.sign * params.omega * np.asarray(times, dtype=float)
    x1, x2 = rotate(state0.x1, state0.x2, angle)
    return np.column_stack([x1, x2])


def co_canonical_momentum(state: CoState, params: PhysicalParams = _DEFAULT) -> tuple[float, float]:
    """p_b = dL/dx'_b = +-(M w / 2) eps_ab x_a.

    This is the momentum of the first-order Lagrangian and carries the
    factor 1/2. The Zeeman substitution rule (no 1/2) lives in
    :func:`chiralosc.zeeman.zeeman_momentum`.
    """
    k = state.chirality.sign * 0.5 * params.M * params.omega
    return (-k * state.x2, k * state.x1)


def angular_momentum(state: CoState, params: PhysicalParams = _DEFAULT) -> float:
    """J = eps_ab x_a p_b with the canonical CO momentum; w J = +-H."""
    return eps_contract(state.xy, co_canonical_momentum(state, params))
