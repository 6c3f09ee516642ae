"""Charged oscillator in an axial magnetic field and the Zeeman splitting.

Two routes to the level shifts live here: the closed-form split
E+- = (n + 1/2) hbar w +- [n + j + 1/2] hbar e B / (M c), and the phase
route, where the shift is read off the time derivative of the phase
alpha+- = -+[n + j + 1/2] (e/Mc) int (B/2 - rho^-2) dt along a solution
rho of the auxiliary equation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import cumulative_simpson, cumulative_trapezoid, simpson

from .fields import FieldProfile
from .numerics import Trajectory
from .params import Chirality, CoState, PhysicalParams

_DEFAULT = PhysicalParams()


@dataclass(frozen=True)
class QuantumNumbers:
    n: int
    j: int = 0

    def __post_init__(self):
        for name in ("n", "j"):
            v = getattr(self, name)
            if isinstance(v, bool) or int(v) != v or v < 0:
                raise ValueError(f"{name} must be a non-negative integer, got {v!r}")
            object.__setattr__(self, name, int(v))

    @property
    def multiplier(self) -> float:
        """n + (j + 1/2), the factor in front of the phase and the shift."""
        return self.n + self.j + 0.5


def charged_ho_hamiltonian(x, p, B: float, params: PhysicalParams = _DEFAULT) -> float:
    M, w, e, c = params.M, params.omega, params.e, params.c
    r2 = x[0] * x[0] + x[1] * x[1]
    kinetic = (p[0] * p[0] + p[1] * p[1]) / (2.0 * M)
    potential = 0.5 * M * w * w * r2
    paramagnetic = e * B / (2.0 * M * c) * (x[1] * p[0] - x[0] * p[1])
    diamagnetic = e * e * B * B / (8.0 * M * c * c) * r2
    return kinetic + potential + paramagnetic + diamagnetic


def semiclassical_ratio(B: float, params: PhysicalParams = _DEFAULT) -> float:
    """hbar^3 B / (c M^2 e^3); the semiclassical picture needs this << 1."""
    return params.hbar ** 3 * B / (params.c * params.M ** 2 * params.e ** 3)


def bohr_frequency(l: float, params: PhysicalParams = _DEFAULT) -> float:
    """Oscillation frequency M e^4 / l^3 about the effective-potential minimum."""
    if not l > 0:
        raise ValueError("angular momentum l must be positive")
    return params.M * params.e ** 4 / l ** 3


def bohr_radius(params: PhysicalParams = _DEFAULT) -> float:
    return params.hbar ** 2 / (params.M * params.e ** 2)


@dataclass(frozen=True)
class TermMagnitudes:
    potential: float
    paramagnetic: float
    diamagnetic: float

    @property
    def ratio(self) -> float:
        return self.paramagnetic / self.potential


def semiclassical_terms(B: float, params: PhysicalParams = _DEFAULT) -> TermMagnitudes:
    """Term sizes of the charged-oscillator Hamiltonian on the lowest Bohr orbit.

    Uses l = hbar, w = M e^4 / l^3 and x1^2 + x2^2 = r_Bohr^2, and
    x2 p1 - x1 p2 = l for the paramagnetic coupling.
    """
    l = params.hbar
    w = bohr_frequency(l, params)
    r2 = bohr_radius(params) ** 2
    M, e, c = params.M, params.e, params.c
    return TermMagnitudes(
        potential=abs(0.5 * M * w * w * r2),
        paramagnetic=abs(e * B / (2.0 * M * c) * l),
        diamagnetic=abs(e * e * B * B / (8.0 * M * c * c) * r2),
    )


def zeeman_momentum(state: CoState, params: PhysicalParams = _DEFAULT) -> tuple[float, float]:
    """Substitution p1 = -+ w M x2, p2 = +- w M x1 for CO+-."""
    k = state.chirality.sign * params.omega * params.M
    return (-k * state.x2, k * state.x1)


def co_reduced_hamiltonian(state: CoState, B: float, params: PhysicalParams = _DEFAULT) -> float:
    """Charged-oscillator Hamiltonian after the chiral momentum substitution.

    Evaluated by direct substitution into :func:`charged_ho_hamiltonian`,
    which gives M w^2 r^2 -+ (e B w / 2c) r^2 + (e^2 B^2 / 8 M c^2) r^2.
    """
    return charged_ho_hamiltonian(state.xy, zeeman_momentum(state, params), B, params)


def co_reduced_hamiltonian_factored(state: CoState, B: float, params: PhysicalParams = _DEFAULT) -> float:
    """The factored form (M/2) r^2 (1 + e^2 B^2 / 4 M^2 c^2 -+ e B / M c).

    Kept for comparison only; it disagrees with direct substitution unless
    w = 1 and the prefactor is doubled.
    """
    M, e, c = params.M, params.e, params.c
    s = state.chirality.sign
    return 0.5 * M * state.radius2 * (1 + e * e * B * B / (4 * M * M * c * c) - s * e * B / (M * c))


def zeeman_levels(qn: QuantumNumbers, B: float, params: PhysicalParams = _DEFAULT) -> tuple[float, float]:
    """(E+, E-) = (n + 1/2) hbar w +- [n + j + 1/2] hbar e B / (M c)."""
    base = (qn.n + 0.5) * params.hbar * params.omega
    shift = qn.multiplier * params.hbar * params.e * B / (params.M * params.c)
    return base + shift, base - shift


def _inverse_rho2_samples(times, rho_traj: Trajectory | None, inv_rho2):
    if inv_rho2 is None:
        if rho_traj is None:
            raise ValueError("need either rho_traj or inv_rho2")
        rho = rho_traj.component(0)
        if np.any(rho == 0):
            raise ValueError("rho^-2 undefined where rho = 0")
        return rho ** -2.0
    if callable(inv_rho2):
        vals = np.broadcast_to(np.asarray(inv_rho2(times), dtype=float), times.shape)
    else:
        vals = np.broadcast_to(np.asarray(inv_rho2, dtype=float), times.shape)
    if not np.all(np.isfinite(vals)):
        raise ValueError("rho^-2 undefined on the grid")
    return vals


def _phase_grid(rho_traj, t_span, times):
    if rho_traj is not None:
        grid = rho_traj.times
        if t_span is not None:
            t0, t1 = t_span
            if grid[0] > t0 or grid[-1] < t1:
                raise ValueError("rho trajectory does not cover the requested span")
            grid = grid[(grid >= t0) & (grid <= t1)]
        return np.asarray(grid)
    if times is not None:
        return np.asarray(times, dtype=float)
    if t_span is None:
        raise ValueError("need a time grid: rho_traj, times or t_span")
    return np.linspace(t_span[0], t_span[1], 201)


def phase_integrand(field: FieldProfile, times, inv_rho2_values):
    return 0.5 * field(times) - inv_rho2_values


def zeeman_phase(
    qn: QuantumNumbers,
    chirality,
    field: FieldProfile,
    rho_traj: Trajectory | None = None,
    t_span=None,
    params: PhysicalParams = _DEFAULT,
    inv_rho2: float | Callable | None = None,
    times=None,
) -> float:
    """alpha+- = -+[n + j + 1/2](e/Mc) int (B/2 - rho^-2) dt, composite Simpson.

    Pass ``rho_traj`` (first column rho) for a real solution of the
    auxiliary equation, or ``inv_rho2`` as a signed constant or callable to
    use a formal root such as rho^2 = -sqrt(2)/B.
    """
    grid = _phase_grid(rho_traj, t_span, times)
    if grid.size < 2:
        raise ValueError("need at least two grid points")
    sub_traj = rho_traj
    if rho_traj is not None and inv_rho2 is None and grid.size != len(rho_traj):
        mask = np.isin(rho_traj.times, grid)
        sub_traj = Trajectory(rho_traj.times[mask], rho_traj.samples[mask])
    integrand = phase_integrand(field, grid, _inverse_rho2_samples(grid, sub_traj, inv_rho2))
    integral = float(simpson(integrand, x=grid))
    sign = Chirality.parse(chirality).sign
    return -sign * qn.multiplier * params.e / (params.M * params.c) * integral


def zeeman_phase_series(
    qn: QuantumNumbers,
    chirality,
    field: FieldProfile,
    times,
    inv_rho2_values,
    params: PhysicalParams = _DEFAULT,
) -> np.ndarray:
    """Cumulative phase alpha(t) on ``times`` (starting at 0)."""
    t = np.asarray(times, dtype=float)
    integrand = phase_integrand(field, t, np.broadcast_to(np.asarray(inv_rho2_values, float), t.shape))
    if t.size < 3:
        cum = cumulative_trapezoid(integrand, x=t, initial=0.0)
    else:
        cum = cumulative_simpson(integrand, x=t, initial=0.0)
    sign = Chirality.parse(chirality).sign
    return -sign * qn.multiplier * params.e / (params.M * params.c) * cum


def phase_energy_shift(
    qn: QuantumNumbers,
    chirality,
    B: float,
    branch: int = -1,
    params: PhysicalParams = _DEFAULT,
    t_end: float = 10.0,
    n_points: int = 201,
) -> float:
    """Level shift -hbar d(alpha)/dt for constant B on a stationary root.

    ``branch`` selects rho^2 = +-sqrt(2)/B. The phase is integrated
    numerically on [0, t_end] and the slope taken from a least-squares line.
    """
    if B == 0:
        return 0.0
    inv_rho2 = B / (branch * math.sqrt(2.0))
    t = np.linspace(0.0, t_end, n_points)
    alpha = zeeman_phase_series(qn, chirality, FieldProfile.constant(B), t, inv_rho2, params)
    slope = np.polyfit(t, alpha, 1)[0]
    return -params.hbar * float(slope)


def phase_route_ratio(branch: int = -1) -> float:
    """Shift from the phase route divided by the closed-form shift.

    With rho^-2 = B / (branch sqrt 2) the integrand is B (1/2 - branch/sqrt 2),
    so the ratio is 1/2 + 1/sqrt 2 on the negative branch and
    1/2 - 1/sqrt 2 on the positive one.
    """
    return 0.5 - branch / math.sqrt(2.0)
