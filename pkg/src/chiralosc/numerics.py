"""ODE integration and the Ermakov auxiliary-equation solver.

The adaptive integrator is the Dormand-Prince 5(4) embedded pair with
local extrapolation; a classical fixed-step RK4 is available for
reference runs. Both land exactly on the end of the span and on any
requested output times.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .fields import FieldProfile, FieldProfileError
from .params import PhysicalParams

RHO_FLOOR = 1e-10
# collapse time rho/|rho'| below this fraction of the span counts as rho -> 0
COLLAPSE_FRACTION = 1e-6
UNDERFLOW_FRACTION = 1e-14


class IntegrationError(RuntimeError):
    """Numerical failure; carries the last good time and partial output."""

    def __init__(self, message: str, t_last: float | None = None, partial=None):
        super().__init__(message)
        self.t_last = t_last
        self.partial = partial


class StepSizeUnderflow(IntegrationError):
    pass


class NonFiniteDerivative(IntegrationError):
    pass


class ErmakovSingularity(IntegrationError):
    pass


@dataclass(frozen=True)
class Trajectory:
    """Time series of state vectors.

    ``samples[i]`` is the state at ``times[i]``. Arrays are made read-only
    on construction.
    """

    times: np.ndarray
    samples: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        times = np.array(self.times, dtype=float)
        samples = np.array(self.samples, dtype=float)
        if samples.ndim == 1:
            samples = samples[:, None]
        if times.ndim != 1 or samples.shape[0] != times.shape[0]:
            raise ValueError("samples must have one row per time")
        if times.size > 1 and np.any(np.diff(times) <= 0):
            raise ValueError("times must be strictly increasing")
        if not (np.all(np.isfinite(times)) and np.all(np.isfinite(samples))):
            raise ValueError("trajectory contains non-finite values")
        times.flags.writeable = False
        samples.flags.writeable = False
        meta = dict(self.meta)
        meta.setdefault("dim", samples.shape[1])
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "meta", meta)

    def __len__(self) -> int:
        return self.times.shape[0]

    @property
    def dim(self) -> int:
        return self.samples.shape[1]

    @property
    def final(self) -> np.ndarray:
        return self.samples[-1]

    def component(self, i: int) -> np.ndarray:
        return self.samples[:, i]

    def same_grid(self, other: "Trajectory") -> bool:
        return self.times.shape == other.times.shape and bool(np.all(self.times == other.times))


@dataclass(frozen=True)
class IntegratorConfig:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_step: float = math.inf
    method: str = "adaptive-RK45"

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValueError("tolerances must be positive")
        if not self.max_step > 0:
            raise ValueError("max_step must be positive")
        if self.method not in ("adaptive-RK45", "fixed-RK4"):
            raise ValueError(f"unknown method {self.method!r}")
        if self.method == "fixed-RK4" and not math.isfinite(self.max_step):
            raise ValueError("fixed-RK4 needs a finite max_step (the step size)")


# Dormand-Prince 5(4) tableau.
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [np.array(row) for row in [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]]
_B5 = np.append(_A[6], 0.0)
_B4 = np.array([5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40])
_E = _B5 - _B4


def _checked(f, t, y):
    dy = np.asarray(f(t, y), dtype=float)
    if dy.shape != y.shape:
        raise ValueError(f"rhs returned shape {dy.shape}, expected {y.shape}")
    return dy


def _initial_step(f, t0, y0, f0, direction_span, cfg):
    scale = cfg.abs_tol + cfg.rel_tol * np.abs(y0)
    d0 = np.sqrt(np.mean((y0 / scale) ** 2))
    d1 = np.sqrt(np.mean((f0 / scale) ** 2))
    h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    h0 = min(h0, direction_span, cfg.max_step)
    y1 = y0 + h0 * f0
    f1 = np.asarray(f(t0 + h0, y1), dtype=float)
    if not np.all(np.isfinite(f1)):
        return h0 * 1e-3
    d2 = np.sqrt(np.mean(((f1 - f0) / scale) ** 2)) / h0
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** (1 / 5)
    return min(100 * h0, h1, direction_span, cfg.max_step)


def integrate_ode(
    rhs: Callable,
    y0,
    t_span: Sequence[float],
    cfg: IntegratorConfig | None = None,
    t_eval: Sequence[float] | None = None,
    guard: Callable | None = None,
    producer: str = "integrate_ode",
) -> Trajectory:
    """Integrate ``y' = rhs(t, y)`` over ``t_span``.

    Parameters
    ----------
    rhs : callable
        Vector field ``rhs(t, y) -> array`` of the same shape as ``y``.
    y0 : array_like
        Initial state.
    t_span : (t0, t1)
        Requires ``t1 > t0``. The last sample is exactly at ``t1``.
    cfg : IntegratorConfig, optional
    t_eval : sequence of float, optional
        Output times inside ``t_span``; steps are clipped to land on them.
        By default every accepted step is recorded.
    guard : callable, optional
        ``guard(t, y)`` called on every accepted state; may raise an
        :class:`IntegrationError` to abort.

    Raises
    ------
    StepSizeUnderflow
        Step shrank below ``1e-14 * (t1 - t0)``.
    NonFiniteDerivative
        The vector field returned NaN/inf at an accepted state.
    """
    cfg = cfg or IntegratorConfig()
    t0, t1 = float(t_span[0]), float(t_span[1])
    if not t1 > t0:
        raise ValueError("t_span must satisfy t1 > t0")
    y = np.array(y0, dtype=float).ravel()
    if not np.all(np.isfinite(y)):
        raise ValueError("y0 must be finite")

    if t_eval is None:
        stops = np.array([t1])
        record_all = True
    else:
        stops = np.asarray(t_eval, dtype=float)
        if stops.ndim != 1 or np.any(np.diff(stops) <= 0):
            raise ValueError("t_eval must be strictly increasing")
        if stops[0] < t0 or stops[-1] > t1:
            raise ValueError("t_eval outside t_span")
        if stops[-1] != t1:
            stops = np.append(stops, t1)
        record_all = False
    keep_t0 = record_all or (t_eval is not None and t_eval[0] == t0)
    if stops[0] == t0:
        stops = stops[1:]

    times = [t0] if keep_t0 else []
    samples = [y.copy()] if keep_t0 else []
    h_min = UNDERFLOW_FRACTION * (t1 - t0)

    def fail(exc_type, message, t_last):
        partial = None
        if times:
            partial = Trajectory(times, samples, {"producer": producer, "partial": True})
        return exc_type(message, t_last=t_last, partial=partial)

    def evaluate(t, state):
        try:
            return _checked(rhs, t, state)
        except IntegrationError as exc:
            raise fail(type(exc), str(exc), t) from exc

    t = t0
    k1 = evaluate(t, y)
    if not np.all(np.isfinite(k1)):
        raise fail(NonFiniteDerivative, f"non-finite derivative at t={t}", t)

    adaptive = cfg.method == "adaptive-RK45"
    h = _initial_step(rhs, t0, y, k1, t1 - t0, cfg) if adaptive else cfg.max_step
    k = np.empty((7, y.size))

    for stop in stops:
        while t < stop:
            h_try = min(h, stop - t, cfg.max_step)
            clipped = h_try < h
            last = h_try >= stop - t
            if adaptive:
                k[0] = k1
                with np.errstate(over="ignore", invalid="ignore"):
                    for s in range(1, 7):
                        k[s] = evaluate(t + _C[s] * h_try, y + h_try * (_A[s] @ k[:s]))
                    y_new = y + h_try * (_B5[:6] @ k[:6])
                if not np.all(np.isfinite(k)) or not np.all(np.isfinite(y_new)):
                    h = 0.25 * h_try
                    if h < h_min:
                        raise fail(StepSizeUnderflow, f"step size underflow at t={t}", t)
                    continue
                scale = cfg.abs_tol + cfg.rel_tol * np.maximum(np.abs(y), np.abs(y_new))
                err = math.sqrt(float(np.mean((h_try * (_E @ k) / scale) ** 2)))
                if err > 1.0:
                    h = h_try * max(0.2, 0.9 * err ** -0.2)
                    if h < h_min:
                        raise fail(StepSizeUnderflow, f"step size underflow at t={t}", t)
                    continue
                factor = 5.0 if err == 0 else min(5.0, max(0.2, 0.9 * err ** -0.2))
                k1_new = k[6].copy()
            else:
                a = k1
                b = evaluate(t + h_try / 2, y + h_try / 2 * a)
                c = evaluate(t + h_try / 2, y + h_try / 2 * b)
                d = evaluate(t + h_try, y + h_try * c)
                y_new = y + h_try / 6 * (a + 2 * b + 2 * c + d)
                factor = 1.0
                k1_new = None

            t = stop if last else t + h_try
            y = y_new
            if guard is not None:
                try:
                    guard(t, y)
                except IntegrationError as exc:
                    raise fail(type(exc), str(exc), times[-1] if times else t0) from exc
            k1 = evaluate(t, y) if k1_new is None else k1_new
            if not np.all(np.isfinite(k1)):
                raise fail(NonFiniteDerivative, f"non-finite derivative at t={t}", t)
            if record_all and t != t1:
                times.append(t)
                samples.append(y.copy())
            if adaptive:
                # a clipped step says nothing about the natural step size
                h = max(h, h_try * factor) if clipped else h_try * factor
                if h < h_min and t < t1:
                    raise fail(StepSizeUnderflow, f"step size underflow at t={t}", t)
        if not times or times[-1] != t:
            times.append(t)
            samples.append(y.copy())

    return Trajectory(times, samples, {"producer": producer, "method": cfg.method})


def ermakov_rhs(field: FieldProfile, params: PhysicalParams):
    """Vector field for the state ``(rho, rho')`` of the Ermakov equation."""
    k = (params.e / (params.M * params.c)) ** 2

    def rhs(t, y):
        rho, rhodot = y
        if rho <= 0.0:
            return np.array([np.nan, np.nan])
        B = field(t)
        return np.array([rhodot, k * (rho ** -3 - 0.5 * B * B * rho)])

    return rhs


def ermakov_invariant(rho, rhodot, B, params: PhysicalParams):
    """(Mc/e)^2 rho'^2 + (B^2/2) rho^2 + rho^-2; conserved for constant B."""
    rho = np.asarray(rho, dtype=float)
    scale = (params.M * params.c / params.e) ** 2
    return scale * np.asarray(rhodot) ** 2 + 0.5 * np.asarray(B) ** 2 * rho ** 2 + rho ** -2.0


def solve_ermakov(
    field: FieldProfile,
    rho0: float,
    rhodot0: float,
    t_span: Sequence[float],
    params: PhysicalParams | None = None,
    cfg: IntegratorConfig | None = None,
    t_eval: Sequence[float] | None = None,
) -> Trajectory:
    """Integrate (Mc/e)^2 rho'' + (B(t)^2/2) rho - rho^-3 = 0.

    Returns a trajectory with columns ``(rho, rho')``. Raises
    :class:`ErmakovSingularity` (with the partial trajectory attached) if
    rho falls below 1e-10, or if the step size underflows while rho heads
    to zero faster than ``COLLAPSE_FRACTION`` of the span.
    """
    params = params or PhysicalParams()
    if not rho0 > 0:
        raise ValueError("rho0 must be positive")
    if params.e == 0:
        raise ValueError("the auxiliary equation needs a nonzero charge")
    t0, t1 = float(t_span[0]), float(t_span[1])
    if not field.covers(t0, t1):
        raise FieldProfileError(f"field profile span {field.span} does not cover [{t0}, {t1}]")

    def guard(t, y):
        if y[0] < RHO_FLOOR:
            raise ErmakovSingularity(f"rho fell below {RHO_FLOOR:g} at t={t}")

    try:
        return integrate_ode(
            ermakov_rhs(field, params), [rho0, rhodot0], (t0, t1), cfg,
            t_eval=t_eval, guard=guard, producer="solve_ermakov",
        )
    except StepSizeUnderflow as exc:
        rho, rhodot = exc.partial.final if exc.partial is not None else (rho0, rhodot0)
        if rhodot < 0 and rho < -rhodot * COLLAPSE_FRACTION * (t1 - t0):
            raise ErmakovSingularity(f"rho collapsing to 0 near t={exc.t_last}",
                                     t_last=exc.t_last, partial=exc.partial) from exc
        raise


@dataclass(frozen=True)
class StationaryRoot:
    branch: int
    rho2: float
    rho: float | None


def stationary_rho(B: float, branch: int = +1) -> StationaryRoot:
    """Time-independent roots rho^2 = +-sqrt(2)/B of the auxiliary equation.

    ``rho`` is returned only when ``rho2`` is positive; the other branch is
    a formal root with no real rho.
    """
    if B == 0:
        raise ValueError("no stationary solution for B = 0")
    if branch not in (+1, -1):
        raise ValueError("branch must be +1 or -1")
    rho2 = branch * math.sqrt(2.0) / B
    rho = math.sqrt(rho2) if rho2 > 0 else None
    return StationaryRoot(branch, rho2, rho)


def fd_second_derivative(times, values):
    """Fourth-order central second derivative on a uniform grid.

    Returns ``(interior_times, d2)``, dropping two samples at each end.
    """
    t = np.asarray(times, dtype=float)
    y = np.asarray(values, dtype=float)
    if t.size < 5:
        raise ValueError("need at least 5 samples")
    h = np.diff(t)
    if np.max(np.abs(h - h[0])) > 1e-9 * abs(h[0]):
        raise ValueError("grid must be uniform")
    h = (t[-1] - t[0]) / (t.size - 1)
    d2 = (-y[4:] + 16 * y[3:-1] - 30 * y[2:-2] + 16 * y[1:-3] - y[:-4]) / (12 * h * h)
    return t[2:-2], d2


def ermakov_residual(traj: Trajectory, field: FieldProfile, params: PhysicalParams | None = None):
    """(Mc/e)^2 rho'' + (B^2/2) rho - rho^-3 with rho'' from finite differences."""
    params = params or PhysicalParams()
    t, d2 = fd_second_derivative(traj.times, traj.component(0))
    rho = traj.component(0)[2:-2]
    B = field(t)
    return (params.M * params.c / params.e) ** 2 * d2 + 0.5 * B * B * rho - rho ** -3.0
