"""Numerical property checks behind the ``solder``, ``invariants`` and
``duality`` commands.

Each check reports its worst residual against a fixed threshold.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from . import duality as dual
from . import invariants as inv
from . import soldering as sold
from .numerics import IntegratorConfig, Trajectory, fd_second_derivative, integrate_ode
from .oscillator import co_lagrangian, co_vector_field
from .params import Chirality, CoState, PhysicalParams


@dataclass(frozen=True)
class Check:
    name: str
    max_residual: float
    threshold: float
    comparison: str = "<="

    @property
    def passed(self) -> bool:
        if not math.isfinite(self.max_residual):
            return False
        if self.comparison == "<=":
            return self.max_residual <= self.threshold
        return self.max_residual >= self.threshold

    def as_dict(self) -> dict:
        d = asdict(self)
        d["passed"] = self.passed
        return d


def _co_trajectory(state0: CoState, times, params, cfg) -> Trajectory:
    traj = integrate_ode(co_vector_field(state0.chirality, params), state0.xy,
                         (times[0], times[-1]), cfg, t_eval=times, producer="co")
    return Trajectory(traj.times, traj.samples, {"chirality": state0.chirality.sign})


def _velocities(samples, chirality, params) -> np.ndarray:
    s = Chirality.parse(chirality).sign * params.omega
    return np.column_stack([-s * samples[:, 1], s * samples[:, 0]])


def _random_state(rng, chirality):
    x = rng.uniform(-2, 2, size=2)
    return CoState(float(x[0]), float(x[1]), chirality)


def solder_checks(params: PhysicalParams, x0, y0, periods: float = 10.0, n_samples: int = 4001,
                  cfg: IntegratorConfig | None = None, seed: int = 0, n_random: int = 100) -> list[Check]:
    cfg = cfg or IntegratorConfig()
    rng = np.random.default_rng(seed)
    gauge = elim = shift = 0.0
    for _ in range(n_random):
        x = _random_state(rng, Chirality.PLUS)
        y = _random_state(rng, Chirality.MINUS)
        xd, yd, B, eta, etad = (rng.uniform(-2, 2, size=2) for _ in range(5))
        L0 = sold.soldered_lagrangian(x, y, xd, yd, B, params)
        L1 = sold.soldered_lagrangian(*sold.gauge_transform(x, y, xd, yd, B, eta, etad), params)
        gauge = max(gauge, abs(L1 - L0) / max(1.0, abs(L0)))
        Lr = sold.reduced_lagrangian(x, y, xd, yd, params)
        Lw = sold.soldered_ho_lagrangian(np.subtract(x.xy, y.xy), xd - yd, params)
        elim = max(elim, abs(Lr - Lw) / max(1.0, abs(Lw)))
        xs, ys, xds, yds, _ = sold.gauge_transform(x, y, xd, yd, B, eta, etad)
        Ls = sold.reduced_lagrangian(xs, ys, xds, yds, params)
        shift = max(shift, abs(Ls - Lr) / max(1.0, abs(Lr)))

    period = 2 * math.pi / params.omega
    times = np.linspace(0.0, periods * period, n_samples)
    xs0 = CoState(*x0, Chirality.PLUS)
    ys0 = CoState(*y0, Chirality.MINUS)
    pair = sold.SolderPair(_co_trajectory(xs0, times, params, cfg), _co_trajectory(ys0, times, params, cfg))
    w = sold.solder(pair)
    fd = 0.0
    for a in range(2):
        t_in, d2 = fd_second_derivative(w.times, w.samples[:, a])
        fd = max(fd, float(np.max(np.abs(d2 + params.omega ** 2 * w.samples[2:-2, a]))))
    wdot = _velocities(pair.x_traj.samples, 1, params) - _velocities(pair.y_traj.samples, -1, params)
    energy = sold.soldered_energy(w.samples, wdot, params)
    return [
        Check("gauge_invariance", gauge, 1e-12),
        Check("baux_elimination_identity", elim, 1e-12),
        Check("eliminated_shift_invariance", shift, 1e-12),
        Check("soldered_eom_fd_residual", fd, 1e-6),
        Check("soldered_energy_drift", inv.drift(energy), 1e-8),
    ]


def _ho_trajectory(x0, p0, mass, t_end, params, cfg) -> Trajectory:
    w2 = params.omega ** 2

    def rhs(t, y):
        return np.array([y[1] / mass, -mass * w2 * y[0]])

    return integrate_ode(rhs, [x0, p0], (0.0, t_end), cfg, producer="ho")


def _co_pair_trajectory(x0: CoState, y0: CoState, t_end, params, cfg) -> Trajectory:
    """CO+ and CO- evolved together so both share the adaptive step grid."""
    fx = co_vector_field(x0.chirality, params)
    fy = co_vector_field(y0.chirality, params)

    def rhs(t, z):
        return np.concatenate([fx(t, z[:2]), fy(t, z[2:])])

    return integrate_ode(rhs, [*x0.xy, *y0.xy], (0.0, t_end), cfg, producer="co-pair")


def invariant_checks(params: PhysicalParams, x0, y0, ho0, periods: float = 10.0,
                     cfg: IntegratorConfig | None = None, threshold: float = 1e-7) -> list[Check]:
    """Invariant drift sampled at every accepted integrator step."""
    cfg = cfg or IntegratorConfig()
    t_end = periods * 2 * math.pi / params.omega
    checks = []
    jumps = 0.0
    pair_traj = _co_pair_trajectory(CoState(*x0, Chirality.PLUS), CoState(*y0, Chirality.MINUS),
                                    t_end, params, cfg)
    times = pair_traj.times
    xs = Trajectory(times, pair_traj.samples[:, :2], {"chirality": 1})
    ys = Trajectory(times, pair_traj.samples[:, 2:], {"chirality": -1})
    for label, traj, chir in (("co_plus", xs, Chirality.PLUS), ("co_minus", ys, Chirality.MINUS)):
        values = inv.co_invariant_series(times, traj.samples, chir, params)
        checks.append(Check(f"{label}_invariant_drift", inv.drift(values), threshold))
        jumps = max(jumps, float(np.max(np.abs(np.diff(values)))))
    ho = _ho_trajectory(ho0[0], ho0[1], params.M, t_end, params, cfg)
    values = inv.ho_invariant_series(ho.times, ho.samples[:, 0], ho.samples[:, 1], params.M, params)
    checks.append(Check("ho_invariant_drift", inv.drift(values), threshold))
    jumps = max(jumps, float(np.max(np.abs(np.diff(values)))))

    w = sold.solder(sold.SolderPair(xs, ys))
    wdot = _velocities(xs.samples, 1, params) - _velocities(ys.samples, -1, params)
    both = inv.soldered_invariant_series(w, wdot, params)
    for a in range(2):
        checks.append(Check(f"soldered_invariant_{a + 1}_drift", inv.drift(both[:, a]), threshold))
        jumps = max(jumps, float(np.max(np.abs(np.diff(both[:, a])))))
    checks.append(Check("branch_continuity_max_jump", jumps, math.pi / 2))
    return checks


def duality_checks(seed: int = 0, n_random: int = 100, n_theta: int = 32,
                   cfg: IntegratorConfig | None = None) -> list[Check]:
    cfg = cfg or IntegratorConfig()
    rng = np.random.default_rng(seed)
    unit = PhysicalParams()

    lag = 0.0
    q_err = 0.0
    for _ in range(n_random):
        chir = Chirality.PLUS if rng.random() < 0.5 else Chirality.MINUS
        s = _random_state(rng, chir)
        xd = rng.uniform(-2, 2, size=2)
        theta = rng.uniform(0, 2 * math.pi)
        s2 = dual.duality_rotate(s, theta)
        xd2 = dual.rotate_velocity(xd, theta, chir)
        lag = max(lag, abs(co_lagrangian(s2, xd2, unit) - co_lagrangian(s, xd, unit)))
        q_err = max(q_err, abs(dual.generator_q(dual.generator_flow(s, theta)) - dual.generator_q(s)))

    # E/B swap on x(t) = cos t + 0.3 sin t
    times = np.linspace(0.0, 4 * math.pi, 801)
    x = np.cos(times) + 0.3 * np.sin(times)
    xdot = -np.sin(times) + 0.3 * np.cos(times)
    eb = dual.eb_trajectory(times, x, xdot)
    swap = 0.0
    for sign in (+1, -1):
        sw = dual.swap_trajectory(eb, sign)
        swap = max(swap, float(np.max(np.abs(dual.eom_residual(sw) + sign * dual.bianchi_residual(eb)))))
        swap = max(swap, float(np.max(np.abs(dual.bianchi_residual(sw) - sign * dual.eom_residual(eb)))))
    witness = abs(dual.eb_lagrangian(dual.discrete_swap(dual.EbState(1.0, 0.0))) - dual.eb_lagrangian(dual.EbState(1.0, 0.0)))

    agree = 0.0
    flow_err = 0.0
    for chir in (Chirality.PLUS, Chirality.MINUS):
        s = CoState(1.0, 0.0, chir)
        b12 = -chir.sign  # {x1, x2} with M = w = 1

        def rhs(th, y):
            # dx_a/dtheta = {x_a, Q} = x_b {x_a, x_b}
            return np.array([b12 * y[1], -b12 * y[0]])

        thetas = np.linspace(0.0, 2 * math.pi, n_theta, endpoint=False)
        traj = integrate_ode(rhs, s.xy, (0.0, thetas[-1]), cfg, t_eval=thetas)
        for th, num in zip(thetas, traj.samples):
            a = dual.generator_flow(s, th)
            b = dual.duality_rotate(s, th)
            agree = max(agree, abs(a.x1 - b.x1), abs(a.x2 - b.x2))
            flow_err = max(flow_err, abs(a.x1 - num[0]), abs(a.x2 - num[1]))
    return [
        Check("co_lagrangian_rotation_invariance", lag, 1e-12),
        Check("generator_preserves_q", q_err, 1e-12),
        Check("swap_exchanges_eom_and_bianchi", swap, 1e-12),
        Check("ho_lagrangian_swap_noninvariance", witness, 0.5, ">="),
        Check("generator_flow_matches_duality_rotate", agree, 1e-10),
        Check("generator_flow_matches_bracket_integration", flow_err, 1e-8),
    ]
