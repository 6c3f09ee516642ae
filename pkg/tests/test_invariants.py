import math

import numpy as np
import pytest

from chiralosc.checks import invariant_checks
from chiralosc.invariants import (
    DegenerateInvariant,
    co_invariant,
    co_invariant_series,
    drift,
    ho_invariant,
    ho_invariant_series,
    soldered_invariant,
)
from chiralosc.numerics import IntegratorConfig, integrate_ode
from chiralosc.oscillator import co_evolve, co_evolve_series, co_vector_field, co_velocity
from chiralosc.params import Chirality, CoState, PhysicalParams


def test_co_invariant_examples(unit):
    assert co_invariant(CoState(1.0, 0.0, "+"), 0.0, unit) == 0.0
    s = co_evolve(CoState(1.0, 0.0, "+"), math.pi / 4, unit)
    assert co_invariant(s, math.pi / 4, unit) == pytest.approx(0.0, abs=1e-15)
    with pytest.raises(DegenerateInvariant):
        co_invariant(CoState(0.0, 0.0), 0.0)


def test_chiralities_relate_by_interchange(unit):
    # at a fixed state, I- is I+ evaluated on the interchanged coordinates
    t = 0.37
    a = co_invariant(CoState(0.3, 0.8, "-"), t, unit)
    b = co_invariant(CoState(0.8, 0.3, "+"), t, unit)
    assert a == pytest.approx(b, abs=1e-15)


@pytest.mark.parametrize("chir", [Chirality.PLUS, Chirality.MINUS])
def test_co_invariant_constant_along_integration(chir):
    p = PhysicalParams(M=2.0, omega=1.3)
    s = CoState(0.6, -0.9, chir)
    t_end = 10 * 2 * math.pi / p.omega
    traj = integrate_ode(co_vector_field(chir, p), s.xy, (0.0, t_end))
    values = co_invariant_series(traj.times, traj.samples, chir, p)
    assert drift(values) < 1e-7
    assert np.max(np.abs(np.diff(values))) < math.pi / 2


def test_time_derivative_by_central_differences():
    p = PhysicalParams(omega=1.7)
    times = np.linspace(0.0, 10.0, 4001)
    for chir in (Chirality.PLUS, Chirality.MINUS):
        values = co_invariant_series(times, co_evolve_series(CoState(1.0, 0.5, chir), times, p), chir, p)
        assert np.max(np.abs(np.gradient(values, times))) < 1e-7


def test_ho_invariant_examples(unit):
    assert ho_invariant(2.0, 0.0, 0.0, params=unit) == 0.0
    p = PhysicalParams(M=1.5, omega=0.8)
    t = np.linspace(0.0, 30.0, 301)
    A = 0.7
    x = A * np.cos(p.omega * t)
    mom = -p.M * p.omega * A * np.sin(p.omega * t)
    assert np.max(np.abs(ho_invariant_series(t, x, mom, params=p))) < 1e-13
    with pytest.raises(DegenerateInvariant):
        ho_invariant(0.0, 0.0, 1.0)


def test_soldered_invariant_closed_form(unit):
    x0, y0 = CoState(1.0, 0.0, "+"), CoState(1.0, 0.0, "-")
    vals = []
    for t in np.linspace(0.1, 6.0, 40):
        x, y = co_evolve(x0, t, unit), co_evolve(y0, t, unit)
        first, second = soldered_invariant(x, y, co_velocity(x, unit), co_velocity(y, unit), t, unit)
        assert math.isnan(first)
        vals.append(second)
    assert drift(np.unwrap(vals)) < 1e-12
    with pytest.raises(DegenerateInvariant):
        soldered_invariant(x0, CoState(1.0, 0.0, "-"), (0.0, 0.0), (0.0, 0.0), 0.0, unit)


def test_invariant_checks_default_and_broken():
    p = PhysicalParams()
    good = invariant_checks(p, (1.0, 0.3), (0.4, -0.8), (1.0, 0.5))
    assert all(c.passed for c in good)
    bad = invariant_checks(p, (1.0, 0.3), (0.4, -0.8), (1.0, 0.5), cfg=IntegratorConfig(rel_tol=1e-2))
    assert not all(c.passed for c in bad)
