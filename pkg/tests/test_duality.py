import math

import numpy as np
import pytest

from chiralosc.checks import duality_checks
from chiralosc.duality import (
    EbState,
    bianchi_residual,
    discrete_swap,
    duality_rotate,
    eb_lagrangian,
    eb_trajectory,
    eom_residual,
    generator_flow,
    generator_q,
    swap_trajectory,
    to_eb,
)
from chiralosc.numerics import Trajectory
from chiralosc.oscillator import co_hamiltonian
from chiralosc.params import CoState, PhysicalParams


def test_to_eb():
    assert to_eb(0.0, 0.0) == EbState(0.0, 0.0)
    assert to_eb(1.0, 2.0) == EbState(2.0, 1.0)
    with pytest.raises(ValueError):
        to_eb(1.0, 2.0, PhysicalParams(M=2.0))


def test_residuals_on_solution():
    t = np.linspace(0.0, 2 * math.pi, 8001)
    eb = eb_trajectory(t, np.cos(t), -np.sin(t))
    assert np.max(np.abs(eom_residual(eb))) < 1e-6
    assert np.max(np.abs(bianchi_residual(eb))) < 1e-6


def test_residuals_on_constants():
    t = np.linspace(0.0, 1.0, 5)
    eb = Trajectory(t, np.column_stack([np.zeros(5), np.ones(5)]))
    assert np.allclose(eom_residual(eb), 1.0)
    eb = Trajectory(t, np.column_stack([np.ones(5), np.zeros(5)]))
    assert np.allclose(bianchi_residual(eb), -1.0)
    with pytest.raises(ValueError):
        eom_residual(Trajectory(t[:2], np.zeros((2, 2))))


def test_eom_residual_is_linear():
    t = np.linspace(0.0, 3.0, 31)
    a = Trajectory(t, np.column_stack([np.sin(t), t ** 2]))
    b = Trajectory(t, np.column_stack([np.exp(-t), np.cos(t)]))
    ab = Trajectory(t, 2 * a.samples - 3 * b.samples)
    assert np.allclose(eom_residual(ab), 2 * eom_residual(a) - 3 * eom_residual(b), atol=1e-12)


def test_discrete_swap():
    assert discrete_swap(EbState(1.0, 0.0), +1) == EbState(-0.0, 1.0)
    twice = discrete_swap(discrete_swap(EbState(0.3, -0.7)))
    assert (twice.E, twice.B) == (-0.3, 0.7)
    assert eb_lagrangian(discrete_swap(EbState(1.0, 0.0))) == -0.5
    with pytest.raises(ValueError):
        discrete_swap(EbState(0.0, 0.0), 2)


@pytest.mark.parametrize("sign", [+1, -1])
def test_swap_exchanges_equations_on_arbitrary_paths(sign):
    t = np.linspace(0.0, 5.0, 501)
    eb = Trajectory(t, np.column_stack([np.sin(3 * t) + t, np.cos(t) * t]))
    sw = swap_trajectory(eb, sign)
    assert np.max(np.abs(eom_residual(sw) + sign * bianchi_residual(eb))) < 1e-12
    assert np.max(np.abs(bianchi_residual(sw) - sign * eom_residual(eb))) < 1e-12


def test_rotation_and_generator(rng):
    s = CoState(1.0, 0.0, "+")
    assert duality_rotate(s, 0.0) == s
    assert duality_rotate(s, math.pi / 2).xy == pytest.approx((0.0, 1.0), abs=1e-15)
    assert generator_flow(s, math.pi / 2).xy == pytest.approx((0.0, 1.0), abs=1e-15)
    for _ in range(50):
        chir = "+" if rng.random() < 0.5 else "-"
        st = CoState(*rng.uniform(-2, 2, 2), chir)
        a, b = rng.uniform(0, 2 * math.pi, 2)
        composed = generator_flow(generator_flow(st, a), b)
        assert composed.xy == pytest.approx(generator_flow(st, a + b).xy, abs=1e-10)
        assert generator_q(generator_flow(st, a)) == pytest.approx(generator_q(st), abs=1e-12)
        assert co_hamiltonian(duality_rotate(st, a)) == pytest.approx(co_hamiltonian(st), abs=1e-12)


def test_generator_scales_with_params():
    p = PhysicalParams(M=2.0, omega=0.5)
    s = CoState(1.0, 0.0, "-")
    assert generator_flow(s, 0.3, p).xy == pytest.approx(duality_rotate(s, 0.3).xy)
    p = PhysicalParams(M=2.0, omega=2.0)
    assert generator_flow(s, 0.8, p).xy == pytest.approx(duality_rotate(s, 0.2).xy)


def test_duality_checks_pass():
    assert all(c.passed for c in duality_checks())
