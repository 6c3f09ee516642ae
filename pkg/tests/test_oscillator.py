import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chiralosc.numerics import integrate_ode
from chiralosc.oscillator import (
    angular_momentum,
    co_bracket,
    co_canonical_momentum,
    co_evolve,
    co_evolve_series,
    co_hamiltonian,
    co_lagrangian,
    co_vector_field,
    compose_ho,
    decompose_ho,
    first_order_lagrangian,
    ho_lagrangian,
    relabel_matrix,
)
from chiralosc.params import Chirality, CoState, PhysicalParams

coord = st.floats(-10, 10, allow_nan=False)
positive = st.floats(0.1, 10)
chirality = st.sampled_from([Chirality.PLUS, Chirality.MINUS])


def test_ho_lagrangian_values(unit):
    assert ho_lagrangian(0.0, 0.0, unit) == 0.0
    assert ho_lagrangian(1.0, 0.0, unit) == -0.5
    assert ho_lagrangian(0.0, 1.0, unit) == 0.5


def test_first_order_lagrangian(unit):
    assert first_order_lagrangian(0.0, 0.3, 0.0, 0.2, unit) == 0.0
    assert first_order_lagrangian(1.0, 1.0, 1.0, 0.0, unit) == -0.5
    assert first_order_lagrangian(-1.0, -0.3, -0.7, -0.2, unit) == first_order_lagrangian(1.0, 0.3, 0.7, 0.2, unit)


def test_decompose_examples(unit):
    assert decompose_ho(0.3, 0.8, 0.0, "proper", unit) == pytest.approx((0.3, 0.8))
    assert decompose_ho(0.3, 0.8, 0.0, "improper", unit) == pytest.approx((0.8, 0.3))
    assert np.linalg.det(relabel_matrix(0.4, "proper")) == pytest.approx(1.0)
    assert np.linalg.det(relabel_matrix(0.4, "improper")) == pytest.approx(-1.0)
    with pytest.raises(ValueError):
        relabel_matrix(0.0, "other")


@given(coord, coord, st.floats(0, 2 * math.pi), st.sampled_from(["proper", "improper"]), positive)
def test_decompose_preserves_norm_and_inverts(x, lam, angle, kind, w):
    p = PhysicalParams(omega=w)
    x1, x2 = decompose_ho(x, lam, angle, kind, p)
    assert x1 * x1 + x2 * x2 == pytest.approx(x * x + (lam / w) ** 2, rel=1e-12, abs=1e-12)
    assert compose_ho(x1, x2, angle, kind, p) == pytest.approx((x, lam), rel=1e-12, abs=1e-11)


def test_co_lagrangian_values(unit):
    assert co_lagrangian(CoState(0.0, 0.0), (0.3, 0.1), unit) == 0.0
    assert co_lagrangian(CoState(1.0, 0.0, "+"), (0.0, 1.0), unit) == 0.0
    assert co_lagrangian(CoState(1.0, 0.0, "-"), (0.0, 1.0), unit) == -1.0


def test_bracket_and_hamiltonian(unit):
    assert co_bracket(1, 1, "+", unit) == 0.0
    assert co_bracket(1, 2, "+", unit) == -1.0
    assert co_bracket(1, 2, "-", unit) == 1.0
    assert co_bracket(2, 1, "+", unit) == 1.0
    with pytest.raises(ValueError):
        co_bracket(0, 1)
    assert co_hamiltonian(CoState(0.0, 0.0), unit) == 0.0
    assert co_hamiltonian(CoState(1.0, 0.0), unit) == 0.5


def test_evolve_examples(unit):
    s = CoState(1.0, 0.0, "+")
    assert co_evolve(s, 0.0, unit) == s
    assert co_evolve(s, math.pi / 2, unit).xy == pytest.approx((0.0, 1.0), abs=1e-15)
    assert co_evolve(CoState(1.0, 0.0, "-"), math.pi / 2, unit).xy == pytest.approx((0.0, -1.0), abs=1e-15)


@pytest.mark.parametrize("chir", [Chirality.PLUS, Chirality.MINUS])
def test_evolve_matches_bracket_integration(chir):
    p = PhysicalParams(M=1.7, omega=2.3)
    s = CoState(0.4, -1.1, chir)
    times = np.linspace(0.0, 10 * 2 * math.pi / p.omega, 501)
    traj = integrate_ode(co_vector_field(chir, p), s.xy, (0.0, times[-1]), t_eval=times)
    assert np.max(np.abs(traj.samples - co_evolve_series(s, times, p))) < 1e-8


@settings(max_examples=50)
@given(coord, coord, chirality, st.floats(-5, 5), st.floats(-5, 5))
def test_evolve_group_and_norm(x1, x2, chir, t1, t2):
    s = CoState(x1, x2, chir)
    a = co_evolve(co_evolve(s, t1), t2)
    b = co_evolve(s, t1 + t2)
    assert a.xy == pytest.approx(b.xy, abs=1e-12)
    assert b.radius2 == pytest.approx(s.radius2, rel=1e-12, abs=1e-12)


@settings(max_examples=50)
@given(coord, coord, st.floats(-5, 5))
def test_mirror_commutes_with_evolution(x1, x2, t):
    plus = co_evolve(CoState(x1, x2, "+"), t)
    minus = co_evolve(CoState(x1, -x2, "-"), t)
    assert (plus.x1, -plus.x2) == pytest.approx(minus.xy, abs=1e-12)


def test_canonical_momentum_and_j(unit):
    assert co_canonical_momentum(CoState(0.0, 0.0), unit) == (0.0, 0.0)
    assert co_canonical_momentum(CoState(1.0, 0.0, "+"), unit) == pytest.approx((0.0, 0.5))
    assert co_canonical_momentum(CoState(1.0, 0.0, "-"), unit) == pytest.approx((0.0, -0.5))
    assert angular_momentum(CoState(0.0, 0.0), unit) == 0.0
    assert angular_momentum(CoState(1.0, 0.0, "+"), unit) == 0.5
    assert angular_momentum(CoState(1.0, 0.0, "-"), unit) == -0.5


@given(coord, coord, chirality, positive, positive)
def test_omega_j_is_signed_hamiltonian(x1, x2, chir, M, w):
    p = PhysicalParams(M=M, omega=w)
    s = CoState(x1, x2, chir)
    assert w * angular_momentum(s, p) == pytest.approx(chir.sign * co_hamiltonian(s, p), rel=1e-14, abs=1e-300)
