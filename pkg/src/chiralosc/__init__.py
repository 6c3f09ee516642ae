"""Chiral oscillator toolkit.

Decomposition of the harmonic oscillator into chiral halves, soldering
them back together, classical invariants, Zeeman splitting (closed form,
phase route and a brute-force Fock-space spectrum) and the duality
structure of the chiral oscillator.
"""

from .fields import FieldProfile, FieldProfileError
from .numerics import (
    ErmakovSingularity,
    IntegrationError,
    IntegratorConfig,
    NonFiniteDerivative,
    StepSizeUnderflow,
    Trajectory,
    integrate_ode,
    solve_ermakov,
    stationary_rho,
)
from .params import Chirality, CoState, HoState, PhysicalParams

__version__ = "0.1.0"

__all__ = [
    "Chirality",
    "CoState",
    "ErmakovSingularity",
    "FieldProfile",
    "FieldProfileError",
    "HoState",
    "IntegrationError",
    "IntegratorConfig",
    "NonFiniteDerivative",
    "PhysicalParams",
    "StepSizeUnderflow",
    "Trajectory",
    "integrate_ode",
    "solve_ermakov",
    "stationary_rho",
]
