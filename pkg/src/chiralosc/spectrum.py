"""Brute-force spectrum of the charged oscillator in a truncated chiral Fock basis.

Basis states |n+, n-> are circular quanta of the field-free oscillator of
frequency w, with L_z = x1 p2 - x2 p1 = hbar (n+ - n-). In this basis the
paramagnetic term is diagonal and the diamagnetic r^2 term couples
(n+, n-) to (n+ +- 1, n- +- 1) with real elements, so the matrix is real
symmetric and block diagonal in m = n+ - n-.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .params import PhysicalParams

_DEFAULT = PhysicalParams()
MAX_SWEEPS = 50
OFFDIAG_TOL = 1e-12


class NotSymmetricError(ValueError):
    pass


class JacobiNonConvergence(RuntimeError):
    pass


@dataclass(frozen=True)
class FockBasisSpec:
    """States with n+ + n- <= n_max, ordered by (n+ + n-, n+ - n-)."""

    n_max: int

    def __post_init__(self):
        if int(self.n_max) != self.n_max or self.n_max < 2:
            raise ValueError("n_max must be an integer >= 2")

    @property
    def states(self) -> list[tuple[int, int]]:
        out = []
        for total in range(self.n_max + 1):
            for m in range(-total, total + 1, 2):
                out.append(((total + m) // 2, (total - m) // 2))
        return out

    @property
    def dim(self) -> int:
        return (self.n_max + 1) * (self.n_max + 2) // 2

    def index(self) -> dict[tuple[int, int], int]:
        return {s: i for i, s in enumerate(self.states)}


def larmor_frequency(B: float, params: PhysicalParams = _DEFAULT) -> float:
    """e B / (2 M c)."""
    return params.larmor_per_field * B


def build_zeeman_matrix(spec: FockBasisSpec, B: float, params: PhysicalParams = _DEFAULT) -> np.ndarray:
    hbar, w = params.hbar, params.omega
    wl = larmor_frequency(B, params)
    dia = hbar * wl * wl / (2.0 * w)
    states = spec.states
    idx = spec.index()
    H = np.zeros((spec.dim, spec.dim))
    for i, (npl, nmi) in enumerate(states):
        total = npl + nmi
        H[i, i] = hbar * w * (total + 1) - hbar * wl * (npl - nmi) + dia * (total + 1)
        j = idx.get((npl + 1, nmi + 1))
        if j is not None:
            H[i, j] = H[j, i] = dia * math.sqrt((npl + 1) * (nmi + 1))
    return H


def jacobi_eigh(H, tol: float = OFFDIAG_TOL, max_sweeps: int = MAX_SWEEPS):
    """Eigenvalues (ascending) and eigenvectors by cyclic Jacobi rotations.

    Sweeps stop once the off-diagonal Frobenius norm is at most
    ``tol * ||H||_F``.

    Raises
    ------
    NotSymmetricError
        Input not square, not finite, or not symmetric.
    JacobiNonConvergence
        Still above the threshold after ``max_sweeps`` sweeps.
    """
    a = np.array(H, dtype=float, order="C", copy=True)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NotSymmetricError("matrix must be square")
    if not np.all(np.isfinite(a)):
        raise NotSymmetricError("matrix must be finite")
    norm = float(np.linalg.norm(a))
    if np.max(np.abs(a - a.T), initial=0.0) > 1e-14 * max(norm, 1e-300):
        raise NotSymmetricError("matrix is not symmetric")
    a = 0.5 * (a + a.T)
    v = np.eye(a.shape[0])
    sweeps, off = _kernels.jacobi_sweeps(a, v, tol * norm, max_sweeps)
    if off > tol * norm:
        raise JacobiNonConvergence(f"off-diagonal norm {off:.3g} after {sweeps} sweeps")
    vals = np.diag(a).copy()
    order = np.argsort(vals, kind="stable")
    return vals[order], v[:, order]


def diagonalize(H, tol: float = OFFDIAG_TOL, max_sweeps: int = MAX_SWEEPS) -> np.ndarray:
    return jacobi_eigh(H, tol, max_sweeps)[0]


def exact_landau_levels(nplus: int, nminus: int, B: float, params: PhysicalParams = _DEFAULT) -> float:
    """hbar W (n+ + n- + 1) - hbar (eB/2Mc)(n+ - n-), W = sqrt(w^2 + (eB/2Mc)^2)."""
    if nplus < 0 or nminus < 0:
        raise ValueError("quanta must be non-negative")
    wl = larmor_frequency(B, params)
    big = math.hypot(params.omega, wl)
    return params.hbar * (big * (nplus + nminus + 1) - wl * (nplus - nminus))


def _block_labels(spec: FockBasisSpec, vecs: np.ndarray) -> list[tuple[int, int]]:
    # eigenvectors never leave their m block, so rank inside the block is the label
    states = spec.states
    m_of = np.array([a - b for a, b in states])
    seen: dict[int, int] = {}
    labels = []
    for k in range(vecs.shape[1]):
        m = int(m_of[int(np.argmax(np.abs(vecs[:, k])))])
        rank = seen.get(m, 0)
        seen[m] = rank + 1
        total = abs(m) + 2 * rank
        labels.append(((total + m) // 2, (total - m) // 2))
    return labels


@dataclass(frozen=True)
class SpectrumResult:
    eigenvalues: np.ndarray
    labels: list
    truncation_error_estimate: np.ndarray
    n_max: int
    B: float
    eigenvectors: np.ndarray | None = field(default=None, repr=False)

    def level(self, nplus: int, nminus: int) -> float:
        return float(self.eigenvalues[self.labels.index((nplus, nminus))])


def zeeman_spectrum(spec: FockBasisSpec, B: float, params: PhysicalParams = _DEFAULT,
                    keep_vectors: bool = False) -> SpectrumResult:
    """Diagonalize at ``n_max`` and ``n_max + 2``; the label-matched
    difference is the truncation error estimate."""
    vals, vecs = jacobi_eigh(build_zeeman_matrix(spec, B, params))
    labels = _block_labels(spec, vecs)
    bigger = FockBasisSpec(spec.n_max + 2)
    vals2, vecs2 = jacobi_eigh(build_zeeman_matrix(bigger, B, params))
    lookup = dict(zip(_block_labels(bigger, vecs2), vals2))
    err = np.array([abs(v - lookup[lab]) for v, lab in zip(vals, labels)])
    return SpectrumResult(vals, labels, err, spec.n_max, float(B), vecs if keep_vectors else None)


@dataclass(frozen=True)
class ZerothInvariantReport:
    commutator_norm: float
    eigenbasis_residual: float
    ladder_values_ok: bool


def zeroth_invariant_check(spec: FockBasisSpec, params: PhysicalParams = _DEFAULT) -> ZerothInvariantReport:
    """Take I0 = H0 (the field-free matrix) and check [I0, H0] and the shared eigenbasis."""
    H0 = build_zeeman_matrix(spec, 0.0, params)
    I0 = H0.copy()
    comm = float(np.linalg.norm(I0 @ H0 - H0 @ I0))
    vals, vecs = jacobi_eigh(I0)
    resid = float(np.linalg.norm(H0 @ vecs - vecs * vals))
    ladder = sorted(params.hbar * params.omega * (a + b + 1) for a, b in spec.states)
    return ZerothInvariantReport(comm, resid, bool(np.allclose(vals, ladder, rtol=0, atol=1e-12)))


def perturbed_overlaps(spec: FockBasisSpec, B: float, params: PhysicalParams = _DEFAULT, levels: int = 6):
    """|<psi(B)|psi(0)>| for the lowest ``levels`` labelled states.

    psi(0) is the field-free basis state with the same (n+, n-) label,
    which is unique inside its angular-momentum block.
    """
    vals, vecs = jacobi_eigh(build_zeeman_matrix(spec, B, params))
    labels = _block_labels(spec, vecs)
    idx = spec.index()
    return [(labels[k], abs(float(vecs[idx[labels[k]], k]))) for k in range(levels)]
