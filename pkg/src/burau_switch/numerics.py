"""Specialization at s = exp(i*omega/2), Cholesky unitarization and Helstrom.

Dense matrices are plain ``numpy`` complex arrays. The eigenvalue and arc
work is delegated to the kernels in ``_kernels`` (numba when available).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .laurent import SQUIER, LaurentMatrix, LaurentPoly, burau_generator, evaluate_word

TWO_PI = 2.0 * math.pi
WINDOW_EDGE = TWO_PI / 3.0

UNITARY_TOL = 1e-12
PRECONDITION_TOL = 1e-10
MODULUS_TOL = 1e-10
# eigenvalues of J at or below this count as zero (2cos(pi/3) - 1 rounds to 2e-16)
POSITIVITY_FLOOR = 1e-12


class NotPositiveDefinite(ValueError):
    def __init__(self, omega: float):
        self.omega = omega
        super().__init__(f"Squier form is not positive definite at omega={omega!r}")


class NotUnitary(ValueError):
    pass


class NoConvergence(RuntimeError):
    pass


class EmptySpectrum(ValueError):
    pass


def unitarity_error(m: np.ndarray) -> float:
    """Max-norm of M^H M - I."""
    m = np.asarray(m)
    return float(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0]))))


def specialize(p: LaurentPoly, omega: float) -> complex:
    """Evaluate at s = exp(i omega / 2), one exact phase per exponent."""
    return complex(sum(c * np.exp(0.5j * e * omega) for e, c in p.terms.items()))


def specialize_matrix(m: LaurentMatrix, omega: float) -> np.ndarray:
    return np.array([[specialize(p, omega) for p in row] for row in m.rows], dtype=np.complex128)


@dataclass(frozen=True)
class SpecializedForm:
    omega: float
    J: np.ndarray
    lambda_plus: float   # 2cos(omega/2) - 1
    lambda_minus: float  # 2cos(omega/2) + 1

    @property
    def positive_definite(self) -> bool:
        return self.lambda_plus > POSITIVITY_FLOOR and self.lambda_minus > POSITIVITY_FLOOR


def squier_form_at(omega: float) -> SpecializedForm:
    c = 2.0 * math.cos(0.5 * omega)
    J = np.array([[c, -1.0], [-1.0, c]])
    return SpecializedForm(float(omega), J, c - 1.0, c + 1.0)


def in_window(omega: float) -> bool:
    """True where J(omega) is positive definite.

    J depends on omega/2, so this is |omega| < 2pi/3 modulo 4pi; on
    [0, 2pi) it is the half-open interval [0, 2pi/3).
    """
    return squier_form_at(omega).positive_definite


def cholesky_2x2(form: SpecializedForm) -> np.ndarray:
    """Upper-triangular R with positive diagonal and J = R^H R.

    Fixing the diagonal positive selects the branch that varies smoothly
    with omega across the whole positivity window.
    """
    if not form.positive_definite:
        raise NotPositiveDefinite(form.omega)
    a, b, d = form.J[0, 0], form.J[0, 1], form.J[1, 1]
    r11 = math.sqrt(a)
    r12 = b / r11
    r22 = math.sqrt(d - r12 * r12)
    return np.array([[r11, r12], [0.0, r22]], dtype=np.complex128)


def _upper_inverse(r: np.ndarray) -> np.ndarray:
    r11, r12, r22 = r[0, 0], r[0, 1], r[1, 1]
    return np.array([[1.0 / r11, -r12 / (r11 * r22)], [0.0, 1.0 / r22]], dtype=np.complex128)


def unitarize_matrix(beta: np.ndarray, omega: float) -> np.ndarray:
    """R beta R^-1 for an already-specialized J-unitary matrix."""
    r = cholesky_2x2(squier_form_at(omega))
    if np.array_equal(beta, np.eye(2)):
        return np.eye(2, dtype=np.complex128)
    return r @ beta @ _upper_inverse(r)


def unitarize(w, omega: float, symbolic: LaurentMatrix | None = None) -> np.ndarray:
    """Euclidean unitary image of a braid word at ``omega``.

    ``symbolic`` lets callers pass a precomputed Squier matrix of ``w``.
    """
    if symbolic is None:
        symbolic = evaluate_word(w, SQUIER)
    return unitarize_matrix(specialize_matrix(symbolic, omega), omega)


def squier_generators_at(omega: float) -> tuple[np.ndarray, np.ndarray]:
    return (specialize_matrix(burau_generator(1, SQUIER), omega),
            specialize_matrix(burau_generator(2, SQUIER), omega))


def j_unitarity_errors(omega: float) -> tuple[float, float]:
    """Max-norm of beta_i^H J beta_i - J for i = 1, 2 at ``omega``."""
    J = squier_form_at(omega).J
    return tuple(float(np.max(np.abs(b.conj().T @ J @ b - J))) for b in squier_generators_at(omega))


@dataclass(frozen=True)
class PhaseList:
    phases: np.ndarray  # sorted, in [0, 2pi)

    @property
    def arc(self) -> float:
        return shortest_arc(self)

    def __len__(self):
        return len(self.phases)


def _check_unitary(u: np.ndarray, tol: float = PRECONDITION_TOL):
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise NotUnitary(f"expected a square matrix, got shape {u.shape}")
    err = unitarity_error(u)
    if err > tol:
        raise NotUnitary(f"unitarity error {err:.3e} exceeds {tol:.0e}")


def eigenvalues_2x2(u: np.ndarray) -> np.ndarray:
    """Closed-form eigenvalues of a 2x2 unitary from trace and determinant.

    Divides out a square root of the determinant to land in SU(2), where the
    eigenvalues are exp(+-i phi) with cos(phi) = Re(tr)/2. ``phi`` is taken
    from atan2 so it stays accurate near degeneracy.
    """
    det = u[0, 0] * u[1, 1] - u[0, 1] * u[1, 0]
    half = 0.5 * np.angle(det)
    v = u * np.exp(-1j * half)
    c = 0.5 * (v[0, 0] + v[1, 1]).real
    resid = v - c * np.eye(2)
    sin_phi = math.sqrt(float(np.sum(np.abs(resid) ** 2)) / 2.0)
    phi = math.atan2(sin_phi, c)
    return np.exp(1j * np.array([half + phi, half - phi]))


def eigenvalues(u: np.ndarray, check: bool = True) -> np.ndarray:
    u = np.asarray(u, dtype=np.complex128)
    if check:
        _check_unitary(u)
    if u.shape[0] == 2:
        eigs = eigenvalues_2x2(u)
    else:
        eigs, ok = _kernels.eigvals_qr(u)
        if not ok:
            raise NoConvergence(f"QR iteration did not converge for a {u.shape[0]}x{u.shape[0]} matrix")
    if np.max(np.abs(np.abs(eigs) - 1.0)) > MODULUS_TOL:
        raise NoConvergence("eigenvalue off the unit circle; eigen-solver is inaccurate")
    return eigs


def eigenphases(u: np.ndarray) -> PhaseList:
    """Sorted eigenphases in [0, 2pi) of a unitary matrix."""
    return PhaseList(_kernels.wrap_phases(eigenvalues(u)))


def shortest_arc(phases) -> float:
    """Length of the smallest closed arc holding every phase.

    Accepts a ``PhaseList`` or any sequence of real angles (any branch).
    """
    ph = phases.phases if isinstance(phases, PhaseList) else np.asarray(phases, dtype=np.float64)
    if ph.size == 0:
        raise EmptySpectrum("shortest arc of an empty spectrum")
    wrapped = np.sort(np.mod(ph, TWO_PI))
    wrapped[wrapped >= TWO_PI] = 0.0
    return float(_kernels.arc_from_sorted(np.sort(wrapped)))


def principal_spread(u: np.ndarray) -> float:
    """max - min of eigenphases taken on the principal branch (-pi, pi].

    Diagnostic only: unlike the shortest arc it jumps when an eigenvalue
    crosses -1, and it can exceed pi.
    """
    return float(_kernels.principal_spread(eigenvalues(u)))


def helstrom_from_arc(arc: float) -> float:
    return 0.5 * (1.0 + math.sin(0.5 * min(arc, math.pi)))


def helstrom(u0: np.ndarray, u1: np.ndarray) -> float:
    """Optimal single-shot equal-prior success for telling u0 from u1."""
    u0 = np.asarray(u0, dtype=np.complex128)
    u1 = np.asarray(u1, dtype=np.complex128)
    if u0.shape != u1.shape:
        raise ValueError(f"dimension mismatch: {u0.shape} vs {u1.shape}")
    _check_unitary(u0)
    _check_unitary(u1)
    v = u0.conj().T @ u1
    return helstrom_from_arc(shortest_arc(eigenphases(v)))


def batch_arcs(stack: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Shortest arcs and principal spreads for a stack of unitaries."""
    stack = np.ascontiguousarray(stack, dtype=np.complex128)
    arcs, spreads, ok = _kernels.arcs_batch(stack)
    if not np.all(ok):
        bad = int(np.flatnonzero(~ok)[0])
        raise NoConvergence(f"QR iteration did not converge for stack entry {bad}")
    return arcs, spreads
