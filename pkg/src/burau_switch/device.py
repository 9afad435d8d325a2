"""Mixers, the order switch, the full test device and their witness gaps.

Tensor ordering is control (x) target throughout: the 4x4 switch is
block-diagonal with the BA block on control |0> and the AB block on |1>.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .braid import IDENTITY, BraidWord, as_word, parse_braid_word
from .laurent import SQUIER, LaurentMatrix, evaluate_word
from .numerics import (
    TWO_PI,
    UNITARY_TOL,
    NotUnitary,
    helstrom,
    helstrom_from_arc,
    shortest_arc,
    eigenphases,
    unitarity_error,
    unitarize,
)

I2 = np.eye(2, dtype=np.complex128)
I4 = np.eye(4, dtype=np.complex128)

_PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
}


def rotation(axis: str, angle: float) -> np.ndarray:
    """exp(-i angle/2 sigma_axis)."""
    try:
        pauli = _PAULI[axis.lower()]
    except KeyError:
        raise ValueError(f"axis must be x, y or z, got {axis!r}") from None
    return math.cos(0.5 * angle) * I2 - 1j * math.sin(0.5 * angle) * pauli


@dataclass(frozen=True)
class TargetPair:
    A: np.ndarray
    B: np.ndarray

    def __post_init__(self):
        for name in ("A", "B"):
            m = np.asarray(getattr(self, name), dtype=np.complex128)
            if m.shape != (2, 2):
                raise ValueError(f"target {name} must be 2x2, got {m.shape}")
            err = unitarity_error(m)
            if err > UNITARY_TOL:
                raise NotUnitary(f"target {name} has unitarity error {err:.3e}")
            object.__setattr__(self, name, m)

    @property
    def commutator_norm(self) -> float:
        return float(np.max(np.abs(self.A @ self.B - self.B @ self.A)))

    @property
    def AB(self) -> np.ndarray:
        return self.A @ self.B

    @property
    def BA(self) -> np.ndarray:
        return self.B @ self.A


def reference_targets() -> TargetPair:
    return TargetPair(rotation("x", 1.1), rotation("z", 0.9))


@dataclass(frozen=True)
class PhaseMap:
    """theta(omega) = slope * omega + offset, with a name for reporting."""

    kind: str = "identity"
    slope: float = 1.0
    offset: float = 0.0

    @classmethod
    def identity(cls):
        return cls("identity", 1.0, 0.0)

    @classmethod
    def constant(cls, c: float):
        return cls("constant", 0.0, float(c))

    @classmethod
    def linear(cls, a: float, b: float):
        return cls("linear", float(a), float(b))

    def __call__(self, omega: float) -> float:
        return self.slope * omega + self.offset

    def describe(self) -> str:
        if self.kind == "identity":
            return "identity"
        if self.kind == "constant":
            return f"constant {self.offset!r}"
        return f"linear {self.slope!r} {self.offset!r}"


@dataclass(frozen=True)
class Grid:
    omega_min: float = 0.0
    omega_max: float = TWO_PI
    points: int = 2001
    endpoint: bool = False

    def __post_init__(self):
        if self.points < 2:
            raise ValueError("a grid needs at least 2 points")
        if not (0.0 <= self.omega_min < self.omega_max <= TWO_PI):
            raise ValueError("grid must lie within [0, 2pi)")
        if self.endpoint and self.omega_max >= TWO_PI:
            raise ValueError("an inclusive grid must stop below 2pi")

    def values(self) -> np.ndarray:
        return np.linspace(self.omega_min, self.omega_max, self.points, endpoint=self.endpoint)

    @property
    def step(self) -> float:
        span = self.omega_max - self.omega_min
        return span / (self.points - 1 if self.endpoint else self.points)


PLACEMENTS = ("both", "pre", "post")


def placement_words(w: BraidWord, placement: str) -> tuple[BraidWord, BraidWord]:
    """(w_pre, w_post) for a single control word put on one or both sides."""
    if placement == "both":
        return w, w
    if placement == "pre":
        return w, IDENTITY
    if placement == "post":
        return IDENTITY, w
    raise ValueError(f"placement must be one of {PLACEMENTS}, got {placement!r}")


@dataclass(frozen=True)
class DeviceConfig:
    targets: TargetPair = field(default_factory=reference_targets)
    w_pre: BraidWord = field(default_factory=lambda: parse_braid_word("1 2 1"))
    w_post: BraidWord = field(default_factory=lambda: parse_braid_word("1 2 1"))
    phase_map: PhaseMap = field(default_factory=PhaseMap.identity)
    grid: Grid = field(default_factory=Grid)

    def __post_init__(self):
        object.__setattr__(self, "w_pre", as_word(self.w_pre))
        object.__setattr__(self, "w_post", as_word(self.w_post))

    @cached_property
    def beta_pre(self) -> LaurentMatrix:
        return evaluate_word(self.w_pre, SQUIER)

    @cached_property
    def beta_post(self) -> LaurentMatrix:
        return evaluate_word(self.w_post, SQUIER)

    def with_placement(self, w, placement: str) -> DeviceConfig:
        pre, post = placement_words(as_word(w), placement)
        return DeviceConfig(self.targets, pre, post, self.phase_map, self.grid)


def reference_config(placement: str = "both") -> DeviceConfig:
    return DeviceConfig().with_placement("1 2 1", placement)


def mixer(w, omega: float, symbolic: LaurentMatrix | None = None) -> np.ndarray:
    return unitarize(w, omega, symbolic)


def switch_matrix(targets: TargetPair, theta: float) -> np.ndarray:
    s = np.zeros((4, 4), dtype=np.complex128)
    s[:2, :2] = targets.BA
    s[2:, 2:] = np.exp(1j * theta) * targets.AB
    return s


def on_control(m: np.ndarray) -> np.ndarray:
    return np.kron(m, I2)


def test_device(cfg: DeviceConfig, omega: float) -> np.ndarray:
    """(M_post (x) I) S(theta(omega)) (M_pre (x) I)."""
    m_pre = mixer(cfg.w_pre, omega, cfg.beta_pre)
    m_post = mixer(cfg.w_post, omega, cfg.beta_post)
    return on_control(m_post) @ switch_matrix(cfg.targets, cfg.phase_map(omega)) @ on_control(m_pre)


test_device.__test__ = False  # keep pytest from collecting the re-export


def p_fixed(targets: TargetPair, tol: float = 1e-10) -> float:
    """Fixed-order ceiling max(p*(I, AB), p*(I, BA)).

    AB and BA are similar, so both orders must give the same value.
    """
    p_ab = helstrom(I2, targets.AB)
    p_ba = helstrom(I2, targets.BA)
    if abs(p_ab - p_ba) > tol:
        raise ArithmeticError(f"p*(I,AB)={p_ab!r} and p*(I,BA)={p_ba!r} disagree")
    return max(p_ab, p_ba)


def p_fixed_closed_form(targets: TargetPair) -> float:
    """Same ceiling from the SU(2) trace: cos(phi) = Re tr(AB e^{-i arg det/2}) / 2."""
    ab = targets.AB
    det = np.linalg.det(ab)
    c = (np.trace(ab) * np.exp(-0.5j * np.angle(det))).real / 2.0
    phi = math.acos(max(-1.0, min(1.0, abs(c))))
    return helstrom_from_arc(2.0 * phi)


def arc_switch(cfg: DeviceConfig, omega: float) -> float:
    return shortest_arc(eigenphases(switch_matrix(cfg.targets, cfg.phase_map(omega))))


def arc_test(cfg: DeviceConfig, omega: float) -> float:
    return shortest_arc(eigenphases(test_device(cfg, omega)))


def p_switch(cfg: DeviceConfig, omega: float) -> float:
    return helstrom(I4, switch_matrix(cfg.targets, cfg.phase_map(omega)))


def p_test(cfg: DeviceConfig, omega: float) -> float:
    return helstrom(I4, test_device(cfg, omega))


def gap_switch(cfg: DeviceConfig, omega: float) -> float:
    return p_switch(cfg, omega) - p_fixed(cfg.targets)


def gap_test(cfg: DeviceConfig, omega: float) -> float:
    return p_test(cfg, omega) - p_fixed(cfg.targets)


def fixed_order_devices(targets: TargetPair) -> tuple[np.ndarray, np.ndarray]:
    """I (x) BA and I (x) AB: both orders with no coherent control."""
    return np.kron(I2, targets.BA), np.kron(I2, targets.AB)
