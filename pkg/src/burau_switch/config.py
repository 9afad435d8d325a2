"""Flat ``key = value`` run-configuration files.

Recognised keys (all optional; defaults reproduce the reference experiment)::

    a.axis = x            # rotation target ...
    a.angle = 1.1
    b.matrix = 1 0 0 -1   # ... or four complex entries, row-major
    w = 1 2 1             # control word, placed according to `placement`
    placement = both      # both | pre | post
    w_pre = 1 2 1         # explicit words override `w` / `placement`
    w_post =
    theta = identity      # identity | constant C | linear A B
    grid.min = 0
    grid.max = 2*pi
    grid.points = 2001
    grid.endpoint = false
    arc = shortest        # shortest | principal
    output = sweep.csv

Numeric values accept arithmetic on literals and ``pi``/``tau``.
Lines starting with ``#`` and blank lines are ignored.
"""
from __future__ import annotations

import ast
import math
import operator
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .braid import BraidSyntaxError, BraidWord, parse_braid_word
from .device import PLACEMENTS, DeviceConfig, Grid, PhaseMap, TargetPair, placement_words, rotation

ARC_MODES = ("shortest", "principal")

KNOWN_KEYS = {
    "a.axis", "a.angle", "a.matrix", "b.axis", "b.angle", "b.matrix",
    "w", "placement", "w_pre", "w_post", "theta",
    "grid.min", "grid.max", "grid.points", "grid.endpoint",
    "arc", "output",
}


class ConfigError(ValueError):
    pass


_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
           ast.Div: operator.truediv, ast.Pow: operator.pow}
_NAMES = {"pi": math.pi, "tau": 2 * math.pi}


def parse_number(text: str) -> float:
    """Evaluate a small arithmetic expression such as ``2*pi/3 - 1e-6``."""

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id in _NAMES:
            return _NAMES[node.id]
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        raise ConfigError(f"unsupported expression {text!r}")

    try:
        value = ev(ast.parse(text.strip(), mode="eval"))
    except (SyntaxError, ZeroDivisionError) as exc:
        raise ConfigError(f"cannot read number {text!r}: {exc}") from None
    if not math.isfinite(value):
        raise ConfigError(f"number {text!r} is not finite")
    return value


def _parse_bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"expected a boolean, got {text!r}")


def _parse_matrix(text: str) -> np.ndarray:
    tokens = text.replace(",", " ").split()
    if len(tokens) != 4:
        raise ConfigError(f"matrix needs 4 complex entries, got {len(tokens)}")
    try:
        vals = [complex(t) for t in tokens]
    except ValueError as exc:
        raise ConfigError(f"bad complex entry in {text!r}: {exc}") from None
    if not all(math.isfinite(v.real) and math.isfinite(v.imag) for v in vals):
        raise ConfigError("matrix entries must be finite")
    return np.array(vals, dtype=np.complex128).reshape(2, 2)


def _parse_theta(text: str) -> PhaseMap:
    parts = text.split()
    if not parts:
        raise ConfigError("empty theta spec")
    kind, args = parts[0].lower(), parts[1:]
    if kind == "identity" and not args:
        return PhaseMap.identity()
    if kind == "constant" and len(args) == 1:
        return PhaseMap.constant(parse_number(args[0]))
    if kind == "linear" and len(args) == 2:
        return PhaseMap.linear(parse_number(args[0]), parse_number(args[1]))
    raise ConfigError(f"theta must be 'identity', 'constant C' or 'linear A B', got {text!r}")


def _parse_word(key: str, text: str) -> BraidWord:
    try:
        return parse_braid_word(text)
    except BraidSyntaxError as exc:
        raise ConfigError(f"{key}: {exc}") from None


@dataclass(frozen=True)
class RunConfig:
    device: DeviceConfig = field(default_factory=DeviceConfig)
    word: BraidWord = field(default_factory=lambda: parse_braid_word("1 2 1"))
    placement: str = "both"
    explicit_words: bool = False
    arc_mode: str = "shortest"
    output: Path | None = None

    def with_placement(self, placement: str) -> RunConfig:
        """Re-place the control word; explicit pre/post words win."""
        if placement not in PLACEMENTS:
            raise ConfigError(f"placement must be one of {PLACEMENTS}")
        if self.explicit_words:
            return replace(self, placement=placement)
        return replace(self, placement=placement, device=self.device.with_placement(self.word, placement))

    def with_points(self, points: int) -> RunConfig:
        g = self.device.grid
        try:
            grid = Grid(g.omega_min, g.omega_max, points, g.endpoint)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        return replace(self, device=replace(self.device, grid=grid))


def parse_config_text(text: str) -> RunConfig:
    raw: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, value = (s.strip() for s in stripped.split("=", 1))
        key = key.lower()
        if key not in KNOWN_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in raw:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        raw[key] = value
    return _build(raw)


def _target(raw, prefix: str, default_axis: str, default_angle: float) -> np.ndarray:
    if f"{prefix}.matrix" in raw:
        if f"{prefix}.axis" in raw or f"{prefix}.angle" in raw:
            raise ConfigError(f"give either {prefix}.matrix or {prefix}.axis/{prefix}.angle, not both")
        return _parse_matrix(raw[f"{prefix}.matrix"])
    axis = raw.get(f"{prefix}.axis", default_axis).lower()
    if axis not in ("x", "y", "z"):
        raise ConfigError(f"{prefix}.axis must be x, y or z")
    angle = parse_number(raw[f"{prefix}.angle"]) if f"{prefix}.angle" in raw else default_angle
    return rotation(axis, angle)


def _build(raw: dict[str, str]) -> RunConfig:
    try:
        targets = TargetPair(_target(raw, "a", "x", 1.1), _target(raw, "b", "z", 0.9))
    except ValueError as exc:
        raise ConfigError(str(exc)) from None

    placement = raw.get("placement", "both").lower()
    if placement not in PLACEMENTS:
        raise ConfigError(f"placement must be one of {PLACEMENTS}, got {placement!r}")
    word = _parse_word("w", raw.get("w", "1 2 1"))
    explicit = "w_pre" in raw or "w_post" in raw
    if explicit:
        if "w" in raw:
            raise ConfigError("use either w (+ placement) or w_pre/w_post")
        w_pre = _parse_word("w_pre", raw.get("w_pre", ""))
        w_post = _parse_word("w_post", raw.get("w_post", ""))
    else:
        w_pre, w_post = placement_words(word, placement)

    theta = _parse_theta(raw.get("theta", "identity"))

    gmin = parse_number(raw["grid.min"]) if "grid.min" in raw else 0.0
    gmax = parse_number(raw["grid.max"]) if "grid.max" in raw else 2 * math.pi
    endpoint = _parse_bool(raw["grid.endpoint"]) if "grid.endpoint" in raw else False
    try:
        points = int(raw.get("grid.points", "2001"))
    except ValueError:
        raise ConfigError(f"grid.points must be an integer, got {raw['grid.points']!r}") from None
    # treat a typed-out 2*pi as the open upper end
    if math.isclose(gmax, 2 * math.pi, rel_tol=0, abs_tol=1e-12):
        gmax = 2 * math.pi
    try:
        grid = Grid(gmin, gmax, points, endpoint)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None

    arc_mode = raw.get("arc", "shortest").lower()
    if arc_mode not in ARC_MODES:
        raise ConfigError(f"arc must be one of {ARC_MODES}")

    output = Path(raw["output"]) if raw.get("output") else None
    device = DeviceConfig(targets, w_pre, w_post, theta, grid)
    return RunConfig(device, word, placement, explicit, arc_mode, output)


def load_config(path) -> RunConfig:
    """Read a config file; raises ``OSError`` or ``ConfigError``."""
    return parse_config_text(Path(path).read_text())


def default_config_text() -> str:
    return (
        "# reference experiment: A = Rx(1.1), B = Rz(0.9), theta(omega) = omega\n"
        "a.axis = x\n"
        "a.angle = 1.1\n"
        "b.axis = z\n"
        "b.angle = 0.9\n"
        "w = 1 2 1\n"
        "placement = both\n"
        "theta = identity\n"
        "grid.min = 0\n"
        "grid.max = 2*pi\n"
        "grid.points = 2001\n"
        "grid.endpoint = false\n"
        "arc = shortest\n"
    )
