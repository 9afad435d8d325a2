"""Omega-grid sweeps, the CSV record format, extremum search and validation."""
from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .config import RunConfig
from .device import DeviceConfig, on_control, switch_matrix
from .numerics import (
    TWO_PI,
    batch_arcs,
    helstrom_from_arc,
    in_window,
    j_unitarity_errors,
    specialize_matrix,
    unitarity_error,
    unitarize_matrix,
)

HEADER = ("omega", "j_err_1", "j_err_2", "euclid_err", "arc_switch", "arc_test",
          "p_switch", "p_test", "p_fixed", "gap_switch", "gap_test", "in_window")


@dataclass(frozen=True)
class SweepRow:
    omega: float
    j_err_1: float
    j_err_2: float
    euclid_err: float | None
    arc_switch: float
    arc_test: float | None
    p_switch: float
    p_test: float | None
    p_fixed: float
    gap_switch: float
    gap_test: float | None
    in_window: bool


def success_from_arc(arc: float, arc_mode: str = "shortest") -> float:
    """Helstrom success for a spectral arc.

    ``principal`` feeds the raw principal-branch spread through
    1/2 (1 + sin(x/2)) without clamping at pi. It is not an optimal
    discrimination probability; it exists to compare against curves
    produced that way.
    """
    if arc_mode == "principal":
        return 0.5 * (1.0 + math.sin(0.5 * arc))
    return helstrom_from_arc(arc)


def fixed_ceiling(device: DeviceConfig, arc_mode: str = "shortest") -> float:
    arcs, spreads = batch_arcs(np.stack([device.targets.AB, device.targets.BA]))
    vals = arcs if arc_mode == "shortest" else spreads
    return max(success_from_arc(a, arc_mode) for a in vals)


def _row_matrices(device: DeviceConfig, omega: float):
    """Switch, test device (or None) and the worst mixer unitarity error."""
    s = switch_matrix(device.targets, device.phase_map(omega))
    if not in_window(omega):
        return s, None, None
    m_pre = unitarize_matrix(specialize_matrix(device.beta_pre, omega), omega)
    m_post = unitarize_matrix(specialize_matrix(device.beta_post, omega), omega)
    t = on_control(m_post) @ s @ on_control(m_pre)
    return s, t, max(unitarity_error(m_pre), unitarity_error(m_post))


def _compute_chunk(device: DeviceConfig, omegas: np.ndarray, arc_mode: str, pf: float) -> list[SweepRow]:
    mats = []
    euclid = []
    for k, omega in enumerate(omegas):
        s, t, err = _row_matrices(device, float(omega))
        mats.append(s)
        if t is not None:
            mats.append(t)
        euclid.append(err)
    arcs, spreads = batch_arcs(np.stack(mats))
    measure = arcs if arc_mode == "shortest" else spreads

    rows = []
    pos = 0
    for k, omega in enumerate(omegas):
        omega = float(omega)
        j1, j2 = j_unitarity_errors(omega)
        a_sw = float(measure[pos])
        pos += 1
        p_sw = success_from_arc(a_sw, arc_mode)
        a_t = p_t = g_t = None
        if euclid[k] is not None:
            a_t = float(measure[pos])
            pos += 1
            p_t = success_from_arc(a_t, arc_mode)
            g_t = p_t - pf
        rows.append(SweepRow(omega, j1, j2, euclid[k], a_sw, a_t, p_sw, p_t, pf, p_sw - pf, g_t,
                             euclid[k] is not None))
    return rows


def run_sweep(cfg: RunConfig | DeviceConfig, omegas=None, jobs: int = 1, arc_mode: str | None = None) -> list[SweepRow]:
    """One row per grid point, in grid order.

    Rows are computed independently, so ``jobs`` only changes wall time,
    never the numbers.
    """
    if isinstance(cfg, RunConfig):
        device, mode = cfg.device, cfg.arc_mode
    else:
        device, mode = cfg, "shortest"
    mode = arc_mode or mode
    omegas = device.grid.values() if omegas is None else np.asarray(omegas, dtype=np.float64)
    pf = fixed_ceiling(device, mode)
    if jobs <= 1 or len(omegas) < 2 * jobs:
        return _compute_chunk(device, omegas, mode, pf)
    chunks = np.array_split(omegas, jobs)
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        parts = list(pool.map(lambda c: _compute_chunk(device, c, mode, pf), chunks))
    return [row for part in parts for row in part]


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    return format(float(value), ".17g")


def rows_to_csv(rows: list[SweepRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(HEADER)
    for row in rows:
        writer.writerow([_fmt(getattr(row, name)) for name in HEADER])
    return buf.getvalue()


def write_csv(rows: list[SweepRow], path) -> None:
    Path(path).write_text(rows_to_csv(rows))


class CsvFormatError(ValueError):
    pass


def _parse_field(name: str, text: str):
    if name == "in_window":
        if text not in ("true", "false"):
            raise CsvFormatError(f"in_window must be true/false, got {text!r}")
        return text == "true"
    if text == "":
        return None
    return float(text)


def read_csv(path) -> list[SweepRow]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = tuple(next(reader, ()))
        if header != HEADER:
            raise CsvFormatError(f"unexpected header {header!r}")
        rows = []
        for lineno, rec in enumerate(reader, 2):
            if len(rec) != len(HEADER):
                raise CsvFormatError(f"line {lineno}: expected {len(HEADER)} fields, got {len(rec)}")
            try:
                rows.append(SweepRow(*(_parse_field(n, t) for n, t in zip(HEADER, rec))))
            except ValueError as exc:
                raise CsvFormatError(f"line {lineno}: {exc}") from None
    return rows


def validate_rows(rows: list[SweepRow], tol: float = 1e-15) -> list[str]:
    """Return a list of invariant violations (empty when the file is sound)."""
    problems = []
    test_fields = ("euclid_err", "arc_test", "p_test", "gap_test")
    for k, row in enumerate(rows):
        where = f"row {k} (omega={row.omega!r})"
        if row.omega is None or not (0.0 <= row.omega < TWO_PI):
            problems.append(f"{where}: omega outside [0, 2pi)")
            continue
        if row.in_window != in_window(row.omega):
            problems.append(f"{where}: in_window flag disagrees with J(omega)")
        for name in ("j_err_1", "j_err_2", "arc_switch", "p_switch", "p_fixed", "gap_switch"):
            if getattr(row, name) is None:
                problems.append(f"{where}: {name} is empty")
        if any(getattr(row, n) is None for n in ("p_switch", "p_fixed", "gap_switch")):
            continue
        if row.in_window:
            if any(getattr(row, n) is None for n in test_fields):
                problems.append(f"{where}: in-window row has empty test-device fields")
                continue
        elif any(getattr(row, n) is not None for n in test_fields):
            problems.append(f"{where}: out-of-window row carries test-device values")
        for name in ("p_switch", "p_test", "p_fixed"):
            v = getattr(row, name)
            if v is not None and not (0.5 - tol <= v <= 1.0 + tol):
                problems.append(f"{where}: {name}={v!r} outside [1/2, 1]")
        if abs(row.gap_switch - (row.p_switch - row.p_fixed)) > tol:
            problems.append(f"{where}: gap_switch != p_switch - p_fixed")
        if row.gap_test is not None and abs(row.gap_test - (row.p_test - row.p_fixed)) > tol:
            problems.append(f"{where}: gap_test != p_test - p_fixed")
    omegas = [r.omega for r in rows if r.omega is not None]
    if any(b <= a for a, b in zip(omegas, omegas[1:])):
        problems.append("rows are not in increasing omega order")
    return problems


@dataclass(frozen=True)
class Extremum:
    omega: float
    value: float
    uncertainty: float
    refined: bool


def _refine(omegas: np.ndarray, values: np.ndarray, k: int, sense: int, step: float) -> Extremum:
    """Three-point parabola through a strict interior grid extremum.

    Plateaus and kinks (common here: p saturates at 1) keep the grid value.
    """
    omega, value = float(omegas[k]), float(values[k])
    if 1 < k < len(values) - 2:
        y = values[k - 2:k + 3] * sense
        y0, y1, y2 = y[1], y[2], y[3]
        # a jump shows up as third differences as large as the second difference
        d2 = abs(y0 - 2 * y1 + y2)
        d3 = max(abs(y[3] - 3 * y[2] + 3 * y[1] - y[0]), abs(y[4] - 3 * y[3] + 3 * y[2] - y[1]))
        if y1 > y0 and y1 > y2 and d3 <= 0.25 * d2:
            h0 = omegas[k] - omegas[k - 1]
            h1 = omegas[k + 1] - omegas[k]
            if math.isclose(h0, h1, rel_tol=1e-9):
                denom = y0 - 2 * y1 + y2
                if denom < 0:
                    shift = 0.5 * h0 * (y0 - y2) / denom
                    peak = y1 - 0.25 * (y0 - y2) * shift / h0
                    if abs(shift) <= h0:
                        return Extremum(omega + shift, float(peak * sense), step, True)
    return Extremum(omega, value, step, False)


def window_series(rows: list[SweepRow], name: str) -> tuple[np.ndarray, np.ndarray]:
    sel = [r for r in rows if r.in_window and getattr(r, name) is not None]
    return np.array([r.omega for r in sel]), np.array([getattr(r, name) for r in sel])


def find_max(rows, name: str, step: float) -> Extremum | None:
    om, v = window_series(rows, name)
    if not len(v):
        return None
    return _refine(om, v, int(np.argmax(v)), +1, step)


def find_min(rows, name: str, step: float) -> Extremum | None:
    om, v = window_series(rows, name)
    if not len(v):
        return None
    return _refine(om, v, int(np.argmin(v)), -1, step)


def first_sign_change(rows, name: str, f=None, zero_tol: float = 1e-12, xtol: float = 1e-12):
    """Smallest omega in the window where the series changes sign.

    Exact-zero samples are skipped. With ``f`` (omega -> value) the bracket
    is narrowed by bisection; otherwise the bracket midpoint is returned.
    Returns ``None`` when the sign never changes.
    """
    om, v = window_series(rows, name)
    keep = np.abs(v) > zero_tol
    om, v = om[keep], v[keep]
    for k in range(len(v) - 1):
        if np.sign(v[k]) != np.sign(v[k + 1]):
            lo, hi = float(om[k]), float(om[k + 1])
            if f is None:
                return 0.5 * (lo + hi)
            flo = np.sign(v[k])
            for _ in range(200):
                if hi - lo <= xtol:
                    break
                mid = 0.5 * (lo + hi)
                fm = f(mid)
                if abs(fm) <= zero_tol:
                    return mid
                if np.sign(fm) == flo:
                    lo = mid
                else:
                    hi = mid
            return 0.5 * (lo + hi)
    return None


def svg_plot(rows: list[SweepRow], width: int = 640, height: int = 360) -> str:
    """Polyline chart of gap_switch and gap_test inside the window."""
    om_s, g_s = window_series(rows, "gap_switch")
    om_t, g_t = window_series(rows, "gap_test")
    if not len(om_s):
        raise ValueError("no in-window rows to plot")
    xs = np.concatenate([om_s, om_t])
    ys = np.concatenate([g_s, g_t, [0.0]])
    x0, x1 = float(xs.min()), float(xs.max())
    y0, y1 = float(ys.min()), float(ys.max())
    if x1 == x0:
        x1 = x0 + 1.0
    if y1 == y0:
        y1 = y0 + 1.0
    pad = 40

    def px(x):
        return pad + (x - x0) / (x1 - x0) * (width - 2 * pad)

    def py(y):
        return height - pad - (y - y0) / (y1 - y0) * (height - 2 * pad)

    def line(om, g, colour):
        pts = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in zip(om, g))
        return f'<polyline fill="none" stroke="{colour}" stroke-width="1.5" points="{pts}"/>'

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        f'<line x1="{pad}" y1="{py(0):.2f}" x2="{width - pad}" y2="{py(0):.2f}" stroke="#999" stroke-dasharray="4 3"/>',
        line(om_s, g_s, "#1f77b4"),
    ]
    if len(om_t):
        parts.append(line(om_t, g_t, "#d62728"))
    parts += [
        f'<text x="{pad}" y="{pad - 10}" font-size="12">gap_switch (blue), gap_test (red)</text>',
        f'<text x="{pad}" y="{height - 10}" font-size="12">omega {x0:.3f} .. {x1:.3f}</text>',
        f'<text x="{width - pad}" y="{height - 10}" font-size="12" text-anchor="end">gap {y0:.4f} .. {y1:.4f}</text>',
        "</svg>",
    ]
    return "\n".join(parts) + "\n"
