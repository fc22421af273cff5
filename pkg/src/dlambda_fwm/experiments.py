"""Parameter sweeps, named scenario presets and dataset emission.

The fig* presets bundle the parameter sets of the standard demonstration
scenarios: fig2a/fig2b are slow-light pulse runs (driving field off) in
the low- and high-density regimes, fig3*/fig4* are steady-state sweeps of
driving strength (a) or two-photon detuning (b) in the same two regimes,
and fig5a/b/c are pulsed conversion runs at three detunings.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from ._version import __version__
from .errors import DomainError, FwmError, RegimeError, ScanRangeError
from .params import (DetuningSet, DriveParams, MediumParams, SteadyResult,
                     TWO_PI, gamma_to_khz, khz_to_gamma)
from .steady_analytic import steady_closed_form
from .steady_numeric import transfer_solve
from .dynamics import PulseSpec

SWEEP_VARIABLES = ("omega_d", "delta", "delta_p", "alpha")
#: sweep-axis unit per variable (detunings scan in kHz, the rest in Gamma)
VARIABLE_UNITS = {"omega_d": "Gamma", "delta": "kHz",
                  "delta_p": "kHz", "alpha": "dimensionless"}

BANDWIDTH_STEP = 0.002
BANDWIDTH_HALF_RANGE = 2.0


@dataclass(frozen=True)
class SweepSpec:
    variable: str
    grid: np.ndarray
    medium: MediumParams
    drive: DriveParams
    detuning: DetuningSet
    solver: str = "exact"

    def __post_init__(self):
        if self.variable not in SWEEP_VARIABLES:
            raise DomainError(f"unknown sweep variable {self.variable!r}")
        if self.solver not in ("exact", "closed_form"):
            raise DomainError(f"unknown solver {self.solver!r}")
        g = np.asarray(self.grid, dtype=float)
        if g.size == 0:
            raise DomainError("sweep grid is empty")
        if g.size > 1 and not (np.all(np.diff(g) > 0) or np.all(np.diff(g) < 0)):
            raise DomainError("sweep grid must be strictly monotonic")
        object.__setattr__(self, "grid", g)


@dataclass(frozen=True)
class SweepResult:
    """Rows of (value, transmittance, ce, loss) plus a metadata echo."""

    rows: tuple
    metadata: dict


@dataclass(frozen=True)
class PeakResult:
    value: float
    ce: float
    boundary: bool


@dataclass(frozen=True)
class FigurePreset:
    name: str
    medium: MediumParams
    drive: DriveParams
    detuning: DetuningSet
    kind: str                       # "sweep" or "pulse"
    sweep: Optional[SweepSpec] = None
    pulse: Optional[PulseSpec] = None


def _point_params(s: SweepSpec, value: float):
    m, d, det = s.medium, s.drive, s.detuning
    if s.variable == "omega_d":
        return m, replace(d, omega_d=float(value)), det
    if s.variable == "delta":
        return m, d, replace(det, delta=khz_to_gamma(value, m.gamma_phys))
    if s.variable == "delta_p":
        return m, d, replace(det, delta_p=khz_to_gamma(value, m.gamma_phys))
    return replace(m, alpha=float(value)), d, det


def _solve_point(m, d, det, solver) -> SteadyResult:
    if solver == "exact":
        return transfer_solve(d, det, m)
    if d.omega_c != d.omega_d:
        raise RegimeError(
            f"closed form needs balanced drives, got omega_c={d.omega_c}, "
            f"omega_d={d.omega_d}")
    if det.delta_p != 0.0 or det.Delta != 0.0:
        raise RegimeError(
            "closed form needs one- and three-photon resonance "
            f"(delta_p={det.delta_p}, Delta={det.Delta})")
    return steady_closed_form(m, d.omega_c, det.delta)


def metadata_echo(m: MediumParams, d: DriveParams, det: DetuningSet) -> dict:
    """Full parameter set in config-file units, insertion-ordered."""
    return {
        "alpha": m.alpha,
        "gamma21": m.gamma21,
        "gamma31": m.gamma31,
        "gamma41": m.gamma41,
        "gamma_phys_mhz": m.gamma_phys / (TWO_PI * 1e6),
        "delta_kL_pi": m.delta_kL / math.pi,
        "omega_c": d.omega_c,
        "omega_d": d.omega_d,
        "omega_p0": abs(d.omega_p0),
        "delta_khz": gamma_to_khz(det.delta, m.gamma_phys),
        "delta_p_khz": gamma_to_khz(det.delta_p, m.gamma_phys),
        "Delta_khz": gamma_to_khz(det.Delta, m.gamma_phys),
    }


def run_sweep(s: SweepSpec) -> SweepResult:
    rows = []
    for value in s.grid:
        m, d, det = _point_params(s, value)
        try:
            r = _solve_point(m, d, det, s.solver)
        except FwmError as exc:
            raise type(exc)(f"at {s.variable}={value:g}: {exc}") from exc
        rows.append((float(value), r.transmittance, r.ce, r.loss))
    meta = metadata_echo(s.medium, s.drive, s.detuning)
    meta["solver"] = s.solver
    meta["variable"] = s.variable
    meta["unit"] = VARIABLE_UNITS[s.variable]
    return SweepResult(rows=tuple(rows), metadata=meta)


def find_peak(r: SweepResult) -> PeakResult:
    """Grid argmax of ce with three-point parabolic refinement.

    Boundary maxima are returned unrefined with the boundary flag set.
    """
    rows = r.rows
    if len(rows) < 3:
        raise DomainError(f"need >= 3 rows to locate a peak, got {len(rows)}")
    ces = [row[2] for row in rows]
    i = max(range(len(ces)), key=ces.__getitem__)
    if i == 0 or i == len(rows) - 1:
        return PeakResult(value=rows[i][0], ce=ces[i], boundary=True)
    x0, x1, x2 = rows[i - 1][0], rows[i][0], rows[i + 1][0]
    y0, y1, y2 = ces[i - 1], ces[i], ces[i + 1]
    num = (x1 - x0) ** 2 * (y1 - y2) - (x1 - x2) ** 2 * (y1 - y0)
    den = (x1 - x0) * (y1 - y2) - (x1 - x2) * (y1 - y0)
    if den == 0.0:                      # flat triple; keep the grid point
        return PeakResult(value=x1, ce=y1, boundary=False)
    xs = x1 - 0.5 * num / den
    # evaluate the interpolating parabola at the vertex
    l0 = (xs - x1) * (xs - x2) / ((x0 - x1) * (x0 - x2))
    l1 = (xs - x0) * (xs - x2) / ((x1 - x0) * (x1 - x2))
    l2 = (xs - x0) * (xs - x1) / ((x2 - x0) * (x2 - x1))
    return PeakResult(value=xs, ce=y0 * l0 + y1 * l1 + y2 * l2,
                      boundary=False)


def bandwidth_fwhm(m: MediumParams, d: DriveParams, det_base: DetuningSet,
                   step: float = BANDWIDTH_STEP,
                   half_range: float = BANDWIDTH_HALF_RANGE) -> float:
    """Conversion bandwidth: FWHM of ce against a probe-frequency scan.

    Shifting the probe frequency by x moves every detuning that contains
    it, so the scan evaluates ce at (delta + x, delta_p + x, Delta + x)
    with the exact solver, on a grid of the given step (Gamma units).
    The FWHM is taken from linear interpolation of the half-maximum
    crossings and returned in MHz.  The base point should sit near the
    conversion maximum.

    Raises ScanRangeError when ce never falls below half maximum inside
    [-half_range, +half_range] (including the degenerate alpha -> 0 case
    where there is no conversion peak at all).
    """
    n = int(round(2.0 * half_range / step))
    xs = np.linspace(-half_range, half_range, n + 1)
    ys = np.empty_like(xs)
    for k, x in enumerate(xs):
        det = DetuningSet(delta=det_base.delta + x,
                          delta_p=det_base.delta_p + x,
                          Delta=det_base.Delta + x)
        ys[k] = transfer_solve(d, det, m).ce
    peak = float(ys.max())
    if peak <= 0.0:
        raise ScanRangeError("no conversion peak: ce is identically zero")
    half = peak / 2.0
    above = np.nonzero(ys >= half)[0]
    lo, hi = above[0], above[-1]
    if lo == 0 or hi == len(xs) - 1:
        raise ScanRangeError(
            f"ce never falls below half max within +-{half_range} Gamma")

    def crossing(i_out, i_in):
        return xs[i_out] + (half - ys[i_out]) * (xs[i_in] - xs[i_out]) \
            / (ys[i_in] - ys[i_out])

    width = crossing(hi + 1, hi) - crossing(lo - 1, lo)
    return width * m.gamma_phys / (TWO_PI * 1e6)


# ---------------------------------------------------------------------------
# presets
# ---------------------------------------------------------------------------

_DELTA_GRID_KHZ = np.linspace(-200.0, 150.0, 71)        # 5 kHz steps
_OMEGA_D_GRID = np.linspace(0.1, 2.5, 49)               # 0.05 Gamma steps

_MOT = dict(alpha=45.0, gamma21=2e-4, delta_kL=0.447 * math.pi)
_DENSE = dict(alpha=130.0, gamma21=7e-4, delta_kL=0.134 * math.pi)


def figure_preset(name: str) -> FigurePreset:
    """Named scenario bundles (fig2a..fig5c); see the module docstring."""
    pulse_30us = PulseSpec(shape="gaussian", duration=30e-6)
    if name == "fig2a":
        m = MediumParams(**_MOT)
        d = DriveParams(omega_c=0.6, omega_d=0.0)
        return FigurePreset(name, m, d, DetuningSet(), "pulse",
                            pulse=pulse_30us)
    if name == "fig2b":
        m = MediumParams(**_DENSE)
        d = DriveParams(omega_c=1.2, omega_d=0.0)
        return FigurePreset(name, m, d, DetuningSet(), "pulse",
                            pulse=pulse_30us)
    if name in ("fig3a", "fig3b"):
        m = MediumParams(**_MOT)
        d = DriveParams(omega_c=0.6, omega_d=0.6)
        det = DetuningSet(delta=khz_to_gamma(-54.0, m.gamma_phys))
        if name == "fig3a":
            sweep = SweepSpec("omega_d", _OMEGA_D_GRID, m, d, det)
        else:
            sweep = SweepSpec("delta", _DELTA_GRID_KHZ, m, d, det)
        return FigurePreset(name, m, d, det, "sweep", sweep=sweep)
    if name in ("fig4a", "fig4b"):
        m = MediumParams(**_DENSE)
        d = DriveParams(omega_c=1.2, omega_d=1.2)
        det = DetuningSet(delta=khz_to_gamma(-27.0, m.gamma_phys))
        if name == "fig4a":
            sweep = SweepSpec("omega_d", _OMEGA_D_GRID, m, d, det)
        else:
            sweep = SweepSpec("delta", _DELTA_GRID_KHZ, m, d, det)
        return FigurePreset(name, m, d, det, "sweep", sweep=sweep)
    if name in ("fig5a", "fig5b", "fig5c"):
        m = MediumParams(**_DENSE)
        d = DriveParams(omega_c=1.2, omega_d=1.2)
        delta_khz = {"fig5a": -27.0, "fig5b": 93.0, "fig5c": -147.0}[name]
        det = DetuningSet(delta=khz_to_gamma(delta_khz, m.gamma_phys))
        return FigurePreset(name, m, d, det, "pulse", pulse=pulse_30us)
    raise DomainError(f"unknown preset {name!r}")


PRESET_NAMES = ("fig2a", "fig2b", "fig3a", "fig3b", "fig4a", "fig4b",
                "fig5a", "fig5b", "fig5c")


# ---------------------------------------------------------------------------
# emission
# ---------------------------------------------------------------------------

def _fmt(x: float) -> str:
    return format(float(x), ".9g")


def _header_lines(meta: dict) -> list:
    lines = [f"# dlambda-fwm v{__version__}"]
    lines += [f"# {k}={_fmt(v) if isinstance(v, float) else v}"
              for k, v in meta.items()]
    return lines


def sweep_csv(r: SweepResult) -> str:
    lines = _header_lines(r.metadata)
    lines.append("value,transmittance,ce,loss")
    for row in r.rows:
        lines.append(",".join(_fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def pulse_csv(trace, meta: dict) -> str:
    lines = _header_lines(meta)
    lines.append("t_us,probe_in,probe_out,signal_out")
    for k in range(len(trace.t)):
        lines.append(",".join(_fmt(v) for v in (
            trace.t[k] * 1e6, trace.probe_in[k], trace.probe_out[k],
            trace.signal_out[k])))
    return "\n".join(lines) + "\n"


def sweep_object(r: SweepResult) -> dict:
    """Structured-object mirror of the CSV content."""
    return {
        "version": __version__,
        "metadata": dict(r.metadata),
        "columns": ["value", "transmittance", "ce", "loss"],
        "rows": [list(row) for row in r.rows],
    }


def pulse_object(trace, meta: dict) -> dict:
    return {
        "version": __version__,
        "metadata": dict(meta),
        "columns": ["t_us", "probe_in", "probe_out", "signal_out"],
        "rows": [[trace.t[k] * 1e6, float(trace.probe_in[k]),
                  float(trace.probe_out[k]), float(trace.signal_out[k])]
                 for k in range(len(trace.t))],
    }
