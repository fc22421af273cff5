"""Self-validation suite: every release-gating check in one place.

Each check_* function runs one acceptance check and returns a CheckResult
with a pass flag and a human-readable detail string; run_all() executes
the whole battery.  The CLI `validate` subcommand prints the table and
sets its exit status from the aggregate, and the test suite asserts each
check individually.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .dynamics import PulseSpec, energy_budget, group_delay, simulate_pulse
from .errors import FwmError
from .experiments import bandwidth_fwhm, figure_preset, find_peak, run_sweep
from .params import (DetuningSet, DriveParams, MediumParams, khz_to_gamma)
from .steady_analytic import eit_phase_shift, optimal_delta, steady_closed_form
from .steady_numeric import transfer_solve

EQUIVALENCE_SEED = 42
EQUIVALENCE_POINTS = 500
EQUIVALENCE_RTOL = 1e-8


@dataclass(frozen=True)
class CheckResult:
    number: int
    name: str
    passed: bool
    detail: str


def check_oracle_equivalence() -> CheckResult:
    """Closed form vs transfer matrix on a pseudo-random regime grid."""
    rng = np.random.default_rng(EQUIVALENCE_SEED)
    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(EQUIVALENCE_POINTS):
        alpha = rng.uniform(1.0, 200.0)
        omega = rng.uniform(0.2, 3.0)
        dkl = rng.uniform(-math.pi, math.pi)
        delta = rng.uniform(-0.05, 0.05)
        m = MediumParams(alpha=alpha, delta_kL=dkl)
        closed = steady_closed_form(m, omega, delta)
        oracle = transfer_solve(DriveParams(omega_c=omega, omega_d=omega),
                                DetuningSet(delta=delta), m)
        worst = max(
            worst,
            abs(closed.ce - oracle.ce) / max(oracle.ce, 1e-30),
            abs(closed.probe_out - oracle.probe_out)
            / max(abs(oracle.probe_out), 1e-30))
    elapsed = time.perf_counter() - t0
    ok = worst <= EQUIVALENCE_RTOL and elapsed < 5.0
    return CheckResult(1, "oracle-equivalence", ok,
                       f"worst rel err {worst:.3e} (limit 1e-08) over "
                       f"{EQUIVALENCE_POINTS} points in {elapsed:.2f}s "
                       "(limit 5s)")


def check_optimal_detuning() -> CheckResult:
    dense = optimal_delta(
        MediumParams(alpha=130.0, delta_kL=0.134 * math.pi), 1.2)
    mot = optimal_delta(
        MediumParams(alpha=45.0, delta_kL=0.447 * math.pi), 0.6)
    ok = (abs(dense.delta_khz - (-28.0)) <= 0.5
          and abs(dense.delta_khz - (-27.0)) <= 2.0
          and abs(mot.delta_khz - (-67.0)) <= 1.0
          and abs(mot.delta_khz - (-70.0)) <= 5.0)
    return CheckResult(2, "optimal-detuning", ok,
                       f"dense {dense.delta_khz:.2f} kHz (want -28.0+-0.5, "
                       f"within 2 of -27), MOT {mot.delta_khz:.2f} kHz "
                       "(want -67+-1, within 5 of -70)")


def check_peak_ce_dense() -> CheckResult:
    t0 = time.perf_counter()
    peak = max(row[2] for row in run_sweep(figure_preset("fig4b").sweep).rows)
    elapsed = time.perf_counter() - t0
    ok = abs(peak - 0.91) <= 0.03 and elapsed < 1.0
    return CheckResult(3, "peak-ce-dense", ok,
                       f"grid peak ce {peak:.4f} (want 0.91+-0.03) in "
                       f"{elapsed:.2f}s (limit 1s)")


def check_peak_ce_mot() -> CheckResult:
    peak = max(row[2] for row in run_sweep(figure_preset("fig3b").sweep).rows)
    ok = abs(peak - 0.814) <= 0.03
    return CheckResult(4, "peak-ce-mot", ok,
                       f"grid peak ce {peak:.4f} (want 0.814+-0.03)")


def check_phase_shifts() -> CheckResult:
    m = MediumParams(alpha=130.0, delta_kL=0.134 * math.pi)
    phi1 = eit_phase_shift(m, 1.2, khz_to_gamma(-27.0)) / math.pi
    phi2 = eit_phase_shift(m, 1.2, khz_to_gamma(-147.0)) / math.pi
    ok = abs(phi1 - (-0.129)) <= 0.005 and abs(phi2 - (-0.704)) <= 0.005
    return CheckResult(5, "phase-shift-estimates", ok,
                       f"phi(-27 kHz)={phi1:.4f} pi (want -0.129+-0.005), "
                       f"phi(-147 kHz)={phi2:.4f} pi (want -0.704+-0.005)")


def _delay_case(preset_name: str):
    pre = figure_preset(preset_name)
    t0 = time.perf_counter()
    trace = simulate_pulse(pre.medium, pre.drive, pre.detuning, pre.pulse)
    elapsed = time.perf_counter() - t0
    measured = group_delay(trace)
    expected = pre.medium.alpha / pre.drive.omega_c ** 2 / pre.medium.gamma_phys
    return measured, expected, elapsed


def check_slow_light_delay() -> CheckResult:
    d_a, e_a, t_a = _delay_case("fig2a")
    d_b, e_b, t_b = _delay_case("fig2b")
    ok = (abs(d_a - e_a) <= 0.1 * e_a and abs(d_b - e_b) <= 0.1 * e_b
          and t_a < 30.0 and t_b < 30.0)
    return CheckResult(6, "slow-light-delay", ok,
                       f"fig2a {d_a*1e6:.2f} us (want {e_a*1e6:.2f}+-10%, "
                       f"{t_a:.1f}s), fig2b {d_b*1e6:.2f} us (want "
                       f"{e_b*1e6:.2f}+-10%, {t_b:.1f}s; runtime limit 30s)")


def check_dynamics_steady_consistency() -> CheckResult:
    pre = figure_preset("fig4a")
    pulse = PulseSpec(shape="flat_top", duration=80e-6, ramp=10e-6,
                      t_start=20e-6, grid=(0.0, 150e-6, 12000))
    trace = simulate_pulse(pre.medium, pre.drive, pre.detuning, pulse)
    sel = (trace.t >= 60e-6) & (trace.t <= 90e-6)
    t_plateau = float(np.mean(trace.probe_out[sel]))
    ce_plateau = float(np.mean(trace.signal_out[sel]))
    steady = transfer_solve(pre.drive, pre.detuning, pre.medium)
    dt = abs(t_plateau - steady.transmittance) / max(steady.transmittance,
                                                     1e-12)
    dc = abs(ce_plateau - steady.ce) / steady.ce
    ok = dt <= 0.01 and dc <= 0.01
    return CheckResult(7, "dynamics-steady-consistency", ok,
                       f"plateau T {t_plateau:.5f} vs {steady.transmittance:.5f}"
                       f" (rel {dt:.2e}), CE {ce_plateau:.5f} vs "
                       f"{steady.ce:.5f} (rel {dc:.2e}); limit 1e-02")


def check_passivity_and_limits() -> CheckResult:
    rng = np.random.default_rng(7)
    worst_sum = -1.0
    for _ in range(200):
        m = MediumParams(alpha=rng.uniform(0.0, 200.0),
                         gamma21=rng.uniform(0.0, 1e-2),
                         delta_kL=rng.uniform(-math.pi, math.pi))
        d = DriveParams(omega_c=rng.uniform(0.0, 3.0),
                        omega_d=rng.uniform(0.0, 3.0))
        det = DetuningSet(delta=rng.uniform(-0.05, 0.05),
                          delta_p=rng.uniform(-1.0, 1.0),
                          Delta=rng.uniform(-1.0, 1.0))
        try:
            r = transfer_solve(d, det, m)
        except FwmError:
            continue
        worst_sum = max(worst_sum, r.transmittance + r.ce - 1.0)
    beer_worst = 0.0
    for alpha in (0.1, 1.0, 5.0, 45.0, 130.0):
        r = transfer_solve(DriveParams(omega_c=0.0), DetuningSet(),
                           MediumParams(alpha=alpha))
        beer_worst = max(beer_worst,
                         abs(r.transmittance - math.exp(-alpha)))
    eit = transfer_solve(DriveParams(omega_c=1.2, omega_d=0.0),
                         DetuningSet(),
                         MediumParams(alpha=130.0, gamma21=0.0))
    eit_dev = abs(eit.transmittance - 1.0)
    ok = worst_sum <= 1e-9 and beer_worst <= 1e-10 and eit_dev <= 1e-9
    return CheckResult(8, "passivity-and-limits", ok,
                       f"max(T+CE-1)={worst_sum:.2e} (limit 1e-09), "
                       f"Beer-Lambert dev {beer_worst:.2e} (limit 1e-10), "
                       f"ideal-EIT |T-1|={eit_dev:.2e} (limit 1e-09)")


def check_balanced_drive() -> CheckResult:
    details = []
    ok = True
    for name in ("fig3a", "fig4a"):
        pre = figure_preset(name)
        res = run_sweep(pre.sweep)
        rows = res.rows
        i = max(range(len(rows)), key=lambda k: rows[k][2])
        arg = rows[i][0]
        rel = abs(arg - pre.drive.omega_c) / pre.drive.omega_c
        ok = ok and rel <= 0.2
        details.append(f"{name} argmax {arg:.2f} vs omega_c "
                       f"{pre.drive.omega_c:.2f} (off {rel*100:.0f}%)")
    return CheckResult(9, "balanced-drive-optimality", ok,
                       "; ".join(details) + "; limit 20%")


def check_bandwidth() -> CheckResult:
    pre = figure_preset("fig4b")
    peak = find_peak(run_sweep(pre.sweep))
    det_base = DetuningSet(delta=khz_to_gamma(peak.value,
                                              pre.medium.gamma_phys))
    fwhm = bandwidth_fwhm(pre.medium, pre.drive, det_base)
    ok = abs(fwhm - 0.8) <= 0.3 * 0.8
    return CheckResult(10, "conversion-bandwidth", ok,
                       f"FWHM {fwhm:.3f} MHz (want 0.8+-30%, i.e. "
                       "0.56..1.04 MHz)")


ALL_CHECKS = (
    check_oracle_equivalence,
    check_optimal_detuning,
    check_peak_ce_dense,
    check_peak_ce_mot,
    check_phase_shifts,
    check_slow_light_delay,
    check_dynamics_steady_consistency,
    check_passivity_and_limits,
    check_balanced_drive,
    check_bandwidth,
)


def run_all() -> list:
    return [check() for check in ALL_CHECKS]
