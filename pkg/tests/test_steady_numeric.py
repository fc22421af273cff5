import math

import numpy as np
import pytest
import scipy.linalg

from dlambda_fwm import (DetuningSet, DriveParams, MediumParams,
                         SingularSystemError, coupling_matrix, linear_response,
                         matrix_exponential, steady_coherences, transfer_solve)

RNG = np.random.default_rng(20260819)


def _bloch_residual(m, d, det, omega_p, omega_s, rho):
    """Re-derived steady-state equations, independent of the solver's matrix."""
    rho21, rho31, rho41 = rho
    r1 = ((1j * det.delta - m.gamma21 / 2) * rho21
          + 0.5j * np.conj(d.omega_c) * rho31
          + 0.5j * np.conj(d.omega_d) * rho41)
    r2 = (0.5j * omega_p + 0.5j * d.omega_c * rho21
          + (1j * det.delta_p - m.gamma31 / 2) * rho31)
    r3 = (0.5j * omega_s + 0.5j * d.omega_d * rho21
          + (1j * det.Delta - m.gamma41 / 2) * rho41)
    return max(abs(r1), abs(r2), abs(r3))


def test_steady_coherences_residual():
    m = MediumParams(alpha=130.0, gamma21=7e-4, delta_kL=0.134 * math.pi)
    d = DriveParams(omega_c=1.2, omega_d=1.2)
    det = DetuningSet(delta=-0.0045, delta_p=0.002, Delta=-0.001)
    op, os_ = 0.7 - 0.2j, 0.1 + 0.3j
    rho = steady_coherences(op, os_, d, det, m)
    assert _bloch_residual(m, d, det, op, os_, rho) < 1e-12


def test_steady_coherences_linearity():
    m = MediumParams(alpha=45.0)
    d = DriveParams(omega_c=0.6, omega_d=0.3)
    det = DetuningSet(delta=0.01)
    a = steady_coherences(1.0, 0.0, d, det, m)
    b = steady_coherences(0.0, 1.0, d, det, m)
    op, os_ = 0.7 + 0.2j, -0.3j
    combo = tuple(op * x + os_ * y for x, y in zip(a, b))
    direct = steady_coherences(op, os_, d, det, m)
    assert max(abs(x - y) for x, y in zip(combo, direct)) < 1e-14


def test_two_level_limit():
    m = MediumParams(alpha=1.0)
    d = DriveParams(omega_c=0.0, omega_d=0.0)
    det = DetuningSet()
    rho21, rho31, rho41 = steady_coherences(1.0, 0.0, d, det, m)
    assert rho21 == 0.0
    assert rho31 == pytest.approx(1j / m.gamma31)
    assert rho41 == 0.0


def test_ideal_eit_dark_state():
    m = MediumParams(alpha=45.0, gamma21=0.0)
    d = DriveParams(omega_c=0.6)
    det = DetuningSet()
    rho21, rho31, _ = steady_coherences(1.0, 0.0, d, det, m)
    # perfect transparency: no excited-state amplitude, ground coherence -1/omega_c
    assert abs(rho31) < 1e-15
    assert rho21 == pytest.approx(-1.0 / 0.6, rel=1e-12)


def test_singular_system_raises():
    m = MediumParams(alpha=45.0, gamma21=0.0)
    d = DriveParams(omega_c=1e-7)
    det = DetuningSet()
    with pytest.raises(SingularSystemError):
        steady_coherences(1.0, 0.0, d, det, m)


def test_linear_response_matches_unit_solves():
    m = MediumParams(alpha=130.0, gamma21=7e-4)
    d = DriveParams(omega_c=1.2, omega_d=1.2)
    det = DetuningSet(delta=-0.0045)
    resp = linear_response(d, det, m)
    up = steady_coherences(1.0, 0.0, d, det, m)
    us = steady_coherences(0.0, 1.0, d, det, m)
    assert (resp.rho21[0], resp.rho31[0], resp.rho41[0]) == up
    assert (resp.rho21[1], resp.rho31[1], resp.rho41[1]) == us


def test_coupling_matrix_beer_lambert_structure():
    m = MediumParams(alpha=5.0)
    d = DriveParams(omega_c=0.0)
    det = DetuningSet()
    cm = coupling_matrix(d, det, m)
    assert cm.m[0, 0] == pytest.approx(-m.alpha / 2)
    assert cm.m[0, 1] == 0 and cm.m[1, 0] == 0


def test_coupling_matrix_no_drive_decouples():
    # without the second pump there is no pathway between probe and signal
    m = MediumParams(alpha=45.0, gamma21=2e-4, delta_kL=0.447 * math.pi)
    d = DriveParams(omega_c=0.6, omega_d=0.0)
    det = DetuningSet(delta=0.003)
    cm = coupling_matrix(d, det, m)
    assert cm.m[0, 1] == 0 and cm.m[1, 0] == 0


def test_coupling_matrix_vacuum():
    m = MediumParams(alpha=0.0, delta_kL=0.3)
    d = DriveParams(omega_c=1.0, omega_d=1.0)
    cm = coupling_matrix(d, DetuningSet(), m)
    expect = np.array([[0.0, 0.0], [0.0, -0.3j]])
    assert np.allclose(cm.m, expect, atol=1e-15)


# --- matrix_exponential -----------------------------------------------------

def test_expm_zero_and_diagonal():
    assert np.array_equal(matrix_exponential(np.zeros((2, 2), complex)),
                          np.eye(2, dtype=complex))
    md = np.diag([1.0 + 2.0j, -0.5j]).astype(complex)
    out = matrix_exponential(md)
    assert out[0, 0] == np.exp(1.0 + 2.0j) and out[1, 1] == np.exp(-0.5j)
    assert out[0, 1] == 0 and out[1, 0] == 0


def test_expm_self_inverse_random():
    worst = 0.0
    for _ in range(300):
        mat = RNG.normal(size=(2, 2)) + 1j * RNG.normal(size=(2, 2))
        prod = matrix_exponential(mat) @ matrix_exponential(-mat)
        worst = max(worst, np.max(np.abs(prod - np.eye(2))))
    assert worst < 1e-12


def test_expm_matches_scipy_smooth_region():
    for _ in range(200):
        mat = 0.5 * (RNG.normal(size=(2, 2)) + 1j * RNG.normal(size=(2, 2)))
        ours = matrix_exponential(mat)
        ref = scipy.linalg.expm(mat)
        assert np.max(np.abs(ours - ref)) < 1e-12


def test_expm_degenerate_eigenvalues():
    # defective matrix: exp([[a,1],[0,a]]) = e^a [[1,1],[0,1]]
    mat = np.array([[1.0, 1.0], [0.0, 1.0]], dtype=complex)
    out = matrix_exponential(mat)
    ref = np.e * np.array([[1.0, 1.0], [0.0, 1.0]])
    assert np.max(np.abs(out - ref)) < 1e-12
    # nearly defective must take the series branch without blowing up
    mat[1, 0] = 1e-20
    out2 = matrix_exponential(mat)
    assert np.max(np.abs(out2 - ref)) < 1e-10


# --- transfer_solve ---------------------------------------------------------

def test_transfer_vacuum_exact():
    m = MediumParams(alpha=0.0, delta_kL=0.2 * math.pi)
    r = transfer_solve(DriveParams(omega_c=1.0, omega_d=1.0), DetuningSet(), m)
    assert r.transmittance == pytest.approx(1.0, abs=1e-14)
    assert r.ce == 0.0


@pytest.mark.parametrize("alpha", [0.1, 1.0, 5.0, 45.0, 130.0])
def test_transfer_beer_lambert(alpha):
    m = MediumParams(alpha=alpha)
    r = transfer_solve(DriveParams(omega_c=0.0), DetuningSet(), m)
    assert r.transmittance == pytest.approx(math.exp(-alpha), rel=1e-10,
                                            abs=1e-300)
    assert r.ce == 0.0


def test_transfer_ideal_eit():
    m = MediumParams(alpha=130.0, gamma21=0.0)
    r = transfer_solve(DriveParams(omega_c=1.2), DetuningSet(), m)
    assert abs(r.transmittance - 1.0) < 1e-9


def test_transfer_probe_amplitude_invariance():
    m = MediumParams(alpha=130.0, gamma21=7e-4, delta_kL=0.134 * math.pi)
    det = DetuningSet(delta=-0.0045)
    base = transfer_solve(DriveParams(omega_c=1.2, omega_d=1.2), det, m)
    scaled = transfer_solve(
        DriveParams(omega_c=1.2, omega_d=1.2,
                    omega_p0=3.0 * np.exp(1j * math.pi / 7)), det, m)
    assert scaled.transmittance == pytest.approx(base.transmittance, rel=1e-12)
    assert scaled.ce == pytest.approx(base.ce, rel=1e-12)


def test_transfer_dense_peak_point():
    # optical depth 130, balanced 1.2 drives, optimum detuning
    m = MediumParams(alpha=130.0, gamma21=7e-4, delta_kL=0.134 * math.pi)
    r = transfer_solve(DriveParams(omega_c=1.2, omega_d=1.2),
                       DetuningSet(delta=-0.0045), m)
    assert r.ce == pytest.approx(0.9216089, abs=1e-6)


def test_transfer_subdivision_invariance():
    # exp(M) must equal the product of k thin-slab propagators
    m = MediumParams(alpha=130.0, gamma21=7e-4, delta_kL=0.134 * math.pi)
    d = DriveParams(omega_c=1.2, omega_d=1.2)
    det = DetuningSet(delta=-0.0045)
    full = coupling_matrix(d, det, m).m
    whole = matrix_exponential(full)
    k = 8
    thin = matrix_exponential(full / k)
    prod = np.eye(2, dtype=complex)
    for _ in range(k):
        prod = thin @ prod
    assert np.max(np.abs(prod - whole)) < 1e-12 * np.max(np.abs(whole))


def test_transfer_passivity_random():
    rng = np.random.default_rng(7)
    for _ in range(50):
        m = MediumParams(alpha=float(rng.uniform(0.1, 150)),
                         gamma21=float(rng.uniform(0, 1e-3)),
                         delta_kL=float(rng.uniform(-0.5, 0.5) * math.pi))
        d = DriveParams(omega_c=float(rng.uniform(0.1, 2.5)),
                        omega_d=float(rng.uniform(0, 2.5)))
        det = DetuningSet(delta=float(rng.uniform(-0.05, 0.05)),
                          delta_p=float(rng.uniform(-0.5, 0.5)),
                          Delta=float(rng.uniform(-0.5, 0.5)))
        r = transfer_solve(d, det, m)
        assert r.transmittance + r.ce <= 1.0 + 1e-9
