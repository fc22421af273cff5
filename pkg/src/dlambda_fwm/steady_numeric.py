"""Exact steady-state solver for backward four-wave mixing.

The medium response is strictly linear in the probe/signal pair (the
population stays in the lowest ground state, rho11 ~ 1), so the steady
state reduces to two stages:

1. solve the 3x3 linear system for the coherences (rho21, rho31, rho41)
   driven by unit probe and unit signal amplitudes, giving the linear
   response coefficients;
2. insert those into the propagation equations, which become a linear
   2-point boundary value problem d/dz (Op, Os) = M (Op, Os) with
   Op(0) = Op0 and Os(L) = 0 (the signal builds up backwards).

Because M is z-independent the BVP is solved exactly with one 2x2 matrix
exponential; only the dimensionless product M*L ever appears.  This module
is the oracle for the closed-form solver and the engine behind all sweeps.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BoundarySolveError, SingularSystemError
from .params import DetuningSet, DriveParams, MediumParams, SteadyResult

COND_LIMIT = 1e12


@dataclass(frozen=True)
class CoherenceResponse:
    """Linear response of the coherences to the weak fields.

    Each attribute is a pair (coefficient on Omega_p, coefficient on
    Omega_s); the full coherence for given amplitudes is the dot product.
    Exact linearity holds by construction.
    """

    rho21: tuple
    rho31: tuple
    rho41: tuple


@dataclass(frozen=True)
class CouplingMatrix:
    """Propagation matrix of the steady field pair.

    ``m`` is the dimensionless 2x2 matrix M*L with
    d/d(z/L) (Omega_p, Omega_s) = m . (Omega_p, Omega_s); the medium
    length only ever enters through this product.  Backward signal
    propagation is already folded into the signs: a lossy signal
    transition appears as gain along +z.
    """

    m: np.ndarray


def _unit_response(omega_s_on: bool, d: DriveParams, det: DetuningSet,
                   m: MediumParams) -> tuple:
    """Coherences for a unit drive on either the probe or the signal."""
    omega_p = 0.0 if omega_s_on else 1.0
    omega_s = 1.0 if omega_s_on else 0.0

    if d.omega_c == 0.0 and d.omega_d == 0.0:
        # rho21 decouples completely; keep the two-level response exact
        # even where the 3x3 system would be singular (delta=gamma21=0).
        rho31 = -0.5j * omega_p / (1j * det.delta_p - m.gamma31 / 2)
        rho41 = -0.5j * omega_s / (1j * det.Delta - m.gamma41 / 2)
        return 0.0 + 0.0j, rho31, rho41

    a = np.array([
        [1j * det.delta - m.gamma21 / 2, 0.5j * np.conj(d.omega_c),
         0.5j * np.conj(d.omega_d)],
        [0.5j * d.omega_c, 1j * det.delta_p - m.gamma31 / 2, 0.0],
        [0.5j * d.omega_d, 0.0, 1j * det.Delta - m.gamma41 / 2],
    ], dtype=complex)
    cond = np.linalg.cond(a)
    if not np.isfinite(cond) or cond > COND_LIMIT:
        raise SingularSystemError(
            f"coherence system singular (cond={cond:.3g}) at "
            f"omega_c={d.omega_c}, omega_d={d.omega_d}, delta={det.delta}, "
            f"delta_p={det.delta_p}, Delta={det.Delta}, "
            f"gamma21={m.gamma21}")
    b = np.array([0.0, -0.5j * omega_p, -0.5j * omega_s], dtype=complex)
    x = np.linalg.solve(a, b)
    return x[0], x[1], x[2]


def linear_response(d: DriveParams, det: DetuningSet,
                    m: MediumParams) -> CoherenceResponse:
    """Pairwise linear-response coefficients of (rho21, rho31, rho41)."""
    rp = _unit_response(False, d, det, m)
    rs = _unit_response(True, d, det, m)
    return CoherenceResponse(rho21=(rp[0], rs[0]),
                             rho31=(rp[1], rs[1]),
                             rho41=(rp[2], rs[2]))


def steady_coherences(omega_p: complex, omega_s: complex, d: DriveParams,
                      det: DetuningSet, m: MediumParams) -> tuple:
    """Steady coherences (rho21, rho31, rho41) for given field amplitudes."""
    r = linear_response(d, det, m)
    return tuple(c_p * omega_p + c_s * omega_s
                 for (c_p, c_s) in (r.rho21, r.rho31, r.rho41))


def coupling_matrix(d: DriveParams, det: DetuningSet,
                    m: MediumParams) -> CouplingMatrix:
    """Dimensionless propagation matrix M*L for the steady field pair."""
    r = linear_response(d, det, m)
    r31_p, r31_s = r.rho31
    r41_p, r41_s = r.rho41
    out = np.empty((2, 2), dtype=complex)
    out[0, 0] = 0.5j * m.alpha * m.gamma31 * r31_p
    out[0, 1] = 0.5j * m.alpha * m.gamma31 * r31_s
    out[1, 0] = -0.5j * m.alpha * m.gamma41 * r41_p
    out[1, 1] = -1j * m.delta_kL - 0.5j * m.alpha * m.gamma41 * r41_s
    return CouplingMatrix(m=out)


def matrix_exponential(m: np.ndarray) -> np.ndarray:
    """exp(m) for a complex 2x2 matrix.

    Closed-form eigendecomposition with two guarded paths: exactly
    diagonal matrices are exponentiated entry-wise (no cancellation for
    widely split real parts), and near-degenerate eigenvalues
    (|l1 - l2| < 1e-8 ||m||) fall back to a short series in the shifted
    matrix, since the eigenvector route divides by l1 - l2.
    """
    m = np.asarray(m, dtype=complex)
    if m[0, 1] == 0.0 and m[1, 0] == 0.0:
        return np.array([[np.exp(m[0, 0]), 0.0], [0.0, np.exp(m[1, 1])]],
                        dtype=complex)
    mu = 0.5 * (m[0, 0] + m[1, 1])
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    s2 = mu * mu - det
    s = np.sqrt(s2)          # half the eigenvalue splitting
    norm = max(abs(m[0, 0]), abs(m[0, 1]), abs(m[1, 0]), abs(m[1, 1]))
    if 2.0 * abs(s) < 1e-8 * norm or s == 0.0:
        # exp(m) = e^mu (cosh(s) I + sinhc(s) (m - mu I)), s ~ 0
        ch = 1.0 + s2 / 2.0 + s2 * s2 / 24.0
        snch = 1.0 + s2 / 6.0 + s2 * s2 / 120.0
        eye = np.eye(2, dtype=complex)
        return np.exp(mu) * (ch * eye + snch * (m - mu * eye))
    lp, lm = mu + s, mu - s
    # eigenvectors built from the larger off-diagonal entry for stability
    if abs(m[0, 1]) >= abs(m[1, 0]):
        vp = np.array([m[0, 1], lp - m[0, 0]])
        vm = np.array([m[0, 1], lm - m[0, 0]])
    else:
        vp = np.array([lp - m[1, 1], m[1, 0]])
        vm = np.array([lm - m[1, 1], m[1, 0]])
    p = np.column_stack([vp, vm])
    dp = p[0, 0] * p[1, 1] - p[0, 1] * p[1, 0]
    p_inv = np.array([[p[1, 1], -p[0, 1]], [-p[1, 0], p[0, 0]]]) / dp
    return (p * np.array([np.exp(lp), np.exp(lm)])) @ p_inv


def transfer_solve(d: DriveParams, det: DetuningSet,
                   m: MediumParams) -> SteadyResult:
    """Solve the steady boundary-value problem exactly.

    With T = exp(M*L), the boundary conditions Omega_p(0) = Omega_p0 and
    Omega_s(L) = 0 give

        signal_out = Omega_s(0)/Omega_p0 = -T[1,0] / T[1,1]
        probe_out  = Omega_p(L)/Omega_p0 = det(T) / T[1,1]
                   = exp(tr(M*L)) / T[1,1]

    The determinant form of probe_out is used instead of
    T[0,0] + T[0,1]*signal_out: the two are algebraically identical, but
    the latter cancels catastrophically when the medium is optically
    thick and the entries of T are exponentially large.

    Raises
    ------
    BoundarySolveError
        When |T[1,1]| < 1e-14 (perfect-reflection resonance).
    """
    mat = coupling_matrix(d, det, m).m
    t = matrix_exponential(mat)
    if abs(t[1, 1]) < 1e-14:
        raise BoundarySolveError(
            f"boundary solve singular (|T11|={abs(t[1, 1]):.3g}) at "
            f"alpha={m.alpha}, delta_kL={m.delta_kL}, "
            f"omega_c={d.omega_c}, omega_d={d.omega_d}, delta={det.delta}")
    signal_out = -t[1, 0] / t[1, 1]
    probe_out = np.exp(mat[0, 0] + mat[1, 1]) / t[1, 1]
    return SteadyResult(probe_out=complex(probe_out),
                        signal_out=complex(signal_out))
