"""Closed-form steady state for the balanced, resonant, lossless regime.

Valid when the two strong fields are balanced (omega_c = omega_d = W),
the one- and three-photon detunings vanish, the ground-state dephasing is
zero and the optical coherences decay at the rate unit itself
(gamma31 = gamma41 = 1).  Everything is expressed in Gamma units.

With xi the phase-matching parameter, the auxiliary quantities are

    xi    = dkL + delta*alpha/W^2
    kappa = (alpha - 2*dkL*delta/W^2) - 2i*xi
    beta  = sqrt((dkL + i*alpha)(dkL*delta + i*W^2*xi) / (i*W^2 + delta))
    q     = +-sqrt((xi - i*dkL*delta/W^2 + i*alpha)(xi - i*dkL*delta/W^2))

and the boundary amplitudes follow from kappa, beta, q alone.  Setting
xi = 0 (i.e. delta* = -dkL*W^2/alpha) realizes quasi-phase matching: the
two-photon detuning cancels the geometric phase mismatch.

The two square roots carry an intrinsic branch ambiguity; see
_resolve_branch for how it is fixed against the exact solver.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

from .errors import DomainError, NearSingularError, RegimeError
from .params import (DetuningSet, DriveParams, MediumParams, SteadyResult,
                     gamma_to_khz)
from .steady_numeric import transfer_solve

BETA_SINGULAR = 1e-6


@dataclass(frozen=True)
class ClosedFormAux:
    """Auxiliary closed-form quantities (branch-resolved q)."""

    kappa: complex
    beta: complex
    q: complex
    xi: float


@dataclass(frozen=True)
class OptimalDelta:
    """Quasi-phase-matching two-photon detuning, Gamma units and kHz."""

    delta: float
    delta_khz: float


def _require_regime(m: MediumParams, omega: float) -> None:
    if omega <= 0.0:
        raise DomainError(f"closed form needs omega > 0, got {omega}")
    if m.gamma21 != 0.0:
        raise RegimeError(
            f"closed form assumes gamma21 = 0, got {m.gamma21}; "
            "use steady_numeric.transfer_solve")
    if m.gamma31 != 1.0 or m.gamma41 != 1.0:
        raise RegimeError(
            "closed form assumes gamma31 = gamma41 = 1 (decay at the rate "
            f"unit), got {m.gamma31}, {m.gamma41}")


def _xi_kappa_beta(alpha: float, omega: float, delta_kL: float,
                   delta: float) -> tuple:
    """The branch-free auxiliary quantities."""
    w2 = omega * omega
    xi = delta_kL + delta * alpha / w2
    kappa = (alpha - 2.0 * delta_kL * delta / w2) - 2.0j * xi
    beta = cmath.sqrt((delta_kL + 1j * alpha)
                      * (delta_kL * delta + 1j * w2 * xi)
                      / (1j * w2 + delta))
    return xi, kappa, beta


def _branch(alpha: float, omega: float, delta_kL: float, delta: float,
            sign: int):
    """Evaluate one (q-sign) branch of the closed form.

    Returns (probe_out, signal_out, d_criterion, kappa, beta, q, xi).
    The trigonometric solution is rewritten in terms of w = exp(i*beta)
    (or its reciprocal when Im(beta) < 0) so that no intermediate grows
    like exp(|Im beta|); cot/csc forms overflow already at alpha ~ 300.
    """
    w2 = omega * omega
    xi, kappa, beta = _xi_kappa_beta(alpha, omega, delta_kL, delta)
    q = sign * cmath.sqrt((xi - 1j * delta_kL * delta / w2 + 1j * alpha)
                          * (xi - 1j * delta_kL * delta / w2))
    if beta.imag >= 0.0:
        w = cmath.exp(1j * beta)
        half = cmath.exp(0.5j * beta)
        probe = 2.0 * q * half / (q * (1.0 + w) + 0.5j * kappa * (1.0 - w))
        denom = kappa * (1.0 - w) - 2.0j * q * (1.0 + w)
        signal = alpha * (1.0 - w) / denom
        d_crit = kappa - 2.0j * q * (1.0 + w) / (1.0 - w) if w != 1.0 \
            else complex("inf")
    else:
        v = cmath.exp(-1j * beta)
        half = cmath.exp(-0.5j * beta)
        probe = 2.0 * q * half / (q * (1.0 + v) - 0.5j * kappa * (1.0 - v))
        denom = kappa * (1.0 - v) + 2.0j * q * (1.0 + v)
        signal = alpha * (1.0 - v) / denom
        d_crit = kappa + 2.0j * q * (1.0 + v) / (1.0 - v) if v != 1.0 \
            else complex("inf")
    probe *= cmath.exp(-0.5j * delta_kL)
    return probe, signal, d_crit, kappa, beta, q, xi


def _resolve_branch(m: MediumParams, omega: float, delta: float):
    """Pick the q sign that matches the exact solver.

    Principal-branch square roots of beta and q are not guaranteed
    mutually consistent, and only the relative sign matters (flipping
    both is an exact symmetry of the solution).  Both q candidates are
    evaluated and the one minimizing |D - kappa_eff| wins, where
    D = kappa + 2q*cot(beta/2) and kappa_eff = alpha / signal_out of the
    transfer-matrix solver -- i.e. exactly the combination the signal
    amplitude inverts, so the criterion is cheap and well conditioned.
    """
    _require_regime(m, omega)
    _, _, beta = _xi_kappa_beta(m.alpha, omega, m.delta_kL, delta)
    if abs(beta) < BETA_SINGULAR:
        raise NearSingularError(
            f"|beta| = {abs(beta):.3g} < {BETA_SINGULAR}: removable "
            "singularity of the closed form (delta and delta_kL both ~ 0); "
            "use steady_numeric.transfer_solve, which is regular there")
    cand_p = _branch(m.alpha, omega, m.delta_kL, delta, +1)
    cand_m = _branch(m.alpha, omega, m.delta_kL, delta, -1)
    oracle = transfer_solve(
        DriveParams(omega_c=omega, omega_d=omega),
        DetuningSet(delta=delta), m)
    if oracle.signal_out != 0.0 and cmath.isfinite(cand_p[2]) \
            and cmath.isfinite(cand_m[2]):
        kappa_eff = m.alpha / oracle.signal_out
        pick = cand_p if abs(cand_p[2] - kappa_eff) \
            <= abs(cand_m[2] - kappa_eff) else cand_m
    else:
        pick = cand_p
    return pick


def closed_form_aux(m: MediumParams, omega: float,
                    delta: float) -> ClosedFormAux:
    """Auxiliary quantities kappa, beta, q, xi (q branch-resolved)."""
    probe, signal, d_crit, kappa, beta, q, xi = _resolve_branch(m, omega, delta)
    return ClosedFormAux(kappa=kappa, beta=beta, q=q, xi=xi)


def steady_closed_form(m: MediumParams, omega: float,
                       delta: float) -> SteadyResult:
    """Closed-form boundary amplitudes and efficiencies.

    Raises NearSingularError within |beta| < 1e-6 of the removable
    beta -> 0 point and RegimeError outside the balanced lossless regime.
    """
    probe, signal, *_ = _resolve_branch(m, omega, delta)
    return SteadyResult(probe_out=probe, signal_out=signal)


def optimal_delta(m: MediumParams, omega: float) -> OptimalDelta:
    """Two-photon detuning that cancels the phase mismatch (xi = 0)."""
    if m.alpha <= 0.0:
        raise DomainError(f"optimal_delta needs alpha > 0, got {m.alpha}")
    if omega <= 0.0:
        raise DomainError(f"optimal_delta needs omega > 0, got {omega}")
    delta = -m.delta_kL * omega * omega / m.alpha
    return OptimalDelta(delta=delta,
                        delta_khz=gamma_to_khz(delta, m.gamma_phys))


def eit_phase_shift(m: MediumParams, omega_c: float, delta: float) -> float:
    """First-order estimate of the probe phase shift from detuned
    transparency: phi = delta * alpha / omega_c**2 (radians).

    This is the leading term of the dispersion across the transparency
    window; it is an estimate, not the full output phase.
    """
    if omega_c <= 0.0:
        raise DomainError(f"eit_phase_shift needs omega_c > 0, got {omega_c}")
    return delta * m.alpha / (omega_c * omega_c)
