"""Brute-force time-domain check of the probe susceptibility.

The full master equation with an explicit bichromatic field is integrated in
density-matrix form (no vectorized generator) with fixed-step RK4. Four copies
are propagated at once with probe phases 0, pi/2, pi, 3pi/2; a discrete
Fourier transform over the probe phase isolates the part of rho(t) that is
linear in the probe amplitude (exactly removing zeroth and second order).
After the transients have decayed, that part is projected onto exp(+i delta t).
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .probe_response import chi_prefactor
from .system import DriveField, LevelScheme, ProbeField, lowering_operators

__all__ = [
    "IntegrationConfig",
    "IntegrationError",
    "TimeDomainResult",
    "chi_by_integration",
    "step_halving_error",
]

_PHASES = np.array([0.0, 0.5, 1.0, 1.5]) * np.pi


class IntegrationError(ArithmeticError):
    pass


@dataclass(frozen=True)
class IntegrationConfig:
    """Integration parameters in units of 1/Gamma.

    ``settle`` is in units of 1/gamma. ``window`` is the minimum projection
    window; for delta != 0 it is rounded up to whole periods 2 pi/delta.
    ``tolerance`` bounds the relative step-halving error estimate.
    """

    step: float = 0.01
    settle: float = 20.0
    window: float = 10.0
    tolerance: float = 1e-7
    check_every: int = 200

    def __post_init__(self):
        if not 0 < self.step <= 0.01:
            raise ValueError("step must be in (0, 0.01/Gamma]")
        if self.settle < 5:
            raise ValueError("settle time must be at least 5/gamma")
        if self.window <= 0:
            raise ValueError("window must be positive")


@dataclass(frozen=True)
class TimeDomainResult:
    chi: complex
    max_trace_error: float
    max_hermiticity_error: float
    min_eigenvalue: float
    t_total: float
    steps: int


def _rhs_factory(scheme, drive, probe):
    ng, d = scheme.n_ground, scheme.dim
    C = lowering_operators(scheme)
    CdC = np.einsum("qji,qjk->ik", C.conj(), C)
    H0 = -0.5 * drive.rabi * scheme.raising(drive.polarization)
    H0 = H0 + H0.conj().T
    H0[np.arange(ng, d), np.arange(ng, d)] -= drive.detuning
    # non-Hermitian part carries spontaneous and transit loss
    Heff0 = H0 - 0.5j * CdC - 0.5j * scheme.gamma * np.eye(d)
    Vp = -0.5 * probe.rabi * scheme.raising(probe.polarization)
    Vm = Vp.conj().T
    rho_eq = scheme.isotropic_ground()
    g = scheme.gamma
    Ct = C.conj().transpose(0, 2, 1)[None]
    C = C[None]
    mHeff0 = -1j * Heff0
    mVp, mVm = -1j * Vp, -1j * Vm
    refill = g * rho_eq
    diag = np.arange(d)

    def rhs(t, rho):
        ph = np.exp(1j * (probe.offset * t + _PHASES))[:, None, None]
        # every copy is Hermitian, so rho @ (-i Heff)^dagger = (-i Heff @ rho)^dagger
        A = (mHeff0 + ph * mVp + ph.conj() * mVm) @ rho
        out = A + A.conj().transpose(0, 2, 1)
        out += ((C @ rho[:, None]) @ Ct).sum(axis=1)
        tr = rho[:, diag, diag].sum(axis=1)
        out += tr[:, None, None] * refill
        return out

    return rhs


def chi_by_integration(
    scheme: LevelScheme,
    drive: DriveField,
    probe: ProbeField,
    N: float,
    config: IntegrationConfig | None = None,
    full: bool = False,
):
    """Probe susceptibility from direct time integration.

    Starts from the isotropic ground state, integrates for ``settle/gamma``
    and then averages ``Tr(D_p^dagger X(t)) exp(-i delta t)`` over the window,
    where ``X`` is the first-order-in-probe part of rho(t). Uses the same
    prefactor as :mod:`probe_response`, so both return the same quantity.
    """
    cfg = config or IntegrationConfig()
    if probe.rabi > 1e-3:
        raise ValueError("probe Rabi frequency must be <= 1e-3 Gamma for linear response")
    if probe.rabi == 0:
        return (
            TimeDomainResult(0j, 0.0, 0.0, 0.0, 0.0, 0) if full else 0j
        )
    h = cfg.step
    delta = probe.offset
    t_settle = cfg.settle / scheme.gamma
    if delta != 0:
        period = 2 * np.pi / abs(delta)
        window = period * max(1, int(np.ceil(cfg.window / period - 1e-12)))
    else:
        window = cfg.window
    n_settle = int(np.ceil(t_settle / h))
    n_window = int(np.ceil(window / h))
    h = window / n_window  # whole periods exactly

    rhs = _rhs_factory(scheme, drive, probe)
    rho = np.repeat(scheme.isotropic_ground()[None], len(_PHASES), axis=0)
    detect = scheme.raising(probe.polarization).conj()
    weights = np.exp(-1j * _PHASES) / len(_PHASES)

    def first_order(r):
        return np.tensordot(weights, r, axes=1)

    max_tr = max_herm = 0.0
    min_ev = np.inf
    t = 0.0
    acc = 0j
    total = n_settle + n_window
    # trapezoid over whole periods equals a plain sum without the duplicated endpoint
    for k in range(total):
        if k >= n_settle:
            X = first_order(rho)
            acc += np.sum(detect * X) * np.exp(-1j * delta * t)
        if k % cfg.check_every == 0:
            max_tr = max(max_tr, float(np.max(np.abs(np.trace(rho, axis1=1, axis2=2) - 1))))
            max_herm = max(max_herm, float(np.max(np.abs(rho - rho.conj().transpose(0, 2, 1)))))
            min_ev = min(min_ev, float(np.linalg.eigvalsh(rho).min()))
        k1 = rhs(t, rho)
        k2 = rhs(t + h / 2, rho + (h / 2) * k1)
        k3 = rhs(t + h / 2, rho + (h / 2) * k2)
        k4 = rhs(t + h, rho + h * k3)
        rho = rho + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4)
        t = (k + 1) * h
        if not np.all(np.isfinite(rho[0])):
            raise IntegrationError(f"integration diverged at t={t:.3f}/Gamma")
    raw = acc / n_window / probe.rabi
    chi = chi_prefactor(scheme, N) * raw
    if full:
        return TimeDomainResult(chi, max_tr, max_herm, min_ev, t, total)
    return chi


def step_halving_error(
    scheme: LevelScheme,
    drive: DriveField,
    probe: ProbeField,
    N: float,
    config: IntegrationConfig | None = None,
) -> tuple[complex, float]:
    """Richardson-extrapolated chi and its relative error estimate.

    Integrates at the configured step and at half of it. For a fourth-order
    method the error of the finer result is about ``|chi_h - chi_h/2| / 15``.
    Raises `IntegrationError` if that estimate exceeds ``config.tolerance``.
    """
    cfg = config or IntegrationConfig()
    coarse = chi_by_integration(scheme, drive, probe, N, cfg)
    fine = chi_by_integration(scheme, drive, probe, N, replace(cfg, step=cfg.step / 2))
    if fine == 0:
        return 0j, 0.0
    err = abs(fine - coarse) / 15 / abs(fine)
    if err > cfg.tolerance:
        raise IntegrationError(
            f"step halving changed chi by {15 * err:.3e} relative (estimate {err:.3e} > {cfg.tolerance:g})"
        )
    return fine + (fine - coarse) / 15, err
