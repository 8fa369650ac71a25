"""Zeroth-order (drive-only) steady state."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .system import Liouvillian, unvec, vec

__all__ = ["DensityMatrix", "SteadyStateError", "solve_steady_state", "trace_constrained"]

HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-10
POSITIVITY_TOL = 1e-10


class SteadyStateError(ArithmeticError):
    """Raised when the stationary state is not unique or not physical."""


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    matrix: np.ndarray

    def __post_init__(self):
        m = self.matrix
        if np.max(np.abs(m - m.conj().T), initial=0.0) > HERMITIAN_TOL:
            raise SteadyStateError("density matrix is not Hermitian")
        if abs(np.trace(m) - 1.0) > TRACE_TOL:
            raise SteadyStateError(f"density matrix trace is {np.trace(m)}")
        ev = np.linalg.eigvalsh(0.5 * (m + m.conj().T))
        if ev[0] < -POSITIVITY_TOL:
            raise SteadyStateError(f"density matrix has negative eigenvalue {ev[0]:.3e}")
        m.flags.writeable = False

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def populations(self) -> np.ndarray:
        return self.matrix.diagonal().real.copy()


def trace_constrained(A: np.ndarray, d: int) -> np.ndarray:
    """Copy of ``A`` with its first row (the rho[0,0] equation) replaced by the trace row."""
    A = np.array(A, dtype=complex)
    A[0, :] = vec(np.eye(d))
    return A


def solve_steady_state(L: Liouvillian) -> DensityMatrix:
    """Solve ``L vec(rho) = 0`` with ``Tr rho = 1`` by dense LU.

    One of the (linearly dependent) population equations is swapped for the
    trace condition. Raises `SteadyStateError` if the remaining system is
    singular, i.e. the stationary state is not unique.
    """
    d = L.dim
    A = trace_constrained(L.generator, d)
    b = np.zeros(d * d, dtype=complex)
    b[0] = 1.0
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("error", scipy.linalg.LinAlgWarning)
            lu = scipy.linalg.lu_factor(A, check_finite=False)
        with np.errstate(all="raise"):
            x = scipy.linalg.lu_solve(lu, b, check_finite=False)
    except (np.linalg.LinAlgError, FloatingPointError, scipy.linalg.LinAlgWarning) as exc:
        raise _singular(L) from exc
    pivots = np.abs(np.diag(lu[0]))
    if not np.all(np.isfinite(x)) or pivots.min() < 1e-13 * pivots.max():
        raise _singular(L)
    residual = np.linalg.norm(L.generator @ x)
    if residual > 1e-10 * max(L.norm, 1.0):
        raise SteadyStateError(f"steady-state residual {residual:.3e} exceeds tolerance")
    rho = unvec(x, d)
    rho = 0.5 * (rho + rho.conj().T)
    return DensityMatrix(rho)


def _singular(L: Liouvillian) -> SteadyStateError:
    sv = scipy.linalg.svdvals(L.generator)
    return SteadyStateError(
        "stationary state is not unique; smallest singular values: "
        + ", ".join(f"{s:.3e}" for s in sv[-4:])
    )
