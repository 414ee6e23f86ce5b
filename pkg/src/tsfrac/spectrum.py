"""Dense spectrum diagnostics for the per-level systems and preconditioners.

Everything here assembles dense matrices (capped at a few hundred unknowns)
and goes through the Jacobi rotation eigensolver, keeping the diagnostics
independent of the FFT-based production path they are used to inspect.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import circulant, toeplitz

from . import fourier
from .eigen import jacobi_eigenvalues
from .toeplitz import CirculantPreconditioner, build_preconditioner, precond_solve

DENSE_SPECTRUM_CAP = 256


def _first_col(disc) -> np.ndarray:
    col = disc.first_col if hasattr(disc, "first_col") else np.asarray(disc, float)
    if col.size > DENSE_SPECTRUM_CAP:
        raise ValueError(
            f"dense diagnostics capped at order {DENSE_SPECTRUM_CAP}, got {col.size}"
        )
    return col


def dense_system(disc, shift: float, kappa: np.ndarray) -> np.ndarray:
    """Dense shift*I + diag(kappa) A for one time level.

    ``disc`` is an IflDiscretization or a bare Toeplitz first column.
    """
    col = _first_col(disc)
    n = col.size
    kappa = np.broadcast_to(np.asarray(kappa, dtype=float), (n,))
    return shift * np.eye(n) + kappa[:, None] * toeplitz(col)


def system_eigenvalues(disc, shift: float, kappa_const: float) -> np.ndarray:
    """Eigenvalues of the (symmetric, constant-kappa) level matrix, ascending."""
    n = _first_col(disc).size
    return jacobi_eigenvalues(dense_system(disc, shift, np.full(n, kappa_const)))


def _sqrt_inverse_circulant(p: CirculantPreconditioner) -> np.ndarray:
    # P^{-1/2} as a dense symmetric circulant: eigenvalues total_eigs^{-1/2}
    # on the same Fourier basis, so its first column is the inverse DFT
    col = fourier.ifft(1.0 / np.sqrt(p.total_eigs)).real
    return circulant(col)


def preconditioned_eigenvalues(disc, shift: float,
                               kappa_const: float) -> np.ndarray:
    """Eigenvalues of P^{-1/2} M P^{-1/2} for constant kappa, ascending.

    Similar to P^{-1} M but symmetric, so the Jacobi oracle applies.
    """
    col = _first_col(disc)
    p = build_preconditioner(col, shift, kappa_const)
    S = _sqrt_inverse_circulant(p)
    M = dense_system(col, shift, np.full(col.size, kappa_const))
    B = S @ M @ S
    return jacobi_eigenvalues((B + B.T) / 2.0)


def preconditioned_singular_values(disc, shift: float,
                                   kappa: np.ndarray) -> np.ndarray:
    """Singular values of P^{-1} M for x-dependent kappa, ascending.

    The preconditioned matrix is nonsymmetric here, so the diagnostic reports
    singular values (from the Jacobi spectrum of the Gram matrix) instead of
    asserting a symmetric eigendecomposition.
    """
    col = _first_col(disc)
    M = dense_system(col, shift, kappa)
    p = build_preconditioner(col, shift, float(np.mean(kappa)))
    PinvM = np.column_stack([precond_solve(p, col) for col in M.T])
    gram = PinvM.T @ PinvM
    eigs = jacobi_eigenvalues((gram + gram.T) / 2.0)
    return np.sqrt(np.clip(eigs, 0.0, None))


def gershgorin_summary(matrix: np.ndarray) -> dict:
    """Disc centers/radii extrema of a dense matrix (nonsymmetric-safe)."""
    matrix = np.asarray(matrix, dtype=float)
    diag = np.diag(matrix)
    radii = np.abs(matrix).sum(axis=1) - np.abs(diag)
    return {
        "center_min": float(diag.min()),
        "center_max": float(diag.max()),
        "radius_max": float(radii.max()),
        "lower_bound": float((diag - radii).min()),
        "upper_bound": float((diag + radii).max()),
    }
