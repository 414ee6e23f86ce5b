"""Matrix-free preconditioned Krylov solvers and the dense direct baseline.

BiCGSTAB applies the circulant preconditioner on the right (solve
M P^{-1} y = b, x = P^{-1} y), so the residual driving the stopping rule
||r_k||_2 / ||r_0||_2 < tol is the true-system residual.  CG uses the
standard preconditioned recurrence; the circulant preconditioner is SPD by
construction.  The initial guess is always the zero vector and the default
tolerance is 1e-10.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np


@dataclass(frozen=True)
class MatrixFreeOperator:
    """Dimension plus the action v -> M v (e.g. shift*v + K*(A v))."""

    n: int
    apply: Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class KrylovReport:
    iterations: int
    final_relative_residual: float
    converged: bool
    breakdown: Optional[str] = None


def _psolve_of(precond):
    if precond is None:
        return lambda v: v
    if hasattr(precond, "solve"):
        return precond.solve
    return precond  # already a callable


def solve_cg(
    op: MatrixFreeOperator,
    precond,
    rhs: np.ndarray,
    tol: float = 1e-10,
    max_iters: int | None = None,
) -> tuple[np.ndarray, KrylovReport]:
    """Preconditioned conjugate gradients; operator must be SPD.

    A non-positive curvature term signals loss of positive definiteness and
    is reported as a breakdown rather than raised.
    """
    rhs = np.asarray(rhs, dtype=float)
    if rhs.shape != (op.n,):
        raise ValueError(f"rhs has shape {rhs.shape}, operator order is {op.n}")
    max_iters = max_iters if max_iters is not None else 10 * op.n
    psolve = _psolve_of(precond)

    x = np.zeros(op.n)
    r = rhs.copy()
    nrm0 = float(np.linalg.norm(r))
    if nrm0 == 0.0:
        return x, KrylovReport(0, 0.0, True)
    z = psolve(r)
    p = z.copy()
    rz = float(r @ z)
    for it in range(1, max_iters + 1):
        q = op.apply(p)
        curv = float(p @ q)
        if curv <= 0.0:
            return x, KrylovReport(it, float(np.linalg.norm(r)) / nrm0, False,
                                   breakdown="non-positive curvature")
        alpha = rz / curv
        x += alpha * p
        r -= alpha * q
        rel = float(np.linalg.norm(r)) / nrm0
        if rel < tol:
            return x, KrylovReport(it, rel, True)
        z = psolve(r)
        rz_new = float(r @ z)
        p = z + (rz_new / rz) * p
        rz = rz_new
    return x, KrylovReport(max_iters, float(np.linalg.norm(r)) / nrm0, False)


def solve_bicgstab(
    op: MatrixFreeOperator,
    precond,
    rhs: np.ndarray,
    tol: float = 1e-10,
    max_iters: int | None = None,
) -> tuple[np.ndarray, KrylovReport]:
    """Right-preconditioned BiCGSTAB with the zero initial guess.

    Stops on ||r_k||_2 / ||r_0||_2 < tol where r_k is the true residual.
    Vanishing rho or omega inner products are reported as breakdowns.
    Each pass of the loop counts as one iteration, including passes that
    converge at the intermediate residual check.
    """
    rhs = np.asarray(rhs, dtype=float)
    if rhs.shape != (op.n,):
        raise ValueError(f"rhs has shape {rhs.shape}, operator order is {op.n}")
    max_iters = max_iters if max_iters is not None else 10 * op.n
    psolve = _psolve_of(precond)

    x = np.zeros(op.n)
    r = rhs.copy()
    r0 = rhs.copy()
    nrm0 = float(np.linalg.norm(r0))
    if nrm0 == 0.0:
        return x, KrylovReport(0, 0.0, True)
    rho = alpha = omega = 1.0
    v = np.zeros(op.n)
    p = np.zeros(op.n)
    for it in range(1, max_iters + 1):
        rho_new = float(r0 @ r)
        if rho_new == 0.0:
            return x, KrylovReport(it, float(np.linalg.norm(r)) / nrm0, False,
                                   breakdown="rho vanished")
        if it == 1:
            p[:] = r
        else:
            beta = (rho_new / rho) * (alpha / omega)
            p = r + beta * (p - omega * v)
        p_hat = psolve(p)
        v = op.apply(p_hat)
        denom = float(r0 @ v)
        if denom == 0.0:
            return x, KrylovReport(it, float(np.linalg.norm(r)) / nrm0, False,
                                   breakdown="r0.v vanished")
        alpha = rho_new / denom
        s = r - alpha * v
        if float(np.linalg.norm(s)) / nrm0 < tol:
            x += alpha * p_hat
            return x, KrylovReport(it, float(np.linalg.norm(s)) / nrm0, True)
        s_hat = psolve(s)
        t = op.apply(s_hat)
        tt = float(t @ t)
        if tt == 0.0:
            return x, KrylovReport(it, float(np.linalg.norm(s)) / nrm0, False,
                                   breakdown="omega denominator vanished")
        omega = float(t @ s) / tt
        x += alpha * p_hat + omega * s_hat
        r = s - omega * t
        rho = rho_new
        rel = float(np.linalg.norm(r)) / nrm0
        if rel < tol:
            return x, KrylovReport(it, rel, True)
        if omega == 0.0:
            return x, KrylovReport(it, rel, False, breakdown="omega vanished")
    return x, KrylovReport(max_iters, float(np.linalg.norm(r)) / nrm0, False)


DENSE_SOLVE_CAP = 2048


def solve_dense(matrix: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Direct solve by LU with partial pivoting (the baseline/oracle path)."""
    matrix = np.asarray(matrix, dtype=float)
    rhs = np.asarray(rhs, dtype=float)
    n = matrix.shape[0]
    if matrix.shape != (n, n) or rhs.shape != (n,):
        raise ValueError("matrix/rhs shapes are inconsistent")
    if n > DENSE_SOLVE_CAP:
        raise ValueError(f"dense solve capped at {DENSE_SOLVE_CAP}, got {n}")
    try:
        return np.linalg.solve(matrix, rhs)
    except np.linalg.LinAlgError as exc:
        raise ValueError("matrix is singular") from exc
