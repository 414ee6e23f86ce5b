"""FFT-backed symmetric-Toeplitz products and Strang circulant preconditioners.

A symmetric Toeplitz matrix of order n is embedded in a circulant of
power-of-two order >= 2n-1 whose spectrum is precomputed once, so each
matvec costs two transforms.  The Strang preconditioner copies the central
diagonals of A into a circulant s(A); the per-level preconditioner is
P = shift*I + kappa_bar*s(A), diagonalized by length-n transforms.  Its
eigenvalues are precomputed once per time level and reused for every Krylov
iteration.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import fourier


@dataclass(frozen=True)
class ToeplitzOperator:
    """Matrix-free symmetric Toeplitz operator, defined by its first column."""

    n: int
    first_col: np.ndarray
    embed_len: int              # smallest power of two >= 2n-1
    spectrum_embed: np.ndarray  # DFT of the circulant embedding's first column

    def matvec(self, v: np.ndarray) -> np.ndarray:
        return toeplitz_matvec(self, v)


def build_toeplitz(first_col: np.ndarray) -> ToeplitzOperator:
    first_col = np.asarray(first_col, dtype=float)
    n = first_col.size
    if n < 1:
        raise ValueError("first column must be nonempty")
    L = 1
    while L < max(2 * n - 1, 1):
        L *= 2
    emb = np.zeros(L)
    emb[:n] = first_col
    if n > 1:
        emb[L - n + 1:] = first_col[1:][::-1]
    return ToeplitzOperator(
        n=n, first_col=first_col, embed_len=L, spectrum_embed=fourier.fft(emb)
    )


def toeplitz_matvec(op: ToeplitzOperator, v: np.ndarray) -> np.ndarray:
    """A @ v via the circulant embedding, O(n log n).

    Zero-pads v to the embedding length, multiplies pointwise in frequency
    space, inverse-transforms, and keeps the leading n (real) entries.
    """
    v = np.asarray(v, dtype=float)
    if v.shape != (op.n,):
        raise ValueError(f"vector has shape {v.shape}, operator order is {op.n}")
    padded = np.zeros(op.embed_len, dtype=complex)
    padded[: op.n] = v
    out = fourier.ifft(op.spectrum_embed * fourier.fft(padded))[: op.n]
    return out.real


def strang_first_column(first_col: np.ndarray) -> np.ndarray:
    """First column c_S of the Strang circulant of the Toeplitz matrix.

    With n = N-1 entries a_1..a_n of the first column of A (a_1 the diagonal),
    c_S = [a_1, ..., a_{floor((N+1)/2)}, a_{floor(N/2)}, ..., a_2]: the
    leading half is copied, the trailing half mirrors the central diagonals.
    """
    first_col = np.asarray(first_col, dtype=float)
    n = first_col.size
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    N = n + 1
    head = first_col[: (N + 1) // 2]
    tail = first_col[1: N // 2][::-1]
    return np.concatenate([head, tail])


class PreconditionerError(RuntimeError):
    """Raised when the circulant preconditioner is not positive definite."""


@dataclass(frozen=True)
class CirculantPreconditioner:
    """P = shift*I + kappa_bar*s(A), diagonalized by the length-n DFT."""

    n: int
    shift: float
    kappa_bar: float
    lam: np.ndarray         # eigenvalues of s(A): real part of DFT(c_S)
    total_eigs: np.ndarray  # shift + kappa_bar * lam, all > 0

    def solve(self, v: np.ndarray) -> np.ndarray:
        return precond_solve(self, v)


def build_preconditioner(d, shift: float, kappa_bar: float) -> CirculantPreconditioner:
    """Strang preconditioner from an IflDiscretization (or bare first column).

    The eigenvalues of s(A) are the DFT of c_S (real because s(A) is a real
    symmetric circulant); total eigenvalues shift + kappa_bar * lam must all
    be strictly positive, otherwise PreconditionerError signals a numerical
    breakdown.
    """
    if shift <= 0.0:
        raise ValueError(f"shift must be > 0, got {shift}")
    if kappa_bar <= 0.0:
        raise ValueError(f"kappa_bar must be > 0, got {kappa_bar}")
    first_col = d.first_col if hasattr(d, "first_col") else np.asarray(d, dtype=float)
    c_s = strang_first_column(first_col)
    spec = fourier.fft(c_s)
    lam = spec.real
    imag_resid = np.abs(spec.imag).max()
    if imag_resid > 1e-10 * max(np.abs(lam).max(), 1e-300):
        raise PreconditionerError(
            f"Strang spectrum is not numerically real (residual {imag_resid:g})"
        )
    total = shift + kappa_bar * lam
    if np.any(total <= 0.0):
        raise PreconditionerError("preconditioner has a non-positive eigenvalue")
    return CirculantPreconditioner(
        n=c_s.size, shift=float(shift), kappa_bar=float(kappa_bar),
        lam=lam, total_eigs=total,
    )


def precond_solve(p: CirculantPreconditioner, v: np.ndarray) -> np.ndarray:
    """P^{-1} v = F* diag(total_eigs)^{-1} F v with length-n transforms."""
    v = np.asarray(v, dtype=float)
    if v.shape != (p.n,):
        raise ValueError(f"vector has shape {v.shape}, preconditioner order is {p.n}")
    return fourier.ifft(fourier.fft(v) / p.total_eigs).real
