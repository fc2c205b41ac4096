"""Small dense Hermitian linear algebra with explicit tolerances.

Every decision that depends on a threshold (rank, positivity, equality)
goes through this module so that the tolerances live in one place.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class InvalidInputError(ValueError):
    """Malformed input: wrong shape, non-finite entries, bad parameters."""


class DomainError(ValueError):
    """Input is well formed but outside the domain of the operation.

    Parameters
    ----------
    message : str
        Human readable reason.
    index : int, optional
        First offending index, when the failure is tied to one.
    """

    def __init__(self, message: str, index: int | None = None):
        super().__init__(message)
        self.index = index


class NumericalConsistencyError(ArithmeticError):
    """Two mathematically equal routes disagree beyond tolerance."""


@dataclass(frozen=True)
class Tol:
    """Tolerances used for rank, positivity and equality decisions.

    Attributes
    ----------
    rank_rel : float
        Singular values below ``rank_rel * sigma_max`` count as zero.
    psd_abs : float
        Eigenvalue slack for positivity, scaled by ``max(1, ||A||_2)``.
    eq_abs : float
        Frobenius slack for equality, scaled by ``max(1, ||A||_F, ||B||_F)``.
    """

    rank_rel: float = 1e-10
    psd_abs: float = 1e-10
    eq_abs: float = 1e-8

    def __post_init__(self):
        for name in ("rank_rel", "psd_abs", "eq_abs"):
            v = getattr(self, name)
            if not (np.isfinite(v) and v > 0):
                raise InvalidInputError(f"tolerance {name} must be positive, got {v!r}")


DEFAULT_TOL = Tol()


def as_matrix(A) -> np.ndarray:
    """Return `A` as a finite, square complex 2-D array."""
    M = np.asarray(A, dtype=complex)
    if M.ndim == 0:
        M = M.reshape(1, 1)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise InvalidInputError(f"expected a square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise InvalidInputError("matrix has non-finite entries")
    return M


def herm(A) -> np.ndarray:
    """Hermitian part ``(A + A^*) / 2``."""
    A = np.asarray(A, dtype=complex)
    return 0.5 * (A + A.conj().T)


def is_hermitian(A, tol: Tol = DEFAULT_TOL) -> bool:
    A = np.asarray(A, dtype=complex)
    return mat_close(A, A.conj().T, tol)


def _eigh(A):
    w, U = np.linalg.eigh(herm(A))
    return w, U


def pinv(A, tol: Tol = DEFAULT_TOL) -> np.ndarray:
    """Moore-Penrose pseudoinverse through a thresholded SVD.

    Singular values at or below ``tol.rank_rel * sigma_max`` are dropped.
    """
    A = np.asarray(A, dtype=complex)
    if A.size == 0:
        return np.zeros(A.shape[::-1], dtype=complex)
    U, sv, Vh = np.linalg.svd(A, full_matrices=False)
    smax = sv[0] if sv.size else 0.0
    if smax == 0.0:
        return np.zeros(A.shape[::-1], dtype=complex)
    keep = sv > tol.rank_rel * smax
    inv = np.zeros_like(sv)
    inv[keep] = 1.0 / sv[keep]
    return (Vh.conj().T * inv) @ U.conj().T


EXT = np.clongdouble


def pinv_solve(A, B, tol: Tol = DEFAULT_TOL) -> np.ndarray:
    """``A^+ B`` without forming ``A^+``, returned in extended precision.

    A numerically nonsingular `A` goes through an LU solve followed by one
    step of iterative refinement with the residual accumulated in long
    double; on ill-conditioned Hankel blocks this recovers several digits
    over multiplying by an explicit pseudoinverse. Otherwise the truncated
    SVD is applied factor by factor.
    """
    A = np.asarray(A, dtype=complex)
    B = np.asarray(B, dtype=complex)
    if A.size == 0:
        return np.zeros((A.shape[1],) + B.shape[1:], dtype=EXT)
    U, sv, Vh = np.linalg.svd(A, full_matrices=False)
    if sv[0] == 0.0:
        return np.zeros((A.shape[1],) + B.shape[1:], dtype=EXT)
    keep = sv > tol.rank_rel * sv[0]
    if A.shape[0] == A.shape[1] and keep.all():
        X = np.linalg.solve(A, B).astype(EXT)
        R = B.astype(EXT) - A.astype(EXT) @ X
        return X + np.linalg.solve(A, R.astype(complex)).astype(EXT)
    X = Vh[keep].conj().T @ ((U[:, keep].conj().T @ B) / sv[keep][:, None])
    return X.astype(EXT)


def rank_tol(A, tol: Tol = DEFAULT_TOL, ref: float = 0.0) -> int:
    """Numerical rank.

    Parameters
    ----------
    A : array_like
    tol : Tol
    ref : float, optional
        Extra reference scale; the threshold is
        ``rank_rel * max(sigma_max, ref)``. Useful when `A` is the result
        of a cancellation between much larger quantities.
    """
    A = np.asarray(A, dtype=complex)
    if A.size == 0:
        return 0
    sv = np.linalg.svd(A, compute_uv=False)
    scale = max(sv[0], ref)
    if scale == 0.0:
        return 0
    return int(np.sum(sv > tol.rank_rel * scale))


def _psd_spectrum(A, tol: Tol):
    w, U = _eigh(A)
    top = float(np.max(np.abs(w), initial=0.0))
    if w.size and w.min() < -tol.psd_abs * max(1.0, top):
        raise DomainError(f"matrix is not PSD (min eigenvalue {w.min():.3e})")
    # eigenvalues below the rank threshold are zero; taking square roots
    # would otherwise lift rounding noise from 1e-16 to 1e-8
    w = np.where(w > tol.rank_rel * top, w, 0.0)
    return w, U


def psd_sqrt(A, tol: Tol = DEFAULT_TOL) -> np.ndarray:
    """Principal square root of a PSD matrix.

    Slightly negative eigenvalues and those below ``rank_rel * ||A||_2``
    are treated as zero.
    """
    w, U = _psd_spectrum(A, tol)
    return (U * np.sqrt(w)) @ U.conj().T


def psd_pinv_sqrt(A, tol: Tol = DEFAULT_TOL) -> np.ndarray:
    """``(A^{1/2})^+`` for PSD `A`, with the same eigenvalue cut as :func:`psd_sqrt`."""
    w, U = _psd_spectrum(A, tol)
    inv = np.zeros_like(w)
    inv[w > 0] = 1.0 / np.sqrt(w[w > 0])
    return (U * inv) @ U.conj().T


def range_projection(A, tol: Tol = DEFAULT_TOL) -> np.ndarray:
    """Orthogonal projection onto the column space of `A`, ``A A^+``."""
    A = np.asarray(A, dtype=complex)
    if A.size == 0:
        return np.zeros((A.shape[0], A.shape[0]), dtype=complex)
    U, sv, _ = np.linalg.svd(A, full_matrices=False)
    if sv[0] == 0.0:
        return np.zeros((A.shape[0], A.shape[0]), dtype=complex)
    Ur = U[:, sv > tol.rank_rel * sv[0]]
    return Ur @ Ur.conj().T


def clean_hermitian(A, scale: float, tol: Tol = DEFAULT_TOL) -> np.ndarray:
    """Symmetrize `A` and zero eigenvalues of modulus ``<= rank_rel * scale``.

    Used on differences of large nearly equal quantities, where the
    leftover is rounding noise rather than signal.
    """
    w, U = _eigh(A)
    cut = tol.rank_rel * scale
    w = np.where(np.abs(w) <= cut, 0.0, w)
    if not np.any(w):
        return np.zeros_like(U)
    return (U * w) @ U.conj().T


def parallel_sum(A, B, tol: Tol = DEFAULT_TOL) -> np.ndarray:
    """Parallel sum ``A (A + B)^+ B`` of two PSD matrices, symmetrized."""
    A = as_matrix(A)
    B = as_matrix(B)
    return herm(A @ pinv(A + B, tol) @ B)


def schur_complement(M, p: int, tol: Tol = DEFAULT_TOL) -> np.ndarray:
    """Generalized Schur complement of the leading ``p x p`` block.

    ``M / M[:p, :p] = M22 - M21 M11^+ M12``.
    """
    M = np.asarray(M, dtype=complex)
    if p == 0:
        return M.copy()
    M11, M12 = M[:p, :p], M[:p, p:]
    M21, M22 = M[p:, :p], M[p:, p:]
    return M22 - M21 @ pinv(M11, tol) @ M12


def _psd_slack(A, tol: Tol) -> tuple[float, float]:
    w = np.linalg.eigvalsh(herm(A))
    nrm = float(np.max(np.abs(w), initial=0.0))
    return (float(w.min()) if w.size else 0.0), tol.psd_abs * max(1.0, nrm)


def is_psd(A, tol: Tol = DEFAULT_TOL) -> bool:
    """``A >= 0`` up to ``psd_abs * max(1, ||A||_2)``; non-Hermitian input is rejected."""
    A = np.asarray(A, dtype=complex)
    if A.size == 0:
        return True
    if not is_hermitian(A, tol):
        return False
    lo, slack = _psd_slack(A, tol)
    return lo >= -slack


def is_pd(A, tol: Tol = DEFAULT_TOL) -> bool:
    """``A > 0``: smallest eigenvalue above the PSD slack."""
    A = np.asarray(A, dtype=complex)
    if A.size == 0:
        return True
    if not is_hermitian(A, tol):
        return False
    lo, slack = _psd_slack(A, tol)
    return lo > slack


def loewner_leq(A, B, tol: Tol = DEFAULT_TOL) -> bool:
    """``A <= B`` in the Loewner order."""
    return is_psd(np.asarray(B, dtype=complex) - np.asarray(A, dtype=complex), tol)


def mat_close(A, B, tol: Tol = DEFAULT_TOL) -> bool:
    """Frobenius-norm equality with ``eq_abs * max(1, ||A||_F, ||B||_F)`` slack."""
    A = np.asarray(A, dtype=complex)
    B = np.asarray(B, dtype=complex)
    scale = max(1.0, float(np.linalg.norm(A)), float(np.linalg.norm(B)))
    return float(np.linalg.norm(A - B)) <= tol.eq_abs * scale


def op_norm(A) -> float:
    A = np.asarray(A, dtype=complex)
    return float(np.linalg.norm(A, 2)) if A.size else 0.0
