"""Block Hankel matrices built from a finite sequence of q x q matrices.

A sequence ``s_0, ..., s_kappa`` is stored as a complex array of shape
``(kappa + 1, q, q)``. Use :func:`as_sequence` to coerce scalar lists or
nested lists into that form.
"""
from __future__ import annotations

from typing import NamedTuple, Optional

import numpy as np

from .linalg import DEFAULT_TOL, EXT, InvalidInputError, Tol, is_hermitian, is_psd, pinv_solve


def as_sequence(s) -> np.ndarray:
    """Coerce `s` into a complex array of shape ``(n, q, q)``.

    A 1-D input is read as a scalar sequence (q = 1).
    """
    arr = np.asarray(s, dtype=complex)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1, 1)
    if arr.ndim != 3 or arr.shape[1] != arr.shape[2]:
        raise InvalidInputError(f"sequence must have shape (n, q, q), got {arr.shape}")
    if arr.shape[0] == 0 or arr.shape[1] == 0:
        raise InvalidInputError("sequence must be non-empty")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError("sequence has non-finite entries")
    return arr


def order(s) -> int:
    """Index of the last element, ``kappa``."""
    return len(s) - 1


def shift_a(s, alpha: float) -> np.ndarray:
    """``a_j = -alpha s_j + s_{j+1}``; one element shorter than `s`."""
    s = as_sequence(s)
    return -alpha * s[:-1] + s[1:]


def shift_b(s, beta: float) -> np.ndarray:
    """``b_j = beta s_j - s_{j+1}``; one element shorter than `s`."""
    s = as_sequence(s)
    return beta * s[:-1] - s[1:]


def shift_c(s, alpha: float, beta: float) -> np.ndarray:
    """``c_j = -alpha beta s_j + (alpha + beta) s_{j+1} - s_{j+2}``."""
    s = as_sequence(s)
    return -alpha * beta * s[:-2] + (alpha + beta) * s[1:-1] - s[2:]


def _block_hankel(s, n: int, offset: int) -> np.ndarray:
    s = as_sequence(s)
    if n < 0 or 2 * n + offset > len(s) - 1:
        raise InvalidInputError(
            f"block Hankel of size {n} with offset {offset} needs {2 * n + offset + 1} "
            f"elements, sequence has {len(s)}"
        )
    q = s.shape[1]
    H = np.empty(((n + 1) * q, (n + 1) * q), dtype=complex)
    for j in range(n + 1):
        for k in range(n + 1):
            H[j * q:(j + 1) * q, k * q:(k + 1) * q] = s[j + k + offset]
    return H


def hankel_H(s, n: int) -> np.ndarray:
    """``H_n = [s_{j+k}]_{j,k=0..n}``."""
    return _block_hankel(s, n, 0)


def hankel_K(s, n: int) -> np.ndarray:
    """``K_n = [s_{j+k+1}]_{j,k=0..n}``."""
    return _block_hankel(s, n, 1)


def hankel_G(s, n: int) -> np.ndarray:
    """``G_n = [s_{j+k+2}]_{j,k=0..n}``."""
    return _block_hankel(s, n, 2)


def y_block(s, lo: int, hi: int) -> np.ndarray:
    """Block column stacking ``s_lo, ..., s_hi``."""
    s = as_sequence(s)
    return np.concatenate(list(s[lo:hi + 1]), axis=0)


def z_block(s, lo: int, hi: int) -> np.ndarray:
    """Block row ``[s_lo, ..., s_hi]``."""
    s = as_sequence(s)
    return np.concatenate(list(s[lo:hi + 1]), axis=1)


def theta(s, n: int, tol: Tol = DEFAULT_TOL) -> np.ndarray:
    """``Theta_n = z_{n..2n-1} H_{n-1}^+ y_{n..2n-1}``, with ``Theta_0 = 0``.

    Needs ``s_0, ..., s_{2n-1}``.
    """
    s = as_sequence(s)
    q = s.shape[1]
    if n == 0:
        return np.zeros((q, q), dtype=complex)
    if 2 * n - 1 > len(s) - 1:
        raise InvalidInputError(f"Theta_{n} needs {2 * n} elements, sequence has {len(s)}")
    X = pinv_solve(hankel_H(s, n - 1), y_block(s, n, 2 * n - 1), tol)
    return (z_block(s, n, 2 * n - 1).astype(EXT) @ X).astype(complex)


class LambdaFamily(NamedTuple):
    theta: np.ndarray
    sigma: np.ndarray
    M: Optional[np.ndarray]
    N: Optional[np.ndarray]
    lam: Optional[np.ndarray]


def lambda_family(s, n: int, tol: Tol = DEFAULT_TOL) -> LambdaFamily:
    """Matrices ``Theta_n, Sigma_n, M_n, N_n`` and ``Lambda_n = M_n + N_n - Sigma_n``.

    ``Theta_n`` and ``Sigma_n`` need ``2n - 1 <= kappa``. The other three
    need ``2n <= kappa`` and are ``None`` when only ``2n - 1 = kappa``
    holds. All five vanish for ``n = 0``.
    """
    s = as_sequence(s)
    kappa = len(s) - 1
    q = s.shape[1]
    if n == 0:
        Z = np.zeros((q, q), dtype=complex)
        return LambdaFamily(Z, Z.copy(), Z.copy(), Z.copy(), Z.copy())
    if n < 0 or 2 * n - 1 > kappa:
        raise InvalidInputError(f"index {n} out of range for a sequence of order {kappa}")
    H = hankel_H(s, n - 1)
    z = z_block(s, n, 2 * n - 1)
    y = y_block(s, n, 2 * n - 1)
    Hy = pinv_solve(H, y, tol)
    # z H^+ = ((H^*)^+ z^*)^*
    zH = pinv_solve(H.conj().T, z.conj().T, tol).conj().T
    th = z.astype(EXT) @ Hy
    sig = zH @ hankel_K(s, n - 1).astype(EXT) @ Hy
    if 2 * n > kappa:
        return LambdaFamily(th.astype(complex), sig.astype(complex), None, None, None)
    M = zH @ y_block(s, n + 1, 2 * n).astype(EXT)
    N = z_block(s, n + 1, 2 * n).astype(EXT) @ Hy
    out = (th, sig, M, N, M + N - sig)
    return LambdaFamily(*(x.astype(complex) for x in out))


def hankel_parametrization(s, tol: Tol = DEFAULT_TOL) -> np.ndarray:
    """``h_{2k} = s_{2k} - Theta_k`` and ``h_{2k+1} = s_{2k+1} - Lambda_k``."""
    s = as_sequence(s)
    h = np.empty_like(s)
    for j in range(len(s)):
        k = j // 2
        if j % 2 == 0:
            h[j] = s[j] - theta(s, k, tol)
        else:
            h[j] = s[j] - lambda_family(s[:j + 1], k, tol).lam
    return h


def stieltjes_parametrization(s, alpha: float, tol: Tol = DEFAULT_TOL) -> np.ndarray:
    """``k_{2k} = s_{2k} - Theta_k`` and ``k_{2k+1} = a_{2k} - Theta_k(a)``,
    where ``a`` is the left-shifted sequence for `alpha`."""
    s = as_sequence(s)
    a = shift_a(s, alpha)
    out = np.empty_like(s)
    for j in range(len(s)):
        k = j // 2
        if j % 2 == 0:
            out[j] = s[j] - theta(s, k, tol)
        else:
            out[j] = a[j - 1] - theta(a, k, tol)
    return out


def _all_hermitian(s, tol: Tol) -> bool:
    return all(is_hermitian(x, tol) for x in s)


def is_Hgg(s, tol: Tol = DEFAULT_TOL) -> bool:
    """Whether the largest admissible ``H_n`` (``2n <= kappa``) is PSD.

    For odd ``kappa`` only the even part ``s_0..s_{kappa-1}`` is tested;
    the full odd-order class on an interval is decided in
    :mod:`hausdorff.fparam`.
    """
    s = as_sequence(s)
    if not _all_hermitian(s, tol):
        return False
    return is_psd(hankel_H(s, (len(s) - 1) // 2), tol)


def _one_sided(s, shifted, tol: Tol) -> bool:
    s = as_sequence(s)
    if not _all_hermitian(s, tol):
        return False
    kappa = len(s) - 1
    n = kappa // 2
    if not is_psd(hankel_H(s, n), tol):
        return False
    if kappa == 0:
        return True
    t = shifted(s)
    m = n - 1 if kappa % 2 == 0 else n
    return is_psd(hankel_H(t, m), tol)


def is_Kgg(s, alpha: float, tol: Tol = DEFAULT_TOL) -> bool:
    """Moment-type positivity on ``[alpha, inf)``: ``H_n`` and the
    left-shifted Hankel of the matching size are PSD."""
    return _one_sided(s, lambda x: shift_a(x, alpha), tol)


def is_Lgg(s, beta: float, tol: Tol = DEFAULT_TOL) -> bool:
    """Moment-type positivity on ``(-inf, beta]``, using ``beta H - K``."""
    return _one_sided(s, lambda x: shift_b(x, beta), tol)
