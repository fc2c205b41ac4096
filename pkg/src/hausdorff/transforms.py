"""Affine changes of variable acting on moment sequences."""
from __future__ import annotations

from math import comb

import numpy as np

from .fparam import IntervalContext
from .hankel import as_sequence
from .linalg import DEFAULT_TOL, InvalidInputError, Tol


def binomial_transform(s, phi: complex, psi: complex) -> np.ndarray:
    """Moments of the image measure under ``x -> psi x + phi``.

    ``w_j = sum_l C(j, l) psi^l phi^(j-l) s_l``. Binomial coefficients
    are exact integers before conversion to floating point.
    """
    s = as_sequence(s)
    if not (np.isfinite(phi) and np.isfinite(psi)):
        raise InvalidInputError("phi and psi must be finite")
    w = np.zeros_like(s)
    for j in range(len(s)):
        for ell in range(j + 1):
            w[j] += float(comb(j, ell)) * psi ** ell * phi ** (j - ell) * s[ell]
    return w


def affine_transform(s, eta: float, theta: float) -> np.ndarray:
    """Moments under ``x -> theta x + eta``."""
    return binomial_transform(s, eta, theta)


def reflect(s) -> np.ndarray:
    """Moments of the mirrored measure, ``(-1)^j s_j``."""
    return affine_transform(s, 0.0, -1.0)


def transformed_context(ctx: IntervalContext, eta: float, theta: float) -> IntervalContext:
    """Image of ``[alpha, beta]`` under ``x -> theta x + eta`` (``theta != 0``)."""
    if theta == 0 or not np.isfinite(theta) or not np.isfinite(eta):
        raise InvalidInputError("theta must be finite and non-zero, eta finite")
    a = theta * ctx.alpha + eta
    b = theta * ctx.beta + eta
    return IntervalContext(min(a, b), max(a, b), ctx.tol)


def is_symmetric_sequence(s, eta: float, tol: Tol = DEFAULT_TOL) -> bool:
    """Whether `s` equals its image under the reflection ``x -> eta - x``.

    For a sequence on ``[alpha, beta]`` use ``eta = alpha + beta``.
    """
    s = as_sequence(s)
    w = affine_transform(s, eta, -1.0)
    for a, b in zip(s, w):
        scale = max(1.0, float(np.linalg.norm(a)))
        if np.linalg.norm(a - b) > tol.eq_abs * scale:
            return False
    return True
