"""Molecular measures and random sampling of the moment space."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .fparam import IntervalContext, canonical_moments, from_canonical, next_length
from .hankel import as_sequence
from .linalg import InvalidInputError, herm, is_hermitian, is_psd, mat_close, range_projection


@dataclass(frozen=True)
class MolecularMeasure:
    """Finite sum of point masses ``sum_i W_i delta_{x_i}`` with PSD weights.

    Nodes must be strictly increasing.
    """

    nodes: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.nodes, dtype=float).reshape(-1)
        W = as_sequence(self.weights)
        if len(x) != len(W):
            raise InvalidInputError("need one weight per node")
        if not np.all(np.isfinite(x)) or np.any(np.diff(x) <= 0):
            raise InvalidInputError("nodes must be finite and strictly increasing")
        for i, Wi in enumerate(W):
            if not (is_hermitian(Wi) and is_psd(Wi)):
                raise InvalidInputError(f"weight {i} is not PSD")
        object.__setattr__(self, "nodes", x)
        object.__setattr__(self, "weights", W)

    @property
    def dim(self) -> int:
        return self.weights.shape[1]


def moments(mu: MolecularMeasure, kappa: int) -> np.ndarray:
    """``s_j = sum_i x_i^j W_i`` for ``j = 0..kappa``."""
    if kappa < 0:
        raise InvalidInputError("kappa must be non-negative")
    powers = mu.nodes[None, :] ** np.arange(kappa + 1)[:, None]
    return np.einsum("ji,iab->jab", powers, mu.weights)


def image_measure(mu: MolecularMeasure, theta: float, eta: float) -> MolecularMeasure:
    """Push-forward under ``x -> theta x + eta``."""
    if theta == 0:
        raise InvalidInputError("theta must be non-zero")
    x = theta * mu.nodes + eta
    idx = np.argsort(x)
    return MolecularMeasure(x[idx], mu.weights[idx])


@dataclass(frozen=True)
class SamplerConfig:
    """Parameters of :func:`sample_moment_space`.

    `boundary_bias` is the probability that each eigenvalue of a drawn
    canonical moment is pinned to 0 or 1.
    """

    q: int
    kappa: int
    seed: int = 0
    boundary_bias: float = 0.0
    s0_scale: float = 1.0

    def __post_init__(self):
        if self.q < 1 or self.kappa < 0:
            raise InvalidInputError("need q >= 1 and kappa >= 0")
        if not 0.0 <= self.boundary_bias <= 1.0:
            raise InvalidInputError("boundary_bias must lie in [0, 1]")
        if not self.s0_scale > 0:
            raise InvalidInputError("s0_scale must be positive")


def haar_unitary(q: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via QR with the phase correction."""
    Z = (rng.standard_normal((q, q)) + 1j * rng.standard_normal((q, q))) / np.sqrt(2)
    Q, R = np.linalg.qr(Z)
    ph = np.diag(R) / np.abs(np.diag(R))
    return Q * ph


def sample_moment_space(cfg: SamplerConfig, ctx: IntervalContext):
    """Draw a random moment sequence through its canonical moments.

    ``e_0 = s0_scale W W^*`` with complex Gaussian ``W``; each later
    ``e_k`` is ``V U diag(t) U^* V^*`` where ``V`` spans the range of
    ``P_{k-1}``, ``U`` is Haar on that range and ``t ~ U[0, 1]`` with each
    entry pinned to 0 or 1 with probability ``boundary_bias``.

    Returns
    -------
    s, e : ndarray
        Moments and the canonical moments used to build them.
    """
    q, kappa = cfg.q, cfg.kappa
    streams = [np.random.default_rng(ss) for ss in np.random.SeedSequence(cfg.seed).spawn(kappa + 1)]
    W = streams[0].standard_normal((q, q)) + 1j * streams[0].standard_normal((q, q))
    e = np.zeros((kappa + 1, q, q), dtype=complex)
    e[0] = herm(cfg.s0_scale * W @ W.conj().T)
    d = ctx.width * e[0]
    tol = ctx.tol
    for k in range(1, kappa + 1):
        rng = streams[k]
        P = range_projection(d, tol)
        w, B = np.linalg.eigh(P)
        V = B[:, w > 0.5]
        r = V.shape[1]
        if r == 0:
            continue
        t = rng.uniform(0.0, 1.0, r)
        pin = rng.uniform(0.0, 1.0, r) < cfg.boundary_bias
        t[pin] = (rng.uniform(0.0, 1.0, r) < 0.5)[pin].astype(float)
        U = V @ haar_unitary(r, rng)
        e[k] = herm((U * t) @ U.conj().T)
        d = next_length(d, e[k], P, ctx.width, tol)
    s = from_canonical(e, ctx)
    return s, e


def molecular_equivalent_order(s, ctx: IntervalContext) -> Optional[int]:
    """First ``k >= 1`` whose canonical moment is idempotent (length ``d_k = 0``).

    Returns ``None`` when no such index exists within the sequence.
    """
    cm = canonical_moments(s, ctx)
    for k in range(1, len(cm.e)):
        if mat_close(cm.e[k] @ cm.e[k], cm.e[k], ctx.tol):
            return k
    return None
