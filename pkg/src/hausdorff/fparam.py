"""Matrix moment sequences on a compact interval ``[alpha, beta]``.

Covers the lower/upper envelope of each moment given its predecessors,
the positive f-parametrization, canonical moments and their inverse,
one-step extensions, structural classification and the Dette-Studden
factorization.

Arrays indexed from 1 in the mathematics (``B``, ``U``, ``V``, ``zeta``,
``gamma``) keep that indexing: slot 0 is unused and filled with NaN.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .hankel import as_sequence, hankel_H, shift_a, shift_b, shift_c, theta
from .linalg import (
    DEFAULT_TOL,
    DomainError,
    InvalidInputError,
    NumericalConsistencyError,
    Tol,
    clean_hermitian,
    herm,
    is_hermitian,
    is_pd,
    is_psd,
    loewner_leq,
    mat_close,
    op_norm,
    parallel_sum,
    pinv,
    psd_pinv_sqrt,
    psd_sqrt,
    range_projection,
    rank_tol,
)


@dataclass(frozen=True)
class IntervalContext:
    """Interval ``[alpha, beta]`` together with the tolerances in use."""

    alpha: float
    beta: float
    tol: Tol = field(default=DEFAULT_TOL)

    def __post_init__(self):
        a, b = float(self.alpha), float(self.beta)
        if not (np.isfinite(a) and np.isfinite(b)) or not a < b:
            raise InvalidInputError(f"need finite alpha < beta, got [{self.alpha}, {self.beta}]")

    @property
    def width(self) -> float:
        return float(self.beta) - float(self.alpha)


def _nan_like(shape):
    return np.full(shape, np.nan + 0j)


@dataclass
class EnvelopeData:
    """Lower/upper envelopes and deviations of a sequence.

    ``u[j], o[j]`` bound ``s_{j+1}`` given ``s_0..s_j``; ``A[j] = s_j - u[j-1]``
    (``A[0] = s_0``), ``B[j] = o[j-1] - s_j`` (``B[0]`` unused),
    ``d = o - u`` and ``m = (u + o) / 2``.
    """

    u: np.ndarray
    o: np.ndarray
    A: np.ndarray
    B: np.ndarray
    d: np.ndarray
    m: np.ndarray


@dataclass
class CanonicalMoments:
    """Canonical moments ``e_0..e_kappa`` with the lengths ``d_j`` and the
    range projections ``P_j`` of ``d_j``."""

    e: np.ndarray
    d: np.ndarray
    P: np.ndarray


def _lower(s, j, alpha, beta, tol):
    """Lower envelope for ``s_{j+1}`` given ``s_0..s_j``."""
    k = j // 2
    if j % 2 == 0:
        a = shift_a(s[:j + 1], alpha)
        return alpha * s[j] + (theta(a, k, tol) if k else 0.0)
    return theta(s[:j + 1], k + 1, tol)


def _upper(s, j, alpha, beta, tol):
    """Upper envelope for ``s_{j+1}`` given ``s_0..s_j``."""
    k = j // 2
    if j % 2 == 0:
        b = shift_b(s[:j + 1], beta)
        return beta * s[j] - (theta(b, k, tol) if k else 0.0)
    c = shift_c(s[:j + 1], alpha, beta)
    rest = theta(c, k, tol) if k else 0.0
    return -alpha * beta * s[j - 1] + (alpha + beta) * s[j] - rest


_ROUNDING = 64 * np.finfo(float).eps


def _smallest_positive(D) -> float:
    w = np.linalg.eigvalsh(herm(D))
    w = w[w > 0]
    return float(w.min()) if w.size else 0.0


def envelope(s, ctx: IntervalContext) -> EnvelopeData:
    """Envelope data for ``j = 0..kappa``.

    Differences of nearly equal large quantities are cleaned so exact
    degeneracies come out as exact zeros. For ``d_j`` eigenvalues below
    ``rank_rel`` times the operand scale are dropped; ``A_j`` and ``B_j``
    are measured against the smallest positive eigenvalue of ``d_{j-1}``,
    floored at the rounding level of the subtraction, so that a thin but
    resolved direction of ``d_{j-1}`` is not wiped out.
    """
    s = as_sequence(s)
    tol = ctx.tol
    al, be = float(ctx.alpha), float(ctx.beta)
    n, q = s.shape[0], s.shape[1]
    u = np.empty_like(s)
    o = np.empty_like(s)
    d = np.empty_like(s)
    A = np.empty_like(s)
    B = _nan_like(s.shape)
    A[0] = s[0]
    eta = ctx.width
    prev = op_norm(s[0])
    # A_j, B_j and d_j live on the range of d_{j-1}; compressing onto it
    # removes rounding noise that would otherwise be read as new rank
    P = range_projection(s[0], tol)
    floor = _smallest_positive(s[0])
    for j in range(n):
        u[j] = herm(_lower(s, j, al, be, tol))
        o[j] = herm(_upper(s, j, al, be, tol))
        if j >= 1:
            # 0 <= A_j, B_j <= d_{j-1}: a component is negligible relative to
            # the thinnest direction of d_{j-1}, not to the operand size,
            # as long as it stays above the rounding level of the subtraction
            big = max(op_norm(s[j]), op_norm(u[j - 1]), op_norm(o[j - 1]), prev)
            scale = max(floor, _ROUNDING * big / tol.rank_rel)
            A[j] = clean_hermitian(P @ (s[j] - u[j - 1]) @ P, scale, tol)
            B[j] = clean_hermitian(P @ (o[j - 1] - s[j]) @ P, scale, tol)
        scale = max(op_norm(u[j]), op_norm(o[j]), eta * prev)
        d[j] = clean_hermitian(P @ (o[j] - u[j]) @ P, scale, tol)
        prev = op_norm(d[j])
        floor = _smallest_positive(d[j])
        P = range_projection(d[j], tol)
    return EnvelopeData(u=u, o=o, A=A, B=B, d=d, m=0.5 * (u + o))


def f_from_envelope(env: EnvelopeData) -> np.ndarray:
    """Interleave deviations into ``f_0..f_{2 kappa}``.

    ``f_{4k+1} = A_{2k+1}``, ``f_{4k+2} = B_{2k+1}``, ``f_{4k+3} = B_{2k+2}``,
    ``f_{4k+4} = A_{2k+2}``.
    """
    n, q = env.A.shape[0], env.A.shape[1]
    f = np.empty((2 * n - 1, q, q), dtype=complex)
    f[0] = env.A[0]
    for j in range(1, n):
        if j % 2 == 1:
            f[2 * j - 1], f[2 * j] = env.A[j], env.B[j]
        else:
            f[2 * j - 1], f[2 * j] = env.B[j], env.A[j]
    return f


def f_parametrization(s, ctx: IntervalContext) -> np.ndarray:
    """Positive parametrization ``f_0..f_{2 kappa}`` of `s` on the interval."""
    return f_from_envelope(envelope(s, ctx))


def _first_non_psd(mats, tol: Tol) -> Optional[int]:
    for i, X in enumerate(mats):
        if not is_psd(X, tol):
            return i
    return None


def is_Fgg(s, ctx: IntervalContext) -> bool:
    """Whether `s` is a truncated matrix moment sequence on the interval."""
    s = as_sequence(s)
    if not all(is_hermitian(x, ctx.tol) for x in s):
        return False
    return _first_non_psd(f_parametrization(s, ctx), ctx.tol) is None


def is_Fg(s, ctx: IntervalContext) -> bool:
    """Whether `s` is an interior point: every ``f_j`` positive definite."""
    s = as_sequence(s)
    if not all(is_hermitian(x, ctx.tol) for x in s):
        return False
    return all(is_pd(x, ctx.tol) for x in f_parametrization(s, ctx))


def _require_Fgg(s, ctx: IntervalContext):
    """Envelope and f of `s`, raising :class:`DomainError` when `s` is not admissible."""
    for i, x in enumerate(s):
        if not is_hermitian(x, ctx.tol):
            raise DomainError(f"s_{i} is not Hermitian", index=i)
    env = envelope(s, ctx)
    f = f_from_envelope(env)
    bad = _first_non_psd(f, ctx.tol)
    if bad is not None:
        lo = float(np.linalg.eigvalsh(herm(f[bad])).min())
        raise DomainError(
            f"not a moment sequence on [{ctx.alpha}, {ctx.beta}]: f_{bad} has eigenvalue {lo:.3e}",
            index=bad,
        )
    return env, f


def _check_lengths(env: EnvelopeData, f: np.ndarray, ctx: IntervalContext):
    """Compare ``d_k`` with ``width * (f_{2k-1} || f_{2k})`` (``width * f_0`` for k = 0)."""
    eta = ctx.width
    lim = 10 * ctx.tol.eq_abs
    for k in range(len(env.d)):
        alt = eta * (f[0] if k == 0 else parallel_sum(f[2 * k - 1], f[2 * k], ctx.tol))
        scale = max(1.0, float(np.linalg.norm(env.d[k])), float(np.linalg.norm(alt)))
        if np.linalg.norm(env.d[k] - alt) > lim * scale:
            raise NumericalConsistencyError(
                f"length d_{k} from the envelope disagrees with the parallel-sum route"
            )


def canonical_moments(s, ctx: IntervalContext, check: bool = __debug__) -> CanonicalMoments:
    """Canonical moments ``e_j = (d_{j-1}^{1/2})^+ f_{2j} (d_{j-1}^{1/2})^+``.

    Parameters
    ----------
    s : array_like, shape (kappa + 1, q, q)
    ctx : IntervalContext
    check : bool
        Cross-check the lengths against the parallel-sum formula and raise
        :class:`NumericalConsistencyError` on disagreement.

    Raises
    ------
    DomainError
        If `s` is not a moment sequence on the interval; ``index`` names
        the first ``f_j`` that fails to be PSD.
    """
    s = as_sequence(s)
    tol = ctx.tol
    env, f = _require_Fgg(s, ctx)
    if check:
        _check_lengths(env, f, ctx)
    n = len(s)
    e = np.empty_like(s)
    P = np.empty_like(s)
    e[0] = herm(f[0])
    for j in range(n):
        P[j] = range_projection(env.d[j], tol)
    for j in range(1, n):
        r = psd_pinv_sqrt(env.d[j - 1], tol)
        ej = r @ f[2 * j] @ r
        e[j] = herm(P[j - 1] @ ej @ P[j - 1])
    return CanonicalMoments(e=e, d=env.d.copy(), P=P)


def _clamp_unit(E, Pk, tol: Tol):
    """Project onto ``range(Pk)`` and clamp the spectrum into ``[0, 1]``."""
    E = herm(Pk @ E @ Pk)
    w, U = np.linalg.eigh(E)
    w = np.clip(w, 0.0, 1.0)
    w[w <= tol.psd_abs] = 0.0
    w[w >= 1.0 - tol.psd_abs] = 1.0
    E = (U * w) @ U.conj().T
    return herm(Pk @ E @ Pk)


def check_E(e, width: float, tol: Tol = DEFAULT_TOL) -> Optional[int]:
    """First index where `e` leaves the canonical-moment domain, else ``None``.

    Requires ``e_0 >= 0`` and ``0 <= e_k <= P_{k-1}`` where ``P_{k-1}``
    projects onto the range of the length ``d_{k-1}``.
    """
    e = as_sequence(e)
    if not is_psd(e[0], tol):
        return 0
    d = width * herm(e[0])
    for k in range(1, len(e)):
        Pk = range_projection(d, tol)
        # for e = P e P, e <= P is the same as e <= I, which does not
        # depend on how sharply P itself is known
        if not (is_psd(e[k], tol) and loewner_leq(e[k], np.eye(len(Pk)), tol)):
            return k
        if not mat_close(Pk @ e[k] @ Pk, e[k], tol):
            return k
        d = next_length(d, _clamp_unit(e[k], Pk, tol), Pk, width, tol)
    return None


def validate_E(e, width: float, tol: Tol = DEFAULT_TOL) -> bool:
    return check_E(e, width, tol) is None


def next_length(d, ek, Pk, width: float, tol: Tol = DEFAULT_TOL) -> np.ndarray:
    """``width d^{1/2} e^{1/2} (P - e) e^{1/2} d^{1/2}``, noise below the scale of `d` removed."""
    rd = psd_sqrt(d, tol)
    re = psd_sqrt(ek, tol)
    out = width * rd @ re @ (Pk - ek) @ re @ rd
    return clean_hermitian(out, width * op_norm(d), tol)


def check_C(f, width: float, tol: Tol = DEFAULT_TOL) -> Optional[int]:
    """First index where `f` violates the f-parameter constraints, else ``None``.

    All ``f_j`` must be PSD, ``width f_0 = f_1 + f_2`` and
    ``width (f_{2k-1} || f_{2k}) = f_{2k+1} + f_{2k+2}``.
    """
    f = as_sequence(f)
    if len(f) % 2 == 0:
        raise InvalidInputError("f must have odd length 2 kappa + 1")
    bad = _first_non_psd(f, tol)
    if bad is not None:
        return bad
    kappa = (len(f) - 1) // 2
    for k in range(kappa):
        lhs = width * (f[0] if k == 0 else parallel_sum(f[2 * k - 1], f[2 * k], tol))
        if not mat_close(lhs, f[2 * k + 1] + f[2 * k + 2], tol):
            return 2 * k + 1
    return None


def validate_C(f, width: float, tol: Tol = DEFAULT_TOL) -> bool:
    return check_C(f, width, tol) is None


def from_canonical(e, ctx: IntervalContext, q: Optional[int] = None) -> np.ndarray:
    """Moment sequence with canonical moments `e` on the interval.

    Near-boundary spectra are clamped into ``[0, 1]`` on the range of
    ``P_{k-1}`` before use.

    Raises
    ------
    DomainError
        If `e` is outside the canonical-moment domain.
    """
    e = as_sequence(e)
    if q is not None and e.shape[1] != q:
        raise InvalidInputError(f"expected {q} x {q} blocks, got {e.shape[1]}")
    tol = ctx.tol
    bad = check_E(e, ctx.width, tol)
    if bad is not None:
        raise DomainError(f"e_{bad} is outside the canonical-moment domain", index=bad)
    al = float(ctx.alpha)
    n = len(e)
    # f from e
    f = np.empty((2 * n - 1,) + e.shape[1:], dtype=complex)
    f[0] = herm(e[0])
    d = ctx.width * f[0]
    for k in range(1, n):
        Pk = range_projection(d, tol)
        ek = _clamp_unit(e[k], Pk, tol)
        rd = psd_sqrt(d, tol)
        f[2 * k] = herm(rd @ ek @ rd)
        f[2 * k - 1] = herm(rd @ (Pk - ek) @ rd)
        d = next_length(d, ek, Pk, ctx.width, tol)
    # moments from f, lowest first
    s = np.empty_like(e)
    s[0] = f[0]
    for j in range(1, n):
        k = j // 2
        if j % 2 == 0:
            s[j] = theta(s[:j], k, tol) + f[2 * j]
        else:
            a = shift_a(s[:j], al)
            s[j] = al * s[j - 1] + (theta(a, k, tol) if k else 0.0) + f[2 * j - 1]
        s[j] = herm(s[j])
    return s


@dataclass(frozen=True)
class ExtensionInterval:
    lower: np.ndarray
    upper: np.ndarray
    width: np.ndarray
    center: np.ndarray


def extension_interval(s, ctx: IntervalContext) -> ExtensionInterval:
    """Matrix interval ``[u_kappa, o_kappa]`` of admissible next moments."""
    s = as_sequence(s)
    env, _ = _require_Fgg(s, ctx)
    return ExtensionInterval(env.u[-1], env.o[-1], env.d[-1], env.m[-1])


def extend(s, ctx: IntervalContext, K=0.5) -> np.ndarray:
    """Append ``s_{kappa+1} = u + d^{1/2} K d^{1/2}`` for a contraction ``0 <= K <= I``.

    A scalar `K` means ``K * I``.
    """
    s = as_sequence(s)
    q = s.shape[1]
    tol = ctx.tol
    K = np.asarray(K, dtype=complex)
    if K.ndim == 0:
        K = K * np.eye(q)
    if K.shape != (q, q) or not np.all(np.isfinite(K)):
        raise InvalidInputError(f"K must be a scalar or a {q} x {q} matrix")
    if not (is_psd(K, tol) and loewner_leq(K, np.eye(q), tol)):
        raise InvalidInputError("K must satisfy 0 <= K <= I")
    iv = extension_interval(s, ctx)
    r = psd_sqrt(iv.width, tol)
    nxt = herm(iv.lower + r @ K @ r)
    return np.concatenate([s, nxt[None]], axis=0)


@dataclass(frozen=True)
class Classification:
    """Structural flags of a moment sequence.

    ``degenerate_index`` is the first ``k >= 1`` with ``e_k`` idempotent
    (equivalently ``d_k = 0``); ``central_from`` the first ``k >= 1`` from
    which every ``e_j = P_{j-1} / 2``; ``symmetric`` holds when every odd
    ``e_{2k+1} = P_{2k} / 2``; ``interior`` when every ``f_j`` is PD.
    """

    degenerate_index: Optional[int]
    central_from: Optional[int]
    symmetric: bool
    interior: bool


def classify(s, ctx: IntervalContext) -> Classification:
    s = as_sequence(s)
    tol = ctx.tol
    cm = canonical_moments(s, ctx)
    e, P = cm.e, cm.P
    n = len(s)
    degen = None
    for k in range(1, n):
        if mat_close(e[k] @ e[k], e[k], tol):
            degen = k
            break
    half = [k >= 1 and mat_close(e[k], 0.5 * P[k - 1], tol) for k in range(n)]
    central = None
    for k in range(n - 1, 0, -1):
        if not half[k]:
            break
        central = k
    symmetric = all(half[k] for k in range(1, n, 2))
    interior = all(is_pd(x, tol) for x in f_from_envelope(envelope(s, ctx)))
    return Classification(degen, central, symmetric, interior)


@dataclass
class FamilyReport:
    """Ranks and determinants of one Hankel family against its f-factors.

    ``scale[n]`` is the reference norm used for the rank of the n-th
    Hankel matrix.
    """

    rank_hankel: list
    rank_f: list
    det_hankel: list
    det_f: list
    scale: list


@dataclass
class DetRankReport:
    """Keys ``"H", "Ha", "Hb", "Hc"``; entry ``n`` compares the Hankel of
    size ``n`` with ``f_{4k+r}``, ``k <= n``."""

    families: dict


def det_rank_report(s, ctx: IntervalContext) -> DetRankReport:
    """Rank and determinant of ``H_n``, ``H_n(a)``, ``H_n(b)``, ``H_n(c)``
    next to the sums of ranks and products of determinants of
    ``f_{4k}``, ``f_{4k+1}``, ``f_{4k+2}``, ``f_{4k+3}`` respectively."""
    s = as_sequence(s)
    tol = ctx.tol
    al, be = float(ctx.alpha), float(ctx.beta)
    env, f = _require_Fgg(s, ctx)
    kappa = len(s) - 1
    seqs = {
        "H": (s, 0),
        "Ha": (shift_a(s, al), 1),
        "Hb": (shift_b(s, be), 2),
        "Hc": (shift_c(s, al, be) if kappa >= 2 else s[:0], 3),
    }
    # shifted Hankels are differences of larger blocks; their ranks are
    # judged against the size of those blocks
    weights = {"H": (1.0, 0.0, 0.0), "Ha": (abs(al), 1.0, 0.0), "Hb": (abs(be), 1.0, 0.0),
               "Hc": (abs(al * be), abs(al + be), 1.0)}
    out = {}
    for name, (t, r) in seqs.items():
        rep = FamilyReport([], [], [], [], [])
        nmax = (len(t) - 1) // 2 if len(t) else -1
        rsum, dprod = 0, 1.0 + 0j
        for n in range(nmax + 1):
            Hn = hankel_H(t, n)
            w = weights[name]
            href = sum(c * op_norm(hankel_H(s[i:], n)) for i, c in enumerate(w) if c)
            fk = f[4 * n + r]
            # f-factors are carved out of d_{2n + r//2 ...}; use their
            # parent length as the noise reference.
            ref = _f_reference(env, 4 * n + r)
            rsum += rank_tol(fk, tol, ref=ref)
            dprod *= np.linalg.det(fk)
            rep.rank_hankel.append(rank_tol(Hn, tol, ref=href))
            rep.rank_f.append(rsum)
            rep.det_hankel.append(complex(np.linalg.det(Hn)))
            rep.det_f.append(complex(dprod))
            rep.scale.append(max(href, op_norm(Hn)))
        out[name] = rep
    return DetRankReport(out)


def _f_reference(env: EnvelopeData, j: int) -> float:
    if j == 0:
        return 0.0
    k = (j + 1) // 2
    return op_norm(env.d[k - 1])


@dataclass
class DetteStudden:
    """``U_k = d_{k-1}^+ A_k``, ``V_k = d_{k-1}^+ B_k`` and the products
    ``zeta_k``, ``gamma_k``; slot 0 of every array is unused."""

    U: np.ndarray
    V: np.ndarray
    zeta: np.ndarray
    gamma: np.ndarray

    def residuals(self, s, ctx: IntervalContext) -> dict:
        """Largest relative residual of each factorization identity.

        An identity ``X = Y`` contributes
        ``||X - Y||_F / max(1, ||X||_F, ||Y||_F)``.
        """
        s = as_sequence(s)
        env = envelope(s, ctx)
        eta = ctx.width
        U, V, Z, G = self.U, self.V, self.zeta, self.gamma
        n = len(s)
        res = {"commute": 0.0, "sum": 0.0, "length": 0.0, "lower": 0.0,
               "upper": 0.0, "lower_chain": 0.0, "upper_chain": 0.0}

        def upd(key, X, Y):
            nx, ny = float(np.linalg.norm(X)), float(np.linalg.norm(Y))
            r = float(np.linalg.norm(X - Y)) / max(1.0, nx, ny)
            res[key] = max(res[key], r)

        prodUV = np.eye(s.shape[1], dtype=complex)
        prodZ = np.eye(s.shape[1], dtype=complex)
        prodG = np.eye(s.shape[1], dtype=complex)
        for k in range(1, n):
            upd("commute", U[k] @ V[k], V[k] @ U[k])
            upd("sum", U[k] + V[k], pinv(env.d[k - 1], ctx.tol) @ env.d[k - 1])
            prodUV = prodUV @ U[k] @ V[k]
            upd("length", env.d[k], eta ** (k + 1) * s[0] @ prodUV)
            prodZ = prodZ @ Z[k]
            prodG = prodG @ G[k]
            upd("lower", env.A[k], eta ** k * s[0] @ prodZ)
            upd("upper", env.B[k], eta ** k * s[0] @ prodG)
            upd("lower_chain", eta * env.A[k - 1] @ Z[k], env.A[k])
            if k >= 2:
                upd("upper_chain", eta * env.B[k - 1] @ G[k], env.B[k])
        return res


def dette_studden(s, ctx: IntervalContext) -> DetteStudden:
    s = as_sequence(s)
    tol = ctx.tol
    env, _ = _require_Fgg(s, ctx)
    n = len(s)
    U = _nan_like(s.shape)
    V = _nan_like(s.shape)
    Z = _nan_like(s.shape)
    G = _nan_like(s.shape)
    for k in range(1, n):
        dp = pinv(env.d[k - 1], tol)
        U[k] = dp @ env.A[k]
        V[k] = dp @ env.B[k]
        if k == 1:
            Z[k], G[k] = U[k], V[k]
        else:
            Z[k] = V[k - 1] @ U[k]
            G[k] = U[k - 1] @ V[k]
    return DetteStudden(U, V, Z, G)
