from fractions import Fraction

import numpy as np
import pytest

from hausdorff.hankel import (
    as_sequence,
    hankel_G,
    hankel_H,
    hankel_K,
    hankel_parametrization,
    is_Hgg,
    is_Kgg,
    is_Lgg,
    lambda_family,
    shift_a,
    shift_b,
    shift_c,
    stieltjes_parametrization,
    theta,
    y_block,
    z_block,
)
from hausdorff.linalg import InvalidInputError, schur_complement

import oracle

UNIFORM = [1 / (j + 1) for j in range(9)]


def random_sequence(rng, n, q):
    X = rng.standard_normal((n, q, q)) + 1j * rng.standard_normal((n, q, q))
    return X + X.conj().transpose(0, 2, 1)


def test_shapes_and_entries():
    s = as_sequence(UNIFORM)
    assert hankel_H(s, 2).shape == (3, 3)
    assert hankel_K(s, 2)[0, 0] == s[1, 0, 0]
    assert hankel_G(s, 1)[1, 1] == s[4, 0, 0]
    with pytest.raises(InvalidInputError):
        hankel_H(s[:4], 2)
    with pytest.raises(InvalidInputError):
        as_sequence(np.zeros((2, 2, 3)))
    with pytest.raises(InvalidInputError):
        as_sequence([1.0, np.nan])


def test_block_rule():
    s = random_sequence(np.random.default_rng(0), 7, 2)
    for n in (1, 2, 3):
        H = hankel_H(s, n)
        top = np.hstack([hankel_H(s, n - 1), y_block(s, n, 2 * n - 1)])
        bottom = np.hstack([z_block(s, n, 2 * n - 1), s[2 * n]])
        np.testing.assert_array_equal(H, np.vstack([top, bottom]))


def test_non_hankel_determinant():
    assert np.linalg.det(hankel_H([1, 2, 1], 1)).real == pytest.approx(-3.0)


def test_shift_identities():
    s = random_sequence(np.random.default_rng(1), 6, 2)
    al, be = -0.7, 1.9
    a, b, c = shift_a(s, al), shift_b(s, be), shift_c(s, al, be)
    np.testing.assert_allclose(c, -al * b[:-1] + b[1:], atol=1e-12)
    np.testing.assert_allclose(c, be * a[:-1] - a[1:], atol=1e-12)


def test_lambda_family_oracle():
    s = [Fraction(1, j + 1) for j in range(4)]
    # brute-force scalar values: M = N = s1 s2 / s0, Sigma = s1^2 s1 / s0^2
    M = s[1] * s[2] / s[0]
    sigma = s[1] * s[1] * s[1] / s[0] ** 2
    lam = 2 * M - sigma
    assert lam == Fraction(5, 24)
    fam = lambda_family([float(x) for x in s], 1)
    assert fam.theta[0, 0].real == pytest.approx(float(oracle.theta(s, 1)), abs=1e-14)
    assert fam.sigma[0, 0].real == pytest.approx(float(sigma), abs=1e-14)
    assert fam.lam[0, 0].real == pytest.approx(5 / 24, abs=1e-14)
    assert lambda_family([1.0, 0.5], 1).lam is None
    assert np.all(lambda_family(UNIFORM, 0).lam == 0)


def test_theta_against_exact_solve():
    s = [Fraction(1, j + 1) for j in range(7)]
    for n in range(4):
        assert theta([float(x) for x in s], n)[0, 0].real == pytest.approx(
            float(oracle.theta(s, n)), rel=1e-10, abs=1e-15)


def test_hankel_parametrization_values():
    h = hankel_parametrization(UNIFORM[:4]).real.ravel()
    np.testing.assert_allclose(h, [1, 1 / 2, 1 / 12, 1 / 24], atol=1e-14)


def test_even_hankel_parameter_is_schur_complement():
    rng = np.random.default_rng(2)
    W = rng.standard_normal((8, 2, 2)) + 1j * rng.standard_normal((8, 2, 2))
    x = rng.uniform(-1, 1, 8)
    s = np.einsum("ij,jab->iab", x[None, :] ** np.arange(7)[:, None],
                  W @ W.conj().transpose(0, 2, 1))
    h = hankel_parametrization(s)
    for n in range(1, 4):
        L = schur_complement(hankel_H(s, n), 2 * n)
        np.testing.assert_allclose(h[2 * n], L, atol=1e-8)


def test_stieltjes_parametrization_values():
    k = stieltjes_parametrization(UNIFORM[:4], 0.0).real.ravel()
    np.testing.assert_allclose(k, [1, 1 / 2, 1 / 12, 1 / 36], atol=1e-14)


def test_positivity_classes():
    s = UNIFORM[:3]
    assert is_Hgg(s) and is_Kgg(s, 0.0) and is_Lgg(s, 1.0)
    assert is_Hgg([1.0]) and is_Kgg([1.0], 5.0) and is_Lgg([1.0], -5.0)
    assert not is_Hgg([1, 2, 1])
    # moments of a mass at 2 are not supported left of 1
    dirac = [2.0 ** j for j in range(4)]
    assert is_Kgg(dirac, 1.0)
    assert not is_Lgg(dirac, 1.0)
    assert not is_Hgg([[[1, 1], [0, 1]]])


def test_hgg_on_sum_of_sequences():
    # sums of moment sequences stay positive and the even Hankel
    # parameters are superadditive
    rng = np.random.default_rng(7)
    seqs = []
    for _ in range(2):
        x = rng.uniform(0, 1, 5)
        w = rng.uniform(0.1, 1, 5)
        seqs.append(np.array([(w * x ** j).sum() for j in range(7)]))
    s1, s2 = seqs
    assert is_Hgg(s1 + s2)
    h1, h2, h12 = (hankel_parametrization(t).real.ravel() for t in (s1, s2, s1 + s2))
    for j in range(0, 7, 2):
        assert h12[j] >= h1[j] + h2[j] - 1e-12
