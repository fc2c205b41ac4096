import numpy as np
import pytest

from hausdorff.fparam import IntervalContext, canonical_moments, is_Fgg
from hausdorff.linalg import InvalidInputError
from hausdorff.measures import (
    MolecularMeasure,
    SamplerConfig,
    haar_unitary,
    image_measure,
    molecular_equivalent_order,
    moments,
    sample_moment_space,
)
from hausdorff.transforms import affine_transform

UNIT = IntervalContext(0.0, 1.0)

# frozen output of the sampler for q = 1, kappa = 3, seed = 2024 on [0, 1]
GOLDEN_S = [0.07427795381980981, 0.06508167130921681, 0.06444665581956295, 0.06435624758722161]
GOLDEN_E = [0.07427795381980981, 0.12380904477931853, 0.921191465985121, 0.07959297730799253]


def test_two_point_moments():
    mu = MolecularMeasure([0.0, 1.0], [[[0.5]], [[0.5]]])
    np.testing.assert_allclose(moments(mu, 3).real.ravel(), [1, 0.5, 0.5, 0.5])


def test_measure_validation():
    with pytest.raises(InvalidInputError):
        MolecularMeasure([1.0, 0.0], [[[1.0]], [[1.0]]])
    with pytest.raises(InvalidInputError):
        MolecularMeasure([0.0], [[[-1.0]]])
    with pytest.raises(InvalidInputError):
        MolecularMeasure([0.0, 1.0], [[[1.0]]])


def test_image_measure_matches_transform():
    W = np.array([[[2, 1j], [-1j, 1]], [[1, 0], [0, 0]], [[1, 1], [1, 1]]], dtype=complex)
    mu = MolecularMeasure([0.1, 0.5, 0.8], W)
    for theta, eta in [(2.0, 1.0), (-1.0, 0.0), (0.5, -3.0)]:
        np.testing.assert_allclose(moments(image_measure(mu, theta, eta), 5),
                                   affine_transform(moments(mu, 5), eta, theta), atol=1e-12)


def test_haar_unitary():
    rng = np.random.default_rng(0)
    U = haar_unitary(4, rng)
    np.testing.assert_allclose(U @ U.conj().T, np.eye(4), atol=1e-12)


def test_sampler_golden_snapshot():
    s, e = sample_moment_space(SamplerConfig(1, 3, 2024), UNIT)
    np.testing.assert_allclose(s.real.ravel(), GOLDEN_S, rtol=1e-12)
    np.testing.assert_allclose(e.real.ravel(), GOLDEN_E, rtol=1e-12)


def test_sampler_reproducible_and_valid():
    cfg = SamplerConfig(3, 4, 77, 0.3)
    s1, e1 = sample_moment_space(cfg, UNIT)
    s2, e2 = sample_moment_space(cfg, UNIT)
    np.testing.assert_array_equal(s1, s2)
    assert is_Fgg(s1, UNIT)
    np.testing.assert_allclose(canonical_moments(s1, UNIT).e, e1, atol=1e-7)


def test_full_boundary_bias_gives_idempotent_first_moment():
    for seed in range(5):
        _, e = sample_moment_space(SamplerConfig(2, 1, seed, 1.0), UNIT)
        np.testing.assert_allclose(e[1] @ e[1], e[1], atol=1e-12)


def test_sampler_config_validation():
    with pytest.raises(InvalidInputError):
        SamplerConfig(0, 2)
    with pytest.raises(InvalidInputError):
        SamplerConfig(1, 2, boundary_bias=1.5)


def test_molecular_order_examples():
    assert molecular_equivalent_order([0.0 ** j for j in range(4)], UNIT) == 1
    mu = MolecularMeasure([0.2, 0.7], [[[0.3]], [[0.7]]])
    assert molecular_equivalent_order(moments(mu, 6), UNIT) == 4
    assert molecular_equivalent_order([1 / (j + 1) for j in range(6)], UNIT) is None
