import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from hahnpoly.core import DimensionError, HahnParams
from hahnpoly.moments import (DegenerateInputError, MomentMatrix, forward_moments,
                              inverse_moments, nmse)
from hahnpoly.proposed import generate_proposed


@pytest.fixture(scope="module")
def basis16():
    return generate_proposed(HahnParams(20, 20, 16))


def test_identity_basis_round_trip():
    f = np.arange(12.0).reshape(3, 4)
    eta = forward_moments(f, np.eye(3), np.eye(4))
    np.testing.assert_array_equal(eta.coefficients, f)
    np.testing.assert_array_equal(inverse_moments(eta, np.eye(3), np.eye(4)), f)


def test_random_image_round_trip(basis16):
    f = np.random.default_rng(0).random((16, 16))
    eta = forward_moments(f, basis16)
    assert isinstance(eta, MomentMatrix) and eta.params_x == basis16.params
    assert nmse(f, inverse_moments(eta, basis16)) < 1e-18


def test_rectangular_image():
    f = np.random.default_rng(1).random((12, 20))
    bx = generate_proposed(HahnParams(5, 2, 12))
    by = generate_proposed(HahnParams(3, 3, 20))
    eta = forward_moments(f, bx, by)
    assert eta.shape == (12, 20)
    assert nmse(f, inverse_moments(eta, bx, by)) < 1e-20


def test_energy_preserved(basis16):
    f = np.random.default_rng(2).random((16, 16))
    eta = forward_moments(f, basis16).coefficients
    assert np.sum(eta ** 2) == pytest.approx(np.sum(f ** 2), rel=1e-12)


def test_truncation_equals_zeroing(basis16):
    f = np.random.default_rng(3).random((16, 16))
    eta = forward_moments(f, basis16)
    z = eta.coefficients.copy()
    z[6:, :] = 0
    z[:, 9:] = 0
    np.testing.assert_allclose(inverse_moments(eta, basis16, keep_n=6, keep_m=9),
                               inverse_moments(z, basis16), atol=1e-14)
    assert not inverse_moments(eta, basis16, keep_n=0, keep_m=0).any()


def test_dimension_errors(basis16):
    with pytest.raises(DimensionError):
        forward_moments(np.zeros((15, 16)), basis16)
    with pytest.raises(DimensionError):
        forward_moments(np.zeros(16), basis16)
    with pytest.raises(DimensionError):
        inverse_moments(np.zeros((16, 16)), basis16, keep_n=17)
    with pytest.raises(DimensionError):
        nmse(np.ones((2, 2)), np.ones((2, 3)))


def test_nmse_values():
    assert nmse([[1, 0], [0, 1]], [[1, 0], [0, 0]]) == 0.5
    assert nmse(np.ones((3, 3)), np.ones((3, 3))) == 0.0
    with pytest.raises(DegenerateInputError):
        nmse(np.zeros((2, 2)), np.ones((2, 2)))


@settings(max_examples=30, deadline=None)
@given(arrays(np.float64, (16, 16), elements=st.floats(0, 1)),
       st.integers(0, 16), st.integers(0, 16))
def test_partial_reconstruction_never_worse_with_more_moments(basis16, f, k1, k2):
    assume(np.sum(f * f) > 1e-6)
    eta = forward_moments(f, basis16)
    lo, hi = sorted((k1, k2))
    e_lo = nmse(f, inverse_moments(eta, basis16, keep_n=lo, keep_m=lo))
    e_hi = nmse(f, inverse_moments(eta, basis16, keep_n=hi, keep_m=hi))
    assert e_hi <= e_lo + 1e-12
