import numpy as np
import pytest

from largespec import InputError
from largespec.fourier import (
    DFTTransformer,
    char_function_identity_check,
    convolution,
    convolution_identity_check,
    cross_correlation_identity_check,
    dft,
    dft_direct,
    inverse_dft,
    inversion_check,
    parseval_check,
)


def test_constant_signal_is_orthogonal_to_nonzero_characters():
    assert np.allclose(dft(np.ones(4)), [4, 0, 0, 0])


def test_point_mass_has_flat_spectrum():
    assert np.allclose(dft([1, 0, 0, 0, 0]), np.ones(5))


def test_indicator_moduli():
    assert np.allclose(np.abs(dft([1, 0, 1, 0])), [2, 0, 2, 0])


def test_sign_convention():
    # fhat(1) for a point mass at n = 1 is e(-1) = exp(2 pi i / N)
    N = 8
    f = np.zeros(N)
    f[1] = 1
    assert np.isclose(dft(f)[1], np.exp(2j * np.pi / N))


def test_fast_path_matches_direct():
    rng = np.random.default_rng(0)
    f = rng.normal(size=97) + 1j * rng.normal(size=97)
    assert np.allclose(dft(f, "fast"), dft_direct(f), atol=1e-9)
    assert np.allclose(inverse_dft(dft(f), "fast"), f, atol=1e-9)


def test_inverse_examples():
    assert np.allclose(inverse_dft(dft([1, 0, 1, 0])), [1, 0, 1, 0])
    assert np.allclose(inverse_dft([5, 0, 0, 0, 0]), np.ones(5))


def test_roundtrip_random_signals():
    rng = np.random.default_rng(1)
    for _ in range(100):
        f = rng.normal(size=32) + 1j * rng.normal(size=32)
        assert inversion_check(f).max_error < 1e-9


def test_convolution_examples():
    f = np.array([3.0, -1, 2, 0.5, 7])
    assert np.allclose(convolution(f, [1, 0, 0, 0, 0]), f)
    assert np.allclose(convolution([1, 1, 0, 0, 0], [1, 1, 0, 0, 0]), [2, 1, 0, 0, 1])


def test_convolution_identity_random():
    rng = np.random.default_rng(2)
    f = rng.normal(size=16) + 1j * rng.normal(size=16)
    g = rng.normal(size=16)
    check = convolution_identity_check(f, g)
    assert check.passed


def test_convolution_identity_rejects_complex_g_and_mismatch():
    with pytest.raises(InputError):
        convolution_identity_check(np.ones(4), np.ones(4) * 1j)
    with pytest.raises(InputError):
        convolution(np.ones(4), np.ones(5))


def test_parseval_examples():
    check = parseval_check([1, 1, 0, 1, 0])
    assert check.passed and np.isclose(check.lhs, 5 * 3) and np.isclose(check.rhs, 15)
    zero = parseval_check(np.zeros(6))
    assert zero.passed and zero.lhs == zero.rhs == 0
    rng = np.random.default_rng(3)
    f = rng.normal(size=64) + 1j * rng.normal(size=64)
    check = parseval_check(f)
    assert check.passed and check.max_error / check.rhs < 1e-9


def test_characteristic_function_identity():
    check = char_function_identity_check([1, 0, 1, 0])
    assert check.passed and check.details["indicator"]
    violated = char_function_identity_check(np.full(4, 0.5))
    assert not violated.passed and not violated.details["indicator"]


def test_cross_correlation_identity():
    A = np.array([1.0, 1, 0, 0, 1, 0])
    check = cross_correlation_identity_check(A, A, u=0)
    assert check.passed and np.isclose(check.lhs[0], 3) and np.isclose(check.rhs[0], 3)
    rng = np.random.default_rng(4)
    f = rng.normal(size=16) + 1j * rng.normal(size=16)
    g = rng.normal(size=16) + 1j * rng.normal(size=16)
    assert cross_correlation_identity_check(f, g).max_error < 1e-6
    zero = cross_correlation_identity_check(f, np.zeros(16))
    assert zero.passed and np.allclose(zero.lhs, 0) and np.allclose(zero.rhs, 0)
    with pytest.raises(InputError):
        cross_correlation_identity_check(f, np.ones(8))


def test_transformer_api():
    X = np.array([[1, 0, 1, 0], [1, 1, 1, 1]])
    t = DFTTransformer().fit(X)
    assert t.get_params() == {"method": "auto", "modulus": False}
    F = t.transform(X)
    assert np.allclose(t.inverse_transform(F), X)
    assert np.allclose(DFTTransformer(modulus=True).fit_transform(X)[0], [2, 0, 2, 0])
    with pytest.raises(InputError):
        t.transform(np.ones((1, 5)))
