"""Discrete Fourier transform on Z_N and the identities it satisfies.

Convention: ``e(x) = exp(-2*pi*i*x/N)`` and ``fhat(r) = sum_n f(n) e(-n r)``,
so ``fhat(r) = sum_n f(n) exp(+2*pi*i*n*r/N)``.  Inversion reads
``f(x) = (1/N) sum_r fhat(r) e(r x)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from ._validation import InputError, as_signal, same_length

FAST_PATH_THRESHOLD = 4096


@dataclass(frozen=True)
class IdentityCheck:
    """Outcome of a numerical identity check: both sides and the verdict."""

    name: str
    passed: bool
    lhs: object
    rhs: object
    max_error: float
    tolerance: float
    details: dict = field(default_factory=dict)

    def __bool__(self):
        return self.passed


def character_table(N, sign=+1) -> np.ndarray:
    """``exp(sign * 2*pi*i * (n*r mod N) / N)`` as an N x N matrix.

    Reducing ``n*r`` mod N before scaling keeps the phases accurate for large N.
    """
    n = np.arange(N)
    phase = np.outer(n, n) % N
    return np.exp(sign * 2j * np.pi * phase / N)


def dft_direct(f) -> np.ndarray:
    """Definitional O(N^2) transform, the reference for every other path."""
    f = as_signal(f)
    return character_table(f.size) @ f


def dft(f, method="auto") -> np.ndarray:
    """Fourier coefficients ``fhat(r)`` for r = 0..N-1.

    ``method`` is ``"direct"``, ``"fast"`` (numpy's pocketfft, which handles any
    N through Bluestein's algorithm) or ``"auto"`` (fast only above N = 4096).
    """
    f = as_signal(f)
    N = f.size
    if method == "auto":
        method = "fast" if N > FAST_PATH_THRESHOLD else "direct"
    if method == "direct":
        return dft_direct(f)
    if method == "fast":
        return N * np.fft.ifft(f)
    raise InputError(f"unknown transform method {method!r}")


def inverse_dft(F, method="auto") -> np.ndarray:
    F = as_signal(F)
    N = F.size
    if method == "auto":
        method = "fast" if N > FAST_PATH_THRESHOLD else "direct"
    if method == "direct":
        return character_table(N, sign=-1) @ F / N
    if method == "fast":
        return np.fft.fft(F) / N
    raise InputError(f"unknown transform method {method!r}")


def convolution(f, g) -> np.ndarray:
    """``(f*g)(x) = sum_y f(y) g(y - x)``, computed by direct summation."""
    f, g = same_length(f, g)
    N = f.size
    y = np.arange(N)
    idx = (y[None, :] - y[:, None]) % N
    return (f[None, :] * g[idx]).sum(axis=1)


def parseval_check(f, rtol=1e-9) -> IdentityCheck:
    f = as_signal(f)
    N = f.size
    lhs = math.fsum(np.abs(dft(f)) ** 2)
    rhs = N * math.fsum(np.abs(f) ** 2)
    err = abs(lhs - rhs)
    scale = max(abs(lhs), abs(rhs))
    return IdentityCheck("parseval", err <= rtol * scale, lhs, rhs, err, rtol * scale)


def inversion_check(f, atol=1e-9) -> IdentityCheck:
    f = as_signal(f)
    back = inverse_dft(dft(f))
    err = float(np.max(np.abs(back - f)))
    return IdentityCheck("inversion", err <= atol, f, back, err, atol)


def convolution_identity_check(f, g, atol=1e-9) -> IdentityCheck:
    """Check ``dft(f*g)(r) = fhat(r) * conj(ghat(r))``.

    The identity as written needs ``g`` real-valued (for complex g the right
    side is ``fhat(r) * ghat(-r)``); complex g is rejected.
    """
    f, g = same_length(f, g)
    if np.any(np.abs(g.imag) > 0):
        raise InputError("the convolution identity requires a real-valued g")
    lhs = dft(convolution(f, g))
    rhs = dft(f) * np.conj(dft(g))
    err = float(np.max(np.abs(lhs - rhs)))
    scale = max(1.0, float(np.max(np.abs(f))) * float(np.max(np.abs(g))) * f.size**2)
    return IdentityCheck("convolution", err <= atol * scale, lhs, rhs, err, atol * scale)


def _correlation(F, G) -> np.ndarray:
    """``u -> (1/N) sum_r F(r) conj(G(r - u))`` for every u."""
    N = F.size
    r = np.arange(N)
    idx = (r[None, :] - r[:, None]) % N
    return (F[None, :] * np.conj(G[idx])).sum(axis=1) / N


def cross_correlation_identity_check(f, g, u=None, atol=1e-6) -> IdentityCheck:
    """``(1/N) sum_r fhat(r) conj(ghat(r-u)) = sum_x f(x) conj(g(x)) e(-x u)``.

    Checks a single ``u`` or, when ``u`` is None, every u in Z_N.
    """
    f, g = same_length(f, g)
    N = f.size
    lhs = _correlation(dft(f), dft(g))
    rhs = dft(f * np.conj(g))
    if u is not None:
        u = int(u) % N
        lhs, rhs = lhs[u : u + 1], rhs[u : u + 1]
    err = float(np.max(np.abs(lhs - rhs)))
    scale = N * max(1.0, float(np.max(np.abs(f))) * float(np.max(np.abs(g))))
    return IdentityCheck("cross-correlation", err <= atol * scale, lhs, rhs, err, atol * scale)


def char_function_identity_check(f, atol=1e-6) -> IdentityCheck:
    """``fhat(u) = (1/N) sum_r fhat(r) conj(fhat(r-u))`` for all u.

    The identity holds exactly when ``|f(x)|^2 = f(x)`` everywhere, i.e. f is
    an indicator. ``passed`` reports whether it held; ``details['indicator']``
    says whether f is one, and ``max_error`` is the maximal deviation.
    """
    f = as_signal(f)
    N = f.size
    F = dft(f)
    lhs = F
    rhs = _correlation(F, F)
    err = float(np.max(np.abs(lhs - rhs)))
    tol = atol * N
    indicator = bool(np.allclose(np.abs(f) ** 2, f, atol=1e-12))
    return IdentityCheck("characteristic-function", err <= tol, lhs, rhs, err, tol,
                         {"indicator": indicator})


class DFTTransformer(TransformerMixin, BaseEstimator):
    """Row-wise Fourier transform of signals on Z_N.

    ``X`` has shape (n_signals, N). ``transform`` returns the coefficients,
    or their moduli when ``modulus=True``; ``inverse_transform`` undoes the
    complex form.
    """

    def __init__(self, method="auto", modulus=False):
        self.method = method
        self.modulus = modulus

    def fit(self, X, y=None):
        X = self._check_X(X)
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        X = self._check_X(X, fitted=True)
        out = np.vstack([dft(row, self.method) for row in X])
        return np.abs(out) if self.modulus else out

    def inverse_transform(self, X):
        if self.modulus:
            raise InputError("moduli cannot be inverted")
        X = self._check_X(X, fitted=True)
        return np.vstack([inverse_dft(row, self.method) for row in X])

    def _check_X(self, X, fitted=False):
        X = np.atleast_2d(np.asarray(X, dtype=complex))
        if X.ndim != 2:
            raise InputError(f"expected a 2-D array of signals, got shape {X.shape}")
        if fitted:
            from sklearn.utils.validation import check_is_fitted

            check_is_fitted(self, "n_features_in_")
            if X.shape[1] != self.n_features_in_:
                raise InputError(f"signals have length {X.shape[1]}, expected {self.n_features_in_}")
        return X
