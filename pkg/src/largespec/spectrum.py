"""Large spectra R_alpha, dyadic level sets and their elementary properties.

Membership tests compare squared moduli ``|Ahat(r)|^2`` against squared
thresholds. Whenever the floating value lands within ``1e-9 * N^2`` of the
threshold and the threshold square is rational, the comparison is settled
exactly: ``|Ahat(r)|^2`` is an integer combination of N-th roots of unity, so
equality is decided by reduction modulo a cyclotomic polynomial and strict
inequality by a 60-digit evaluation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import mpmath
import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from ._validation import InputError, PrecisionError, check_alpha
from .core import ResidueSet, density
from .fourier import dft

SLACK = 1e-9


@lru_cache(maxsize=None)
def _cyclotomic(m) -> tuple:
    """Integer coefficients of the m-th cyclotomic polynomial, lowest degree first."""
    from sympy import Poly, cyclotomic_poly, symbols

    x = symbols("x")
    return tuple(int(c) for c in reversed(Poly(cyclotomic_poly(m, x), x).all_coeffs()))


def _reduce_mod_monic(coeffs, modulus):
    coeffs = list(coeffs)
    deg = len(modulus) - 1
    for i in range(len(coeffs) - 1, deg - 1, -1):
        c = coeffs[i]
        if c:
            for j in range(deg + 1):
                coeffs[i - deg + j] -= c * modulus[j]
    return coeffs[:deg]


def autocorrelation(A: ResidueSet) -> np.ndarray:
    """``c[d] = #{(a, b) in A^2 : a - b = d}``, so ``|Ahat(r)|^2 = sum_d c[d] w^(d r)``."""
    N = A.N
    c = np.zeros(N, dtype=np.int64)
    elems = np.asarray(A.elements, dtype=np.int64)
    if elems.size:
        np.add.at(c, (elems[:, None] - elems[None, :]).ravel() % N, 1)
    return c


def exact_compare(corr, r, threshold_sq: Fraction) -> int:
    """Sign of ``|Ahat(r)|^2 - threshold_sq`` computed without rounding.

    ``corr`` is :func:`autocorrelation` of A.
    """
    N = len(corr)
    threshold_sq = Fraction(threshold_sq)
    g = math.gcd(r, N)
    m = N // g
    p, q = threshold_sq.numerator, threshold_sq.denominator
    poly = [0] * m
    for d in np.flatnonzero(corr):
        poly[(int(d) * r % N) // g] += q * int(corr[d])
    poly[0] -= p
    if m == 1:
        rem = poly
    else:
        rem = _reduce_mod_monic(poly, _cyclotomic(m))
    if not any(rem):
        return 0
    with mpmath.workdps(60):
        val = mpmath.fsum(
            int(corr[d]) * mpmath.cospi(mpmath.mpf(2 * (int(d) * r % N)) / N)
            for d in np.flatnonzero(corr)
        ) - mpmath.mpf(p) / q
        if abs(val) < mpmath.mpf(10) ** -45:
            raise PrecisionError(f"cannot separate |Ahat({r})|^2 from {threshold_sq}")
        return 1 if val > 0 else -1


class ModulusComparator:
    """Compares ``|Ahat(r)|^2`` for a fixed set A against squared thresholds.

    Thresholds are given as ``(float_value, exact_square_or_None)`` pairs for
    ``c * N``; the exact square is used inside the slack band, otherwise the
    band is resolved in favour of ``>=`` and recorded in ``warnings``.
    """

    def __init__(self, A: ResidueSet, spectrum=None):
        self.A = A
        self.N = A.N
        self.coefficients = dft(A.indicator()) if spectrum is None else spectrum
        self.sq = np.abs(self.coefficients) ** 2
        self.slack = SLACK * self.N**2
        self._corr = None
        self.warnings = []

    @property
    def corr(self):
        if self._corr is None:
            self._corr = autocorrelation(self.A)
        return self._corr

    def compare(self, r, t_float, t_exact=None) -> int:
        diff = self.sq[r] - t_float
        if abs(diff) > self.slack:
            return 1 if diff > 0 else -1
        if r == 0 and t_exact is not None:
            v = Fraction(len(self.A)) ** 2 - t_exact
            return (v > 0) - (v < 0)
        if t_exact is not None:
            return exact_compare(self.corr, r, t_exact)
        self.warnings.append({"r": int(r), "modulus_sq": float(self.sq[r]),
                              "threshold_sq": float(t_float), "resolved": ">="})
        return 0

    def at_least(self, r, c_float, c_sq=None) -> bool:
        """``|Ahat(r)| >= c * N``."""
        t_exact = None if c_sq is None else c_sq * self.N**2
        return self.compare(r, (c_float * self.N) ** 2, t_exact) >= 0


KINDS = ("at-least", "dyadic-window", "dyadic-index")


@dataclass(frozen=True)
class SpectrumLevelSet:
    """A level set of ``|Ahat|``: R_alpha, a window R'_alpha or a dyadic level B_i."""

    base: ResidueSet
    alpha: float
    members: ResidueSet
    kind: str = "at-least"
    index: int | None = None
    slack_warnings: tuple = field(default=(), compare=False)

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)


def _prepare(A, alpha):
    if not isinstance(A, ResidueSet):
        raise InputError("A must be a ResidueSet")
    delta = density(A)
    if delta == 0:
        raise InputError("the empty set has no admissible alpha")
    a, sq = check_alpha(alpha, delta)
    return a, sq


def spectrum_threshold(A: ResidueSet, alpha, comparator=None) -> SpectrumLevelSet:
    """``R_alpha = {r : |Ahat(r)| >= alpha N}`` for ``0 < alpha <= |A|/N``."""
    a, sq = _prepare(A, alpha)
    cmp = comparator or ModulusComparator(A)
    before = len(cmp.warnings)
    members = [r for r in range(A.N) if cmp.at_least(r, a, sq)]
    return SpectrumLevelSet(A, a, ResidueSet(A.N, members), "at-least",
                            slack_warnings=tuple(cmp.warnings[before:]))


def spectrum_window(A: ResidueSet, alpha, comparator=None) -> SpectrumLevelSet:
    """``R'_alpha = {r : alpha N <= |Ahat(r)| < 2 alpha N}``."""
    a, sq = _prepare(A, alpha)
    cmp = comparator or ModulusComparator(A)
    before = len(cmp.warnings)
    sq2 = None if sq is None else 4 * sq
    members = [r for r in range(A.N)
               if cmp.at_least(r, a, sq) and not cmp.at_least(r, 2 * a, sq2)]
    return SpectrumLevelSet(A, a, ResidueSet(A.N, members), "dyadic-window",
                            slack_warnings=tuple(cmp.warnings[before:]))


def spectrum_size_bound(A: ResidueSet, alpha):
    """``delta / alpha^2``, exact when alpha's square is rational."""
    a, sq = _prepare(A, alpha)
    delta = density(A)
    return delta / sq if sq is not None else float(delta) / a**2


def spectrum_size_bound_check(A: ResidueSet, alpha):
    """Verify ``|R_alpha| <= delta / alpha^2``; returns ``(passed, size, bound)``."""
    R = spectrum_threshold(A, alpha)
    bound = spectrum_size_bound(A, alpha)
    return len(R) <= bound, len(R), bound


def dyadic_levels(A: ResidueSet, alpha, comparator=None) -> list:
    """Nonempty ``B_i = {r in R_alpha minus 0 : alpha 2^(i-1) N <= |Ahat(r)| < alpha 2^i N}``."""
    a, sq = _prepare(A, alpha)
    cmp = comparator or ModulusComparator(A)
    R = spectrum_threshold(A, alpha, cmp)
    levels = {}
    for r in R.members.without_zero():
        i = 1
        while cmp.at_least(r, a * 2**i, None if sq is None else sq * 4**i):
            i += 1
        levels.setdefault(i, []).append(r)
    return [SpectrumLevelSet(A, a * 2 ** (i - 1), ResidueSet(A.N, levels[i]), "dyadic-index", i)
            for i in sorted(levels)]


class LargeSpectrum(BaseEstimator):
    """Estimator wrapper: ``fit(A)`` extracts R_alpha and its dyadic levels.

    Fitted attributes: ``coefficients_`` (the complex spectrum), ``support_``
    (R_alpha as a ResidueSet), ``levels_`` (list of dyadic level sets),
    ``density_`` and ``slack_warnings_``.
    """

    def __init__(self, alpha=Fraction(1, 2)):
        self.alpha = alpha

    def fit(self, A, y=None):
        cmp = ModulusComparator(A)
        R = spectrum_threshold(A, self.alpha, cmp)
        self.levels_ = dyadic_levels(A, self.alpha, cmp)
        self.coefficients_ = cmp.coefficients
        self.support_ = R.members
        self.density_ = density(A)
        self.slack_warnings_ = list(cmp.warnings)
        return self

    def transform(self, residues):
        """Indicator of R_alpha membership for each residue."""
        check_is_fitted(self, "support_")
        return np.array([int(r) % self.support_.N in self.support_ for r in residues])
