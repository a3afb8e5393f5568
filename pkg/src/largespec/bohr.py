"""Bohr sets and the containment of Bohr sets in 2A - 2A."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ._validation import InputError, PrecisionError, SqrtFraction
from .core import ResidueSet, density
from .dissociated import improved_decomposition
from .fourier import dft
from .spectrum import ModulusComparator, spectrum_threshold


def _radius(eps) -> Fraction:
    eps = Fraction(eps)
    if not 0 < eps < 1:
        raise InputError(f"Bohr radius must lie in (0, 1), got {eps}")
    return eps


def bohr_set(K: ResidueSet, eps) -> ResidueSet:
    """``{x : ||r x / N|| < eps for every r in K}``, decided in exact arithmetic.

    A float ``eps`` is taken at its exact binary value. An empty K gives Z_N.
    """
    eps = _radius(eps)
    N = K.N
    x = np.arange(N, dtype=np.int64)
    keep = np.ones(N, dtype=bool)
    p, q = eps.numerator, eps.denominator
    for r in K.elements:
        t = r * x % N
        dist = np.minimum(t, N - t)
        # dist / N < p / q  <=>  dist * q < p * N, in Python ints to avoid overflow
        keep &= np.array([int(v) * q < p * N for v in dist.tolist()])
    return ResidueSet.from_mask(keep)


def bourgain_bound(K: ResidueSet, eps) -> Fraction:
    eps = _radius(eps)
    return Fraction(1, 2) * eps ** len(K) * K.N


def bourgain_size_check(K: ResidueSet, eps):
    """``|B(K, eps)| >= eps^|K| N / 2``; returns ``(passed, size, bound)``."""
    size = len(bohr_set(K, eps))
    bound = bourgain_bound(K, eps)
    return size >= bound, size, bound


@dataclass(frozen=True)
class DifferenceSet:
    """``2A - 2A`` with ``counts[x] = #{(a1,a2,a3,a4) : a1 + a2 - a3 - a4 = x}``."""

    members: ResidueSet
    counts: tuple
    spectral_counts: tuple

    def __contains__(self, x):
        return x in self.members


def _direct_counts(A):
    N = A.N
    two = np.zeros(N, dtype=object)
    for a in A.elements:
        for b in A.elements:
            two[(a + b) % N] += 1
    idx = np.arange(N)
    return [int(sum(int(two[(t + x) % N]) * int(two[t]) for t in idx)) for x in range(N)]


def two_a_minus_two_a(A: ResidueSet) -> DifferenceSet:
    """The counts come from ``(1/N) sum_r |Ahat(r)|^4 e(r x)``, rounded, and must
    equal the direct sumset construction."""
    N = A.N
    F = np.abs(dft(A.indicator())) ** 4
    r = np.arange(N)
    spectral = (np.exp(-2j * np.pi * (np.outer(r, r) % N) / N) @ F).real / N
    rounded = np.rint(spectral)
    if np.max(np.abs(spectral - rounded), initial=0) >= 0.5:
        raise PrecisionError("spectral 2A-2A counts cannot be rounded reliably")
    direct = _direct_counts(A)
    spectral_counts = tuple(int(v) for v in rounded)
    if list(spectral_counts) != direct:
        raise PrecisionError("spectral and direct 2A-2A counts disagree")
    return DifferenceSet(ResidueSet(N, [x for x in range(N) if direct[x] > 0]),
                         tuple(direct), spectral_counts)


@dataclass
class ContainmentReport:
    check: str
    N: int
    delta: Fraction
    alpha: float
    frequencies: tuple
    radius: float
    bohr: ResidueSet
    difference_set: ResidueSet
    passed: bool
    details: dict = field(default_factory=dict)


def _containment_alpha(delta):
    # alpha = delta^(3/2) / (2 sqrt 2) has the rational square delta^3 / 8
    return SqrtFraction(Fraction(delta) ** 3 / 8)


def verify_bohr_containment(A: ResidueSet) -> ContainmentReport:
    """``B(R_alpha minus 0, 1/20)`` lies in 2A - 2A for ``alpha = delta^(3/2) / (2 sqrt 2)``.

    Also checks that the certifying sum ``sum_r |Ahat(r)|^4 e(r x)`` is positive
    on the Bohr set and that ``|1 - e(r x)| < 1/2`` there for every frequency.
    """
    if not len(A):
        raise InputError("A must be nonempty")
    N = A.N
    delta = density(A)
    alpha = _containment_alpha(delta)
    cmp = ModulusComparator(A)
    R_star = spectrum_threshold(A, alpha, cmp).members.without_zero()
    B1 = bohr_set(R_star, Fraction(1, 20))
    diff = two_a_minus_two_a(A)
    contained = B1 <= diff.members
    certifying = {x: diff.spectral_counts[x] * N for x in B1.elements}
    positive = all(v > 0 for v in certifying.values())
    chord = 0.0
    for r in R_star.elements:
        for x in B1.elements:
            chord = max(chord, abs(1 - np.exp(-2j * np.pi * (r * x % N) / N)))
    chord_ok = chord < 0.5
    return ContainmentReport(
        "bohr-containment", N, delta, float(alpha), R_star.elements, 1 / 20, B1, diff.members,
        contained and positive and chord_ok,
        {"contained": contained, "certifying_sum_positive": positive,
         "max_chord": chord, "chord_below_half": chord_ok,
         "min_certifying_sum": min(certifying.values()) if certifying else None,
         "slack_warnings": list(cmp.warnings)},
    )


def verify_full_proposition(A: ResidueSet) -> ContainmentReport:
    """Chain ``B(Lambda*, 1/(2^8 log2(1/delta))) <= B(R_alpha minus 0, 1/20) <= 2A - 2A``.

    Needs ``gcd(N, 6) = 1`` and ``delta <= 1/2``. The size of Lambda* is reported
    against ``2^33 delta^-1 log2(1/delta)`` without being asserted.
    """
    first = verify_bohr_containment(A)
    delta = density(A)
    dec = improved_decomposition(A, _containment_alpha(delta), "star")
    L2 = -math.log2(float(delta))
    eps = 1 / (2**8 * L2)
    B2 = bohr_set(dec.basis, eps)
    inner = B2 <= first.bohr
    outer = B2 <= first.difference_set
    passed = first.passed and inner and outer and dec.all_verified() and dec.covers_spectrum()
    details = dict(first.details)
    details.update({
        "inner_bohr": B2.to_list(),
        "inner_in_outer": inner,
        "inner_in_difference_set": outer,
        "basis_size": len(dec.basis),
        "basis_size_bound": 2**33 / float(delta) * L2,
        "max_length": dec.report["max_length"],
        "length_limit": dec.report["length_limit"],
        "bourgain_inner": float(bourgain_bound(dec.basis, eps)),
    })
    return ContainmentReport("full-proposition", A.N, delta, first.alpha, dec.basis.elements,
                             eps, B2, first.difference_set, passed, details)
