"""Slow, literal reference implementations used only by the tests."""

import itertools
from fractions import Fraction

import mpmath


def tk_literal(elements, N, k):
    elements = list(elements)
    if not elements:
        return 0
    hits = 0
    for tup in itertools.product(elements, repeat=2 * k):
        if (sum(tup[:k]) - sum(tup[k:])) % N == 0:
            hits += 1
    return hits


def span_literal(elements, N):
    out = set()
    for eps in itertools.product((-1, 0, 1), repeat=len(elements)):
        out.add(sum(e * x for e, x in zip(eps, elements)) % N)
    return out


def has_relation(elements, N, max_coef, max_mass):
    """Is there a nonzero integer vector c with |c_i| <= max_coef,
    sum |c_i| <= max_mass and sum c_i x_i = 0 mod N?"""
    rng = range(-max_coef, max_coef + 1)
    for c in itertools.product(rng, repeat=len(elements)):
        mass = sum(abs(v) for v in c)
        if 0 < mass <= max_mass and sum(v * x for v, x in zip(c, elements)) % N == 0:
            return True
    return False


def dissociated_literal(elements, N):
    return not has_relation(elements, N, 1, len(elements))


def lambda_literal(elements, N, k, s):
    return not has_relation(elements, N, s, 2 * k)


def spectrum_literal(elements, N, alpha):
    """R_alpha from 50-digit sums; exact ties count as members."""
    mpmath.mp.dps = 50
    alpha = Fraction(alpha)
    out = []
    for r in range(N):
        z = mpmath.fsum(mpmath.expjpi(mpmath.mpf(2 * n * r) / N) for n in elements)
        diff = abs(z) ** 2 - (mpmath.mpf(alpha.numerator) / alpha.denominator * N) ** 2
        if diff > -mpmath.mpf(10) ** -30:
            out.append(r)
    return out


def bohr_literal(K, N, eps):
    eps = Fraction(eps)
    out = []
    for x in range(N):
        if all(min(Fraction(r * x % N, N), 1 - Fraction(r * x % N, N)) < eps for r in K):
            out.append(x)
    return out


def difference_set_literal(elements, N):
    return sorted({(a + b - c - d) % N for a, b, c, d in itertools.product(elements, repeat=4)})


def sign_system_literal(elements, N, matrix):
    """Count tuples solving every row of ``matrix`` modulo N."""
    cols = len(matrix[0])
    hits = 0
    for tup in itertools.product(elements, repeat=cols):
        if all(sum(m * r for m, r in zip(row, tup)) % N == 0 for row in matrix):
            hits += 1
    return hits
