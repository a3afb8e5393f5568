import math
from fractions import Fraction

import numpy as np
import pytest

from largespec import InputError
from largespec.core import ResidueSet, all_subsets, density
from largespec.dissociated import (
    ChangDecomposition,
    ImprovedDecomposition,
    SignedSumTable,
    chang_decomposition,
    empirical_rudin_constant,
    improved_decomposition,
    is_dissociated,
    is_lambda_family,
    maximal_dissociated_subset,
    rudin_identity_check,
    span,
    statement_bound,
    statement_bound_check,
)
from largespec.energy import energy_tk

from oracles import dissociated_literal, lambda_literal, span_literal


def test_span():
    assert span(ResidueSet(100, [])).elements == (0,)
    assert span(ResidueSet(10, [1])).elements == (0, 1, 9)
    for E in all_subsets(9, max_size=3):
        assert set(span(E).elements) == span_literal(E.elements, 9)


def test_dissociated_examples():
    assert is_dissociated(ResidueSet(100, []))
    w = is_dissociated(ResidueSet(100, [1, 2, 3]))
    assert not w
    assert sum(c * x for c, x in zip(w.violation, (1, 2, 3))) % 100 == 0
    assert sorted(abs(c) for c in w.violation) == [1, 1, 1]
    assert is_dissociated(ResidueSet(100, [1, 2, 4]))


def test_dissociated_against_sign_enumeration():
    for N in (7, 8, 12):
        for D in all_subsets(N, max_size=4):
            assert bool(is_dissociated(D)) == dissociated_literal(D.elements, N), D


def test_lambda_examples():
    w = is_lambda_family(ResidueSet(5, [1, 4]), 2, 3)
    assert not w and w.violation == (1, 1)
    assert is_lambda_family(ResidueSet(5, []), 2, 3)
    assert is_lambda_family(ResidueSet(7, [1]), 2, 3)


def test_lambda_against_bounded_search():
    rng = np.random.default_rng(11)
    for _ in range(60):
        N = int(rng.integers(5, 60))
        L = ResidueSet(N, rng.choice(np.arange(1, N), int(rng.integers(1, 4)), replace=False).tolist())
        k, s = int(rng.integers(1, 4)), int(rng.integers(1, 4))
        w = is_lambda_family(L, k, s)
        assert bool(w) == lambda_literal(L.elements, N, k, s), (L, k, s)
        if not w:
            c = w.violation
            assert any(c) and max(abs(v) for v in c) <= s and sum(abs(v) for v in c) <= 2 * k
            assert sum(v * x for v, x in zip(c, L.elements)) % N == 0


def test_maximal_dissociated_examples():
    assert maximal_dissociated_subset(ResidueSet(5, [0, 1, 4])).elements == (1,)
    assert maximal_dissociated_subset(ResidueSet(5, [])).elements == ()


def test_maximal_dissociated_spans_its_superset():
    rng = np.random.default_rng(12)
    for _ in range(30):
        S = ResidueSet(64, rng.choice(64, int(rng.integers(1, 30)), replace=False).tolist())
        D = maximal_dissociated_subset(S)
        assert is_dissociated(D) and D <= S and S <= span(D)


def test_signed_sum_table_representations():
    table = SignedSumTable(31, 3)
    for x in (1, 5, 11):
        table.add(x)
    for target in range(31):
        c = table.representation(target)
        if c is not None:
            assert sum(ci * x for ci, x in zip(c, table.elements)) % 31 == target
            assert sum(abs(ci) for ci in c) == table.cost[target]


def test_chang_examples():
    dec = chang_decomposition(ResidueSet(5, [0, 1]), Fraction(3, 10))
    assert dec.basis.elements == (1,)
    assert dec.representations[4].coefficients == (-1,) and dec.representations[4].length == 1
    assert dec.representations[0].length == 0
    full = chang_decomposition(ResidueSet.full(6), 1)
    assert full.spectrum.elements == (0,) and full.basis.elements == ()
    assert full.representations[0].length == 0


def test_chang_coverage_random():
    rng = np.random.default_rng(13)
    for _ in range(30):
        N = int(rng.integers(4, 65))
        A = ResidueSet(N, rng.choice(N, int(rng.integers(1, N + 1)), replace=False).tolist())
        dec = chang_decomposition(A, density(A) / int(rng.integers(1, 5)))
        assert dec.covers_spectrum() and dec.all_verified() and dec.spectrum <= span(dec.basis)


def test_improved_example_pipeline():
    dec = improved_decomposition(ResidueSet(5, [0, 1]), Fraction(3, 10))
    assert dec.generators.elements == (1,)
    assert dec.basis.elements == (0, 1, 2, 3)
    rep = dec.representations[4]
    assert rep.base == (1,) and rep.coefficients == (-1,)
    assert dec.representations[1].coefficients == (1,)
    assert dec.report["max_length"] <= 8 * math.log2(5 / 2)


def test_improved_preconditions():
    with pytest.raises(InputError):
        improved_decomposition(ResidueSet(6, [0]), Fraction(1, 6))
    with pytest.raises(InputError):
        improved_decomposition(ResidueSet(5, [0, 1, 2]), Fraction(1, 5))
    with pytest.raises(InputError):
        improved_decomposition(ResidueSet(5, [0, 1]), Fraction(3, 10), variant="other")


@pytest.mark.parametrize("variant", ["star", "tilde"])
def test_improved_random(variant):
    rng = np.random.default_rng(14)
    for _ in range(20):
        N = int(rng.choice([25, 35, 49]))
        A = ResidueSet(N, rng.choice(N, int(rng.integers(1, N // 2 + 1)), replace=False).tolist())
        dec = improved_decomposition(A, density(A) / int(rng.integers(1, 5)), variant)
        assert dec.covers_spectrum() and dec.all_verified()
        limit = 8 * math.log2(1 / float(density(A)))
        assert all(r.length <= limit for r in dec.representations.values())
        assert all(set(r.base) <= set(dec.basis.elements) for r in dec.representations.values())


def test_rudin_examples():
    ok, val, t = rudin_identity_check(ResidueSet(7, [1, 2]), 2)
    assert ok and t == 6 and val == pytest.approx(6)
    assert rudin_identity_check(ResidueSet(7, []), 2)[:3:2] == (True, 0)
    with pytest.raises(InputError):
        rudin_identity_check(ResidueSet(100, [1, 2, 3]), 2)


def test_rudin_constant_examples():
    assert empirical_rudin_constant(ResidueSet(7, [1, 2]), 4) == pytest.approx((6 / 4) ** 0.25 / 2)
    assert empirical_rudin_constant(ResidueSet(7, [1, 2]), 4, a=[0, 0]) == 0


def test_statement_bound_examples():
    # a two-element family with k = 2, s = 3: the bound dwarfs the largest possible T_2
    L = ResidueSet(101, [1, 10])
    ok, t, bound = statement_bound_check(L, 2, 3)
    assert ok and t == 6 and t == energy_tk(L, 2) and bound >= 2**18 * 4 * 4


def test_statement_bound_needs_admissible_family():
    # 2*1 - 2 = 0 has coefficient mass 3 <= 4, so {1, 2} is not in Lambda(2, 3)
    with pytest.raises(InputError):
        statement_bound_check(ResidueSet(101, [1, 2]), 2, 3)
    with pytest.raises(InputError):
        statement_bound_check(ResidueSet(101, [1, 10]), 2, 2)
    with pytest.raises(InputError):
        statement_bound_check(ResidueSet(101, [1]), 2, 3)


def test_statement_bound_formula():
    k, s, n = 3, 3, 5
    expo = 2 * s * k * math.log2(k) ** 2 / math.log2(k ** (2 * s) * n ** (s - 2))
    assert statement_bound(k, s, n) == pytest.approx(2 ** (9 * k) * k**k * n**k * 2**expo)


def test_estimators():
    A = ResidueSet(5, [0, 1])
    est = ChangDecomposition(alpha=Fraction(3, 10)).fit(A)
    assert est.basis_.elements == (1,)
    assert [r.target for r in est.transform([4, 0])] == [4, 0]
    with pytest.raises(InputError):
        est.transform([2])
    imp = ImprovedDecomposition(alpha=Fraction(3, 10)).fit(A)
    assert imp.get_params() == {"alpha": Fraction(3, 10), "variant": "star"}
    assert imp.basis_.elements == (0, 1, 2, 3)
