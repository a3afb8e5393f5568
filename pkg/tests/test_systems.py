from fractions import Fraction

import numpy as np
import pytest

from largespec import BudgetError, InputError
from largespec.core import ResidueSet, all_subsets, density
from largespec.energy import energy_tk, verify_main_theorem
from largespec.systems import (
    build_matrix,
    count_solutions,
    gowers_monotonicity_check,
    gowers_norm,
    verify_matrix_theorem,
)

from oracles import sign_system_literal

DISPLAYED_K2_D2 = [
    [1, 1, 1, 1, 1, 1, 1, 1, -1, -1, -1, -1, -1, -1, -1, -1],
    [0, 1, 0, 1, 0, 1, 0, 1, 0, -1, 0, -1, 0, -1, 0, -1],
    [0, 0, 1, 1, 0, 0, 1, 1, 0, 0, -1, -1, 0, 0, -1, -1],
]


def test_matrix_examples():
    assert build_matrix(1, 0).matrix.tolist() == [[1, -1]]
    assert build_matrix(2, 0).matrix.tolist() == [[1, 1, -1, -1]]
    assert build_matrix(2, 2).matrix.tolist() == DISPLAYED_K2_D2


def test_matrix_rows_are_balanced():
    for k in (1, 2, 3):
        for d in range(4):
            M = build_matrix(k, d).matrix
            assert M.shape == (d + 1, 2 ** (d + 1) * k)
            assert not M.sum(axis=1).any()
            assert not M.flags.writeable


def test_matrix_guard():
    with pytest.raises(BudgetError):
        build_matrix(1, 25)


@pytest.mark.parametrize("method", ["exact", "spectral", "enumerate"])
def test_count_examples(method):
    assert count_solutions(ResidueSet(9, [4]), 2, 1, method) == 1
    assert count_solutions(ResidueSet.full(5), 1, 1, method) == 25
    assert count_solutions(ResidueSet(10, [0, 1]), 2, 0, method) == 6


def test_counts_match_literal_enumeration():
    rng = np.random.default_rng(7)
    for _ in range(15):
        N = int(rng.integers(2, 8))
        B = ResidueSet(N, rng.choice(N, int(rng.integers(1, min(N, 3) + 1)), replace=False).tolist())
        k, d = int(rng.integers(1, 3)), int(rng.integers(0, 2))
        expected = sign_system_literal(B.elements, N, build_matrix(k, d).matrix.tolist())
        for method in ("exact", "spectral", "enumerate"):
            assert count_solutions(B, k, d, method) == expected


def test_d0_equals_energy():
    rng = np.random.default_rng(8)
    for _ in range(50):
        N = int(rng.integers(2, 30))
        B = ResidueSet(N, rng.choice(N, int(rng.integers(1, min(N, 8) + 1)), replace=False).tolist())
        k = int(rng.integers(1, 4))
        assert count_solutions(B, k, 0) == energy_tk(B, k)


def test_count_guards():
    with pytest.raises(BudgetError):
        count_solutions(ResidueSet.full(20), 2, 1, "enumerate", budget=1000)
    with pytest.raises(InputError):
        count_solutions(ResidueSet(4, [1]), 1, 1, "magic")


def test_matrix_theorem_matches_energy_module_at_d0():
    A = ResidueSet(4, [0, 2])
    rep = verify_matrix_theorem(A, Fraction(1, 2), 2, 0)
    base = verify_main_theorem(A, Fraction(1, 2), 2)
    assert (rep.t_k, rep.bound, rep.passed) == (base.t_k, base.bound, base.passed)


def test_matrix_theorem_empty_b():
    rep = verify_matrix_theorem(ResidueSet.full(5), 1, 1, 1)
    assert rep.t_k == 0 and rep.bound == 0 and rep.passed


def test_matrix_theorem_exhaustive_z7():
    for A in all_subsets(7):
        if len(A):
            for k in (1, 2):
                assert verify_matrix_theorem(A, density(A), k, 1).passed


def test_gowers_examples():
    for d in (1, 2, 3):
        assert gowers_norm(np.full(6, 0.7), d).value == pytest.approx(0.7)
    A = np.array([1, 0, 1, 1, 0, 0, 0, 1], dtype=float)
    assert gowers_norm(A, 1).value == pytest.approx(0.5)
    point = np.array([1.0, 0, 0, 0])
    assert gowers_norm(point, 2).value == pytest.approx(4 ** -0.75)
    assert gowers_norm(point, 2, "direct").value == pytest.approx(4 ** -0.75)


def test_gowers_recursion_matches_direct_sum():
    rng = np.random.default_rng(9)
    for _ in range(20):
        N = int(rng.integers(2, 10))
        f = rng.normal(size=N) + 1j * rng.normal(size=N)
        for d in (1, 2, 3):
            assert gowers_norm(f, d).value == pytest.approx(gowers_norm(f, d, "direct").value,
                                                            rel=1e-9, abs=1e-12)


def test_gowers_budget():
    with pytest.raises(BudgetError):
        gowers_norm(np.ones(32), 3, budget=100)


def test_monotonicity():
    ok, values = gowers_monotonicity_check(np.full(5, 2.0), 3)
    assert ok and values == pytest.approx([2.0, 2.0, 2.0])
    rng = np.random.default_rng(10)
    for _ in range(100):
        f = rng.normal(size=32) + 1j * rng.normal(size=32)
        assert gowers_monotonicity_check(f, 3)[0]
    for _ in range(20):
        assert gowers_monotonicity_check(rng.integers(0, 2, 64).astype(float), 3)[0]
