from fractions import Fraction

import numpy as np
import pytest

from largespec import BudgetError, InputError
from largespec.core import ResidueSet, all_subsets, density
from largespec.energy import (
    energy_tk,
    energy_tk_bruteforce,
    level_lemma_bound,
    tk_lower_bound,
    verify_level_lemma,
    verify_main_theorem,
)

from oracles import tk_literal


@pytest.mark.parametrize("method", ["exact", "spectral", "auto"])
def test_energy_examples(method):
    assert energy_tk(ResidueSet(10, [0, 1]), 2, method) == 6
    assert energy_tk(ResidueSet(9, [4]), 3, method) == 1
    assert energy_tk(ResidueSet.full(6), 3, method) == 6**5
    assert energy_tk(ResidueSet(7, []), 2, method) == 0


def test_bruteforce_examples():
    assert energy_tk_bruteforce(ResidueSet(7, [1, 2]), 2) == 6
    assert energy_tk_bruteforce(ResidueSet(7, []), 2) == 0


def test_bruteforce_matches_literal_loop():
    for B in all_subsets(6, max_size=3):
        for k in (1, 2):
            assert energy_tk_bruteforce(B, k) == tk_literal(B.elements, 6, k)


def test_agreement_on_random_instances():
    rng = np.random.default_rng(6)
    for _ in range(200):
        N = int(rng.integers(2, 40))
        B = ResidueSet(N, rng.choice(N, int(rng.integers(1, min(N, 6) + 1)), replace=False).tolist())
        k = int(rng.integers(1, 4))
        assert energy_tk(B, k) == energy_tk_bruteforce(B, k)


def test_large_counts_stay_exact():
    B = ResidueSet.full(64)
    assert energy_tk(B, 12) == 64**23


def test_guards():
    with pytest.raises(BudgetError):
        energy_tk_bruteforce(ResidueSet.full(50), 3, budget=10**6)
    with pytest.raises(InputError):
        energy_tk(ResidueSet(4, [1]), 0)
    with pytest.raises(InputError):
        energy_tk(ResidueSet(4, [1]), 2, "magic")


def test_bound_examples():
    m, k = 3, 2
    assert tk_lower_bound(Fraction(2, 5), Fraction(2, 5), k, m) == Fraction(2, 5) * m ** 4 / 2**8
    assert tk_lower_bound(Fraction(1, 2), Fraction(1, 2), 2, 1) == Fraction(1, 512)
    val = tk_lower_bound(0.4, 0.0894, 2, 4)
    assert val == pytest.approx(0.4 * 0.0894**4 * 4**4 / (2**8 * 0.4**4))


def test_bound_domain():
    with pytest.raises(InputError):
        tk_lower_bound(Fraction(1, 2), Fraction(1, 2), 1, 3)
    with pytest.raises(InputError):
        tk_lower_bound(Fraction(1, 4), Fraction(1, 2), 2, 3)


def test_level_bound_k2_form():
    delta, a, m = Fraction(2, 5), Fraction(3, 10), 2
    assert level_lemma_bound(delta, a, 2, m) == a**4 * m**4 / (16 * delta**3)


def test_main_theorem_examples():
    rep = verify_main_theorem(ResidueSet(4, [0, 2]), Fraction(1, 2), 2)
    assert rep.members == (2,) and rep.t_k == 1 and rep.bound == Fraction(1, 512) and rep.passed
    full = verify_main_theorem(ResidueSet.full(5), 1, 2)
    assert full.members == () and full.t_k == 0 and full.bound == 0 and full.passed


def test_main_theorem_flags_odd_k():
    rep = verify_main_theorem(ResidueSet(5, [0, 1]), Fraction(3, 10), 3)
    assert rep.odd_k and rep.passed


def test_level_lemma_example():
    rep = verify_level_lemma(ResidueSet(5, [0, 1]), Fraction(3, 10), 2)
    assert rep.members == (1, 4) and rep.t_k == 6
    assert float(rep.bound) == pytest.approx(0.1265625)
    assert rep.passed


def test_level_lemma_empty_window_and_errors():
    A = ResidueSet(5, [0, 1])
    rep = verify_level_lemma(A, Fraction(3, 10), 2, B_prime=ResidueSet(5, []))
    assert rep.t_k == 0 and rep.bound == 0 and rep.passed
    with pytest.raises(InputError):
        verify_level_lemma(A, Fraction(3, 10), 3, form="general")
    with pytest.raises(InputError):
        verify_level_lemma(A, Fraction(3, 10), 2, B_prime=ResidueSet(5, [2]))


def test_main_theorem_exhaustive_small():
    for N in range(2, 8):
        for A in all_subsets(N):
            if len(A):
                for alpha in (density(A), density(A) / 2):
                    assert verify_main_theorem(A, alpha, 2).passed
