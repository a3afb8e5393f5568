"""Additive energies T_k(B), their brute-force oracle and the lower bounds for
subsets of the large spectrum."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from ._validation import (
    DEFAULT_BUDGET,
    BudgetError,
    InputError,
    PrecisionError,
    check_alpha,
    check_positive_int,
    threshold_square,
)
from .core import ResidueSet, density
from .spectrum import ModulusComparator, spectrum_threshold, spectrum_window

INT64_SAFE = 2**62


def cyclic_sum_distribution(B: ResidueSet, k: int) -> np.ndarray:
    """``c[x] = #{(r_1..r_k) in B^k : r_1 + ... + r_k = x}`` with exact integers.

    Switches from int64 to Python integers once counts could reach 2^62.
    """
    N = B.N
    exact = len(B) ** k >= INT64_SAFE
    c = np.zeros(N, dtype=object if exact else np.int64)
    c[0] = 1
    for _ in range(k):
        nxt = np.zeros_like(c)
        for b in B.elements:
            nxt += np.roll(c, b)
        c = nxt
    return c


def _sum_squares(c) -> int:
    return sum(int(v) * int(v) for v in c.tolist())


def energy_tk_exact(B: ResidueSet, k: int) -> int:
    k = check_positive_int(k, "k")
    if not len(B):
        return 0
    return _sum_squares(cyclic_sum_distribution(B, k))


def spectral_power_mean(B: ResidueSet, p: int, weights=None) -> float:
    """``(1/N) sum_x |sum_{n in B} a_n e(n x)|^p`` with ``a_n = 1`` by default."""
    N = B.N
    a = np.zeros(N, dtype=complex)
    if weights is None:
        a[list(B.elements)] = 1
    else:
        a[list(B.elements)] = np.asarray(weights, dtype=complex)
    # sum_n a_n e(n x) = sum_n a_n exp(-2 pi i n x / N) is the forward FFT
    S = np.fft.fft(a)
    return math.fsum(np.abs(S) ** p) / N


def energy_tk_spectral(B: ResidueSet, k: int, max_residual=0.5) -> int:
    """T_k(B) from the spectral power sum, rounded; raises if rounding is unsafe."""
    k = check_positive_int(k, "k")
    if not len(B):
        return 0
    val = spectral_power_mean(B, 2 * k)
    n = round(val)
    # relative error of the float sum grows with its magnitude
    residual = abs(val - n)
    if residual >= max_residual or val > 2**52:
        raise PrecisionError(f"spectral T_{k} = {val!r} cannot be rounded reliably")
    return int(n)


def energy_tk(B: ResidueSet, k: int, method="exact") -> int:
    """Exact number of 2k-tuples of B with ``r_1+..+r_k = r_1'+..+r_k' (mod N)``.

    ``method="exact"`` convolves the k-fold sum distribution over the integers;
    ``"spectral"`` rounds the floating power sum; ``"auto"`` tries spectral and
    falls back to exact on a precision failure.
    """
    if method == "exact":
        return energy_tk_exact(B, k)
    if method == "spectral":
        return energy_tk_spectral(B, k)
    if method == "auto":
        try:
            return energy_tk_spectral(B, k)
        except PrecisionError:
            return energy_tk_exact(B, k)
    raise InputError(f"unknown energy method {method!r}")


def energy_tk_bruteforce(B: ResidueSet, k: int, budget=DEFAULT_BUDGET) -> int:
    """Literal enumeration of all of B^(2k); the ground-truth oracle."""
    k = check_positive_int(k, "k")
    m = len(B)
    if m == 0:
        return 0
    if m ** (2 * k) > budget:
        raise BudgetError(f"|B|^(2k) = {m}^{2 * k} exceeds the budget {budget}")
    b = np.asarray(B.elements, dtype=np.int64)
    total = np.zeros(1, dtype=np.int64)
    for i in range(2 * k):
        sign = 1 if i < k else -1
        total = np.add.outer(total, sign * b).ravel()
    return int(np.count_nonzero(total % B.N == 0))


def tk_lower_bound(delta, alpha, k, m):
    """``delta alpha^(2k) m^(2k) / (2^(4k) delta^(2k))``.

    Exact (a Fraction) when delta is rational and alpha has a rational square.
    """
    k = check_positive_int(k, "k", minimum=2)
    return _tk_bound(delta, alpha, k, m)


def _tk_bound(delta, alpha, k, m, denominator_power=4):
    a, sq = threshold_square(alpha)
    if isinstance(delta, float):
        d = delta
        exact = False
    else:
        d = Fraction(delta)
        exact = sq is not None
    if not (0 < a and float(d) <= 1 and (a <= float(d) * (1 + 1e-12))):
        raise InputError(f"need 0 < alpha <= delta <= 1, got alpha={alpha}, delta={delta}")
    m = int(m)
    if m < 0:
        raise InputError("set size must be nonnegative")
    if exact:
        return d * sq**k * Fraction(m) ** (2 * k) / (Fraction(2) ** (denominator_power * k) * d ** (2 * k))
    d = float(d)
    return d * a ** (2 * k) * float(m) ** (2 * k) / (2.0 ** (denominator_power * k) * d ** (2 * k))


def level_lemma_bound(delta, alpha_prime, k, m):
    """Lower bound for T_k on a dyadic window: ``delta a'^(2k) m^(2k) / (2 delta)^(2k)``.

    For k = 2 this equals ``a'^4 m^4 / (16 delta^3)``.
    """
    return _tk_bound(delta, alpha_prime, k, m, denominator_power=2)


@dataclass
class EnergyReport:
    """An exact energy (or solution) count paired with the lower bound it should meet."""

    check: str
    N: int
    delta: Fraction
    alpha: float
    k: int
    size: int
    t_k: int
    bound: object
    passed: bool
    d: int | None = None
    odd_k: bool = False
    members: tuple = ()
    slack_warnings: list = field(default_factory=list)

    @property
    def ratio(self):
        if self.bound == 0:
            return math.inf if self.t_k > 0 else math.nan
        return float(Fraction(self.t_k) / self.bound) if isinstance(self.bound, Fraction) \
            else self.t_k / float(self.bound)

    def as_dict(self):
        out = asdict(self)
        out["ratio"] = self.ratio
        return out


def verify_main_theorem(A: ResidueSet, alpha, k, method="exact") -> EnergyReport:
    """Check ``T_k(R_alpha minus 0) >= delta alpha^(2k) |B|^(2k) / (2^(4k) delta^(2k))``."""
    k = check_positive_int(k, "k", minimum=2)
    cmp = ModulusComparator(A)
    R = spectrum_threshold(A, alpha, cmp)
    B = R.members.without_zero()
    delta = density(A)
    t = energy_tk(B, k, method)
    bound = tk_lower_bound(delta, alpha, k, len(B))
    return EnergyReport("main-theorem", A.N, delta, float(R.alpha), k, len(B), t, bound,
                        t >= bound, odd_k=k % 2 == 1, members=B.elements,
                        slack_warnings=list(cmp.warnings))


def verify_level_lemma(A: ResidueSet, alpha_prime, k, B_prime=None, form="auto",
                       method="exact") -> EnergyReport:
    """Check the dyadic-window lemma for ``B' subset of R'_{alpha'} minus 0``.

    ``form="general"`` demands even k; ``form="auto"`` uses the k = 2 form for
    k = 2 (the two coincide) and the general form otherwise, flagging odd k.
    """
    k = check_positive_int(k, "k", minimum=2)
    if form not in ("auto", "general", "k2"):
        raise InputError(f"unknown lemma form {form!r}")
    if form == "general" and k % 2:
        raise InputError("the general dyadic-window bound needs even k")
    if form == "k2" and k != 2:
        raise InputError("the k = 2 form needs k = 2")
    cmp = ModulusComparator(A)
    W = spectrum_window(A, alpha_prime, cmp)
    window = W.members.without_zero()
    if B_prime is None:
        B_prime = window
    elif not B_prime <= window:
        raise InputError("B' must be a subset of the window minus zero")
    delta = density(A)
    check_alpha(alpha_prime, delta)
    t = energy_tk(B_prime, k, method)
    bound = level_lemma_bound(delta, alpha_prime, k, len(B_prime))
    return EnergyReport("level-lemma", A.N, delta, float(W.alpha), k, len(B_prime), t, bound,
                        t >= bound, odd_k=k % 2 == 1, members=B_prime.elements,
                        slack_warnings=list(cmp.warnings))
