"""The balanced sign-matrix systems, their solution counts S_{k,d}(B) and
Gowers uniformity norms."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from ._validation import (
    DEFAULT_BUDGET,
    BudgetError,
    InputError,
    PrecisionError,
    as_signal,
    check_positive_int,
    threshold_square,
)
from .core import ResidueSet, density
from .energy import EnergyReport, _tk_bound
from .spectrum import ModulusComparator, spectrum_threshold

MATRIX_GUARD = 2**20
GOWERS_BUDGET = 10**9


@dataclass(frozen=True)
class EquationSystem:
    """``(d+1) x 2^(d+1) k`` matrix with entries in {-1, 0, 1}.

    Row 0 is +1 on the first half of the columns and -1 on the second; row t
    (t >= 1) keeps only the columns whose 0-based index has bit t-1 set.
    """

    k: int
    d: int
    matrix: np.ndarray

    @property
    def n_vars(self):
        return self.matrix.shape[1]

    def column_patterns(self) -> Counter:
        """Multiplicity of each distinct column, as tuples of signs."""
        return Counter(tuple(int(v) for v in col) for col in self.matrix.T)


def build_matrix(k, d) -> EquationSystem:
    k = check_positive_int(k, "k")
    d = check_positive_int(d, "d", minimum=0)
    half = 2**d * k
    if 2 * half > MATRIX_GUARD:
        raise BudgetError(f"matrix with {2 * half} columns exceeds the guard {MATRIX_GUARD}")
    j = np.arange(2 * half)
    sign = np.where(j < half, 1, -1).astype(np.int8)
    M = np.zeros((d + 1, 2 * half), dtype=np.int8)
    M[0] = sign
    for t in range(1, d + 1):
        M[t] = sign * ((j >> (t - 1)) & 1)
    M.flags.writeable = False
    return EquationSystem(k, d, M)


def _count_enumerate(B, system, budget):
    m = len(B)
    n = system.n_vars
    if m**n > budget:
        raise BudgetError(f"|B|^{n} = {m}^{n} exceeds the budget {budget}")
    b = np.asarray(B.elements, dtype=np.int64)
    ok = None
    for row in system.matrix:
        total = np.zeros(1, dtype=np.int64)
        for coef in row:
            total = np.add.outer(total, int(coef) * b).ravel()
        hit = total % B.N == 0
        ok = hit if ok is None else ok & hit
    return int(np.count_nonzero(ok))


def _count_exact(B, system):
    """Distribution of the (d+1)-vector of row sums over Z_N^(d+1), column by column."""
    N = B.N
    dims = system.d + 1
    exact = len(B) ** system.n_vars >= 2**62
    state = np.zeros((N,) * dims, dtype=object if exact else np.int64)
    state[(0,) * dims] = 1
    axes = tuple(range(dims))
    for pattern, mult in sorted(system.column_patterns().items()):
        for _ in range(mult):
            nxt = np.zeros_like(state)
            for b in B.elements:
                nxt += np.roll(state, tuple(p * b for p in pattern), axis=axes)
            state = nxt
    return int(state[(0,) * dims])


def _count_spectral(B, system):
    """``N^-(d+1) sum_xi prod_j phi(<column_j, xi>)`` with ``phi(y) = sum_b e^(2 pi i b y/N)``."""
    N = B.N
    dims = system.d + 1
    if N**dims > 10**7:
        raise BudgetError("frequency grid too large for the spectral path")
    ind = np.zeros(N)
    ind[list(B.elements)] = 1
    phi = np.fft.ifft(ind) * N
    grids = np.indices((N,) * dims).reshape(dims, -1)
    total = np.ones(grids.shape[1], dtype=complex)
    for pattern, mult in system.column_patterns().items():
        y = (np.asarray(pattern)[:, None] * grids).sum(axis=0) % N
        total *= phi[y] ** mult
    val = math.fsum(total.real) / N**dims
    n = round(val)
    if abs(val - n) >= 0.5 or abs(val) > 2**52:
        raise PrecisionError(f"spectral solution count {val!r} cannot be rounded reliably")
    return int(n)


def count_solutions(B: ResidueSet, k, d, method="exact", budget=DEFAULT_BUDGET) -> int:
    """S_{k,d}(B): tuples in B^(2^(d+1) k) solving every row of the sign system mod N.

    Methods: ``"exact"`` (integer distribution over Z_N^(d+1)), ``"spectral"``
    (rounded frequency sum) and ``"enumerate"`` (literal enumeration, guarded
    by ``budget``).
    """
    system = build_matrix(k, d)
    if not len(B):
        return 0
    if method == "exact":
        if B.N ** (d + 1) > budget:
            raise BudgetError(f"state space N^(d+1) = {B.N ** (d + 1)} exceeds the budget {budget}")
        return _count_exact(B, system)
    if method == "spectral":
        return _count_spectral(B, system)
    if method == "enumerate":
        return _count_enumerate(B, system, budget)
    raise InputError(f"unknown counting method {method!r}")


def matrix_lower_bound(delta, alpha, k, d, m):
    """``(delta alpha^(2k) m^(2k) / (2^(4k) delta^(2k)))^(2^d)``."""
    k = check_positive_int(k, "k")
    d = check_positive_int(d, "d", minimum=0)
    return _tk_bound(delta, alpha, k, m) ** (2**d)


def verify_matrix_theorem(A: ResidueSet, alpha, k, d, method="exact") -> EnergyReport:
    k = check_positive_int(k, "k")
    d = check_positive_int(d, "d", minimum=0)
    cmp = ModulusComparator(A)
    R = spectrum_threshold(A, alpha, cmp)
    B = R.members.without_zero()
    delta = density(A)
    count = count_solutions(B, k, d, method)
    bound = matrix_lower_bound(delta, alpha, k, d, len(B))
    return EnergyReport("matrix-theorem", A.N, delta, float(R.alpha), k, len(B), count, bound,
                        count >= bound, d=d, odd_k=k % 2 == 1, members=B.elements,
                        slack_warnings=list(cmp.warnings))


# Gowers norms


@dataclass(frozen=True)
class GowersNormValue:
    d: int
    value: float
    power_sum: float


def _root(power, d, scale):
    if power.imag and abs(power.imag) > 1e-9 * scale:
        raise PrecisionError(f"Gowers sum has imaginary part {power.imag!r}")
    p = power.real
    if p < 0:
        if p < -1e-9 * scale:
            raise PrecisionError(f"Gowers sum is negative: {p!r}")
        p = 0.0
    return p ** (1.0 / 2**d), p


def _fsum_complex(values):
    values = np.asarray(values).ravel()
    return complex(math.fsum(values.real), math.fsum(values.imag))


def gowers_power_direct(f, d) -> complex:
    """``N^-(d+1) sum_{x,h} prod_omega C^|omega| f(x + omega.h)`` by literal summation."""
    f = as_signal(f)
    N = f.size
    idx = np.indices((N,) * (d + 1)).reshape(d + 1, -1)
    x, h = idx[0], idx[1:]
    prod = np.ones(idx.shape[1], dtype=complex)
    for bits in range(2**d):
        omega = [(bits >> i) & 1 for i in range(d)]
        shift = (x + sum(w * hi for w, hi in zip(omega, h))) % N
        vals = f[shift]
        prod *= np.conj(vals) if sum(omega) % 2 else vals
    return _fsum_complex(prod) / N ** (d + 1)


def gowers_power(f, d) -> complex:
    """Same quantity through the difference recursion
    ``||f||^(2^d) = N^-1 sum_h ||f * conj(f(. + h))||^(2^(d-1))``."""
    f = as_signal(f)
    N = f.size
    if d == 1:
        return abs(_fsum_complex(f)) ** 2 / N**2 + 0j
    # all N shifted products at once: g[h, x] = f(x) conj f(x + h)
    signals = f[None, :]
    for _ in range(d - 1):
        x = np.arange(N)
        shifted = signals[:, (x[:, None] + x[None, :]) % N]  # [..., h, x]
        signals = (signals[:, None, :] * np.conj(shifted)).reshape(-1, N)
    sums = signals.real.sum(axis=1) ** 2 + signals.imag.sum(axis=1) ** 2
    return complex(math.fsum(sums) / N ** (d + 1))


def gowers_norm(f, d, method="recursive", budget=GOWERS_BUDGET) -> GowersNormValue:
    """``||f||_{U^d}``; ``method`` is ``"recursive"`` or ``"direct"``."""
    d = check_positive_int(d, "d")
    f = as_signal(f)
    N = f.size
    if method == "direct":
        work = N ** (d + 1) * 2**d
    elif method == "recursive":
        work = N ** (d + 1)
    else:
        raise InputError(f"unknown Gowers method {method!r}")
    if work > budget:
        raise BudgetError(f"Gowers evaluation needs {work} terms, budget is {budget}")
    power = gowers_power_direct(f, d) if method == "direct" else gowers_power(f, d)
    scale = max(1.0, float(np.max(np.abs(f))) ** (2**d))
    value, p = _root(power, d, scale)
    return GowersNormValue(d, value, p)


def gowers_monotonicity_check(f, d_max, tol=1e-9, method="recursive"):
    """Check ``||f||_{U^d} <= ||f||_{U^(d+1)} + tol`` for d = 1..d_max-1.

    Returns ``(passed, values)`` with ``values[d-1] = ||f||_{U^d}``.
    """
    d_max = check_positive_int(d_max, "d_max", minimum=2)
    values = [gowers_norm(f, d, method).value for d in range(1, d_max + 1)]
    passed = all(values[i] <= values[i + 1] + tol for i in range(d_max - 1))
    return passed, values
