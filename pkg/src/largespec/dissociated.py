"""Dissociated sets, spans, Lambda(k, s) families and the decompositions of
the large spectrum built from them."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from ._validation import InputError, check_positive_int
from .core import ResidueSet, density, log2_ceil_inverse
from .energy import energy_tk, spectral_power_mean
from .spectrum import ModulusComparator, spectrum_threshold

INF = np.iinfo(np.int32).max // 2


class SignedSumTable:
    """Cheapest way to write every residue as ``sum_i c_i lambda_i`` with ``|c_i| <= s``.

    The cost of a representation is ``sum_i |c_i|``. Elements are appended one
    at a time and the table is updated by a min-plus pass over the 2s+1
    admissible coefficients; per-element choice arrays allow any optimal
    representation to be read back.
    """

    def __init__(self, N, s=1):
        self.N = N
        self.s = s
        self.elements = []
        self.cost = np.full(N, INF, dtype=np.int64)
        self.cost[0] = 0
        self._choices = []

    def copy(self):
        other = SignedSumTable(self.N, self.s)
        other.elements = list(self.elements)
        other.cost = self.cost.copy()
        other._choices = list(self._choices)
        return other

    def add(self, lam):
        lam = int(lam) % self.N
        best = self.cost.copy()
        choice = np.zeros(self.N, dtype=np.int8)
        # ascending |c|, positive first, so ties keep the smallest coefficient
        for c in sorted(range(-self.s, self.s + 1), key=lambda c: (abs(c), -c)):
            if c == 0:
                continue
            cand = np.roll(self.cost, c * lam) + abs(c)
            better = cand < best
            best[better] = cand[better]
            choice[better] = c
        self.cost = best
        self.elements.append(lam)
        self._choices.append(choice)

    def reachable(self, max_cost=None):
        limit = INF - 1 if max_cost is None else max_cost
        return np.flatnonzero(self.cost <= limit)

    def representation(self, x):
        """Coefficients ``c`` (aligned with ``elements``) of a cheapest representation of x."""
        x = int(x) % self.N
        if self.cost[x] >= INF:
            return None
        coeffs = [0] * len(self.elements)
        for i in range(len(self.elements) - 1, -1, -1):
            c = int(self._choices[i][x])
            coeffs[i] = c
            x = (x - c * self.elements[i]) % self.N
        assert x == 0
        return coeffs


@dataclass(frozen=True)
class SpanRepresentation:
    """``target = sum_i eps_i base_i (mod N)`` with ``eps_i`` in {-1, 0, 1}."""

    N: int
    target: int
    base: tuple
    coefficients: tuple

    @property
    def length(self):
        return sum(1 for e in self.coefficients if e)

    def evaluate(self):
        return sum(e * b for e, b in zip(self.coefficients, self.base)) % self.N

    def verify(self):
        return (all(e in (-1, 0, 1) for e in self.coefficients)
                and len(self.base) == len(self.coefficients)
                and self.evaluate() == self.target % self.N)


@dataclass(frozen=True)
class LambdaFamilyWitness:
    members: ResidueSet
    k: int
    s: int
    is_member: bool
    violation: tuple | None = None

    def __bool__(self):
        return self.is_member


def span(E: ResidueSet) -> ResidueSet:
    """All sums ``sum eps_i e_i`` with ``eps_i`` in {-1, 0, 1}."""
    reach = np.zeros(E.N, dtype=bool)
    reach[0] = True
    for e in E.elements:
        reach = reach | np.roll(reach, e) | np.roll(reach, -e)
    return ResidueSet.from_mask(reach)


def is_lambda_family(L: ResidueSet, k, s) -> LambdaFamilyWitness:
    """Decide whether L admits no nontrivial ``sum s_i lambda_i = 0`` with
    ``|s_i| <= s`` and ``sum |s_i| <= 2k``; on failure return such an ``s`` vector.

    Works incrementally: a relation whose last nonzero coefficient ``j`` sits on
    element x says ``j x`` is representable by the earlier elements within cost
    ``2k - |j|``.
    """
    k = check_positive_int(k, "k")
    s = check_positive_int(s, "s")
    table = SignedSumTable(L.N, s)
    elems = list(L.elements)
    for i, x in enumerate(elems):
        j = _first_relation(table, x, k)
        if j is not None:
            prefix = table.representation(j * x)
            violation = [-c for c in prefix] + [j] + [0] * (len(elems) - i - 1)
            return LambdaFamilyWitness(L, k, s, False, tuple(violation))
        table.add(x)
    return LambdaFamilyWitness(L, k, s, True)


def _first_relation(table, x, k):
    for j in range(1, min(table.s, 2 * k) + 1):
        if table.cost[j * x % table.N] <= 2 * k - j:
            return j
    return None


def is_dissociated(D: ResidueSet) -> LambdaFamilyWitness:
    """Dissociativity is membership in Lambda(k, 1) with ``2k >= |D|``."""
    k = max(1, math.ceil(len(D) / 2))
    w = is_lambda_family(D, k, 1)
    return LambdaFamilyWitness(D, k, 1, w.is_member, w.violation)


def greedy_lambda_subset(S: ResidueSet, k, s) -> tuple:
    """Ascending greedy maximal subset of S in Lambda(k, s); returns (set, table)."""
    table = SignedSumTable(S.N, s)
    for x in S.elements:
        if _first_relation(table, x, k) is None:
            table.add(x)
    return ResidueSet(S.N, table.elements), table


def maximal_dissociated_subset(S: ResidueSet) -> ResidueSet:
    """Ascending greedy: keep r whenever r lies outside the span of those kept."""
    return _greedy_dissociated(S)[0]


def _greedy_dissociated(S):
    table = SignedSumTable(S.N, 1)
    for x in S.elements:
        if table.cost[x] >= INF:
            table.add(x)
    return ResidueSet(S.N, table.elements), table


def _span_rep(table, r) -> SpanRepresentation:
    coeffs = table.representation(r)
    if coeffs is None:
        raise InputError(f"residue {r} is not in the span of {table.elements}")
    return SpanRepresentation(table.N, int(r) % table.N, tuple(table.elements), tuple(coeffs))


@dataclass
class Decomposition:
    """A basis for R_alpha together with one certificate per residue of R_alpha."""

    N: int
    delta: Fraction
    alpha: float
    spectrum: ResidueSet
    generators: ResidueSet
    basis: ResidueSet
    representations: dict
    report: dict = field(default_factory=dict)

    def all_verified(self):
        return all(rep.verify() and rep.target == r for r, rep in self.representations.items())

    def covers_spectrum(self):
        return set(self.representations) == set(self.spectrum.elements)


def chang_decomposition(A: ResidueSet, alpha) -> Decomposition:
    """Greedy maximal dissociated D inside R_alpha and a span certificate for
    every r in R_alpha."""
    cmp = ModulusComparator(A)
    R = spectrum_threshold(A, alpha, cmp).members
    delta = density(A)
    D, table = _greedy_dissociated(R)
    reps = {r: _span_rep(table, r) for r in R.elements}
    a = float(alpha)
    ratio = (float(delta) / a) ** 2
    L = -math.log2(float(delta))
    report = {
        "basis_size": len(D),
        "chang_bound": 2 * ratio * L,
        "rudin_route_bound_over_C2": 2**8 * ratio * L,
        "max_length": max((rep.length for rep in reps.values()), default=0),
        "log_base": 2,
    }
    return Decomposition(A.N, delta, a, R, D, D, reps, report)


def _inverse(j, N):
    if math.gcd(j, N) != 1:
        raise InputError(f"{j} is not invertible modulo {N}")
    return pow(j, -1, N)


def improved_decomposition(A: ResidueSet, alpha, variant="star") -> Decomposition:
    """Representations of R_alpha of length at most ``8 log2(1/delta)``.

    ``variant="star"``: Lambda is the ascending greedy maximal Lambda(k, 3)
    subset of R_alpha minus 0 with ``k = 2 ceil(log2(1/delta))`` and the basis is
    ``{0} u Lambda u 2^-1 Lambda u 3^-1 Lambda``. ``variant="tilde"`` uses
    ``s = max(3, floor(log2 log2(1/delta)))`` and the basis
    ``u_{j<=s} j^-1 Lambda``. Each ``r`` not in {0} comes from a relation
    ``j r = sum s_i lambda_i`` and becomes ``sum_i sign(s_i) |s_i| (j^-1 lambda_i)``.
    """
    if variant not in ("star", "tilde"):
        raise InputError(f"unknown variant {variant!r}")
    N = A.N
    if math.gcd(N, 6) != 1:
        raise InputError(f"modulus {N} must be coprime to 6")
    delta = density(A)
    if delta == 0 or delta > Fraction(1, 2):
        raise InputError(f"density {delta} must lie in (0, 1/2]")
    cmp = ModulusComparator(A)
    R = spectrum_threshold(A, alpha, cmp).members
    L2 = -math.log2(float(delta))
    k = 2 * log2_ceil_inverse(delta)
    if variant == "star":
        s = 3
    else:
        s = max(3, math.floor(math.log2(L2)))
    Lam, table = greedy_lambda_subset(R.without_zero(), k, s)
    inverses = {j: _inverse(j, N) for j in range(1, s + 1)}
    basis = {inverses[j] * lam % N for j in inverses for lam in Lam.elements}
    if variant == "star":
        basis.add(0)
    basis = ResidueSet(N, basis)
    reps = {}
    for r in R.elements:
        if r == 0:
            reps[r] = SpanRepresentation(N, 0, (), ())
            continue
        best = None
        for j in range(1, s + 1):
            c = int(table.cost[j * r % N])
            if c <= 2 * k and (best is None or c < best[0]):
                best = (c, j)
        if best is None:
            raise InputError(f"no relation j*r = sum s_i lambda_i found for r = {r}")
        j = best[1]
        coeffs = table.representation(j * r)
        inv = inverses[j]
        base, eps = [], []
        for lam, c in zip(table.elements, coeffs):
            for _ in range(abs(c)):
                base.append(inv * lam % N)
                eps.append(1 if c > 0 else -1)
        reps[r] = SpanRepresentation(N, r, tuple(base), tuple(eps))
    a = float(alpha)
    ratio = (float(delta) / a) ** 2
    loglog = math.log2(L2) if L2 > 0 else 0.0
    report = {
        "variant": variant,
        "k": k,
        "s": s,
        "s_clamped": variant == "tilde" and math.floor(math.log2(L2)) < 3,
        "generators": len(Lam),
        "basis_size": len(basis),
        "max_length": max((rep.length for rep in reps.values()), default=0),
        "length_limit": 8 * L2,
        "log_base": 2,
    }
    if variant == "star":
        report["size_bound"] = min(max(2**30 * ratio * L2, 2 ** (4 * loglog**2 + 2)),
                                   2**20 * ratio * L2 ** (13 / 7))
    else:
        report["size_bound"] = 2**20 * ratio * L2 ** (5 / 3) * loglog
    return Decomposition(N, delta, a, R, Lam, basis, reps, report)


def rudin_identity_check(D: ResidueSet, k):
    """``(1/N) sum_x |sum_{n in D} e(n x)|^(2k)`` against T_k(D) for dissociated D.

    Returns ``(passed, spectral_value, t_k)``; equality is exact after rounding.
    """
    k = check_positive_int(k, "k")
    if not is_dissociated(D):
        raise InputError("D is not dissociated")
    t = energy_tk(D, k, "exact")
    val = spectral_power_mean(D, 2 * k) if len(D) else 0.0
    return round(val) == t and abs(val - t) < 0.5, val, t


def empirical_rudin_constant(D: ResidueSet, p, a=None) -> float:
    """Smallest C with ``(1/N) sum_x |sum a_n e(n x)|^p <= (C sqrt p)^p (sum |a_n|^2)^(p/2)``."""
    p = check_positive_int(p, "p", minimum=2)
    if not is_dissociated(D):
        raise InputError("D is not dissociated")
    weights = np.ones(len(D)) if a is None else np.asarray(a, dtype=complex)
    if weights.size != len(D):
        raise InputError("need one coefficient per element of D")
    mass = float(np.sum(np.abs(weights) ** 2))
    if mass == 0:
        return 0.0
    lhs = spectral_power_mean(D, p, weights)
    return (lhs / mass ** (p / 2)) ** (1 / p) / math.sqrt(p)


def statement_bound(k, s, size) -> float:
    """``2^(9k) k^k |L|^k 2^(2 s k log2(k)^2 / log2(k^(2s) |L|^(s-2)))``."""
    num = 2 * s * k * math.log2(k) ** 2
    den = 2 * s * math.log2(k) + (s - 2) * math.log2(size) if size else 0.0
    exponent = num / den if num else 0.0
    return 2.0 ** (9 * k) * float(k) ** k * float(size) ** k * 2.0**exponent


def statement_bound_check(L: ResidueSet, k, s):
    """Check ``T_k(L) <= statement_bound(k, s, |L|)`` for admissible L.

    Returns ``(passed, t_k, bound)``.
    """
    k = check_positive_int(k, "k")
    s = check_positive_int(s, "s")
    if s < 3:
        raise InputError("the bound needs s >= 3")
    if len(L) < k:
        raise InputError(f"the bound needs |L| >= k, got |L| = {len(L)}, k = {k}")
    if not is_lambda_family(L, k, s):
        raise InputError(f"L is not in the family Lambda({k}, {s})")
    t = energy_tk(L, k, "exact")
    bound = statement_bound(k, s, len(L))
    return t <= bound, t, bound


class ChangDecomposition(BaseEstimator):
    """``fit(A)`` builds the greedy dissociated basis of R_alpha.

    Fitted attributes: ``basis_``, ``spectrum_``, ``representations_`` and
    ``report_``. ``transform`` maps residues of R_alpha to their certificates.
    """

    def __init__(self, alpha=Fraction(1, 2)):
        self.alpha = alpha

    def _decompose(self, A):
        return chang_decomposition(A, self.alpha)

    def fit(self, A, y=None):
        dec = self._decompose(A)
        self.decomposition_ = dec
        self.basis_ = dec.basis
        self.spectrum_ = dec.spectrum
        self.representations_ = dec.representations
        self.report_ = dec.report
        return self

    def transform(self, residues):
        check_is_fitted(self, "representations_")
        out = []
        for r in residues:
            r = int(r) % self.spectrum_.N
            if r not in self.representations_:
                raise InputError(f"{r} is not in the large spectrum")
            out.append(self.representations_[r])
        return out


class ImprovedDecomposition(ChangDecomposition):
    """Same interface with the short-representation basis (``variant`` star or tilde)."""

    def __init__(self, alpha=Fraction(1, 4), variant="star"):
        self.alpha = alpha
        self.variant = variant

    def _decompose(self, A):
        return improved_decomposition(A, self.alpha, self.variant)
