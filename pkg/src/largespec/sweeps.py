"""Instance families and per-instance record builders for verification sweeps.

Every record carries a canonical ``key``, the ``operation`` it exercises, the
``claim`` being asserted and a ``verdict`` of ``"pass"``, ``"fail"`` or
``"info"`` (reported, not asserted).
"""

from __future__ import annotations

import math
import os
import signal
import threading
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

import numpy as np

from ._validation import BudgetError, parse_rational
from .bohr import bourgain_size_check, verify_bohr_containment, verify_full_proposition
from .core import ResidueSet, all_subsets, density, make_rng, random_set
from .dissociated import (
    INF,
    SignedSumTable,
    _first_relation,
    chang_decomposition,
    empirical_rudin_constant,
    improved_decomposition,
    maximal_dissociated_subset,
    rudin_identity_check,
    span,
    statement_bound_check,
)
from .energy import energy_tk, energy_tk_bruteforce, verify_level_lemma, verify_main_theorem
from .fourier import (
    char_function_identity_check,
    convolution_identity_check,
    inversion_check,
    parseval_check,
)
from .report import count
from .spectrum import spectrum_size_bound, spectrum_threshold
from .systems import count_solutions, gowers_monotonicity_check, verify_matrix_theorem

THREADS_ENV = "LARGESPEC_THREADS"

CLAIMS = {
    "main": "T_k(B) >= delta alpha^(2k) |B|^(2k) / (2^(4k) delta^(2k)), B = R_alpha minus 0",
    "level2": "T_2(B') >= alpha'^4 |B'|^4 / (16 delta^3) on the dyadic window",
    "level_even": "T_k(B') >= delta alpha'^(2k) |B'|^(2k) / (2 delta)^(2k) on the dyadic window, k even",
    "matrix": "S_{k,d}(B) >= (delta alpha^(2k) |B|^(2k) / (2^(4k) delta^(2k)))^(2^d)",
    "matrix_d0": "S_{k,0}(B) = T_k(B)",
    "oracle": "spectral/convolution T_k equals literal enumeration",
    "size": "|R_alpha| <= delta / alpha^2",
    "gowers": "||f||_{U^d} <= ||f||_{U^(d+1)}",
    "parseval": "sum_r |fhat(r)|^2 = N sum_x |f(x)|^2",
    "inversion": "f(x) = (1/N) sum_r fhat(r) e(r x)",
    "convolution": "(f*g)^(r) = fhat(r) conj(ghat(r))",
    "charfun": "fhat(u) = (1/N) sum_r fhat(r) conj(fhat(r - u)) for indicators",
    "chang": "every r in R_alpha lies in Span(D), D greedy maximal dissociated",
    "improved": "every r in R_alpha is a signed sum of M <= 8 log2(1/delta) elements of Lambda*",
    "rudin": "(1/N) sum_x |sum_{n in D} e(n x)|^(2k) = T_k(D) for dissociated D",
    "statement": "T_k(L) <= 2^(9k) k^k |L|^k 2^(2sk log^2 k / log(k^(2s) |L|^(s-2)))",
    "bourgain": "|B(K, eps)| >= eps^|K| N / 2",
    "containment": "B(R_alpha minus 0, 1/20) is contained in 2A - 2A, alpha = delta^(3/2)/(2 sqrt 2)",
    "proposition": "B(Lambda*, 1/(2^8 log2(1/delta))) <= B(R_alpha minus 0, 1/20) <= 2A - 2A",
}


def verdict(ok):
    return "pass" if ok else "fail"


TIME_LIMIT = 60.0


class _Timeout(Exception):
    pass


def _alarm(signum, frame):
    raise _Timeout


def timed_call(fn, args, time_limit=None):
    """Call ``fn(*args)``; raise BudgetError if it runs past ``time_limit`` seconds."""
    limit = TIME_LIMIT if time_limit is None else time_limit
    if not limit or threading.current_thread() is not threading.main_thread():
        return fn(*args)
    previous = signal.signal(signal.SIGALRM, _alarm)
    signal.setitimer(signal.ITIMER_REAL, limit)
    try:
        return fn(*args)
    except _Timeout:
        raise BudgetError(f"instance exceeded the {limit:g} s time budget") from None
    finally:
        signal.setitimer(signal.ITIMER_REAL, 0)
        signal.signal(signal.SIGALRM, previous)


def parallel_map(fn, items, time_limit=None):
    """Apply ``fn`` to each argument tuple, across LARGESPEC_THREADS processes."""
    threads = int(os.environ.get(THREADS_ENV, "1") or 1)
    items = list(items)
    if threads <= 1 or len(items) < 2:
        return [timed_call(fn, it, time_limit) for it in items]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(_star, [(fn, it, time_limit) for it in items], chunksize=16))


def _star(job):
    fn, args, time_limit = job
    return timed_call(fn, args, time_limit)


def child_rngs(seed, n):
    seq = np.random.SeedSequence(seed)
    return [np.random.Generator(np.random.PCG64(s)) for s in seq.spawn(n)]


def nonempty_subsets(N):
    return (A for A in all_subsets(N) if len(A))


def random_sets(Ns, samples, rng, max_density=1.0):
    """``samples`` random nonempty sets, N drawn from ``Ns``, density uniform."""
    out = []
    Ns = list(Ns)
    for _ in range(samples):
        N = int(rng.choice(Ns))
        lo = 1 / N
        d = float(rng.uniform(lo, max_density))
        out.append(random_set(N, min(d, max_density), rng))
    return out


def _set_fields(A):
    return {"N": A.N, "set": list(A.elements), "delta": density(A)}


# energy and main theorem


def main_record(A, alpha_expr, k):
    alpha = parse_rational(alpha_expr, density(A))
    rep = verify_main_theorem(A, alpha, k)
    return {
        "key": [A.N, list(A.elements), alpha_expr, k],
        "operation": "verify_main_theorem",
        "claim": CLAIMS["main"],
        **_set_fields(A),
        "alpha": alpha,
        "k": k,
        "odd_k": rep.odd_k,
        "B": list(rep.members),
        "size": rep.size,
        "t_k": count(rep.t_k),
        "bound": rep.bound,
        "ratio": rep.ratio,
        "verdict": verdict(rep.passed),
        "warnings": rep.slack_warnings,
    }


def level_record(A, alpha_expr, k):
    alpha = parse_rational(alpha_expr, density(A))
    rep = verify_level_lemma(A, alpha, k, form="auto" if k == 2 else "general")
    return {
        "key": [A.N, list(A.elements), alpha_expr, k],
        "operation": "verify_level_lemma",
        "claim": CLAIMS["level2" if k == 2 else "level_even"],
        **_set_fields(A),
        "alpha_prime": alpha,
        "k": k,
        "B_prime": list(rep.members),
        "size": rep.size,
        "t_k": count(rep.t_k),
        "bound": rep.bound,
        "ratio": rep.ratio,
        "verdict": verdict(rep.passed),
        "warnings": rep.slack_warnings,
    }


def matrix_record(A, alpha_expr, k, d):
    alpha = parse_rational(alpha_expr, density(A))
    rep = verify_matrix_theorem(A, alpha, k, d)
    return {
        "key": [A.N, list(A.elements), alpha_expr, k, d],
        "operation": "verify_matrix_theorem",
        "claim": CLAIMS["matrix"],
        **_set_fields(A),
        "alpha": alpha,
        "k": k,
        "d": d,
        "B": list(rep.members),
        "size": rep.size,
        "count": count(rep.t_k),
        "bound": rep.bound,
        "ratio": rep.ratio,
        "verdict": verdict(rep.passed),
        "warnings": rep.slack_warnings,
    }


def matrix_d0_record(B, k):
    s = count_solutions(B, k, 0)
    t = energy_tk(B, k)
    return {
        "key": [B.N, list(B.elements), k],
        "operation": "count_solutions",
        "claim": CLAIMS["matrix_d0"],
        "N": B.N, "set": list(B.elements), "k": k,
        "count": count(s), "t_k": count(t),
        "verdict": verdict(s == t),
    }


def oracle_record(B, k):
    exact = energy_tk(B, k, "exact")
    spectral = energy_tk(B, k, "auto")
    brute = energy_tk_bruteforce(B, k)
    return {
        "key": [B.N, list(B.elements), k],
        "operation": "energy_tk",
        "claim": CLAIMS["oracle"],
        "N": B.N, "set": list(B.elements), "k": k,
        "t_k": count(exact), "t_k_spectral": count(spectral), "t_k_bruteforce": count(brute),
        "verdict": verdict(exact == brute == spectral),
    }


def exhaustive_instances(Ns, alpha_exprs, ks):
    return [(A, a, k) for N in Ns for A in nonempty_subsets(N) for a in alpha_exprs for k in ks]


def sampled_instances(Ns, alpha_exprs, ks, samples, rng):
    return [(A, a, k) for A in random_sets(Ns, samples, rng) for a in alpha_exprs for k in ks]


def main_theorem_family(Ns, alpha_exprs, ks, exhaustive=True, samples=0, seed=0):
    if exhaustive:
        items = exhaustive_instances(Ns, alpha_exprs, ks)
    else:
        items = sampled_instances(Ns, alpha_exprs, ks, samples, make_rng(seed))
    return parallel_map(main_record, items)


def level_lemma_family(Ns, alpha_exprs, ks):
    return parallel_map(level_record, exhaustive_instances(Ns, alpha_exprs, ks))


def matrix_family(Ns, alpha_exprs, ks, ds, exhaustive=True, samples=0, seed=0):
    if exhaustive:
        base = exhaustive_instances(Ns, alpha_exprs, ks)
    else:
        base = sampled_instances(Ns, alpha_exprs, ks, samples, make_rng(seed))
    return parallel_map(matrix_record, [(A, a, k, d) for A, a, k in base for d in ds])


def random_small_sets(rng, samples, N_max, size_max):
    out = []
    for _ in range(samples):
        N = int(rng.integers(2, N_max + 1))
        m = int(rng.integers(1, min(N, size_max) + 1))
        out.append(ResidueSet(N, rng.choice(N, m, replace=False).tolist()))
    return out


def energy_oracle_family(Ns, size_max, ks, samples, seed):
    items = [(B, k) for N in Ns for B in all_subsets(N, size_max) for k in ks]
    rng = make_rng(seed)
    for _ in range(samples):
        k = int(rng.choice(list(ks)))
        size_max_k = int(math.floor(1e7 ** (1 / (2 * k))))
        (B,) = random_small_sets(rng, 1, 64, min(size_max_k, 12))
        items.append((B, k))
    return parallel_map(oracle_record, items)


def matrix_d0_family(samples, seed):
    rng = make_rng(seed)
    items = [(B, int(rng.integers(1, 4))) for B in random_small_sets(rng, samples, 64, 16)]
    return parallel_map(matrix_d0_record, items)


# Fourier and Gowers


def fourier_record(f, g, label):
    checks = [parseval_check(f), inversion_check(f), convolution_identity_check(f, g)]
    ind = (np.abs(g) > 0.5).astype(float)
    checks.append(char_function_identity_check(ind))
    return {
        "key": [label],
        "operation": "fourier_identities",
        "claim": "; ".join(CLAIMS[c] for c in ("parseval", "inversion", "convolution", "charfun")),
        "N": int(f.size),
        **{f"{c.name}_error": c.max_error for c in checks},
        **{f"{c.name}_tolerance": c.tolerance for c in checks},
        "verdict": verdict(all(c.passed for c in checks)),
    }


def fourier_family(samples, seed, N_max=64):
    rng = make_rng(seed)
    items = []
    for i in range(samples):
        N = int(rng.integers(2, N_max + 1))
        f = rng.normal(size=N) + 1j * rng.normal(size=N)
        g = rng.integers(0, 2, size=N).astype(float)
        items.append((f, g, i))
    return parallel_map(fourier_record, items)


def gowers_record(f, label, d_max=3):
    ok, values = gowers_monotonicity_check(f, d_max)
    return {
        "key": [label],
        "operation": "gowers_monotonicity_check",
        "claim": CLAIMS["gowers"],
        "N": int(f.size),
        "norms": values,
        "verdict": verdict(ok),
    }


def gowers_family(samples, seed, N_max=32, d_max=3):
    rng = make_rng(seed)
    items = []
    for i in range(samples):
        N = int(rng.integers(2, N_max + 1))
        items.append((rng.normal(size=N) + 1j * rng.normal(size=N), f"complex-{i:04d}", d_max))
    for i in range(samples):
        N = int(rng.integers(2, N_max + 1))
        items.append((rng.integers(0, 2, size=N).astype(complex), f"indicator-{i:04d}", d_max))
    return parallel_map(gowers_record, items)


# dissociated sets and decompositions

ALPHA_FRACTIONS = (Fraction(1), Fraction(1, 2), Fraction(1, 3), Fraction(1, 4), Fraction(1, 8))


def chang_record(A, alpha_expr):
    alpha = parse_rational(alpha_expr, density(A))
    dec = chang_decomposition(A, alpha)
    spanned = span(dec.basis)
    covered = dec.covers_spectrum() and dec.all_verified() and dec.spectrum <= spanned
    return {
        "key": [A.N, list(A.elements), alpha_expr],
        "operation": "chang_decomposition",
        "claim": CLAIMS["chang"],
        **_set_fields(A),
        "alpha": alpha,
        "spectrum": list(dec.spectrum.elements),
        "basis": list(dec.basis.elements),
        "dissociated": maximal_dissociated_subset(dec.spectrum) == dec.basis,
        **dec.report,
        "verdict": verdict(covered),
    }


def chang_family(samples, seed, N_max=64):
    rng = make_rng(seed)
    items = []
    for A in random_sets(range(4, N_max + 1), samples, rng):
        frac = ALPHA_FRACTIONS[int(rng.integers(len(ALPHA_FRACTIONS)))]
        items.append((A, f"delta/{frac.denominator}" if frac != 1 else "delta"))
    return parallel_map(chang_record, items)


def improved_record(A, alpha_expr, variant="star"):
    alpha = parse_rational(alpha_expr, density(A))
    dec = improved_decomposition(A, alpha, variant)
    limit = 8 * -math.log2(float(density(A)))
    lengths_ok = all(rep.length <= limit for rep in dec.representations.values())
    in_basis = all(set(rep.base) <= set(dec.basis.elements) for rep in dec.representations.values())
    ok = dec.covers_spectrum() and dec.all_verified() and lengths_ok and in_basis
    return {
        "key": [A.N, list(A.elements), alpha_expr, variant],
        "operation": "improved_decomposition",
        "claim": CLAIMS["improved"],
        **_set_fields(A),
        "alpha": alpha,
        "spectrum": list(dec.spectrum.elements),
        "generators": list(dec.generators.elements),
        "basis": list(dec.basis.elements),
        **dec.report,
        "verdict": verdict(ok),
    }


COPRIME_MODULI = (25, 35, 49, 55)


def improved_family(samples, seed, Ns=COPRIME_MODULI, variant="star"):
    rng = make_rng(seed)
    items = []
    for A in random_sets(Ns, samples, rng, max_density=0.5):
        frac = ALPHA_FRACTIONS[int(rng.integers(len(ALPHA_FRACTIONS)))]
        items.append((A, f"delta/{frac.denominator}" if frac != 1 else "delta", variant))
    return parallel_map(improved_record, items)


def random_dissociated(rng, N):
    """Greedy dissociated set over a random ordering of the nonzero residues,
    stopped at a random target size."""
    target = int(rng.integers(1, N))
    table = SignedSumTable(N, 1)
    for x in rng.permutation(np.arange(1, N)).tolist():
        if len(table.elements) >= target:
            break
        if table.cost[x] >= INF:
            table.add(x)
    return ResidueSet(N, table.elements)


def rudin_record(D, k, label):
    ok, val, t = rudin_identity_check(D, k)
    return {
        "key": [label, k],
        "operation": "rudin_identity_check",
        "claim": CLAIMS["rudin"],
        "N": D.N, "set": list(D.elements), "k": k,
        "spectral_mean": val, "t_k": count(t),
        "rudin_constant": empirical_rudin_constant(D, 2 * k),
        "verdict": verdict(ok),
    }


def rudin_family(samples, seed, N_max=64, ks=(2, 3)):
    rng = make_rng(seed)
    items = []
    for i in range(samples):
        N = int(rng.integers(3, N_max + 1))
        D = random_dissociated(rng, N)
        items.append((D, int(ks[i % len(ks)]), i))
    return parallel_map(rudin_record, items)


def random_lambda_family(rng, N, k, s):
    """A random member of Lambda(k, s) with at least k elements, or None."""
    table = SignedSumTable(N, s)
    target = int(rng.integers(k, k + 6))
    for x in rng.permutation(np.arange(1, N)).tolist():
        if len(table.elements) >= target:
            break
        if _first_relation(table, x, k) is None:
            table.add(x)
    if len(table.elements) < k:
        return None
    return ResidueSet(N, table.elements)


def statement_record(L, k, s, label):
    ok, t, bound = statement_bound_check(L, k, s)
    return {
        "key": [label, k],
        "operation": "statement_bound_check",
        "claim": CLAIMS["statement"],
        "N": L.N, "set": list(L.elements), "k": k, "s": s,
        "t_k": count(t), "bound": bound, "fraction_of_bound": t / bound,
        "verdict": verdict(ok),
    }


def statement_family(samples, seed, ks=(2, 3), s=3, N_max=256):
    rng = make_rng(seed)
    items = []
    for k in ks:
        made = 0
        while made < samples:
            N = int(rng.integers(8, N_max + 1))
            L = random_lambda_family(rng, N, k, s)
            if L is None:
                continue
            items.append((L, k, s, f"k{k}-{made:04d}"))
            made += 1
    return parallel_map(statement_record, items)


# Bohr sets


def bourgain_record(K, eps):
    ok, size, bound = bourgain_size_check(K, eps)
    return {
        "key": [K.N, list(K.elements), eps],
        "operation": "bourgain_size_check",
        "claim": CLAIMS["bourgain"],
        "N": K.N, "K": list(K.elements), "eps": eps,
        "size": size, "bound": bound,
        "verdict": verdict(ok),
    }


def bourgain_family(N=10, eps_grid=(Fraction(1, 10), Fraction(1, 4), Fraction(2, 5)),
                    samples=200, seed=0, N_max=128):
    items = [(K, e) for K in all_subsets(N) for e in eps_grid]
    rng = make_rng(seed)
    for _ in range(samples):
        n = int(rng.integers(2, N_max + 1))
        m = int(rng.integers(0, min(n, 6) + 1))
        K = ResidueSet(n, rng.choice(n, m, replace=False).tolist())
        items.append((K, Fraction(int(rng.integers(1, 100)), 100)))
    return parallel_map(bourgain_record, items)


def containment_record(A, full=False):
    rep = verify_full_proposition(A) if full else verify_bohr_containment(A)
    return {
        "key": [A.N, list(A.elements), full],
        "operation": "verify_full_proposition" if full else "verify_bohr_containment",
        "claim": CLAIMS["proposition" if full else "containment"],
        **_set_fields(A),
        "alpha": rep.alpha,
        "frequencies": list(rep.frequencies),
        "radius": rep.radius,
        "bohr": list(rep.bohr.elements),
        "difference_set_size": len(rep.difference_set),
        **{k: v for k, v in rep.details.items() if k != "slack_warnings"},
        "verdict": verdict(rep.passed),
        "warnings": rep.details.get("slack_warnings", []),
    }


def containment_family(samples, seed, N_max=101):
    rng = make_rng(seed)
    return parallel_map(containment_record,
                        [(A, False) for A in random_sets(range(2, N_max + 1), samples, rng)])


def proposition_family(samples, seed, Ns=COPRIME_MODULI):
    rng = make_rng(seed)
    return parallel_map(containment_record,
                        [(A, True) for A in random_sets(Ns, samples, rng, max_density=0.5)])


def size_bound_record(A, alpha_expr):
    alpha = parse_rational(alpha_expr, density(A))
    R = spectrum_threshold(A, alpha)
    bound = spectrum_size_bound(A, alpha)
    return {
        "key": [A.N, list(A.elements), alpha_expr],
        "operation": "spectrum_size_bound_check",
        "claim": CLAIMS["size"],
        **_set_fields(A),
        "alpha": alpha,
        "R": list(R.members.elements),
        "size": len(R),
        "bound": bound,
        "verdict": verdict(len(R) <= bound),
        "warnings": list(R.slack_warnings),
    }
