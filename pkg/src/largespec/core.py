"""Residue sets in Z_N, deterministic set generators and the SetSpec language."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable

import numpy as np

from ._validation import InputError, check_modulus, parse_rational

GENERATOR_NAME = "numpy.random.PCG64"


@dataclass(frozen=True)
class CyclicGroup:
    N: int

    def __post_init__(self):
        object.__setattr__(self, "N", check_modulus(self.N))

    def __contains__(self, x):
        return isinstance(x, (int, np.integer)) and 0 <= x < self.N

    def reduce(self, x):
        return int(x) % self.N


@dataclass(frozen=True)
class ResidueSet:
    """An immutable subset of Z_N stored as a sorted tuple of canonical residues.

    Use :meth:`of` to build one from arbitrary integers; ``mask`` exposes the
    bit-vector form.
    """

    N: int
    elements: tuple = ()

    def __post_init__(self):
        N = check_modulus(self.N)
        elems = tuple(sorted({int(x) % N for x in self.elements}))
        object.__setattr__(self, "N", N)
        object.__setattr__(self, "elements", elems)

    @classmethod
    def of(cls, N, elements: Iterable[int] = ()):
        return cls(N, tuple(elements))

    @classmethod
    def from_mask(cls, mask):
        mask = np.asarray(mask, dtype=bool)
        return cls(mask.size, tuple(np.flatnonzero(mask).tolist()))

    @classmethod
    def full(cls, N):
        return cls(N, tuple(range(N)))

    @property
    def group(self):
        return CyclicGroup(self.N)

    @cached_property
    def mask(self) -> np.ndarray:
        m = np.zeros(self.N, dtype=bool)
        m[list(self.elements)] = True
        m.flags.writeable = False
        return m

    def indicator(self) -> np.ndarray:
        return self.mask.astype(complex)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x):
        return int(x) % self.N in self.elements if isinstance(x, (int, np.integer)) else False

    def __le__(self, other):
        self._check_same(other)
        return set(self.elements) <= set(other.elements)

    def __or__(self, other):
        self._check_same(other)
        return ResidueSet(self.N, self.elements + other.elements)

    def __sub__(self, other):
        self._check_same(other)
        drop = set(other.elements)
        return ResidueSet(self.N, tuple(x for x in self.elements if x not in drop))

    def __and__(self, other):
        self._check_same(other)
        keep = set(other.elements)
        return ResidueSet(self.N, tuple(x for x in self.elements if x in keep))

    def _check_same(self, other):
        if not isinstance(other, ResidueSet) or other.N != self.N:
            raise InputError("residue sets live in different groups")

    def without_zero(self):
        return ResidueSet(self.N, tuple(x for x in self.elements if x != 0))

    def to_list(self):
        return list(self.elements)


def density(A: ResidueSet) -> Fraction:
    """|A| / N as an exact rational (``float(density(A))`` for the real value)."""
    return Fraction(len(A), A.N)


def negate_set(A: ResidueSet) -> ResidueSet:
    return ResidueSet(A.N, tuple(-a for a in A.elements))


def dilate_set(A: ResidueSet, j: int) -> ResidueSet:
    return ResidueSet(A.N, tuple(j * a for a in A.elements))


def all_subsets(N, max_size=None):
    """Yield every subset of Z_N (optionally only those of size <= max_size)."""
    N = check_modulus(N)
    for bits in range(1 << N):
        if max_size is not None and bits.bit_count() > max_size:
            continue
        yield ResidueSet(N, tuple(i for i in range(N) if bits >> i & 1))


def make_rng(seed):
    """The package's seedable generator; child streams come from ``spawn``."""
    return np.random.Generator(np.random.PCG64(seed))


def random_set(N, density, rng) -> ResidueSet:
    """Uniform random subset of size ``max(1, round(density * N))``."""
    size = max(1, min(N, round(float(density) * N)))
    return ResidueSet(N, tuple(rng.choice(N, size=size, replace=False).tolist()))


@dataclass(frozen=True)
class SetSpec:
    """A recipe for a ResidueSet.

    kind is one of ``"list"``, ``"random"``, ``"ap"`` or ``"bohr"``; params holds
    the kind-specific fields as a tuple of (name, value) pairs so specs stay
    hashable.
    """

    N: int
    kind: str
    params: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "N", check_modulus(self.N))
        if self.kind not in ("list", "random", "ap", "bohr"):
            raise InputError(f"unknown set kind {self.kind!r}")
        object.__setattr__(self, "params", tuple(self.params))

    @property
    def param_dict(self):
        return dict(self.params)

    def __str__(self):
        p = self.param_dict
        if self.kind == "list":
            body = ",".join(str(x) for x in p["elements"])
        elif self.kind == "random":
            body = f"delta={p['delta']},seed={p['seed']}"
        elif self.kind == "ap":
            body = f"start={p['start']},step={p['step']},len={p['len']}"
        else:
            body = "K=" + ";".join(str(x) for x in p["K"]) + f",eps={p['eps']}"
        return f"N={self.N},{self.kind}:{body}"


def explicit(N, elements):
    return SetSpec(N, "list", (("elements", tuple(int(x) for x in elements)),))


def random_spec(N, delta, seed):
    return SetSpec(N, "random", (("delta", delta), ("seed", int(seed))))


def ap(N, start, step, length):
    return SetSpec(N, "ap", (("start", int(start)), ("step", int(step)), ("len", int(length))))


def bohr_spec(N, K, eps):
    return SetSpec(N, "bohr", (("K", tuple(int(x) for x in K)), ("eps", eps)))


def make_set(spec: SetSpec) -> ResidueSet:
    N = spec.N
    p = spec.param_dict
    if spec.kind == "list":
        return ResidueSet(N, p["elements"])
    if spec.kind == "random":
        delta = float(p["delta"])
        if not 0 < delta <= 1:
            raise InputError(f"random density must lie in (0, 1], got {p['delta']}")
        return random_set(N, delta, make_rng(p["seed"]))
    if spec.kind == "ap":
        length = p["len"]
        if length < 1 or length > N:
            raise InputError(f"AP length must lie in [1, N], got {length}")
        return ResidueSet(N, tuple(p["start"] + i * p["step"] for i in range(length)))
    # bohr
    from .bohr import bohr_set

    eps = p["eps"]
    if not 0 < eps < 1:
        raise InputError(f"Bohr radius must lie in (0, 1), got {eps}")
    return bohr_set(ResidueSet(N, p["K"]), eps)


def parse_set_spec(text: str) -> SetSpec:
    """Parse ``N=<modulus>,<kind>:<params>``.

    Examples: ``N=5,list:0,2``; ``N=16,random:delta=0.25,seed=7``;
    ``N=40,ap:start=3,step=5,len=20``; ``N=10,bohr:K=1;2,eps=0.1``.
    """
    text = text.strip()
    head, sep, rest = text.partition(",")
    if not sep or not head.startswith("N="):
        raise InputError(f"set spec must start with 'N=<modulus>,': {text!r}")
    try:
        N = int(head[2:])
    except ValueError as exc:
        raise InputError(f"bad modulus in {text!r}") from exc
    kind, sep, body = rest.partition(":")
    kind = kind.strip()
    if not sep:
        raise InputError(f"missing ':' after set kind in {text!r}")
    if kind == "list":
        items = [s for s in body.split(",") if s.strip()]
        try:
            return explicit(N, [int(s) for s in items])
        except ValueError as exc:
            raise InputError(f"bad element list in {text!r}") from exc
    fields = {}
    for item in body.split(","):
        if not item.strip():
            continue
        key, eq, value = item.partition("=")
        if not eq:
            raise InputError(f"expected key=value, got {item!r}")
        fields[key.strip()] = value.strip()
    try:
        if kind == "random":
            return random_spec(N, float(parse_rational(fields["delta"])), int(fields["seed"]))
        if kind == "ap":
            return ap(N, int(fields["start"]), int(fields["step"]), int(fields["len"]))
        if kind == "bohr":
            K = [int(x) for x in fields["K"].split(";") if x.strip()]
            return bohr_spec(N, K, float(parse_rational(fields["eps"])))
    except KeyError as exc:
        raise InputError(f"missing field {exc.args[0]!r} in {text!r}") from exc
    except ValueError as exc:
        raise InputError(f"bad field value in {text!r}") from exc
    raise InputError(f"unknown set kind {kind!r}")


def log2_ceil_inverse(delta: Fraction) -> int:
    """Smallest n >= 0 with 2**n >= 1/delta, computed exactly."""
    delta = Fraction(delta)
    if delta <= 0:
        raise InputError("density must be positive")
    n = 0
    while Fraction(2**n) * delta < 1:
        n += 1
    return n


def log2_inverse(delta) -> float:
    return -math.log2(float(delta))
