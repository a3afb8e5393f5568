"""Input validation helpers and the package exception types."""

from __future__ import annotations

import math
import numbers
from dataclasses import dataclass
from fractions import Fraction

import numpy as np


class InputError(ValueError):
    """Raised when arguments fall outside an operation's domain."""


class PrecisionError(ArithmeticError):
    """Raised when a floating-point path cannot certify its own result."""


class BudgetError(RuntimeError):
    """Raised when a computation would exceed its enumeration budget."""


DEFAULT_BUDGET = 10**7


@dataclass(frozen=True)
class SqrtFraction:
    """The nonnegative real ``sqrt(square)`` for an exact rational ``square``.

    Thresholds such as ``delta**1.5 / (2 * sqrt(2))`` are irrational but have
    rational squares; passing them in this form keeps every modulus
    comparison exact.
    """

    square: Fraction

    def __post_init__(self):
        object.__setattr__(self, "square", Fraction(self.square))
        if self.square < 0:
            raise InputError("square must be nonnegative")

    def __float__(self):
        return math.sqrt(self.square)


def check_modulus(N) -> int:
    if isinstance(N, bool) or not isinstance(N, numbers.Integral):
        raise InputError(f"modulus must be an integer, got {N!r}")
    N = int(N)
    if N < 1:
        raise InputError(f"modulus must be >= 1, got {N}")
    return N


def check_positive_int(value, name, minimum=1) -> int:
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise InputError(f"{name} must be an integer, got {value!r}")
    if value < minimum:
        raise InputError(f"{name} must be >= {minimum}, got {value}")
    return int(value)


def as_signal(f, N=None) -> np.ndarray:
    """Coerce ``f`` to a 1-D complex array, checking its length against ``N``."""
    arr = np.asarray(f, dtype=complex)
    if arr.ndim != 1:
        raise InputError(f"signal must be one-dimensional, got shape {arr.shape}")
    if arr.size == 0:
        raise InputError("signal must be nonempty")
    if N is not None and arr.size != N:
        raise InputError(f"signal length {arr.size} does not match modulus {N}")
    return arr


def same_length(f, g):
    f = as_signal(f)
    g = as_signal(g)
    if f.size != g.size:
        raise InputError(f"mismatched moduli: {f.size} vs {g.size}")
    return f, g


def parse_rational(text, delta=None) -> Fraction:
    """Parse ``'3/8'``, ``'0.25'``, ``'delta'`` or ``'delta/2'`` exactly.

    ``delta`` must be supplied (as a Fraction) when the expression refers to it.
    """
    text = str(text).strip().replace(" ", "")
    if not text:
        raise InputError("empty rational expression")
    if text.startswith("delta"):
        if delta is None:
            raise InputError(f"{text!r} refers to delta but no set is given")
        rest = text[len("delta"):]
        if not rest:
            return Fraction(delta)
        op, arg = rest[0], rest[1:]
        try:
            arg = Fraction(arg)
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"bad rational expression {text!r}") from exc
        if op == "/":
            if arg == 0:
                raise InputError("division by zero")
            return Fraction(delta) / arg
        if op == "*":
            return Fraction(delta) * arg
        raise InputError(f"bad rational expression {text!r}")
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad rational expression {text!r}") from exc


def threshold_square(alpha):
    """Return ``(alpha_float, alpha_squared_exact_or_None)``.

    Integers, Fractions and :class:`SqrtFraction` yield an exact square; plain
    floats are compared with a tolerance downstream.
    """
    if isinstance(alpha, SqrtFraction):
        return float(alpha), alpha.square
    if isinstance(alpha, bool):
        raise InputError("alpha must be a number")
    if isinstance(alpha, (numbers.Rational, Fraction)):
        q = Fraction(alpha)
        return float(q), q * q
    if isinstance(alpha, numbers.Real):
        a = float(alpha)
        if not math.isfinite(a):
            raise InputError(f"alpha must be finite, got {alpha!r}")
        return a, None
    raise InputError(f"alpha must be a real number, got {alpha!r}")


def check_alpha(alpha, delta: Fraction):
    """Validate ``0 < alpha <= delta``; returns :func:`threshold_square`."""
    a, sq = threshold_square(alpha)
    if a <= 0 or (sq is not None and sq == 0):
        raise InputError(f"alpha must be positive, got {alpha!r}")
    if sq is not None:
        if sq > Fraction(delta) ** 2:
            raise InputError(f"alpha={alpha} exceeds density {delta}")
    elif a > float(delta) * (1 + 1e-12):
        raise InputError(f"alpha={alpha} exceeds density {delta}")
    return a, sq
