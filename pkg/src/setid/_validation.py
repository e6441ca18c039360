"""Input validation and exact-number coercion helpers."""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational, Real
from typing import Iterable, Sequence

from .exceptions import InvalidInputError


def as_fraction(value) -> Fraction:
    """Convert ``value`` to an exact :class:`~fractions.Fraction`.

    Strings may be decimals (``"0.338"``) or ratios (``"29564/87525"``).
    Floats are converted through their shortest ``repr`` so ``0.1`` becomes
    ``1/10`` rather than the binary expansion. Anything already rational is
    kept exact.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise InvalidInputError(f"expected a number, got {value!r}")
    if isinstance(value, Rational):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidInputError(f"cannot parse {value!r} as a rational") from exc
    if isinstance(value, Real):
        x = float(value)
        if not math.isfinite(x):
            raise InvalidInputError(f"non-finite number {value!r}")
        return Fraction(repr(x))
    raise InvalidInputError(f"expected a number, got {type(value).__name__}")


def fraction_to_str(x: Fraction) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def check_probability(value, name: str = "probability") -> Fraction:
    x = as_fraction(value)
    if x < 0 or x > 1:
        raise InvalidInputError(f"{name} must lie in [0, 1], got {x}")
    return x


def check_distribution(values: Iterable, name: str = "probabilities") -> tuple[Fraction, ...]:
    """Exact probability vector that sums to one."""
    probs = tuple(check_probability(v, name) for v in values)
    if not probs:
        raise InvalidInputError(f"{name} must be non-empty")
    total = sum(probs, Fraction(0))
    if total != 1:
        raise InvalidInputError(f"{name} must sum to 1, got {total}")
    return probs


def check_vector(values: Sequence, dim: int | None = None, name: str = "vector") -> tuple[Fraction, ...]:
    vec = tuple(as_fraction(v) for v in values)
    if dim is not None and len(vec) != dim:
        from .exceptions import DimensionError

        raise DimensionError(f"{name} has length {len(vec)}, expected {dim}")
    return vec


def check_gamma(value, name: str = "gamma") -> Fraction:
    g = as_fraction(value)
    if g < 0 or g >= 1:
        raise InvalidInputError(f"{name} must lie in [0, 1), got {g}")
    return g
