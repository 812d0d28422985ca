# Copyright (c) 2025 Equiform Core Authors.
# Licensed under the MIT License

"""
Common scalar helpers shared by the motion, analysis and CLI layers.
"""

import math
from fractions import Fraction
from numbers import Rational
from typing import Any, Iterable, Union

Scalar = Union[int, Fraction, float]


def parse_scalar(value: Any) -> Scalar:
    """
    Parse a parameter-file entry. Strings ("p/q", "3", "0.25") are exact;
    ints stay ints; floats stay floats.
    """
    if isinstance(value, bool):
        raise ValueError(f"Boolean is not a number: {value!r}")
    if isinstance(value, (int, Fraction)):
        return value
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"Non-finite number: {value!r}")
        return value
    if isinstance(value, str):
        try:
            parsed = Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise ValueError(f"Not a rational literal: {value!r}") from e
        return parsed.numerator if parsed.denominator == 1 else parsed
    raise ValueError(f"Unsupported value {value!r}")


def format_scalar(value: Scalar) -> str:
    """Exact values print as 'p/q' (or 'p'); floats use repr."""
    if isinstance(value, bool):
        raise ValueError(f"Boolean is not a number: {value!r}")
    if isinstance(value, int):
        return str(value)
    if isinstance(value, Rational):
        value = Fraction(value)
        return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"
    return repr(float(value))


def json_scalar(value: Scalar) -> Union[int, float, str]:
    """JSON-friendly form: ints as ints, rationals as 'p/q' strings, floats as floats."""
    if isinstance(value, int) and not isinstance(value, bool):
        return value
    if isinstance(value, Rational):
        value = Fraction(value)
        return value.numerator if value.denominator == 1 else f"{value.numerator}/{value.denominator}"
    return float(value)


def is_exact(value: Any) -> bool:
    return isinstance(value, Rational) and not isinstance(value, bool)


def divide(a: Scalar, b: Scalar) -> Scalar:
    """a / b keeping exact operands exact."""
    if is_exact(a) and is_exact(b):
        return Fraction(a) / Fraction(b)
    return float(a) / float(b)


def is_negligible(value: Scalar, tol: float, scale: float = 1.0) -> bool:
    """Exact values must be zero; floats must be within tol * max(scale, 1)."""
    if is_exact(value):
        return value == 0
    return abs(float(value)) <= tol * max(float(scale), 1.0)


def square_sum(values: Iterable[Scalar]) -> Scalar:
    return sum((v * v for v in values), 0)
