"""
Utility helper functions.
"""

import re
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

_RATIONAL_PATTERN = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")

RationalLike = Union[Fraction, int, str]


def parse_rational(value: RationalLike) -> Fraction:
    """
    Parse an exact rational from an integer, a Fraction or a "num/den" string.

    Floats are rejected: they cannot carry an exact value through JSON.

    Args:
        value: Value to parse

    Returns:
        Reduced Fraction

    Raises:
        ValueError: If the value is not an exact rational
    """
    if isinstance(value, bool):
        raise ValueError(f"Not a rational: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        match = _RATIONAL_PATTERN.match(value)
        if not match:
            raise ValueError(f"Not a rational string: {value!r}")
        numerator, denominator = match.groups()
        if denominator is not None and int(denominator) == 0:
            raise ValueError(f"Zero denominator: {value!r}")
        return Fraction(int(numerator), int(denominator) if denominator else 1)
    raise ValueError(f"Not a rational: {value!r}")


def format_rational(value: Fraction) -> str:
    """
    Format a rational as "5" or "1/3".

    Args:
        value: Rational to format

    Returns:
        Canonical string form
    """
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def parse_rational_list(text: str) -> list[Fraction]:
    """
    Parse a comma-separated list such as "2,3,5,7/2".

    Args:
        text: Comma-separated rationals

    Returns:
        List of Fractions in input order
    """
    return [parse_rational(part) for part in text.split(",") if part.strip()]


def parse_int_range(text: str) -> tuple[int, int]:
    """
    Parse an inclusive integer range "lo-hi" (or a single integer).

    Args:
        text: Range string

    Returns:
        (lo, hi) tuple with lo <= hi

    Raises:
        ValueError: If the range is malformed or empty
    """
    parts = text.split("-")
    if len(parts) == 1:
        low = high = int(parts[0])
    elif len(parts) == 2:
        low, high = int(parts[0]), int(parts[1])
    else:
        raise ValueError(f"Not a range: {text!r}")
    if low > high:
        raise ValueError(f"Empty range: {text!r}")
    return low, high


def parse_owner_list(text: str) -> tuple[int, ...]:
    """
    Parse an owner vector "0,0,0,1,1" (agent index per good).

    Args:
        text: Comma-separated agent indices

    Returns:
        Tuple of agent indices
    """
    return tuple(int(part) for part in text.split(",") if part.strip())


def format_goods(goods: Iterable[int], labels: Optional[Sequence[str]] = None) -> str:
    """Format a bundle as "{e1, e3}" for log lines."""
    names = [labels[e] if labels else str(e) for e in sorted(goods)]
    return "{" + ", ".join(names) + "}"
