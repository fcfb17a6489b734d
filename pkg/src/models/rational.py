"""
Exact rational field type for pydantic models.

Values are held as ``fractions.Fraction`` in Python and travel through JSON
as strings ("5", "1/3"), never as floats.
"""

from fractions import Fraction
from typing import Annotated, Any

from pydantic import PlainSerializer, PlainValidator

from ..utils.helpers import format_rational, parse_rational


def _to_fraction(value: Any) -> Fraction:
    return parse_rational(value)


Rational = Annotated[
    Fraction,
    PlainValidator(_to_fraction),
    PlainSerializer(format_rational, return_type=str, when_used="json"),
]
