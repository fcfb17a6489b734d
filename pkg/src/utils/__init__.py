"""Utility functions module."""

from .logger import setup_logger, get_logger, logger
from .helpers import (
    parse_rational,
    format_rational,
    parse_rational_list,
    parse_int_range,
    parse_owner_list,
    format_goods,
)

__all__ = [
    "setup_logger",
    "get_logger",
    "logger",
    "parse_rational",
    "format_rational",
    "parse_rational_list",
    "parse_int_range",
    "parse_owner_list",
    "format_goods",
]
