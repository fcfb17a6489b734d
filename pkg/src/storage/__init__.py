"""Storage module."""

from .files import (
    allocation_from_result,
    instance_to_file,
    load_instance_file,
    load_result_file,
    result_to_file,
    save_instance_file,
    save_result_file,
)

__all__ = [
    "allocation_from_result",
    "instance_to_file",
    "load_instance_file",
    "load_result_file",
    "result_to_file",
    "save_instance_file",
    "save_result_file",
]
