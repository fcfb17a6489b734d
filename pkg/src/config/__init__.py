"""Configuration module."""

from .settings import Settings, get_settings, reset_settings
from .presets import InstancePreset, PRESETS, get_preset_by_id, get_all_presets, preset_instance

__all__ = [
    "Settings",
    "get_settings",
    "reset_settings",
    "InstancePreset",
    "PRESETS",
    "get_preset_by_id",
    "get_all_presets",
    "preset_instance",
]
