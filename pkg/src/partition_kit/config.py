"""Partition kit configuration."""

from enum import Enum
import os
from typing import NamedTuple

__all__ = [
    "COORDINATE_LIMIT",
    "Direction",
    "PartitionConfig",
    "load_config",
]

# ------------------------------------------------------------------------------
# Constants
# ------------------------------------------------------------------------------

COORDINATE_LIMIT = 2**31 - 1

_env_overrides = {
    "PARTITION_ORACLE_CAP": "oracle_cap",
    "PARTITION_WORKERS": "workers",
}


# ------------------------------------------------------------------------------
# Config
# ------------------------------------------------------------------------------


class Direction(str, Enum):
    """Translation direction."""

    UP = "+y"
    DOWN = "-y"


class PartitionConfig(NamedTuple):
    """Solver and rendering settings."""

    coordinate_limit: int

    oracle_cap: int

    sat_cap: int

    workers: int

    cell_size: int

    partition_gap: int


def load_config(**kwargs) -> PartitionConfig:
    """Load config from defaults, environment and overrides."""
    # Defaults
    data = {
        "coordinate_limit": COORDINATE_LIMIT,
        "oracle_cap": 22,
        "sat_cap": 20,
        "workers": 1,
        "cell_size": 20,
        "partition_gap": 2,
    }

    # Override with environment
    for variable, field in _env_overrides.items():
        value = os.environ.get(variable)
        if value is None or value.strip() == "":
            continue
        try:
            data[field] = int(value)
        except ValueError:
            raise ValueError(f"Invalid {variable}={value!r}: expected an integer") from None

    # Override with kwargs
    data |= kwargs

    # Validate
    for field, value in data.items():
        if field not in PartitionConfig._fields:
            raise ValueError(f"Unknown config field {field!r}")
        if not isinstance(value, int) or value < 1:
            raise ValueError(f"Invalid {field}={value!r}: expected a positive integer")

    return PartitionConfig(**data)
