"""Brute force connected partitions."""

from collections.abc import Iterator
from itertools import product
import logging

import partition_kit as pk
from partition_kit.config import PartitionConfig, load_config
from partition_kit.grid import Cell, GridAssembly, Selection
from partition_kit.tools import default_arg, trace

__all__ = [
    "CapExceededError",
    "enumerate_valid_partitions",
    "exists_partition_bruteforce",
]

logger = logging.getLogger(__name__)


class CapExceededError(ValueError):
    """Instance is too large for exhaustive search."""


def _check_cap(assembly: GridAssembly, config: PartitionConfig) -> None:
    if len(assembly.cells) > config.oracle_cap:
        raise CapExceededError(
            f"Assembly has {len(assembly.cells)} cells, exceeding the oracle cap of {config.oracle_cap}"
        )


def _shadow_closed_sets(assembly: GridAssembly, k_max: int | None) -> Iterator[Selection]:
    """Yield every non-empty shadow-closed set spanning contiguous columns."""
    xs = list(assembly.columns)

    for start in range(len(xs)):
        for stop in range(start, len(xs)):
            span = xs[start : stop + 1]
            if span[-1] - span[0] != stop - start:
                break

            # Each column keeps the cells at or above its cut
            columns = [assembly.columns[x] for x in span]
            for cuts in product(*(range(len(ys)) for ys in columns)):
                size = sum(len(ys) - cut for ys, cut in zip(columns, cuts, strict=True))
                if k_max is not None and size > k_max:
                    continue
                yield frozenset(
                    Cell(x, y) for x, ys, cut in zip(span, columns, cuts, strict=True) for y in ys[cut:]
                )


def _valid_partitions(assembly: GridAssembly, k_max: int | None) -> Iterator[Selection]:
    for selection in _shadow_closed_sets(assembly, k_max):
        if selection == assembly.cells:
            continue
        if not pk.grid.is_connected(assembly, selection):
            continue
        if not pk.grid.is_connected(assembly, assembly.cells - selection):
            continue
        yield selection


@trace(logger)
def enumerate_valid_partitions(
    assembly: GridAssembly,
    k_max: int | None = None,
    config: PartitionConfig | None = None,
) -> list[Selection]:
    """List every connected partition in the +y direction, smallest first."""
    # Defaults
    config = default_arg(config, default_factory=load_config)

    _check_cap(assembly, config)

    return sorted(_valid_partitions(assembly, k_max), key=lambda s: (len(s), sorted(s)))


def exists_partition_bruteforce(
    assembly: GridAssembly,
    k_max: int | None = None,
    config: PartitionConfig | None = None,
) -> bool:
    """True if some connected partition in the +y direction exists."""
    # Defaults
    config = default_arg(config, default_factory=load_config)

    _check_cap(assembly, config)

    return next(_valid_partitions(assembly, k_max), None) is not None
