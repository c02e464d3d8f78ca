"""Exhaustive comparison of the bounded search solver against the oracle on small polyominoes."""

from collections.abc import Iterator, Sequence
import logging

from pandas import DataFrame
from tqdm.auto import tqdm

import partition_kit as pk
from partition_kit.config import PartitionConfig, load_config
from partition_kit.fpt import SearchStats
from partition_kit.grid import Cell, Selection
from partition_kit.tools import default_arg

__all__ = [
    "enumerate_fixed",
    "find_negative",
    "normalize",
    "sweep",
]

logger = logging.getLogger(__name__)


def normalize(cells: Selection) -> Selection:
    """Translate cells so the minimum coordinates are zero."""
    x_min = min(cell.x for cell in cells)
    y_min = min(cell.y for cell in cells)
    return frozenset(Cell(x - x_min, y - y_min) for x, y in cells)


def _boundary(cells: Selection) -> set[Cell]:
    boundary = set()
    for x, y in cells:
        for neighbor in (Cell(x + 1, y), Cell(x - 1, y), Cell(x, y + 1), Cell(x, y - 1)):
            if neighbor not in cells:
                boundary.add(neighbor)
    return boundary


def enumerate_fixed(max_cells: int) -> Iterator[Selection]:
    """Yield every polyomino up to translation, by increasing size then sorted cells."""
    current = {frozenset((Cell(0, 0),))}

    for size in range(1, max_cells + 1):
        yield from sorted(current, key=sorted)

        if size == max_cells:
            break

        grown = set()
        for shape in current:
            for cell in _boundary(shape):
                grown.add(normalize(shape | {cell}))
        current = grown


def sweep(
    max_cells: int | None = None,
    ks: Sequence[int] | None = None,
    config: PartitionConfig | None = None,
) -> DataFrame:
    """Solve every polyomino for each budget and record agreement with the oracle."""
    # Defaults
    max_cells = default_arg(max_cells, 8)
    ks = default_arg(ks, (1, 2, 3, 4))
    config = default_arg(config, default_factory=load_config)

    shapes = list(enumerate_fixed(max_cells))

    rows = []
    for shape in tqdm(shapes, desc="polyominoes"):
        assembly = pk.grid.build_assembly(shape, config)
        for k in ks:
            stats = SearchStats()
            selection = pk.fpt.solve(assembly, k, stats, config)
            expected = pk.oracle.exists_partition_bruteforce(assembly, k, config)
            valid = selection is None or pk.grid.validate_partition(assembly, selection).valid
            rows.append(
                {
                    "cells": len(shape),
                    "shape": tuple(sorted(shape)),
                    "k": k,
                    "solver": selection is not None,
                    "oracle": expected,
                    "valid": valid,
                    "nodes": stats.nodes,
                    "seeds": stats.seeds,
                    "max_seed_nodes": stats.max_seed_nodes,
                    "within_bound": stats.max_seed_nodes <= 2**k,
                }
            )

    data = DataFrame(rows)
    data["agree"] = data["solver"] == data["oracle"]

    mismatches = int((~data["agree"]).sum())
    if mismatches:
        logger.warning(f"{mismatches} solver/oracle mismatches over {len(shapes)} shapes")

    return data


def find_negative(
    max_cells: int,
    min_cells: int | None = None,
    config: PartitionConfig | None = None,
) -> Selection | None:
    """Smallest polyomino with no connected partition in the +y direction."""
    # Defaults
    min_cells = default_arg(min_cells, 2)
    config = default_arg(config, default_factory=load_config)

    for shape in enumerate_fixed(max_cells):
        if len(shape) < min_cells:
            continue
        assembly = pk.grid.build_assembly(shape, config)
        if not pk.oracle.exists_partition_bruteforce(assembly, config=config):
            return shape

    return None
