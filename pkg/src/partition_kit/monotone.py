"""Linear time partitioning of horizontally monotone assemblies."""

from collections import deque
from collections.abc import Iterator
from enum import Enum
import logging

import networkx as nx
import numpy as np

import partition_kit as pk
from partition_kit.config import PartitionConfig
from partition_kit.grid import Cell, GridAssembly, Selection

__all__ = [
    "Monotonicity",
    "generate",
    "is_horizontally_monotone",
    "monotone_partition",
    "partition",
]

logger = logging.getLogger(__name__)


class Monotonicity(str, Enum):
    """Which horizontal monotonicity conditions an assembly satisfies."""

    CONDITION_1 = "condition-1"
    CONDITION_2 = "condition-2"
    BOTH = "both"
    NEITHER = "neither"


def _reaches_column(assembly: GridAssembly, step: int) -> bool:
    """True if every cell reaches the extreme column in direction step without moving against it."""
    target = max(assembly.columns) if step > 0 else min(assembly.columns)

    # Walk edges backwards from the target column
    seen = {Cell(target, y) for y in assembly.columns[target]}
    queue = deque(seen)
    while queue:
        cell = queue.popleft()
        for source in (Cell(cell.x - step, cell.y), Cell(cell.x, cell.y - 1), Cell(cell.x, cell.y + 1)):
            if source in assembly.cells and source not in seen:
                seen.add(source)
                queue.append(source)

    return len(seen) == len(assembly.cells)


def is_horizontally_monotone(assembly: GridAssembly) -> Monotonicity:
    """Classify assembly by its horizontal monotonicity conditions."""
    rightward = _reaches_column(assembly, 1)
    leftward = _reaches_column(assembly, -1)

    if rightward and leftward:
        return Monotonicity.BOTH
    if rightward:
        return Monotonicity.CONDITION_1
    if leftward:
        return Monotonicity.CONDITION_2
    return Monotonicity.NEITHER


def _split(assembly: GridAssembly, end: Cell, step: int) -> Selection:
    """Cut assembly at a column end and return the part that moves up.

    end is the top of its column when step is 1 and the bottom when step is -1.
    The part holding the inner neighbor of end stays on the side of its column.
    """
    inner = Cell(end.x, end.y - step)

    # A leaf end leaves the rest connected
    if inner not in assembly.cells or assembly.graph.degree[end] == 1:
        return frozenset((end,)) if step > 0 else assembly.cells - {end}

    remainder = nx.restricted_view(assembly.graph, [end], [])
    held = frozenset(nx.node_connected_component(remainder, inner))
    if len(held) == len(assembly.cells) - 1:
        return frozenset((end,)) if step > 0 else held

    return assembly.cells - held if step > 0 else held


def _candidates(assembly: GridAssembly) -> Iterator[Selection]:
    # Leftmost column first, then the remaining columns left to right
    for x in sorted(assembly.columns):
        column = assembly.columns[x]
        yield _split(assembly, Cell(x, column[-1]), 1)
        yield _split(assembly, Cell(x, column[0]), -1)


def monotone_partition(assembly: GridAssembly) -> Selection:
    """Split off the top cell of the leftmost column, with whatever hangs on it.

    The split is validated. When the leftmost column has several runs the split
    at its top can collide, and the bottom of the column or a later column is
    tried instead. The exact solver is the last resort.
    """
    # Validate
    if not assembly.connected or len(assembly.cells) < 2:
        raise ValueError("Monotone partition requires a connected assembly with at least 2 cells")
    if is_horizontally_monotone(assembly) not in (Monotonicity.CONDITION_1, Monotonicity.BOTH):
        raise ValueError("Monotone partition requires every cell to reach the rightmost column")

    for attempt, selection in enumerate(_candidates(assembly)):
        verdict = pk.grid.validate_partition(assembly, selection)
        if verdict.valid:
            if attempt > 0:
                logger.debug(f"Monotone split accepted after {attempt} rejected candidates")
            return selection
        logger.debug(f"Rejected monotone split of {len(selection)} cells: {verdict.reason}")

    logger.warning(f"No column end split is valid for {len(assembly.cells)} cells, falling back to the exact solver")
    result = pk.fpt.solve_any(assembly)
    if result is None:
        raise ValueError("Assembly has no connected partition")

    return result.selection


def partition(assembly: GridAssembly, config: PartitionConfig | None = None) -> Selection:
    """Partition a horizontally monotone assembly, reflecting it when only condition 2 holds."""
    monotonicity = is_horizontally_monotone(assembly)

    if monotonicity is Monotonicity.NEITHER:
        raise ValueError("Assembly is not horizontally monotone")

    if monotonicity is Monotonicity.CONDITION_2:
        mirrored = pk.grid.mirror_horizontal(assembly, config)
        return frozenset(Cell(-x, y) for x, y in monotone_partition(mirrored))

    return monotone_partition(assembly)


def generate(n_cells: int, rng: np.random.Generator, config: PartitionConfig | None = None) -> GridAssembly:
    """Generate a connected assembly satisfying condition 1 by construction.

    Columns are grown leftwards from the rightmost one. Every vertical run in a
    new column contains a cell whose right neighbor is already placed, so each
    cell can climb or drop to that cell and step right.
    """
    # Validate
    if n_cells < 1:
        raise ValueError(f"Invalid n_cells={n_cells}: expected a positive integer")

    cells: set[Cell] = set()
    column: set[int] = set()

    def grow(x: int, anchor: int, length: int) -> None:
        # Extend outward from the anchor so a truncated run still contains it
        lo, hi = anchor, anchor
        cells.add(Cell(x, anchor))
        column.add(anchor)
        while hi - lo + 1 < length and len(cells) < n_cells:
            if rng.random() < 0.5:
                hi += 1
                y = hi
            else:
                lo -= 1
                y = lo
            cells.add(Cell(x, y))
            column.add(y)

    # Spine
    x = 0
    grow(x, 0, int(rng.integers(1, 6)))
    previous = sorted(column)

    while len(cells) < n_cells:
        x -= 1
        column = set()
        for _ in range(int(rng.integers(1, 4))):
            if len(cells) >= n_cells:
                break
            anchor = previous[int(rng.integers(len(previous)))]
            grow(x, anchor, int(rng.integers(1, 8)))
        previous = sorted(column)

    return pk.grid.build_assembly(cells, config)
