"""Lattice assemblies of unit squares."""

from bisect import bisect_right
from collections.abc import Iterable, Mapping
from enum import Enum
import logging
from typing import NamedTuple

import networkx as nx

from partition_kit.config import PartitionConfig, load_config
from partition_kit.tools import default_arg

__all__ = [
    "Cell",
    "FailureReason",
    "GridAssembly",
    "PartitionVerdict",
    "Selection",
    "blocker_above",
    "build_assembly",
    "can_translate_up",
    "connected_components",
    "is_connected",
    "mirror_horizontal",
    "mirror_vertical",
    "top_cells",
    "validate_partition",
]

logger = logging.getLogger(__name__)


class Cell(NamedTuple):
    """A unit square identified by its integer center."""

    x: int

    y: int


Selection = frozenset[Cell]


class GridAssembly(NamedTuple):
    """A finite set of cells with its adjacency graph."""

    cells: Selection

    columns: Mapping[int, tuple[int, ...]]

    graph: nx.Graph

    connected: bool


class FailureReason(str, Enum):
    """Why a selection is not a connected partition."""

    NOT_PROPER_SUBSET = "not-proper-subset"
    COLLISION = "collision"
    S_DISCONNECTED = "S-disconnected"
    COMPLEMENT_DISCONNECTED = "complement-disconnected"


class PartitionVerdict(NamedTuple):
    """Outcome of validate_partition."""

    valid: bool

    reason: FailureReason | None

    witness: tuple[Cell, ...]


# ------------------------------------------------------------------------------
# Construction
# ------------------------------------------------------------------------------


def build_assembly(cells: Iterable[tuple[int, int]], config: PartitionConfig | None = None) -> GridAssembly:
    """Build assembly with materialized adjacency graph."""
    # Defaults
    config = default_arg(config, default_factory=load_config)

    members = frozenset(Cell(int(x), int(y)) for x, y in cells)

    # Validate
    if not members:
        raise ValueError("Assembly must contain at least one cell")

    limit = config.coordinate_limit
    for cell in members:
        if abs(cell.x) > limit or abs(cell.y) > limit:
            raise ValueError(f"Cell {cell} outside coordinate range ±{limit}")

    # Column index
    columns: dict[int, list[int]] = {}
    for cell in members:
        columns.setdefault(cell.x, []).append(cell.y)

    # Adjacency: each cell links to its right and upper neighbors
    graph = nx.Graph()
    graph.add_nodes_from(members)
    for cell in members:
        for neighbor in (Cell(cell.x + 1, cell.y), Cell(cell.x, cell.y + 1)):
            if neighbor in members:
                graph.add_edge(cell, neighbor)

    connected = nx.is_connected(graph)
    if not connected:
        logger.debug(f"Assembly of {len(members)} cells is disconnected")

    return GridAssembly(
        cells=members,
        columns={x: tuple(sorted(ys)) for x, ys in sorted(columns.items())},
        graph=graph,
        connected=connected,
    )


def mirror_vertical(assembly: GridAssembly, config: PartitionConfig | None = None) -> GridAssembly:
    """Reflect assembly across the x axis."""
    return build_assembly(((x, -y) for x, y in assembly.cells), config)


def mirror_horizontal(assembly: GridAssembly, config: PartitionConfig | None = None) -> GridAssembly:
    """Reflect assembly across the y axis."""
    return build_assembly(((-x, y) for x, y in assembly.cells), config)


# ------------------------------------------------------------------------------
# Queries
# ------------------------------------------------------------------------------


def _check_subset(assembly: GridAssembly, selection: Iterable[Cell]) -> Selection:
    members = frozenset(selection)
    strays = members - assembly.cells
    if strays:
        raise ValueError(f"Cells {sorted(strays)} are not in the assembly")
    return members


def connected_components(assembly: GridAssembly, restrict: Iterable[Cell] | None = None) -> list[Selection]:
    """Split assembly (or restrict) into maximal connected subsets ordered by smallest cell."""
    # Defaults
    members = assembly.cells if restrict is None else _check_subset(assembly, restrict)

    components = [frozenset(c) for c in nx.connected_components(assembly.graph.subgraph(members))]

    return sorted(components, key=min)


def is_connected(assembly: GridAssembly, selection: Iterable[Cell]) -> bool:
    """True if selection is non-empty and connected in the adjacency graph."""
    members = frozenset(selection)
    if not members:
        return False
    return nx.is_connected(assembly.graph.subgraph(members))


def top_cells(assembly: GridAssembly) -> list[Cell]:
    """Topmost cell of every column, left to right."""
    return [Cell(x, ys[-1]) for x, ys in assembly.columns.items()]


def blocker_above(selection: Selection, assembly: GridAssembly) -> tuple[Cell, Cell] | None:
    """Find (blocker, blocked) where blocker is outside selection and above blocked."""
    # Lowest selected cell of each column
    floors: dict[int, int] = {}
    for cell in selection:
        floors[cell.x] = min(cell.y, floors.get(cell.x, cell.y))

    for x, floor in sorted(floors.items()):
        ys = assembly.columns[x]
        for y in ys[bisect_right(ys, floor) :]:
            if Cell(x, y) not in selection:
                return Cell(x, y), Cell(x, floor)

    return None


def can_translate_up(selection: Iterable[Cell], assembly: GridAssembly) -> bool:
    """True if selection moves up without colliding with the rest of the assembly."""
    members = _check_subset(assembly, selection)
    return blocker_above(members, assembly) is None


def validate_partition(assembly: GridAssembly, selection: Iterable[Cell]) -> PartitionVerdict:
    """Check that selection is a connected partition in the +y direction."""
    members = frozenset(selection)

    # Proper subset
    strays = members - assembly.cells
    if not members or strays or members == assembly.cells:
        return PartitionVerdict(False, FailureReason.NOT_PROPER_SUBSET, tuple(sorted(strays)))

    # Collision
    blocked = blocker_above(members, assembly)
    if blocked is not None:
        return PartitionVerdict(False, FailureReason.COLLISION, blocked)

    # Connectivity on both sides
    for reason, side in (
        (FailureReason.S_DISCONNECTED, members),
        (FailureReason.COMPLEMENT_DISCONNECTED, assembly.cells - members),
    ):
        components = connected_components(assembly, side)
        if len(components) > 1:
            return PartitionVerdict(False, reason, tuple(min(c) for c in components))

    return PartitionVerdict(True, None, ())
