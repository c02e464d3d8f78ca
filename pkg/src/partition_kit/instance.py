"""Instance documents and result serialization."""

from collections.abc import Iterable, Mapping
from enum import Enum
import json
import logging
from typing import NamedTuple

import partition_kit as pk
from partition_kit.config import Direction, PartitionConfig
from partition_kit.fpt import SearchStats, SolveResult
from partition_kit.gadgets import GadgetLayout
from partition_kit.grid import Cell, GridAssembly

__all__ = [
    "InstanceDocument",
    "InstanceFormat",
    "emit_result",
    "format_grid",
    "format_instance",
    "layout_document",
    "parse_instance",
]

logger = logging.getLogger(__name__)


class InstanceFormat(str, Enum):
    """Text formats for assemblies."""

    CELLS = "cells"
    GRID = "grid"


class InstanceDocument(NamedTuple):
    """An assembly with optional cell labels and metadata."""

    assembly: GridAssembly

    labels: Mapping[Cell, str]

    metadata: Mapping[str, str]

    format: InstanceFormat


_grid_symbols = frozenset(".#")


def _detect(lines: list[str]) -> InstanceFormat:
    if lines and all(set(line) <= _grid_symbols for line in lines):
        return InstanceFormat.GRID
    return InstanceFormat.CELLS


def parse_instance(text: str, config: PartitionConfig | None = None) -> InstanceDocument:
    """Parse a cell list or an ASCII grid, detecting which one text holds."""
    lines = [line.rstrip() for line in text.splitlines()]
    format_ = _detect([line for line in lines if line])

    cells: list[Cell] = []
    labels: dict[Cell, str] = {}
    metadata: dict[str, str] = {}

    if format_ is InstanceFormat.GRID:
        rows = [line for line in lines if line]
        for i, row in enumerate(rows):
            y = len(rows) - 1 - i
            cells.extend(Cell(x, y) for x, symbol in enumerate(row) if symbol == "#")
    else:
        for number, raw in enumerate(lines, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            fields = line.split()
            try:
                match fields[0]:
                    case "m":
                        if len(fields) < 3:
                            raise ValueError("expected 'm <key> <value>'")
                        metadata[fields[1]] = " ".join(fields[2:])
                    case "l":
                        if len(fields) != 4:
                            raise ValueError("expected 'l <x> <y> <role>'")
                        labels[Cell(int(fields[1]), int(fields[2]))] = fields[3]
                    case _:
                        if len(fields) != 2:
                            raise ValueError(f"expected 'x y', got {line!r}")
                        cells.append(Cell(int(fields[0]), int(fields[1])))
            except ValueError as e:
                raise ValueError(f"Line {number}: {e}") from e

    # Validate
    if not cells:
        raise ValueError("Empty instance")

    unique = frozenset(cells)
    if len(unique) != len(cells):
        logger.warning(f"Ignoring {len(cells) - len(unique)} duplicate cells")

    stray = sorted(set(labels) - unique)
    if stray:
        raise ValueError(f"Labels reference cells outside the instance: {stray[:5]}")

    return InstanceDocument(
        assembly=pk.grid.build_assembly(unique, config),
        labels=labels,
        metadata=metadata,
        format=format_,
    )


def format_instance(document: InstanceDocument) -> str:
    """Render document in the cell list format."""
    lines = [f"m {key} {value}" for key, value in document.metadata.items()]
    lines.extend(f"{x} {y}" for x, y in sorted(document.assembly.cells))
    lines.extend(f"l {x} {y} {document.labels[Cell(x, y)]}" for x, y in sorted(document.labels))

    return "\n".join(lines) + "\n"


def format_grid(assembly: GridAssembly) -> str:
    """Render assembly as an ASCII grid, topmost row first."""
    xs = [cell.x for cell in assembly.cells]
    ys = [cell.y for cell in assembly.cells]

    rows = []
    for y in range(max(ys), min(ys) - 1, -1):
        rows.append("".join("#" if Cell(x, y) in assembly.cells else "." for x in range(min(xs), max(xs) + 1)))

    return "\n".join(rows) + "\n"


def layout_document(layout: GadgetLayout, name: str | None = None) -> InstanceDocument:
    """Wrap a compiled layout as a labelled document."""
    metadata = {} if name is None else {"name": name}
    metadata |= {
        "variables": str(len(layout.formula.variables)),
        "clauses": str(len(layout.formula.clauses)),
    }

    return InstanceDocument(
        assembly=layout.assembly,
        labels={cell: role.label for cell, role in layout.labels.items()},
        metadata=metadata,
        format=InstanceFormat.CELLS,
    )


def emit_result(
    result: SolveResult | None,
    stats: SearchStats,
    direction: Direction = Direction.UP,
    timing: bool = True,
) -> str:
    """Serialize a solver outcome as JSON with a fixed field order.

    Without timing, elapsed_ms is reported as 0 so repeated runs are byte identical.
    """
    selection: Iterable[Cell] = () if result is None else result.selection

    document = {
        "exists": result is not None,
        "direction": (direction if result is None else result.direction).value,
        "subassembly": [[x, y] for x, y in sorted(selection)],
        "k": None if result is None else result.k,
        "stats": {
            "nodes": stats.nodes,
            "seeds": stats.seeds,
            "elapsed_ms": round(stats.elapsed_ms, 3) if timing else 0,
        },
    }

    return json.dumps(document, separators=(",", ":"))
