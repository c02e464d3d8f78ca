"""SVG rendering of assemblies, layouts and partitions."""

from collections.abc import Iterable, Mapping

from partition_kit.config import PartitionConfig, load_config
from partition_kit.gadgets import GadgetLayout, Role, RoleKind
from partition_kit.grid import Cell, GridAssembly
from partition_kit.tools import default_arg

__all__ = [
    "PALETTE",
    "render_svg",
]

PALETTE = {
    None: "#9ecae1",
    RoleKind.BLOCKER_TOP: "#525252",
    RoleKind.BLOCKER_BOTTOM: "#969696",
    RoleKind.A: "#e6550d",
    RoleKind.B: "#fdae6b",
    RoleKind.C: "#31a354",
    RoleKind.D: "#a1d99b",
    RoleKind.VARIABLE: "#3182bd",
    RoleKind.CONNECTOR: "#006d2c",
}

_outline = "#d62728"


def render_svg(
    source: GridAssembly | GadgetLayout,
    selection: Iterable[Cell] | None = None,
    config: PartitionConfig | None = None,
    labels: Mapping[Cell, Role] | None = None,
) -> str:
    """Draw one square per cell, lifting selected cells by the partition gap.

    Cells are filled by role when source is a layout or labels are given.
    """
    # Defaults
    config = default_arg(config, default_factory=load_config)

    if isinstance(source, GadgetLayout):
        assembly = source.assembly
        labels = source.labels
    else:
        assembly = source
        labels = default_arg(labels, {})

    lifted = frozenset(selection) if selection is not None else frozenset()
    size = config.cell_size
    gap = config.partition_gap if lifted else 0

    xs = [cell.x for cell in assembly.cells]
    ys = [cell.y for cell in assembly.cells]
    x_min, y_max = min(xs), max(ys)
    width = (max(xs) - x_min + 1) * size
    height = (y_max - min(ys) + 1 + gap) * size

    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">',
    ]

    for cell in sorted(assembly.cells):
        role = labels.get(cell)
        fill = PALETTE[role.kind if role is not None else None]
        px = (cell.x - x_min) * size
        py = (y_max - cell.y + gap) * size
        if cell in lifted:
            py -= gap * size
            stroke = f'stroke="{_outline}" stroke-width="2"'
        else:
            stroke = 'stroke="#ffffff" stroke-width="1"'
        title = f"<title>{role.label}</title>" if role is not None else ""
        lines.append(f'  <rect x="{px}" y="{py}" width="{size}" height="{size}" fill="{fill}" {stroke}>{title}</rect>')

    lines.append("</svg>")

    return "\n".join(lines) + "\n"
