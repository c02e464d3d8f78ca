"""Shadows, boundary tours and frontiers."""

from bisect import bisect_left
from collections.abc import Iterable, Mapping, Sequence
from typing import NamedTuple

from partition_kit.grid import Cell, GridAssembly, Selection

__all__ = [
    "BoundaryTour",
    "FrontierMember",
    "Occurrence",
    "ShadowProfile",
    "boundary_tour",
    "frontier_members",
    "has_contiguous_columns",
    "in_shadow",
    "shadow",
    "shadow_restricted",
]


class ShadowProfile(NamedTuple):
    """Cells at or above the floor of each occupied column."""

    x_min: int

    x_max: int

    floor: Mapping[int, int]


class Occurrence(NamedTuple):
    """A visit of a cell along a boundary tour.

    Cells on a downward vertical chain are visited twice: once on the descending
    side (side=-1) and once on the ascending side (side=+1). Every other visit
    has side=0.
    """

    cell: Cell

    side: int

    @property
    def position(self) -> tuple[int, int]:
        """Planar drawing coordinates separating the two sides of a chain."""
        return 4 * self.cell.x + self.side, 4 * self.cell.y


class BoundaryTour(NamedTuple):
    """Finite portion of the unbounded face boundary of a shadow.

    The walk starts at the top of the left ray, descends, runs along the bottom
    from left to right and climbs the right ray. Both rays continue upward past
    the first and last occurrence.
    """

    occurrences: tuple[Occurrence, ...]

    single_ray: bool

    degenerate: bool


class FrontierMember(NamedTuple):
    """An occurrence on the boundary and whether its cell belongs to the source set."""

    occurrence: Occurrence

    member: bool


# ------------------------------------------------------------------------------
# Shadows
# ------------------------------------------------------------------------------


def has_contiguous_columns(cells: Iterable[Cell]) -> bool:
    """True if cells span a contiguous sequence of columns."""
    xs = {cell.x for cell in cells}
    return bool(xs) and max(xs) - min(xs) + 1 == len(xs)


def shadow(cells: Iterable[Cell]) -> ShadowProfile:
    """Compute the per-column floor of a set of cells."""
    floor: dict[int, int] = {}
    for cell in cells:
        floor[cell.x] = min(cell.y, floor.get(cell.x, cell.y))

    if not floor:
        raise ValueError("Shadow of an empty set is undefined")

    return ShadowProfile(x_min=min(floor), x_max=max(floor), floor=dict(sorted(floor.items())))


def in_shadow(profile: ShadowProfile, cell: Cell) -> bool:
    """Check shadow membership."""
    floor = profile.floor.get(cell.x)
    return floor is not None and cell.y >= floor


def shadow_restricted(cells: Iterable[Cell], assembly: GridAssembly) -> Selection:
    """Cells of the assembly inside the shadow of cells."""
    profile = shadow(cells)

    selected = []
    for x, floor in profile.floor.items():
        ys = assembly.columns.get(x, ())
        selected.extend(Cell(x, y) for y in ys[bisect_left(ys, floor) :])

    return frozenset(selected)


# ------------------------------------------------------------------------------
# Boundary
# ------------------------------------------------------------------------------


def boundary_tour(cells: Iterable[Cell]) -> BoundaryTour:
    """Walk the unbounded face of the shadow's adjacency graph."""
    members = frozenset(cells)

    # Validate
    if not has_contiguous_columns(members):
        raise ValueError("Boundary tour requires a non-empty set spanning contiguous columns")

    profile = shadow(members)
    floor = profile.floor

    # Rays start at the topmost member of the outer columns
    left_top = max(cell.y for cell in members if cell.x == profile.x_min)
    right_top = max(cell.y for cell in members if cell.x == profile.x_max)

    occurrences: list[Occurrence] = []
    for x in range(profile.x_min, profile.x_max + 1):
        f = floor[x]
        entry = left_top if x == profile.x_min else max(floor[x - 1], f)
        exit_ = right_top if x == profile.x_max else max(f, floor[x + 1])

        # Descend
        for y in range(entry, f, -1):
            occurrences.append(Occurrence(Cell(x, y), -1 if y <= exit_ else 0))

        # Bottom
        occurrences.append(Occurrence(Cell(x, f), 0))

        # Ascend
        for y in range(f + 1, exit_ + 1):
            occurrences.append(Occurrence(Cell(x, y), 1 if y <= entry else 0))

    single_ray = profile.x_min == profile.x_max
    degenerate = single_ray or any(o.side != 0 for o in occurrences)

    return BoundaryTour(occurrences=tuple(occurrences), single_ray=single_ray, degenerate=degenerate)


def frontier_members(cells: Iterable[Cell], tour: BoundaryTour | None = None) -> Sequence[FrontierMember]:
    """Occurrences along the boundary tagged with membership in cells."""
    members = frozenset(cells)
    if tour is None:
        tour = boundary_tour(members)

    return tuple(FrontierMember(o, o.cell in members) for o in tour.occurrences)
