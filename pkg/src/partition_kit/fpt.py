"""Bounded search tree solver for connected partitions."""

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from itertools import pairwise
import logging
from math import atan2
from typing import NamedTuple

import networkx as nx

import partition_kit as pk
from partition_kit.config import Direction, PartitionConfig, load_config
from partition_kit.grid import Cell, GridAssembly, Selection
from partition_kit.shadow import Occurrence
from partition_kit.tools import Stopwatch, default_arg, trace

__all__ = [
    "ConnectCandidates",
    "PartialSolution",
    "SearchStats",
    "SolveResult",
    "augment",
    "connect",
    "solve",
    "solve_any",
    "solve_in_direction",
    "solve_with_seed",
]

logger = logging.getLogger(__name__)


@dataclass
class SearchStats:
    """Search tree counters."""

    nodes: int = 0

    max_depth: int = 0

    rule1_branches: int = 0

    rule2_branches: int = 0

    seeds: int = 0

    max_seed_nodes: int = 0

    elapsed_ms: float = 0.0

    def merge(self, other: "SearchStats") -> None:
        """Accumulate counters from another search."""
        self.nodes += other.nodes
        self.max_depth = max(self.max_depth, other.max_depth)
        self.rule1_branches += other.rule1_branches
        self.rule2_branches += other.rule2_branches
        self.seeds += other.seeds
        self.max_seed_nodes = max(self.max_seed_nodes, other.max_seed_nodes)


class PartialSolution(NamedTuple):
    """A search node."""

    selection: Selection

    budget: int

    depth: int


class ConnectCandidates(NamedTuple):
    """Supersets of a disconnected shadow-closed set, one of which every valid partition contains."""

    first: Selection | None

    second: Selection | None


class SolveResult(NamedTuple):
    """A partition found by the solver."""

    selection: Selection

    direction: Direction

    k: int

    stats: SearchStats


# ------------------------------------------------------------------------------
# Augment
# ------------------------------------------------------------------------------


def augment(
    assembly: GridAssembly,
    selection: Iterable[Cell],
    k: int,
    stats: SearchStats,
    depth: int = 0,
) -> Selection | None:
    """Grow a partial solution into a valid partition of size at most k."""
    node = PartialSolution(selection=frozenset(selection), budget=k, depth=depth)

    # Prune
    if not node.selection or len(node.selection) > node.budget:
        return None

    stats.nodes += 1
    stats.max_depth = max(stats.max_depth, node.depth)

    # Sanity check
    assert pk.shadow.has_contiguous_columns(node.selection), f"Partial solution spans a column gap: {node.selection}"

    # Reduce
    closed = pk.shadow.shadow_restricted(node.selection, assembly)
    if len(closed) > node.budget or closed == assembly.cells:
        return None

    # Branch over the components left behind
    rest = pk.grid.connected_components(assembly, assembly.cells - closed)
    if len(rest) > 1:
        stats.rule1_branches += 1

        # Exclude the largest component first
        for excluded in sorted(rest, key=lambda c: (-len(c), min(c))):
            result = augment(assembly, assembly.cells - excluded, k, stats, depth + 1)
            if result is not None:
                assert closed <= result
                assert sum(component <= result for component in rest) == len(rest) - 1
                return result

        return None

    if pk.grid.is_connected(assembly, closed):
        return closed

    # Branch over connecting paths
    stats.rule2_branches += 1
    candidates = connect(assembly, closed)
    for candidate in candidates:
        if candidate is None:
            continue
        result = augment(assembly, candidate, k, stats, depth + 1)
        if result is not None:
            assert closed <= result
            return result

    return None


# ------------------------------------------------------------------------------
# Connect
# ------------------------------------------------------------------------------


def connect(assembly: GridAssembly, selection: Iterable[Cell]) -> ConnectCandidates:
    """Find supersets of a disconnected shadow-closed set with fewer components."""
    closed = frozenset(selection)
    rest = assembly.cells - closed

    components = pk.grid.connected_components(assembly, closed)

    # Sanity check
    assert len(components) > 1, "Connect requires a disconnected selection"
    assert pk.grid.is_connected(assembly, rest), "Connect requires a connected complement"
    assert pk.shadow.shadow_restricted(closed, assembly) == closed, "Connect requires a shadow-closed selection"

    label = {cell: j for j, component in enumerate(components) for cell in component}

    boundary = pk.shadow.boundary_tour(closed)
    tour = boundary.occurrences
    position = {o: p for p, o in enumerate(tour)}

    # Frontier squares s_1..s_m in tour order
    frontier = [p for p, m in enumerate(pk.shadow.frontier_members(closed, boundary)) if m.member]
    rank = {tour[p]: t for t, p in enumerate(frontier)}
    labels = [label[tour[p].cell] for p in frontier]
    assert frontier[0] == 0 and frontier[-1] == len(tour) - 1

    first: dict[int, int] = {}
    last: dict[int, int] = {}
    for t, j in enumerate(labels):
        first.setdefault(j, t)
        last[j] = t

    assert len(first) == len(components), "Every component must reach the frontier"
    _check_nested(labels)

    # Component appearing last along the tour
    i = max(first, key=first.__getitem__)
    lo, hi = first[i], last[i]
    assert all(j == i for j in labels[lo : hi + 1]), "Last component must be contiguous along the tour"
    assert lo > 0

    embedding = _embedding(assembly, closed, rest, tour)

    edges = [(tour[frontier[lo] - 1], tour[frontier[lo]])]
    if hi != max(last.values()):
        edges.append((tour[frontier[hi]], tour[frontier[hi] + 1]))

    for u, v in edges:
        assert u.cell not in assembly.cells or v.cell not in assembly.cells

    faces = [embedding.traverse_face(u, v) for u, v in edges]
    bounded = [_signed_area(face) < 0 for face in faces]

    if len(faces) == 2:
        assert edges[1] not in set(pairwise(faces[0] + faces[0][:1])), "Faces beside e_< and e_> must differ"
        assert any(bounded), "One of the faces beside e_< and e_> must be bounded"

    # Extend along the outer subtour of each bounded face
    extensions: list[Selection | None] = []
    for face, is_bounded in zip(faces, bounded, strict=True):
        extension = None
        if is_bounded:
            subtour = _outer_subtour(face, position, rank)
            if label[subtour[0].cell] == i or label[subtour[-1].cell] == i:
                extension = closed | {o.cell for o in subtour[1:-1]}
        extensions.append(extension)

    lower = extensions[0]
    upper = extensions[1] if len(extensions) > 1 else None

    candidates = ConnectCandidates(first=upper, second=lower)

    # Sanity check
    assert any(c is not None for c in candidates), "Connect must produce a candidate"
    for candidate in candidates:
        if candidate is not None:
            assert closed < candidate
            assert pk.shadow.has_contiguous_columns(candidate)
            assert len(pk.grid.connected_components(assembly, candidate)) < len(components)

    return candidates


def _check_nested(labels: Sequence[int]) -> None:
    """Assert no two components interleave along the tour."""
    stack: list[int] = []
    closed: set[int] = set()
    for j in labels:
        assert j not in closed, f"Frontier components interleave: {labels}"
        if j in stack:
            while stack[-1] != j:
                closed.add(stack.pop())
        else:
            stack.append(j)


def _embedding(
    assembly: GridAssembly,
    closed: Selection,
    rest: Selection,
    tour: Sequence[Occurrence],
) -> nx.PlanarEmbedding:
    """Embed the remaining cells, the frontier squares and the tour between them."""
    on_tour = set(tour)
    neighbors: dict[Occurrence, set[Occurrence]] = {}

    def link(u: Occurrence, v: Occurrence) -> None:
        neighbors.setdefault(u, set()).add(v)
        neighbors.setdefault(v, set()).add(u)

    # Tour
    for u, v in pairwise(tour):
        link(u, v)

    for cell in rest:
        node = Occurrence(cell, 0)
        for neighbor in assembly.graph[cell]:
            if neighbor in rest:
                link(node, Occurrence(neighbor, 0))
                continue

            # Attach to the occurrence on the side facing the cell
            assert neighbor.y >= cell.y, f"{cell} lies above shadow cell {neighbor}"
            side = 0
            if cell.x < neighbor.x and Occurrence(neighbor, -1) in on_tour:
                side = -1
            elif cell.x > neighbor.x and Occurrence(neighbor, 1) in on_tour:
                side = 1
            occurrence = Occurrence(neighbor, side)
            assert occurrence in on_tour, f"{neighbor} is adjacent to {cell} but not on the frontier"
            link(node, occurrence)

    # Clockwise rotation system from drawing positions
    def clockwise(u: Occurrence) -> list[Occurrence]:
        ux, uy = u.position

        def angle(v: Occurrence) -> float:
            vx, vy = v.position
            return atan2(vy - uy, vx - ux)

        return sorted(neighbors[u], key=angle, reverse=True)

    embedding = nx.PlanarEmbedding()
    embedding.set_data({u: clockwise(u) for u in neighbors})

    return embedding


def _signed_area(face: Sequence[Occurrence]) -> int:
    """Twice the signed area enclosed by a face walk."""
    points = [o.position for o in face]
    return sum(x0 * y1 - x1 * y0 for (x0, y0), (x1, y1) in pairwise(points + points[:1]))


def _outer_subtour(
    face: Sequence[Occurrence],
    position: dict[Occurrence, int],
    rank: dict[Occurrence, int],
) -> Sequence[Occurrence]:
    """Split a face walk at its tour edges and pick the subtour spanning the others."""

    def on_tour(u: Occurrence, v: Occurrence) -> bool:
        return u in position and v in position and abs(position[u] - position[v]) == 1

    n = len(face)
    half_edges = [(face[t], face[(t + 1) % n]) for t in range(n)]
    start = next(t for t, h in enumerate(half_edges) if on_tour(*h))

    subtours: list[list[Occurrence]] = []
    current: list[Occurrence] = []
    for t in range(start + 1, start + 1 + n):
        u, v = half_edges[t % n]
        if on_tour(u, v):
            if current:
                subtours.append(current)
                current = []
            continue
        if not current:
            current = [u]
        current.append(v)

    assert subtours, "A bounded face must leave the tour"

    def interval(subtour: Sequence[Occurrence]) -> tuple[int, int]:
        ends = sorted((rank[subtour[0]], rank[subtour[-1]]))
        return ends[0], ends[1]

    outer = min(subtours, key=lambda s: (interval(s)[0], -interval(s)[1]))
    lo, hi = interval(outer)
    assert all(lo <= interval(s)[0] and interval(s)[1] <= hi for s in subtours)

    return outer


# ------------------------------------------------------------------------------
# Solve
# ------------------------------------------------------------------------------


def _check_instance(assembly: GridAssembly, k: int) -> None:
    if not assembly.connected:
        raise ValueError("Solver input must be a connected assembly")
    if k < 1:
        raise ValueError(f"Invalid budget k={k}: expected k >= 1")


def solve_with_seed(
    assembly: GridAssembly,
    seed: tuple[int, int],
    k: int,
    stats: SearchStats | None = None,
) -> Selection | None:
    """Find a valid partition of size at most k containing seed."""
    # Defaults
    stats = default_arg(stats, default_factory=SearchStats)

    # Validate
    _check_instance(assembly, k)
    cell = Cell(*seed)
    if cell not in assembly.cells:
        raise ValueError(f"Seed {cell} is not in the assembly")

    local = SearchStats(seeds=1)
    result = augment(assembly, {cell}, k, local)
    local.max_seed_nodes = local.nodes
    stats.merge(local)

    logger.debug(f"Seed {cell} k={k}: {local.nodes} nodes, hit={result is not None}")

    return result


@trace(logger)
def solve(
    assembly: GridAssembly,
    k: int,
    stats: SearchStats | None = None,
    config: PartitionConfig | None = None,
) -> Selection | None:
    """Find a valid partition of size at most k in the +y direction."""
    # Defaults
    stats = default_arg(stats, default_factory=SearchStats)
    config = default_arg(config, default_factory=load_config)

    _check_instance(assembly, k)

    seeds = pk.grid.top_cells(assembly)

    if config.workers == 1:
        for seed in seeds:
            result = solve_with_seed(assembly, seed, k, stats)
            if result is not None:
                return result
        return None

    # Seeds are dealt round-robin to workers with private counters. Lowest seed index wins.
    def run(offset: int) -> tuple[int, Selection | None, SearchStats]:
        local = SearchStats()
        for index in range(offset, len(seeds), config.workers):
            result = solve_with_seed(assembly, seeds[index], k, local)
            if result is not None:
                return index, result, local
        return len(seeds), None, local

    futures = [pk.tools.executor().submit(run, offset) for offset in range(config.workers)]

    hits = []
    for future in futures:
        index, result, local = future.result()
        stats.merge(local)
        hits.append((index, result))

    return min(hits, key=lambda hit: hit[0])[1]


def solve_in_direction(
    assembly: GridAssembly,
    k: int,
    direction: Direction,
    stats: SearchStats | None = None,
    config: PartitionConfig | None = None,
) -> Selection | None:
    """Find a valid partition of size at most k translating in direction."""
    if direction is Direction.UP:
        return solve(assembly, k, stats, config)

    result = solve(pk.grid.mirror_vertical(assembly, config), k, stats, config)
    if result is None:
        return None

    return frozenset(Cell(x, -y) for x, y in result)


@trace(logger)
def solve_any(
    assembly: GridAssembly,
    stats: SearchStats | None = None,
    config: PartitionConfig | None = None,
) -> SolveResult | None:
    """Sweep k and both vertical directions for the smallest partition."""
    # Defaults
    stats = default_arg(stats, default_factory=SearchStats)
    config = default_arg(config, default_factory=load_config)

    # Validate
    if not assembly.connected:
        raise ValueError("Solver input must be a connected assembly")

    stopwatch = Stopwatch()
    mirrored = pk.grid.mirror_vertical(assembly, config)

    result = None
    for k in range(1, len(assembly.cells) // 2 + 1):
        selection = solve(assembly, k, stats, config)
        if selection is not None:
            result = SolveResult(selection, Direction.UP, k, stats)
            break

        selection = solve(mirrored, k, stats, config)
        if selection is not None:
            result = SolveResult(frozenset(Cell(x, -y) for x, y in selection), Direction.DOWN, k, stats)
            break

    stats.elapsed_ms = stopwatch.elapsed_ms

    return result
