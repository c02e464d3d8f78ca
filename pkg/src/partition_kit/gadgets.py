"""Compile monotone planar formulas into unit square assemblies.

Variables become boxes along the x axis. Positive clauses are drawn above the
boxes and negative clauses below, each as interlocking parts a and b (plus c
and d for 3-clauses) whose legs land on the boxes of their variables. Children
hang from their parent's b through a hook and a connector, and each side's root
hangs from the ledge of a blocker whose roof holds the end of every column.
"""

from collections import defaultdict
from collections.abc import Iterable, Mapping
from enum import Enum
import logging
import re
from typing import NamedTuple

import networkx as nx

import partition_kit as pk
from partition_kit.cnf import Assignment, Clause, PlanarCnf, Side
from partition_kit.config import PartitionConfig
from partition_kit.grid import Cell, GridAssembly, Selection
from partition_kit.tools import trace

__all__ = [
    "CutKind",
    "GadgetLayout",
    "LayoutVerdict",
    "LayoutViolation",
    "Role",
    "RoleKind",
    "assignment_to_partition",
    "compile_to_assembly",
    "parse_role",
    "verify_layout",
]

logger = logging.getLogger(__name__)

# Variable boxes span rows -H..H
VARIABLE_HALF_HEIGHT = 4

MIN_VARIABLE_WIDTH = 6

# Empty columns between boxes
VARIABLE_SPACING = 2

# Slot widths for clause legs landing on a box
FAR_SLOT = 9
NEAR_SLOT = 5
END_SLOT = 3

# Heights of the c and d bars above the variable row
C_HEIGHT = 6
D_HEIGHT = 4

# Clearance between a child's top and its parent's b bar
NESTING_PITCH = 4

# Empty columns left of the variable row under a blocker's pendant
BLOCKER_MARGIN = 5


class RoleKind(str, Enum):
    """Kinds of pieces in a compiled layout."""

    BLOCKER_TOP = "blocker-top"
    BLOCKER_BOTTOM = "blocker-bottom"
    A = "a"
    B = "b"
    C = "c"
    D = "d"
    VARIABLE = "variable"
    CONNECTOR = "connector"


class Role(NamedTuple):
    """Piece a cell belongs to.

    Clause parts are indexed by clause, variables by row position, and
    connectors by child clause together with the parent clause, which is None
    for a root hanging from a blocker.
    """

    kind: RoleKind

    index: int | None = None

    parent: int | None = None

    @property
    def label(self) -> str:
        if self.kind is RoleKind.CONNECTOR:
            parent = "-" if self.parent is None else self.parent
            return f"connector({parent},{self.index})"
        if self.index is None:
            return self.kind.value
        return f"{self.kind.value}({self.index})"


class CutKind(str, Enum):
    """Distinguished cells of a layout."""

    S_A = "s_a"
    S_B = "s_b"
    S_C = "s_c"
    S = "s"
    S_PRIME = "s'"


# Pieces left when a cut cell is removed from its part
CUT_PIECES = {CutKind.S_A: 3, CutKind.S_B: 4, CutKind.S_C: 2, CutKind.S: 2}


class GadgetLayout(NamedTuple):
    """Compiled assembly with the role of every cell."""

    formula: PlanarCnf

    assembly: GridAssembly

    labels: Mapping[Cell, Role]

    cuts: Mapping[tuple[CutKind, int], Cell]


class LayoutViolation(NamedTuple):
    """A structural property the layout fails."""

    kind: str

    role: Role | None

    message: str


class LayoutVerdict(NamedTuple):
    """Outcome of verify_layout."""

    violations: tuple[LayoutViolation, ...]

    @property
    def valid(self) -> bool:
        return not self.violations


_role_pattern = re.compile(r"^(?P<kind>[a-z-]+)(?:\((?P<first>-|\d+)(?:,(?P<second>\d+))?\))?$")


def parse_role(text: str) -> Role:
    """Parse a role label such as a(3), variable(0) or connector(-,2)."""
    match = _role_pattern.match(text)
    if match is None:
        raise ValueError(f"Invalid role {text!r}")

    kind = RoleKind(match["kind"])
    first, second = match["first"], match["second"]

    if kind is RoleKind.CONNECTOR:
        if second is None:
            raise ValueError(f"Invalid role {text!r}: connector requires parent and child")
        return Role(kind, int(second), None if first == "-" else int(first))

    if second is not None or first == "-":
        raise ValueError(f"Invalid role {text!r}")

    return Role(kind, None if first is None else int(first))


# ------------------------------------------------------------------------------
# Geometry
# ------------------------------------------------------------------------------

Local = set[tuple[int, int]]


class _Frame(NamedTuple):
    """Clause-local coordinates: x relative to the far leg, t above the variable row."""

    origin: int

    sign: int

    side: Side

    # Offset of the near slot for 3-clauses
    p: int | None

    q: int

    def cell(self, x: int, t: int) -> Cell:
        y = VARIABLE_HALF_HEIGHT + t
        return Cell(self.origin + self.sign * x, y if self.side is Side.ABOVE else -y)

    def cells(self, local: Iterable[tuple[int, int]]) -> list[Cell]:
        return [self.cell(x, t) for x, t in local]


class _Heights(NamedTuple):
    a: int

    b: int


def _column(x: int, lo: int, hi: int) -> Local:
    return {(x, t) for t in range(lo, hi + 1)}


def _row(t: int, lo: int, hi: int) -> Local:
    return {(x, t) for x in range(lo, hi + 1)}


def _slot_widths(clause: Clause) -> list[int]:
    if len(clause.literals) == 2:
        return [FAR_SLOT, END_SLOT]
    v1, v2, v3 = (literal.variable for literal in clause.literals)
    if pk.cnf.neighboring_pair(clause) == (v2, v3):
        return [FAR_SLOT, NEAR_SLOT, END_SLOT]
    return [END_SLOT, NEAR_SLOT, FAR_SLOT]


def _landings(formula: PlanarCnf, side: Side) -> list[tuple[int, int]]:
    """Clause legs on one side in left to right order as (clause, variable)."""
    kids = pk.cnf.children(formula)
    order: list[tuple[int, int]] = []

    def visit(index: int) -> None:
        clause = formula.clauses[index]
        gaps = pk.cnf.gaps(clause)
        for k, literal in enumerate(clause.literals):
            order.append((index, literal.variable))
            if k < len(gaps):
                lo, hi = gaps[k]
                for child in kids.get(index, ()):
                    c_lo, c_hi = formula.clauses[child].span
                    if lo <= c_lo and c_hi <= hi:
                        visit(child)

    for root in kids.get(None, ()):
        if formula.clauses[root].side is side:
            visit(root)

    # Sanity check
    variables = [v for _, v in order]
    assert variables == sorted(variables), "Landings must run left to right"

    return order


def _frame(formula: PlanarCnf, index: int, starts: Mapping[tuple[int, int], int]) -> _Frame:
    clause = formula.clauses[index]
    variables = [literal.variable for literal in clause.literals]
    start = [starts[index, v] for v in variables]

    if len(variables) == 2:
        origin = start[0] + 4
        return _Frame(origin, 1, clause.side, None, start[1] - origin)

    if pk.cnf.neighboring_pair(clause) == (variables[1], variables[2]):
        origin = start[0] + 4
        return _Frame(origin, 1, clause.side, start[1] - origin, start[2] - origin)

    # Mirrored so the far leg stays at x=0
    origin = start[2] + 4
    return _Frame(origin, -1, clause.side, origin - start[1] - 4, origin - start[0] - 2)


def _clause_parts(size: int, frame: _Frame, heights: _Heights) -> dict[RoleKind, Local]:
    a_h, b_h = heights
    hook = {(0, a_h + 1), (0, a_h + 2), (-1, a_h + 2), (-2, a_h + 2)}
    stub = {(1, 2), (2, 2)}

    # Capped by the a bar
    cap = {(4, b_h + 1)}

    if size == 2:
        q = frame.q
        return {
            RoleKind.A: _column(0, 1, a_h) | stub | _row(a_h, 0, q + 2) | _column(q + 2, 1, a_h) | hook,
            RoleKind.B: _column(4, 1, b_h) | _row(b_h, 2, q) | _column(q, 1, b_h) | cap,
        }

    p, q = frame.p, frame.q
    assert p is not None

    return {
        RoleKind.A: _column(0, 1, a_h) | stub | _row(a_h, 0, p + 2) | _column(p + 2, C_HEIGHT + 1, a_h) | hook,
        RoleKind.B: _column(4, 1, b_h) | _row(b_h, 2, p) | _column(p, C_HEIGHT + 1, b_h) | cap,
        RoleKind.C: (
            _column(p, 1, C_HEIGHT) | {(p + 1, 2), (p + 2, 2)} | _row(C_HEIGHT, p, q + 2) | _column(q + 2, 1, C_HEIGHT)
        ),
        RoleKind.D: _column(p + 4, 1, D_HEIGHT) | _row(D_HEIGHT, p + 2, q) | _column(q, 1, D_HEIGHT),
    }


def _variable_box(x0: int, x1: int) -> tuple[set[Cell], Cell, Cell]:
    """Box cells, the cut cell s and the inner cell s'.

    Removing s splits the box into a C-shaped piece and a piece whose tongue
    sits inside the C, so neither can move without the other.
    """
    h = VARIABLE_HALF_HEIGHT
    cells = {Cell(x, h) for x in range(x0, x1 + 1)}
    cells |= {Cell(x1, y) for y in range(-h, h)}
    cells |= {Cell(x, -h) for x in range(x0, x1)}
    cells |= {Cell(x0, y) for y in range(-1, h)}
    cells |= {Cell(x, -1) for x in range(x0 + 1, x1 - 1)}
    cells |= {Cell(x, 1) for x in range(x1 - 3, x1)}

    return cells, Cell(x1, h), Cell(x1 - 2, -1)


def _blocker(ledge: int, lo: int, hi: int) -> Local:
    """Blocker over columns lo..hi with its ledge at height ledge.

    The roof runs two rows above the ledge. A pendant hangs from the roof's left
    end with an arm under the ledge, and the ledge hangs from the roof's right
    end. Lifting any roof cell lifts the pendant, whose arm then lifts the ledge.
    """
    left, right = lo - BLOCKER_MARGIN, hi + 2
    roof = ledge + 2

    return (
        _row(roof, left, right)
        | _column(left, ledge - 2, roof - 1)
        | _row(ledge - 2, left + 1, left + 3)
        | _column(right, ledge, roof - 1)
        | _row(ledge, left + 2, right - 1)
    )


# ------------------------------------------------------------------------------
# Compilation
# ------------------------------------------------------------------------------


def _check_compilable(formula: PlanarCnf) -> None:
    verdict = pk.cnf.check_instance(formula)
    if not verdict.valid:
        raise ValueError(f"Expected a monotone planar formula with neighboring pairs: {verdict.violations[0].message}")

    for index, clause in enumerate(formula.clauses):
        if len(clause.literals) == 1:
            raise ValueError(f"Clause {index + 1} has a single literal")

    for side in Side:
        roots = [c for c in formula.clauses if c.parent is None and c.side is side]
        if len(roots) != 1 or len(roots[0].literals) != 2:
            raise ValueError(f"Expected a single 2-clause root {side.value} the variable row, found {len(roots)} roots")

    for v, name in enumerate(formula.variables):
        polarities = {c.side for c in formula.clauses if any(literal.variable == v for literal in c.literals)}
        if len(polarities) != 2:
            raise ValueError(f"Variable {name} must occur in a positive and a negative clause")


@trace(logger)
def compile_to_assembly(formula: PlanarCnf, config: PartitionConfig | None = None) -> GadgetLayout:
    """Build the gadget assembly of a formula with a single 2-clause root on each side."""
    _check_compilable(formula)

    clauses = formula.clauses
    kids = pk.cnf.children(formula)

    # Slots
    widths = {}
    for index, clause in enumerate(clauses):
        for literal, width in zip(clause.literals, _slot_widths(clause), strict=True):
            widths[index, literal.variable] = width

    per_variable: dict[Side, dict[int, list[int]]] = {side: defaultdict(list) for side in Side}
    for side in Side:
        for index, v in _landings(formula, side):
            per_variable[side][v].append(index)

    starts: dict[tuple[int, int], int] = {}
    boxes: list[tuple[int, int]] = []
    x0 = 0
    for v in range(len(formula.variables)):
        spans = [
            sum(widths[i, v] + 1 for i in per_variable[side][v]) - 1 if per_variable[side][v] else 0
            for side in Side
        ]
        x1 = x0 + max(MIN_VARIABLE_WIDTH, 1 + max(spans)) - 1
        for side in Side:
            x = x0 + 1
            for i in per_variable[side][v]:
                starts[i, v] = x
                x += widths[i, v] + 1
        boxes.append((x0, x1))
        x0 = x1 + VARIABLE_SPACING + 1

    frames = [_frame(formula, i, starts) for i in range(len(clauses))]

    # Heights, children first
    heights: dict[int, _Heights] = {}

    def measure(index: int) -> _Heights:
        if index not in heights:
            base = max((measure(child).a for child in kids.get(index, ())), default=0)
            floor = D_HEIGHT if len(clauses[index].literals) == 2 else 2 * D_HEIGHT
            b_h = max(floor, base + NESTING_PITCH)
            heights[index] = _Heights(b_h + 2, b_h)
        return heights[index]

    for index in range(len(clauses)):
        measure(index)

    labels: dict[Cell, Role] = {}
    cuts: dict[tuple[CutKind, int], Cell] = {}

    def paint(role: Role, cells: Iterable[Cell]) -> None:
        for cell in cells:
            assert cell not in labels, f"{role.label} overlaps {labels[cell].label} at {cell}"
            labels[cell] = role

    # Variables
    for v, (x0, x1) in enumerate(boxes):
        box, s, s_prime = _variable_box(x0, x1)
        paint(Role(RoleKind.VARIABLE, v), box)
        cuts[CutKind.S, v] = s
        cuts[CutKind.S_PRIME, v] = s_prime

    # Clauses
    for index, clause in enumerate(clauses):
        frame = frames[index]
        for kind, local in _clause_parts(len(clause.literals), frame, heights[index]).items():
            paint(Role(kind, index), frame.cells(local))

        a_h, b_h = heights[index]
        cuts[CutKind.S_A, index] = frame.cell(0, a_h)
        cuts[CutKind.S_B, index] = frame.cell(4, b_h)
        if frame.p is not None:
            cuts[CutKind.S_C, index] = frame.cell(frame.p, C_HEIGHT)

    # Blockers
    x_min, x_max = boxes[0][0], boxes[-1][1]
    blocker_heights = {}
    for side, kind in ((Side.ABOVE, RoleKind.BLOCKER_TOP), (Side.BELOW, RoleKind.BLOCKER_BOTTOM)):
        root = next(i for i in kids[None] if clauses[i].side is side)
        t = heights[root].a + NESTING_PITCH
        blocker_heights[side] = t
        paint(Role(kind), _Frame(0, 1, side, None, 0).cells(_blocker(t, x_min, x_max)))

    # Hooks and connectors
    for index, clause in enumerate(clauses):
        frame = frames[index]
        a_h = heights[index].a
        if clause.parent is None:
            top = blocker_heights[clause.side]
            holder = Role(RoleKind.BLOCKER_TOP if clause.side is Side.ABOVE else RoleKind.BLOCKER_BOTTOM)
        else:
            top = heights[clause.parent].b
            holder = Role(RoleKind.B, clause.parent)

        paint(holder, frame.cells(_column(-4, a_h, top - 1) | {(-3, a_h), (-2, a_h)}))

        attach = frame.q + 2 if frame.p is None else frame.p + 2
        paint(Role(RoleKind.CONNECTOR, index, clause.parent), frame.cells(_column(attach, a_h + 1, top - 1)))

    layout = GadgetLayout(
        formula=formula,
        assembly=pk.grid.build_assembly(labels, config),
        labels=labels,
        cuts=cuts,
    )

    # Sanity check
    verdict = verify_layout(layout)
    assert verdict.valid, f"Compiled layout fails verification: {verdict.violations}"

    logger.debug(f"Compiled {len(formula.variables)} variables, {len(clauses)} clauses into {len(labels)} cells")

    return layout


def assignment_to_partition(layout: GadgetLayout, assignment: Assignment) -> Selection:
    """Cells translated upward under a satisfying assignment.

    The top blocker, positive a and b parts, connectors of positive clauses and
    true variables move up. Positive c and d move up when either neighboring
    variable is true, negative c and d only when both are.
    """
    formula = layout.formula

    # Validate
    missing = set(formula.variables) - set(assignment)
    if missing:
        raise ValueError(f"Assignment is missing variables {sorted(missing)}")
    if not pk.cnf.satisfies(formula, assignment):
        raise ValueError("Assignment does not satisfy the formula")

    values = [assignment[name] for name in formula.variables]

    def moves_up(role: Role) -> bool:
        match role.kind:
            case RoleKind.BLOCKER_TOP:
                return True
            case RoleKind.BLOCKER_BOTTOM:
                return False
            case RoleKind.VARIABLE:
                assert role.index is not None
                return values[role.index]
            case RoleKind.A | RoleKind.B | RoleKind.CONNECTOR:
                assert role.index is not None
                return formula.clauses[role.index].side is Side.ABOVE
            case RoleKind.C | RoleKind.D:
                assert role.index is not None
                clause = formula.clauses[role.index]
                pair = pk.cnf.neighboring_pair(clause)
                assert pair is not None
                nv = [values[v] for v in pair]
                return any(nv) if clause.side is Side.ABOVE else all(nv)

    return frozenset(cell for cell, role in layout.labels.items() if moves_up(role))


# ------------------------------------------------------------------------------
# Verification
# ------------------------------------------------------------------------------


def _interlocked(first: set[Cell], second: set[Cell]) -> bool:
    """True if each set has a cell below a cell of the other in some column."""

    def below(lower: set[Cell], upper: set[Cell]) -> bool:
        lowest: dict[int, int] = {}
        for cell in lower:
            lowest[cell.x] = min(cell.y, lowest.get(cell.x, cell.y))
        return any(cell.x in lowest and lowest[cell.x] < cell.y for cell in upper)

    return below(first, second) and below(second, first)


def _under(lower: set[Cell], upper: set[Cell], sign: int) -> bool:
    """True if a cell of lower lies under a cell of upper in some column, with up being sign."""
    return any(low.x == high.x and sign * low.y < sign * high.y for low in lower for high in upper)


def _piece(graph: nx.Graph, part: set[Cell], cut: Cell, start: Cell) -> set[Cell]:
    """Component of part without cut that holds start, empty if start is not in part."""
    if start not in part or start == cut:
        return set()
    return set(nx.node_connected_component(graph.subgraph(part - {cut}), start))


def _rigidity(graph: nx.Graph, blocker: set[Cell], roof: set[Cell], joints: set[Cell], sign: int) -> str | None:
    """Why lifting one roof cell would not drag the whole blocker along, None if it would.

    Below the roof there must be exactly a pendant hanging from one end of the
    roof, touching nothing else, and a ledge hanging from the other end,
    touching the rest of the assembly only through joints. The pendant must
    reach under the ledge.
    """
    if not nx.is_connected(graph.subgraph(roof)):
        return "roof is broken"

    xs = sorted(cell.x for cell in roof)
    ends = {next(cell for cell in roof if cell.x == x) for x in (xs[0], xs[-1])}

    pendants: list[tuple[set[Cell], set[Cell]]] = []
    ledges: list[tuple[set[Cell], set[Cell]]] = []
    for piece in nx.connected_components(graph.subgraph(blocker - roof)):
        neighbors = {n for cell in piece for n in graph[cell]} - piece
        held = neighbors & roof
        outside = neighbors - blocker
        if len(held) != 1 or not held <= ends:
            return f"piece of {len(piece)} cells is not hung from one end of the roof"
        if not outside:
            pendants.append((piece, held))
        elif outside <= joints:
            ledges.append((piece, held))
        else:
            return f"piece of {len(piece)} cells touches the assembly outside the root connector"

    if len(pendants) != 1 or len(ledges) != 1:
        return f"expected a pendant and a ledge under the roof, found {len(pendants)} and {len(ledges)}"

    (pendant, pendant_end), (ledge, ledge_end) = pendants[0], ledges[0]
    if pendant_end == ledge_end:
        return "pendant and ledge hang from the same end of the roof"
    if not _under(pendant, ledge, sign):
        return "pendant does not reach under the ledge"

    return None


def verify_layout(layout: GadgetLayout) -> LayoutVerdict:
    """Check the structural properties the reduction relies on."""
    formula = layout.formula
    assembly = layout.assembly
    graph = assembly.graph
    violations: list[LayoutViolation] = []

    def report(kind: str, role: Role | None, message: str) -> None:
        violations.append(LayoutViolation(kind, role, message))

    parts: dict[Role, set[Cell]] = defaultdict(set)
    for cell, role in layout.labels.items():
        if cell in assembly.cells:
            parts[role].add(cell)

    def touches(first: set[Cell], second: set[Cell]) -> bool:
        return any(neighbor in second for cell in first for neighbor in graph[cell])

    def variable(v: int) -> set[Cell]:
        return parts.get(Role(RoleKind.VARIABLE, v), set())

    # Connected
    if not assembly.connected:
        report("connected", None, "assembly is not connected")

    # Blockers hold every column from their roof and move as one piece
    facings = ((Side.ABOVE, RoleKind.BLOCKER_TOP, -1, 1), (Side.BELOW, RoleKind.BLOCKER_BOTTOM, 0, -1))
    for side, kind, end, sign in facings:
        role = Role(kind)
        blocker = parts.get(role, set())
        if not blocker:
            report("blocker-span", role, f"{role.label} is missing")
            continue

        roof_y = sign * max(sign * cell.y for cell in blocker)
        roof = {cell for cell in blocker if cell.y == roof_y}
        for x, ys in assembly.columns.items():
            if Cell(x, ys[end]) not in roof:
                report("blocker-span", role, f"column {x} is not held by the roof {side.value} it")

        joints = set().union(
            *(
                parts.get(Role(RoleKind.CONNECTOR, index, None), set())
                for index, clause in enumerate(formula.clauses)
                if clause.parent is None and clause.side is side
            )
        )
        reason = _rigidity(graph, blocker, roof, joints, sign)
        if reason is not None:
            report("blocker-rigid", role, reason)

    # Variables
    for v in range(len(formula.variables)):
        role = Role(RoleKind.VARIABLE, v)
        box = variable(v)
        s = layout.cuts.get((CutKind.S, v))
        s_prime = layout.cuts.get((CutKind.S_PRIME, v))
        if s not in box or s_prime not in box:
            report("variable", role, "missing distinguished cells")
            continue

        pieces = list(nx.connected_components(graph.subgraph(box - {s})))
        if len(pieces) < 2:
            report("variable", role, "s is not a cut cell")
            continue
        if len(pieces) != CUT_PIECES[CutKind.S]:
            report("variable", role, f"removing s leaves {len(pieces)} pieces of the box")

        inner = next(piece for piece in pieces if s_prime in piece)
        outer = box - {s} - inner
        column = [cell.y for cell in outer if cell.x == s_prime.x]
        if not any(y > s_prime.y for y in column) or not any(y < s_prime.y for y in column):
            report("variable", role, "s' is not enclosed by the rest of the box")

    # Clauses
    for index, clause in enumerate(formula.clauses):
        a = parts.get(Role(RoleKind.A, index), set())
        b = parts.get(Role(RoleKind.B, index), set())
        variables = [literal.variable for literal in clause.literals]
        three = len(variables) == 3

        expected = [RoleKind.A, RoleKind.B, RoleKind.C, RoleKind.D] if three else [RoleKind.A, RoleKind.B]
        absent = [kind.value for kind in expected if not parts.get(Role(kind, index))]
        if absent:
            report("missing", Role(expected[0], index), f"clause {index} lacks parts {absent}")
            continue

        # Cut cells
        cut_kinds = [(CutKind.S_A, RoleKind.A), (CutKind.S_B, RoleKind.B)]
        if three:
            cut_kinds.append((CutKind.S_C, RoleKind.C))
        all_variables = set().union(*(variable(v) for v in range(len(formula.variables))))
        for cut_kind, part_kind in cut_kinds:
            role = Role(part_kind, index)
            part = parts[role]
            cut = layout.cuts.get((cut_kind, index))
            if cut not in part:
                report("cut", role, f"{cut_kind.value} is not a cell of {role.label}")
                continue
            pieces = list(nx.connected_components(graph.subgraph(part - {cut})))
            if len(pieces) != CUT_PIECES[cut_kind]:
                report(
                    "cut",
                    role,
                    f"removing {cut_kind.value} leaves {len(pieces)} pieces of {role.label}, "
                    f"expected {CUT_PIECES[cut_kind]}",
                )
            if not any(touches(piece, all_variables) for piece in pieces):
                report("cut", role, f"{role.label} has no piece resting on a variable")

        # Touch relations
        if three:
            pair = pk.cnf.neighboring_pair(clause)
            assert pair is not None
            far = next(v for v in variables if v not in pair)
            c = parts[Role(RoleKind.C, index)]
            d = parts[Role(RoleKind.D, index)]
            for part, name in ((c, "c"), (d, "d")):
                for v in pair:
                    if not touches(part, variable(v)):
                        report("touch", Role(RoleKind(name), index), f"{name}({index}) does not touch variable {v}")
            if not touches(c, a) or not touches(c, b):
                report("touch", Role(RoleKind.C, index), f"c({index}) does not touch both a and b")
            if not _interlocked(c, d):
                report("interlock", Role(RoleKind.C, index), f"c({index}) and d({index}) do not interlock")
            targets = [far]
        else:
            targets = variables

        for part, name in ((a, "a"), (b, "b")):
            for v in targets:
                if not touches(part, variable(v)):
                    report("touch", Role(RoleKind(name), index), f"{name}({index}) does not touch variable {v}")

        if not _interlocked(a, b):
            report("interlock", Role(RoleKind.A, index), f"a({index}) and b({index}) do not interlock")

        # Hooks around the cut cells, with up pointing away from the variables
        sign = 1 if clause.side is Side.ABOVE else -1
        s_a = layout.cuts.get((CutKind.S_A, index))
        s_b = layout.cuts.get((CutKind.S_B, index))
        upper_a: set[Cell] = set()
        lower_a: set[Cell] = set()
        upper_b: set[Cell] = set()
        if s_a is not None:
            upper_a = _piece(graph, a, s_a, Cell(s_a.x, s_a.y + sign))
            lower_a = _piece(graph, a, s_a, Cell(s_a.x, s_a.y - sign))
        if s_b is not None:
            upper_b = _piece(graph, b, s_b, Cell(s_b.x, s_b.y + sign))

        if not lower_a or not _under(lower_a, b, sign):
            report("hook", Role(RoleKind.A, index), f"a({index}) below s_a does not reach under b({index})")
        if not upper_b or not _under(upper_b, a, sign):
            report("hook", Role(RoleKind.B, index), f"b({index}) above s_b is not capped by a({index})")

        # Parent connection
        if clause.parent is None:
            holder = Role(RoleKind.BLOCKER_TOP if clause.side is Side.ABOVE else RoleKind.BLOCKER_BOTTOM)
        else:
            holder = Role(RoleKind.B, clause.parent)
        held = parts.get(holder, set())
        connector = parts.get(Role(RoleKind.CONNECTOR, index, clause.parent), set())

        if not upper_a or not _interlocked(held, upper_a):
            report("interlock", holder, f"{holder.label} and a({index}) above s_a do not interlock")
        if not connector or not touches(connector, held) or not touches(connector, a):
            joint = Role(RoleKind.CONNECTOR, index, clause.parent)
            report("connection", joint, f"a({index}) is not joined to {holder.label}")

    return LayoutVerdict(tuple(violations))
