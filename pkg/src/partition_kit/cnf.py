"""Monotone planar CNF formulas with rectilinear embeddings."""

from collections.abc import Iterable, Mapping
from enum import Enum
from itertools import pairwise, product
import logging
from typing import NamedTuple

import numpy as np

from partition_kit.config import PartitionConfig, load_config
from partition_kit.oracle import CapExceededError
from partition_kit.tools import default_arg, trace

__all__ = [
    "Assignment",
    "Clause",
    "InstanceVerdict",
    "Literal",
    "PlanarCnf",
    "Side",
    "Violation",
    "add_root_clauses",
    "check_instance",
    "children",
    "create",
    "format_formula",
    "gaps",
    "neighboring_pair",
    "parse_formula",
    "random_formula",
    "sat_bruteforce",
    "sat_dpll",
    "satisfies",
    "to_nvp",
]

logger = logging.getLogger(__name__)


class Side(str, Enum):
    """Side of the variable row a clause is drawn on."""

    ABOVE = "above"
    BELOW = "below"

    @property
    def opposite(self) -> "Side":
        return Side.BELOW if self is Side.ABOVE else Side.ABOVE

    @property
    def positive(self) -> bool:
        """Literal polarity required by monotonicity."""
        return self is Side.ABOVE


class Literal(NamedTuple):
    """A variable (by row position) and its polarity."""

    variable: int

    positive: bool


class Clause(NamedTuple):
    """A clause, its side and the clause enclosing it on that side."""

    literals: tuple[Literal, ...]

    side: Side

    parent: int | None

    @property
    def span(self) -> tuple[int, int]:
        return self.literals[0].variable, self.literals[-1].variable


class PlanarCnf(NamedTuple):
    """A CNF formula with variables in row order and a nesting forest per side."""

    variables: tuple[str, ...]

    clauses: tuple[Clause, ...]


class Violation(NamedTuple):
    """A reason a formula is not a valid instance."""

    kind: str

    clause: int | None

    message: str


class InstanceVerdict(NamedTuple):
    """Outcome of check_instance."""

    violations: tuple[Violation, ...]

    planar: bool

    monotone: bool

    nvp: bool

    @property
    def valid(self) -> bool:
        return not self.violations


Assignment = Mapping[str, bool]

_structural = ("size", "variable", "embedding")


def create(
    variables: Iterable[str],
    clauses: Iterable[tuple[Iterable[tuple[int, bool]], Side, int | None]],
) -> PlanarCnf:
    """Create formula with literals sorted by row position."""
    return PlanarCnf(
        variables=tuple(variables),
        clauses=tuple(
            Clause(tuple(sorted(Literal(v, p) for v, p in literals)), Side(side), parent)
            for literals, side, parent in clauses
        ),
    )


# ------------------------------------------------------------------------------
# Structure
# ------------------------------------------------------------------------------


def gaps(clause: Clause) -> list[tuple[int, int]]:
    """Row intervals between consecutive literals."""
    return [(a.variable, b.variable) for a, b in pairwise(clause.literals)]


def neighboring_pair(clause: Clause) -> tuple[int, int] | None:
    """Adjacent variable pair of a 3-clause, preferring the right pair."""
    if len(clause.literals) != 3:
        return None

    v1, v2, v3 = (literal.variable for literal in clause.literals)
    if v3 == v2 + 1:
        return v2, v3
    if v2 == v1 + 1:
        return v1, v2
    return None


def children(formula: PlanarCnf) -> dict[int | None, list[int]]:
    """Clause indices grouped by parent, ordered left to right."""
    grouped: dict[int | None, list[int]] = {}
    for index, clause in enumerate(formula.clauses):
        grouped.setdefault(clause.parent, []).append(index)

    for indices in grouped.values():
        indices.sort(key=lambda i: formula.clauses[i].span)

    return grouped


def check_instance(formula: PlanarCnf) -> InstanceVerdict:
    """Report size, embedding, monotonicity and neighboring pair violations."""
    n = len(formula.variables)
    clauses = formula.clauses
    violations: list[Violation] = []

    def report(kind: str, index: int | None, message: str) -> None:
        violations.append(Violation(kind, index, message))

    for index, clause in enumerate(clauses):
        variables = [literal.variable for literal in clause.literals]

        # Size
        if not 1 <= len(variables) <= 3:
            report("size", index, f"clause has {len(variables)} literals")
        if not variables:
            continue
        if len(set(variables)) != len(variables):
            report("size", index, "clause repeats a variable")
        if any(not 0 <= v < n for v in variables):
            report("variable", index, f"clause references a variable outside 1..{n}")
            continue

        # Monotone
        if any(literal.positive != clause.side.positive for literal in clause.literals):
            report("monotone", index, f"{clause.side.value} clause has a literal of the wrong polarity")

        # Parent
        if clause.parent is None:
            continue
        if not 0 <= clause.parent < len(clauses) or clause.parent == index:
            report("embedding", index, f"invalid parent {clause.parent}")
            continue
        parent = clauses[clause.parent]
        if parent.side is not clause.side:
            report("embedding", index, "parent lies on the other side of the variable row")
        lo, hi = clause.span
        if not any(p <= lo and hi <= q for p, q in gaps(parent)):
            report("embedding", index, f"clause does not fit in a single gap of clause {clause.parent}")

    if any(v.kind == "variable" for v in violations) or not all(c.literals for c in clauses):
        return _verdict(violations)

    # Acyclic
    for index in range(len(clauses)):
        seen = {index}
        parent = clauses[index].parent
        while parent is not None and 0 <= parent < len(clauses):
            if parent in seen:
                report("embedding", index, "nesting forest has a cycle")
                break
            seen.add(parent)
            parent = clauses[parent].parent

    # Siblings, with roots grouped per side
    groups: dict[tuple[int | None, Side], list[int]] = {}
    for index, clause in enumerate(clauses):
        groups.setdefault((clause.parent, clause.side), []).append(index)
    for members in groups.values():
        ordered = sorted(members, key=lambda i: clauses[i].span)
        for a, b in pairwise(ordered):
            if clauses[a].span[1] > clauses[b].span[0]:
                report("embedding", b, f"clause overlaps sibling clause {a}")

    # Neighboring pairs
    for index, clause in enumerate(clauses):
        if len(clause.literals) != 3:
            continue
        pair = neighboring_pair(clause)
        if pair is None:
            report("nvp", index, "3-clause has no neighboring variable pair")
            continue
        for child in groups.get((index, clause.side), ()):
            lo, hi = clauses[child].span
            if pair[0] <= lo and hi <= pair[1]:
                report("nv-gap", child, f"clause lies between the neighboring variables of clause {index}")

    return _verdict(violations)


def _verdict(violations: list[Violation]) -> InstanceVerdict:
    kinds = {v.kind for v in violations}
    return InstanceVerdict(
        violations=tuple(violations),
        planar=not kinds.intersection(_structural),
        monotone="monotone" not in kinds,
        nvp=not kinds.intersection(("nvp", "nv-gap")),
    )


# ------------------------------------------------------------------------------
# Transformations
# ------------------------------------------------------------------------------


class _Builder:
    """Mutable working copy of a formula."""

    def __init__(self, formula: PlanarCnf):
        self.names = list(formula.variables)
        self.literals = [list(clause.literals) for clause in formula.clauses]
        self.sides = [clause.side for clause in formula.clauses]
        self.parents = [clause.parent for clause in formula.clauses]
        self.removed: set[int] = set()

    def live(self) -> list[int]:
        return [i for i in range(len(self.literals)) if i not in self.removed]

    def span(self, index: int) -> tuple[int, int]:
        literals = self.literals[index]
        return literals[0].variable, literals[-1].variable

    def gaps(self, index: int) -> list[tuple[int, int]]:
        return [(a.variable, b.variable) for a, b in pairwise(self.literals[index])]

    def fresh(self, stem: str) -> str:
        existing = set(self.names)
        counter = 1
        while f"{stem}{counter}" in existing:
            counter += 1
        return f"{stem}{counter}"

    def insert(self, position: int, stem: str) -> int:
        """Insert a new variable at a row position, shifting those at or right of it."""
        self.names.insert(position, self.fresh(stem))
        for literals in self.literals:
            literals[:] = [Literal(v + 1 if v >= position else v, p) for v, p in literals]
        return position

    def add(self, literals: Iterable[Literal], side: Side, parent: int | None) -> int:
        self.literals.append(sorted(literals))
        self.sides.append(side)
        self.parents.append(parent)
        return len(self.literals) - 1

    def replace(self, index: int, old: int, new: int, positive: bool | None = None) -> None:
        """Swap a variable in a clause, keeping its polarity unless given."""
        self.literals[index] = sorted(
            Literal(new, literal.positive if positive is None else positive) if literal.variable == old else literal
            for literal in self.literals[index]
        )

    def depth(self, index: int) -> int:
        depth = 0
        parent = self.parents[index]
        while parent is not None:
            depth += 1
            parent = self.parents[parent]
        return depth

    def descendants(self, index: int) -> list[int]:
        found = []
        for i in self.live():
            parent = self.parents[i]
            while parent is not None and parent != index:
                parent = self.parents[parent]
            if parent == index:
                found.append(i)
        return found

    def enclosing(self, side: Side, lo: int, hi: int) -> int | None:
        """Deepest clause on side with a gap containing [lo, hi]."""
        candidates = [
            i
            for i in self.live()
            if self.sides[i] is side and any(p <= lo and hi <= q for p, q in self.gaps(i))
        ]
        return max(candidates, key=self.depth, default=None)

    def neighboring_pair(self, index: int) -> tuple[int, int] | None:
        return neighboring_pair(Clause(tuple(self.literals[index]), self.sides[index], None))

    def build(self) -> PlanarCnf:
        mapping = {old: new for new, old in enumerate(self.live())}

        def remap(parent: int | None) -> int | None:
            while parent is not None and parent in self.removed:
                parent = self.parents[parent]
            return None if parent is None else mapping[parent]

        return PlanarCnf(
            variables=tuple(self.names),
            clauses=tuple(
                Clause(tuple(self.literals[i]), self.sides[i], remap(self.parents[i])) for i in self.live()
            ),
        )


def _crossing(builder: _Builder, clause: int, old: int, neighbor: int) -> list[int]:
    """Clauses whose edge to old would cross variables inserted between old and neighbor.

    These are same side descendants of clause that use old, and opposite side
    3-clauses whose neighboring pair is {old, neighbor}.
    """
    side = builder.sides[clause]
    pair = (min(old, neighbor), max(old, neighbor))

    inner = [
        i
        for i in builder.descendants(clause)
        if any(literal.variable == old for literal in builder.literals[i])
    ]
    outer = [
        i
        for i in builder.live()
        if builder.sides[i] is side.opposite and builder.neighboring_pair(i) == pair
    ]

    return inner + outer


def _make_neighboring(builder: _Builder, clause: int) -> None:
    """Give a 3-clause a neighboring pair through two variables copying its outer ones."""
    side = builder.sides[clause]
    xi, xj, _ = (literal.variable for literal in builder.literals[clause])

    # Children of the first gap move under the new equivalence clauses
    first_gap = [i for i in builder.live() if builder.parents[i] == clause and builder.span(i)[1] <= xj]
    crossing = _crossing(builder, clause, xi, xi + 1)

    # Row becomes x_i, a, b, ...
    a = builder.insert(xi + 1, "a")
    b = builder.insert(xi + 2, "b")
    xj += 2

    for i in crossing:
        builder.replace(i, xi, b)
    builder.replace(clause, xj, a)

    # a = x_j on this side
    e1 = builder.add((Literal(xj, True), Literal(a, False)), side, clause)
    e2 = builder.add((Literal(xj, False), Literal(a, True)), side, e1)
    for i in first_gap:
        builder.parents[i] = e2

    # b = x_i on the other side
    e3 = builder.add((Literal(xi, True), Literal(b, False)), side.opposite, builder.enclosing(side.opposite, xi, b))
    builder.add((Literal(xi, False), Literal(b, True)), side.opposite, e3)


def _make_monotone(builder: _Builder, clause: int) -> None:
    """Replace the wrong-polarity literal of a 2-clause with a new variable holding its negation."""
    side = builder.sides[clause]
    literals = builder.literals[clause]

    assert len(literals) == 2, "Only 2-clauses can be non-monotone"

    offending = next(literal for literal in literals if literal.positive != side.positive)
    other = next(literal for literal in literals if literal is not offending)
    x = offending.variable

    step = 1 if other.variable > x else -1
    crossing = _crossing(builder, clause, x, x + step)

    # New variables sit between x and the other variable
    if step > 0:
        a = builder.insert(x + 1, "a")
        b = builder.insert(x + 2, "b")
    else:
        a = builder.insert(x, "a")
        b = builder.insert(x, "b")
        a, x = a + 1, x + 2

    for i in crossing:
        builder.replace(i, x, b)
    builder.replace(clause, x, a, positive=side.positive)

    # a = not x and b = not a, on both sides
    polarity = side.positive
    builder.add((Literal(x, polarity), Literal(a, polarity)), side, builder.parents[clause])
    builder.add((Literal(a, polarity), Literal(b, polarity)), side, clause)

    lo, hi = min(x, b), max(x, b)
    parent = builder.enclosing(side.opposite, lo, hi)
    builder.add((Literal(x, not polarity), Literal(a, not polarity)), side.opposite, parent)
    builder.add((Literal(a, not polarity), Literal(b, not polarity)), side.opposite, parent)


@trace(logger)
def to_nvp(formula: PlanarCnf) -> PlanarCnf:
    """Transform a monotone planar formula so every 3-clause has a neighboring variable pair."""
    verdict = check_instance(formula)
    if not verdict.planar or not verdict.monotone:
        raise ValueError(f"Expected a valid monotone planar formula: {verdict.violations[0].message}")

    builder = _Builder(formula)

    # Drop 3-clauses implied by a clause between their neighboring variables
    for index in builder.live():
        pair = builder.neighboring_pair(index)
        if pair is None:
            continue
        inside = [
            i
            for i in builder.live()
            if builder.parents[i] == index and pair[0] <= builder.span(i)[0] and builder.span(i)[1] <= pair[1]
        ]
        if inside:
            builder.removed.add(index)
            for i in builder.live():
                if builder.parents[i] == index:
                    builder.parents[i] = builder.parents[index]

    # Neighboring pairs
    while True:
        pending = [
            i for i in builder.live() if len(builder.literals[i]) == 3 and builder.neighboring_pair(i) is None
        ]
        if not pending:
            break
        _make_neighboring(builder, pending[0])

    # Monotone
    while True:
        pending = [
            i
            for i in builder.live()
            if any(literal.positive != builder.sides[i].positive for literal in builder.literals[i])
        ]
        if not pending:
            break
        _make_monotone(builder, pending[0])

    result = builder.build()

    # Sanity check
    verdict = check_instance(result)
    assert verdict.valid, f"Transformation produced an invalid instance: {verdict.violations}"

    logger.debug(
        f"to_nvp: {len(formula.variables)} -> {len(result.variables)} variables, "
        f"{len(formula.clauses)} -> {len(result.clauses)} clauses"
    )

    return result


def add_root_clauses(formula: PlanarCnf) -> PlanarCnf:
    """Enclose each side under a single 2-clause over two new end variables."""
    builder = _Builder(formula)

    left = builder.insert(0, "l")
    right = builder.insert(len(builder.names), "r")

    roots = {
        side: [i for i in builder.live() if builder.parents[i] is None and builder.sides[i] is side] for side in Side
    }

    for side in Side:
        root = builder.add((Literal(left, side.positive), Literal(right, side.positive)), side, None)
        for i in roots[side]:
            builder.parents[i] = root

    return builder.build()


# ------------------------------------------------------------------------------
# Satisfiability
# ------------------------------------------------------------------------------


def satisfies(formula: PlanarCnf, assignment: Assignment) -> bool:
    """True if assignment satisfies every clause."""
    values = [assignment[name] for name in formula.variables]
    return all(
        any(values[literal.variable] == literal.positive for literal in clause.literals) for clause in formula.clauses
    )


def sat_bruteforce(formula: PlanarCnf, config: PartitionConfig | None = None) -> dict[str, bool] | None:
    """First satisfying assignment in truth table order, trying True before False."""
    # Defaults
    config = default_arg(config, default_factory=load_config)

    n = len(formula.variables)
    if n > config.sat_cap:
        raise CapExceededError(f"Formula has {n} variables, exceeding the truth table cap of {config.sat_cap}")

    for values in product((True, False), repeat=n):
        assignment = dict(zip(formula.variables, values, strict=True))
        if satisfies(formula, assignment):
            return assignment

    return None


def sat_dpll(formula: PlanarCnf) -> dict[str, bool] | None:
    """Find a satisfying assignment by DPLL with unit propagation."""
    signed = [
        [(literal.variable + 1) * (1 if literal.positive else -1) for literal in c.literals] for c in formula.clauses
    ]

    def simplify(clauses: list[list[int]], literal: int) -> list[list[int]] | None:
        reduced = []
        for clause in clauses:
            if literal in clause:
                continue
            rest = [v for v in clause if v != -literal]
            if not rest:
                return None
            reduced.append(rest)
        return reduced

    def search(clauses: list[list[int]], assigned: dict[int, bool]) -> dict[int, bool] | None:
        # Unit propagation
        while True:
            unit = next((c[0] for c in clauses if len(c) == 1), None)
            if unit is None:
                break
            assigned = assigned | {abs(unit): unit > 0}
            simplified = simplify(clauses, unit)
            if simplified is None:
                return None
            clauses = simplified

        if not clauses:
            return assigned

        # Branch on the first open variable
        variable = abs(clauses[0][0])
        for literal in (variable, -variable):
            simplified = simplify(clauses, literal)
            if simplified is None:
                continue
            result = search(simplified, assigned | {variable: literal > 0})
            if result is not None:
                return result

        return None

    solution = search(signed, {})
    if solution is None:
        return None

    # Unconstrained variables default to True
    return {name: solution.get(i + 1, True) for i, name in enumerate(formula.variables)}


# ------------------------------------------------------------------------------
# Text format
# ------------------------------------------------------------------------------


def parse_formula(text: str) -> PlanarCnf:
    """Parse the planar CNF text format."""
    header = None
    names: list[str] | None = None
    clauses = []

    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        try:
            match fields[0]:
                case "p":
                    if len(fields) != 4 or fields[1] != "cnf":
                        raise ValueError("expected 'p cnf <variables> <clauses>'")
                    header = int(fields[2]), int(fields[3])
                case "v":
                    names = fields[1:]
                case "c":
                    side = {"+": "above", "-": "below"}.get(fields[1], fields[1])
                    parent = None if fields[2] == "-" else int(fields[2]) - 1
                    values = [int(v) for v in fields[3:]]
                    if values and values[-1] == 0:
                        values = values[:-1]
                    if 0 in values:
                        raise ValueError("literal 0 only terminates a clause")
                    clauses.append((((abs(v) - 1, v > 0) for v in values), Side(side), parent))
                case _:
                    raise ValueError(f"unknown line type {fields[0]!r}")
        except (IndexError, ValueError) as e:
            raise ValueError(f"Line {number}: {e}") from e

    if header is None:
        raise ValueError("Missing 'p cnf' header")

    n_variables, n_clauses = header
    names = names if names is not None else [f"x{i}" for i in range(1, n_variables + 1)]
    if len(names) != n_variables or len(set(names)) != n_variables:
        raise ValueError(f"Expected {n_variables} distinct variable names, got {names}")
    if len(clauses) != n_clauses:
        raise ValueError(f"Expected {n_clauses} clauses, got {len(clauses)}")

    return create(names, clauses)


def format_formula(formula: PlanarCnf) -> str:
    """Render formula in the planar CNF text format."""
    lines = [
        f"p cnf {len(formula.variables)} {len(formula.clauses)}",
        f"v {' '.join(formula.variables)}",
    ]
    for clause in formula.clauses:
        parent = "-" if clause.parent is None else str(clause.parent + 1)
        literals = " ".join(str((l.variable + 1) * (1 if l.positive else -1)) for l in clause.literals)
        lines.append(f"c {clause.side.value} {parent} {literals} 0")

    return "\n".join(lines) + "\n"


# ------------------------------------------------------------------------------
# Generators
# ------------------------------------------------------------------------------


def random_formula(
    n_variables: int,
    n_clauses: int,
    rng: np.random.Generator,
    three_clause_ratio: float = 0.5,
    max_attempts: int | None = None,
) -> PlanarCnf:
    """Sample a monotone planar formula with up to n_clauses clauses.

    Candidate clauses are accepted only when they nest inside a single gap of
    every same-side clause they overlap, so earlier clauses enclose later ones.
    """
    # Defaults
    max_attempts = default_arg(max_attempts, 50 * n_clauses)

    # Validate
    if n_variables < 2:
        raise ValueError(f"Invalid n_variables={n_variables}: expected at least 2")

    accepted: list[Clause] = []

    for _ in range(max_attempts):
        if len(accepted) >= n_clauses:
            break

        side = Side.ABOVE if rng.random() < 0.5 else Side.BELOW
        size = 3 if n_variables >= 3 and rng.random() < three_clause_ratio else 2
        variables = sorted(int(v) for v in rng.choice(n_variables, size=size, replace=False))
        lo, hi = variables[0], variables[-1]

        parent = None
        compatible = True
        for index, clause in enumerate(accepted):
            if clause.side is not side:
                continue
            p, q = clause.span
            if q <= lo or hi <= p:
                continue
            if not any(g0 <= lo and hi <= g1 for g0, g1 in gaps(clause)):
                compatible = False
                break
            # Later accepted clauses are deeper
            parent = index

        if compatible:
            literals = tuple(Literal(v, side.positive) for v in variables)
            accepted.append(Clause(literals, side, parent))

    return PlanarCnf(
        variables=tuple(f"x{i}" for i in range(1, n_variables + 1)),
        clauses=tuple(accepted),
    )
