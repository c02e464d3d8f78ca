import itertools

import numpy as np
import pytest

import partition_kit as pk
from partition_kit.cnf import PlanarCnf, Side
from partition_kit.config import Direction
from partition_kit.gadgets import CutKind, GadgetLayout, Role, RoleKind
from partition_kit.grid import Cell, FailureReason


def _kinds(layout: GadgetLayout) -> set[RoleKind]:
    return {role.kind for role in layout.labels.values()}


def _cells(layout: GadgetLayout, role: Role) -> list[Cell]:
    return [cell for cell, r in layout.labels.items() if r == role]


def _models(formula: PlanarCnf) -> list[dict[str, bool]]:
    models = []
    for values in itertools.product((True, False), repeat=len(formula.variables)):
        assignment = dict(zip(formula.variables, values, strict=True))
        if pk.cnf.satisfies(formula, assignment):
            models.append(assignment)
    return models


def test_compile_phi1(phi1: PlanarCnf):
    #
    # Whens
    #

    # I compile phi1
    layout = pk.gadgets.compile_to_assembly(phi1)

    #
    # Thens
    #

    # layout should be a connected assembly covering every label
    assert layout.assembly.connected
    assert layout.assembly.cells == set(layout.labels)

    # 2-clauses should only have parts a and b
    assert RoleKind.C not in _kinds(layout)
    assert RoleKind.D not in _kinds(layout)

    # Both variables should have a box with distinguished cells
    for v in range(2):
        assert _cells(layout, Role(RoleKind.VARIABLE, v))
        assert (CutKind.S, v) in layout.cuts
        assert (CutKind.S_PRIME, v) in layout.cuts

    # Positive parts should sit above the row and negative parts below it
    assert all(cell.y > 0 for cell in _cells(layout, Role(RoleKind.A, 0)))
    assert all(cell.y < 0 for cell in _cells(layout, Role(RoleKind.A, 1)))

    # layout should verify
    assert pk.gadgets.verify_layout(layout).valid


def test_assignment_to_partition_phi1(phi1: PlanarCnf):
    #
    # Givens
    #

    # I compiled phi1
    layout = pk.gadgets.compile_to_assembly(phi1)

    # phi1 has exactly the two models with one true variable
    models = _models(phi1)
    assert sorted(sum(m.values()) for m in models) == [1, 1]

    for assignment in models:
        #
        # Whens
        #

        # I build the partition of a satisfying assignment
        selection = pk.gadgets.assignment_to_partition(layout, assignment)

        #
        # Thens
        #

        # selection should be a connected partition
        verdict = pk.grid.validate_partition(layout.assembly, selection)
        assert verdict.valid, verdict

        # True variables should move up with the top blocker
        for v, name in enumerate(phi1.variables):
            box = _cells(layout, Role(RoleKind.VARIABLE, v))
            assert all((cell in selection) == assignment[name] for cell in box)

    # Non satisfying and partial assignments should be rejected
    with pytest.raises(ValueError, match="does not satisfy"):
        pk.gadgets.assignment_to_partition(layout, {"x1": True, "x2": True})
    with pytest.raises(ValueError, match="missing"):
        pk.gadgets.assignment_to_partition(layout, {"x1": True})


def test_compile_phi2(phi2: PlanarCnf):
    #
    # Whens
    #

    # I compile the unsatisfiable phi2
    layout = pk.gadgets.compile_to_assembly(phi2)

    #
    # Thens
    #

    # layout should verify
    assert pk.gadgets.verify_layout(layout).valid

    # Children should hang from their parent's b through connectors
    assert _cells(layout, Role(RoleKind.CONNECTOR, 0, 2))
    assert _cells(layout, Role(RoleKind.CONNECTOR, 2, None))

    # phi2 should have no model
    assert pk.cnf.sat_dpll(phi2) is None


def test_blocker_moves_whole_phi2(phi2: PlanarCnf):
    #
    # Givens
    #

    # I compiled the unsatisfiable phi2
    layout = pk.gadgets.compile_to_assembly(phi2)
    assembly = layout.assembly

    # Each blocker alone is larger than the budgets below
    for kind in (RoleKind.BLOCKER_TOP, RoleKind.BLOCKER_BOTTOM):
        assert len(_cells(layout, Role(kind))) > 3

    #
    # Thens
    #

    # No single cell should slide out
    for cell in assembly.cells:
        assert not pk.grid.validate_partition(assembly, {cell}).valid, cell

    # Small budgets should find nothing in either direction
    for k in range(1, 4):
        assert pk.fpt.solve(assembly, k) is None
        assert pk.fpt.solve_in_direction(assembly, k, Direction.DOWN) is None


def test_blocker_lifts_as_one_piece(phi1: PlanarCnf):
    #
    # Givens
    #

    # I compiled phi1
    layout = pk.gadgets.compile_to_assembly(phi1)
    assembly = layout.assembly
    blocker = set(_cells(layout, Role(RoleKind.BLOCKER_TOP)))
    roof = {cell for cell in blocker if cell.y == max(c.y for c in blocker)}

    #
    # Thens
    #

    # Every column should end in the roof
    for x, ys in assembly.columns.items():
        assert Cell(x, ys[-1]) in roof

    # Lifting the roof alone should strand the pendant
    verdict = pk.grid.validate_partition(assembly, roof)
    assert verdict.reason is FailureReason.COMPLEMENT_DISCONNECTED

    # Lifting the whole blocker should leave the rest hanging from the root connector
    verdict = pk.grid.validate_partition(assembly, blocker)
    assert verdict.valid, verdict


def test_compile_phi3(phi3: PlanarCnf):
    #
    # Givens
    #

    # phi3 with single roots
    formula = pk.cnf.add_root_clauses(phi3)
    clause = next(i for i, c in enumerate(formula.clauses) if len(c.literals) == 3)

    #
    # Whens
    #

    # I compile it
    layout = pk.gadgets.compile_to_assembly(formula)

    #
    # Thens
    #

    # The 3-clause should have all four parts and a cut cell in c
    for kind in (RoleKind.A, RoleKind.B, RoleKind.C, RoleKind.D):
        assert _cells(layout, Role(kind, clause))
    assert (CutKind.S_C, clause) in layout.cuts

    # layout should verify
    assert pk.gadgets.verify_layout(layout).valid

    # The lone case of x1 lifted without x2 and x3 should be among the models
    models = _models(formula)
    assert {"l1": True, "x1": True, "x2": False, "x3": False, "r1": False} in models

    pair = pk.cnf.neighboring_pair(formula.clauses[clause])
    assert pair is not None

    for assignment in models:
        #
        # Whens
        #

        # I build the partition of the model
        selection = pk.gadgets.assignment_to_partition(layout, assignment)

        #
        # Thens
        #

        # c and d should move up exactly when a neighboring variable does
        lifted = any(assignment[formula.variables[v]] for v in pair)
        for kind in (RoleKind.C, RoleKind.D):
            assert all((cell in selection) == lifted for cell in _cells(layout, Role(kind, clause)))

        # selection should be a connected partition
        verdict = pk.grid.validate_partition(layout.assembly, selection)
        assert verdict.valid, (assignment, verdict)


def test_compile_invalid(phi3: PlanarCnf):
    #
    # Givens
    #

    # A formula whose variables only occur positively
    lonely = pk.cnf.add_root_clauses(pk.cnf.create(["x1", "x2"], [(((0, True), (1, True)), Side.ABOVE, None)]))

    #
    # Thens
    #

    # Several roots on a side should be rejected
    with pytest.raises(ValueError, match="single 2-clause root"):
        pk.gadgets.compile_to_assembly(phi3)

    # Variables missing a polarity should be rejected
    with pytest.raises(ValueError, match="positive and a negative"):
        pk.gadgets.compile_to_assembly(lonely)


def test_verify_connector_deleted(phi1: PlanarCnf):
    #
    # Givens
    #

    # I compiled phi1
    layout = pk.gadgets.compile_to_assembly(phi1)

    # I delete the connector cell next to the top blocker
    connector = _cells(layout, Role(RoleKind.CONNECTOR, 0, None))
    top = max(connector, key=lambda cell: cell.y)
    mutated = layout._replace(assembly=pk.grid.build_assembly(layout.assembly.cells - {top}))

    #
    # Whens
    #

    # I verify the mutated layout
    verdict = pk.gadgets.verify_layout(mutated)

    #
    # Thens
    #

    # The broken connection should be reported
    assert not verdict.valid
    assert any(v.kind == "connection" and v.role == Role(RoleKind.CONNECTOR, 0, None) for v in verdict.violations)


def test_verify_blocker_narrowed(phi1: PlanarCnf):
    #
    # Givens
    #

    # I compiled phi1
    layout = pk.gadgets.compile_to_assembly(phi1)

    # I drop the rightmost roof cell of the top blocker
    blocker = _cells(layout, Role(RoleKind.BLOCKER_TOP))
    end = max(blocker, key=lambda cell: (cell.y, cell.x))
    mutated = layout._replace(assembly=pk.grid.build_assembly(layout.assembly.cells - {end}))

    #
    # Whens
    #

    # I verify the mutated layout
    verdict = pk.gadgets.verify_layout(mutated)

    #
    # Thens
    #

    # The column ending below the roof should be reported
    assert any(v.kind == "blocker-span" and v.role == Role(RoleKind.BLOCKER_TOP) for v in verdict.violations)


def test_verify_blocker_without_arm(phi1: PlanarCnf):
    #
    # Givens
    #

    # I compiled phi1
    layout = pk.gadgets.compile_to_assembly(phi1)

    # I cut the bottom blocker's pendant back so it no longer reaches over the ledge
    blocker = _cells(layout, Role(RoleKind.BLOCKER_BOTTOM))
    roof = min(cell.y for cell in blocker)
    row = min(cell.x for cell in layout.assembly.cells if layout.labels[cell].kind is RoleKind.VARIABLE)
    arm = {cell for cell in blocker if cell.y == roof + 4 and cell.x < row}
    mutated = layout._replace(assembly=pk.grid.build_assembly(layout.assembly.cells - arm))

    #
    # Whens
    #

    # I verify the mutated layout
    verdict = pk.gadgets.verify_layout(mutated)

    #
    # Thens
    #

    # The arm should have been found
    assert len(arm) == 4

    # Only the rigidity of the bottom blocker should be reported
    assert [(v.kind, v.role) for v in verdict.violations] == [("blocker-rigid", Role(RoleKind.BLOCKER_BOTTOM))]
    assert "under the ledge" in verdict.violations[0].message


def test_verify_cap_removed(phi1: PlanarCnf):
    #
    # Givens
    #

    # I compiled phi1
    layout = pk.gadgets.compile_to_assembly(phi1)

    # I remove the cell of b(0) just above s_b
    s_b = layout.cuts[CutKind.S_B, 0]
    cap = Cell(s_b.x, s_b.y + 1)
    assert layout.labels[cap] == Role(RoleKind.B, 0)
    mutated = layout._replace(assembly=pk.grid.build_assembly(layout.assembly.cells - {cap}))

    #
    # Whens
    #

    # I verify the mutated layout
    verdict = pk.gadgets.verify_layout(mutated)

    #
    # Thens
    #

    # b(0) should fall one piece short around s_b and lose its capped piece
    kinds = {v.kind for v in verdict.violations if v.role == Role(RoleKind.B, 0)}
    assert kinds == {"cut", "hook"}


def test_pipeline(rng: np.random.Generator):
    compiled = 0
    for _ in range(50):
        #
        # Givens
        #

        # A random formula transformed to a compilable instance
        formula = pk.cnf.random_formula(int(rng.integers(2, 5)), int(rng.integers(2, 7)), rng)
        formula = pk.cnf.add_root_clauses(pk.cnf.to_nvp(formula))

        # Skip formulas with a variable missing a polarity
        sides = [set() for _ in formula.variables]
        for clause in formula.clauses:
            for literal in clause.literals:
                sides[literal.variable].add(clause.side)
        if any(len(s) != 2 for s in sides):
            continue

        #
        # Whens
        #

        # I compile it
        layout = pk.gadgets.compile_to_assembly(formula)
        compiled += 1

        #
        # Thens
        #

        # layout should verify
        assert pk.gadgets.verify_layout(layout).valid

        # A model should give a connected partition
        assignment = pk.cnf.sat_dpll(formula)
        if assignment is not None:
            selection = pk.gadgets.assignment_to_partition(layout, assignment)
            assert pk.grid.validate_partition(layout.assembly, selection).valid

    # Some formulas should have compiled
    assert compiled > 0


@pytest.mark.parametrize(
    ("text", "expected"),
    [
        ("a(3)", Role(RoleKind.A, 3)),
        ("variable(0)", Role(RoleKind.VARIABLE, 0)),
        ("connector(-,2)", Role(RoleKind.CONNECTOR, 2, None)),
        ("connector(1,4)", Role(RoleKind.CONNECTOR, 4, 1)),
        ("blocker-top", Role(RoleKind.BLOCKER_TOP)),
    ],
)
def test_parse_role(text: str, expected: Role):
    #
    # Thens
    #

    # text should parse to the role and back
    assert pk.gadgets.parse_role(text) == expected
    assert expected.label == text


@pytest.mark.parametrize("text", ["z(1)", "a(-)", "connector(3)", "a(1,2)", "a 1"])
def test_parse_role_invalid(text: str):
    #
    # Thens
    #

    # Malformed labels should be rejected
    with pytest.raises(ValueError):
        pk.gadgets.parse_role(text)
