import numpy as np
import pytest

import partition_kit as pk
from partition_kit.cnf import Literal, PlanarCnf, Side
from partition_kit.oracle import CapExceededError


def test_check_instance(phi1: PlanarCnf):
    #
    # Givens
    #

    # A mixed clause above the row and a 3-clause without neighbors
    mixed = pk.cnf.create(["x1", "x2"], [(((0, True), (1, False)), Side.ABOVE, None)])
    spread = pk.cnf.create([f"x{i}" for i in range(1, 6)], [(((0, True), (2, True), (4, True)), Side.ABOVE, None)])

    #
    # Whens
    #

    # I check each formula
    valid = pk.cnf.check_instance(phi1)
    non_monotone = pk.cnf.check_instance(mixed)
    no_pair = pk.cnf.check_instance(spread)

    #
    # Thens
    #

    # phi1 should be a valid instance
    assert valid.valid

    # mixed should fail monotonicity only
    assert [v.kind for v in non_monotone.violations] == ["monotone"]
    assert non_monotone.planar
    assert not non_monotone.monotone

    # spread should lack a neighboring pair
    assert [v.kind for v in no_pair.violations] == ["nvp"]
    assert not no_pair.nvp


def test_check_instance_embedding():
    #
    # Givens
    #

    # Siblings that overlap and a child straddling two gaps
    overlapping = pk.cnf.create(
        ["x1", "x2", "x3"],
        [
            (((0, True), (2, True)), Side.ABOVE, None),
            (((1, True), (2, True)), Side.ABOVE, None),
        ],
    )
    straddling = pk.cnf.create(
        ["x1", "x2", "x3", "x4"],
        [
            (((0, True), (1, True), (3, True)), Side.ABOVE, None),
            (((0, True), (2, True)), Side.ABOVE, 0),
        ],
    )

    #
    # Thens
    #

    # Both should fail planarity
    assert not pk.cnf.check_instance(overlapping).planar
    assert not pk.cnf.check_instance(straddling).planar


def test_nv_gap():
    #
    # Givens
    #

    # A 3-clause with a child between its neighboring variables
    formula = pk.cnf.create(
        ["x1", "x2", "x3", "x4"],
        [
            (((0, True), (1, True), (3, True)), Side.ABOVE, None),
            (((0, True), (1, True)), Side.ABOVE, 0),
            (((0, False), (1, False)), Side.BELOW, None),
            (((2, False), (3, False)), Side.BELOW, None),
        ],
    )

    #
    # Whens
    #

    # I check and transform it
    verdict = pk.cnf.check_instance(formula)
    result = pk.cnf.to_nvp(formula)

    #
    # Thens
    #

    # The child should be reported
    assert [(v.kind, v.clause) for v in verdict.violations] == [("nv-gap", 1)]

    # The implied 3-clause should be dropped
    assert len(result.clauses) == 3
    assert all(len(clause.literals) == 2 for clause in result.clauses)
    assert pk.cnf.check_instance(result).valid


def test_to_nvp_unchanged(phi1: PlanarCnf, phi3: PlanarCnf):
    #
    # Thens
    #

    # Valid instances should pass through
    assert pk.cnf.to_nvp(phi1) == phi1
    assert pk.cnf.to_nvp(phi3) == phi3


def test_to_nvp():
    #
    # Givens
    #

    # A 3-clause without neighbors and negative clauses over every variable
    formula = pk.cnf.create(
        [f"x{i}" for i in range(1, 6)],
        [
            (((0, True), (2, True), (4, True)), Side.ABOVE, None),
            (((0, False), (1, False)), Side.BELOW, None),
            (((2, False), (4, False)), Side.BELOW, None),
        ],
    )

    #
    # Whens
    #

    # I transform it
    result = pk.cnf.to_nvp(formula)

    #
    # Thens
    #

    # result should be a valid instance
    assert pk.cnf.check_instance(result).valid

    # result should keep the original variables in order
    assert [name for name in result.variables if name.startswith("x")] == list(formula.variables)

    # Satisfiability should be preserved
    assert (pk.cnf.sat_bruteforce(formula) is None) == (pk.cnf.sat_dpll(result) is None)


def test_to_nvp_invalid():
    #
    # Givens
    #

    # A non monotone formula
    formula = pk.cnf.create(["x1", "x2"], [(((0, True), (1, False)), Side.ABOVE, None)])

    #
    # Thens
    #

    # It should be rejected
    with pytest.raises(ValueError, match="monotone planar"):
        pk.cnf.to_nvp(formula)


def test_equisatisfiable(rng: np.random.Generator):
    for _ in range(100):
        #
        # Givens
        #

        # A random monotone planar formula
        n_variables = int(rng.integers(2, 16))
        formula = pk.cnf.random_formula(n_variables, int(rng.integers(1, 12)), rng)

        #
        # Whens
        #

        # I transform it and add roots
        result = pk.cnf.add_root_clauses(pk.cnf.to_nvp(formula))

        #
        # Thens
        #

        # result should be a valid instance
        assert pk.cnf.check_instance(result).valid

        # Truth tables should agree on satisfiability
        expected = pk.cnf.sat_bruteforce(formula)
        actual = pk.cnf.sat_dpll(result)
        assert (expected is None) == (actual is None), pk.cnf.format_formula(formula)

        # Any model found should satisfy the result
        if actual is not None:
            assert pk.cnf.satisfies(result, actual)


def test_add_root_clauses(phi3: PlanarCnf):
    #
    # Givens
    #

    # A formula with nothing above the row
    below_only = pk.cnf.create(["x1", "x2"], [(((0, False), (1, False)), Side.BELOW, None)])

    #
    # Whens
    #

    # I add roots to both
    rooted = pk.cnf.add_root_clauses(below_only)
    rooted3 = pk.cnf.add_root_clauses(phi3)

    #
    # Thens
    #

    # New variables should sit at both ends
    assert rooted.variables == ("l1", "x1", "x2", "r1")

    # Each side should have a single 2-clause root over the end variables
    for formula in (rooted, rooted3):
        assert pk.cnf.check_instance(formula).valid
        for side in Side:
            roots = [c for c in formula.clauses if c.parent is None and c.side is side]
            assert len(roots) == 1
            assert roots[0].literals == (
                Literal(0, side.positive),
                Literal(len(formula.variables) - 1, side.positive),
            )

    # Both negative clauses of phi3 should hang from the new negative root
    kids = pk.cnf.children(rooted3)
    below_root = next(i for i in kids[None] if rooted3.clauses[i].side is Side.BELOW)
    assert len(kids[below_root]) == 2


def test_sat(phi1: PlanarCnf, phi2: PlanarCnf):
    #
    # Thens
    #

    # phi1 should take the first model in truth table order
    assert pk.cnf.sat_bruteforce(phi1) == {"x1": True, "x2": False}

    # phi2 should be unsatisfiable
    assert pk.cnf.sat_bruteforce(phi2) is None
    assert pk.cnf.sat_dpll(phi2) is None

    # dpll should find a model of phi1
    model = pk.cnf.sat_dpll(phi1)
    assert model is not None
    assert pk.cnf.satisfies(phi1, model)

    # Large formulas should exceed the truth table cap
    wide = pk.cnf.random_formula(25, 5, np.random.default_rng(0))
    with pytest.raises(CapExceededError):
        pk.cnf.sat_bruteforce(wide)


def test_formula_text(phi2: PlanarCnf):
    #
    # Givens
    #

    # A formula in text form
    text = "\n".join(
        [
            "# two variables",
            "p cnf 2 2",
            "c + - 1 2 0",
            "c below - -1 -2",
        ]
    )

    #
    # Whens
    #

    # I parse it
    formula = pk.cnf.parse_formula(text)

    #
    # Thens
    #

    # formula should have default names and both clauses
    assert formula.variables == ("x1", "x2")
    assert formula.clauses[0].side is Side.ABOVE
    assert formula.clauses[1].literals == (Literal(0, False), Literal(1, False))

    # Formatting and parsing should preserve parents
    assert pk.cnf.parse_formula(pk.cnf.format_formula(phi2)) == phi2


@pytest.mark.parametrize(
    ("text", "message"),
    [
        ("c + - 1 2 0", "Missing 'p cnf' header"),
        ("p cnf 2 1\nc + - 1 0 2", "Line 2"),
        ("p cnf 2 2\nc + - 1 2 0", "Expected 2 clauses"),
        ("p cnf 2 1\nq 1 2", "unknown line type"),
    ],
)
def test_formula_text_invalid(text: str, message: str):
    #
    # Thens
    #

    # Malformed text should be rejected
    with pytest.raises(ValueError, match=message):
        pk.cnf.parse_formula(text)
