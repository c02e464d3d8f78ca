import json
import logging

import pytest

import partition_kit as pk
from partition_kit.cnf import PlanarCnf
from partition_kit.config import Direction
from partition_kit.fpt import SearchStats, SolveResult
from partition_kit.grid import Cell, GridAssembly
from partition_kit.instance import InstanceFormat


def test_parse_cells():
    #
    # Whens
    #

    # I parse a cell list with metadata, a label and comments
    document = pk.instance.parse_instance("m name domino\n# bottom\n0 0\n0 1  # top\nl 0 1 a(0)\n")

    #
    # Thens
    #

    # document should hold a vertical domino
    assert document.format is InstanceFormat.CELLS
    assert document.assembly.cells == {Cell(0, 0), Cell(0, 1)}
    assert document.metadata == {"name": "domino"}
    assert document.labels == {Cell(0, 1): "a(0)"}


def test_parse_grid():
    #
    # Whens
    #

    # I parse ASCII grids
    domino = pk.instance.parse_instance("#\n#\n")
    corner = pk.instance.parse_instance("#.\n##\n")

    #
    # Thens
    #

    # The top line should be the highest row
    assert domino.format is InstanceFormat.GRID
    assert domino.assembly.cells == {Cell(0, 0), Cell(0, 1)}
    assert corner.assembly.cells == {Cell(0, 1), Cell(0, 0), Cell(1, 0)}


def test_parse_duplicates(caplog: pytest.LogCaptureFixture):
    #
    # Whens
    #

    # I parse a list repeating a cell
    with caplog.at_level(logging.WARNING, logger="partition_kit.instance"):
        document = pk.instance.parse_instance("0 0\n0 0\n")

    #
    # Thens
    #

    # The duplicate should be dropped with a warning
    assert document.assembly.cells == {Cell(0, 0)}
    assert any("duplicate" in record.message for record in caplog.records)


@pytest.mark.parametrize(
    ("text", "message"),
    [
        ("", "Empty instance"),
        ("# nothing\n", "Empty instance"),
        ("0 0\n0 x\n", "Line 2"),
        ("0 0 0\n", "Line 1"),
        ("0 0\nl 0 0\n", "Line 2"),
        ("0 0\nl 5 5 a(0)\n", "outside the instance"),
    ],
)
def test_parse_invalid(text: str, message: str):
    #
    # Thens
    #

    # Malformed instances should be rejected
    with pytest.raises(ValueError, match=message):
        pk.instance.parse_instance(text)


def test_format(c_shape: GridAssembly):
    #
    # Givens
    #

    # A labelled document
    document = pk.instance.InstanceDocument(c_shape, {Cell(1, 0): "a(0)"}, {"name": "c"}, InstanceFormat.CELLS)

    #
    # Whens
    #

    # I format it as cells and as a grid
    text = pk.instance.format_instance(document)
    grid = pk.instance.format_grid(c_shape)

    #
    # Thens
    #

    # text should list metadata, cells and labels
    assert text == "m name c\n1 0\n1 2\n2 0\n2 1\n2 2\nl 1 0 a(0)\n"

    # grid should draw the C top row first
    assert grid == "##\n.#\n##\n"

    # Both should parse back to the same cells
    assert pk.instance.parse_instance(text).assembly.cells == c_shape.cells
    assert pk.instance.parse_instance(grid).assembly.cells == c_shape.cells


def test_layout_document(phi1: PlanarCnf):
    #
    # Givens
    #

    # I compiled phi1
    layout = pk.gadgets.compile_to_assembly(phi1)

    #
    # Whens
    #

    # I write it out and read it back
    document = pk.instance.layout_document(layout, "phi1")
    parsed = pk.instance.parse_instance(pk.instance.format_instance(document))

    #
    # Thens
    #

    # Metadata should describe the formula
    assert parsed.metadata == {"name": "phi1", "variables": "2", "clauses": "2"}

    # Every label should survive as a role
    assert {cell: pk.gadgets.parse_role(label) for cell, label in parsed.labels.items()} == layout.labels


def test_emit_result():
    #
    # Givens
    #

    # A solved domino and an empty search
    stats = SearchStats(nodes=1, seeds=1, elapsed_ms=1.23456)
    found = SolveResult(frozenset({Cell(0, 1)}), Direction.UP, 1, stats)

    #
    # Whens
    #

    # I emit both without timings
    hit = pk.instance.emit_result(found, stats, timing=False)
    miss = pk.instance.emit_result(None, SearchStats(), Direction.DOWN, timing=False)

    #
    # Thens
    #

    # hit should use the fixed field order
    assert hit == (
        '{"exists":true,"direction":"+y","subassembly":[[0,1]],"k":1,"stats":{"nodes":1,"seeds":1,"elapsed_ms":0}}'
    )

    # miss should report the requested direction
    assert json.loads(miss) == {
        "exists": False,
        "direction": "-y",
        "subassembly": [],
        "k": None,
        "stats": {"nodes": 0, "seeds": 0, "elapsed_ms": 0},
    }

    # Timings should be rounded when kept
    assert json.loads(pk.instance.emit_result(found, stats))["stats"]["elapsed_ms"] == 1.235
