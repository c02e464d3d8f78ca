from collections.abc import Callable
from pathlib import Path
from typing import IO, NoReturn, ParamSpec, TypeVar

import click
import numpy as np

import partition_kit as pk
from partition_kit.cnf import PlanarCnf, Side
from partition_kit.config import Direction, PartitionConfig
from partition_kit.fpt import SearchStats, SolveResult
from partition_kit.grid import Cell, GridAssembly, Selection
from partition_kit.oracle import CapExceededError
from partition_kit.tools import Stopwatch

__all__ = [
    "cli",
    "gen_monotone",
    "reduce_sat",
    "render",
    "solve",
    "validate",
]

# Exit codes
FOUND = 0
NONE = 1
INPUT_ERROR = 2
CAP_EXCEEDED = 3

P = ParamSpec("P")
R = TypeVar("R")


def _fail(message: str, code: int) -> NoReturn:
    click.echo(message, err=True)
    raise click.exceptions.Exit(code)


def _guard(f: Callable[P, R], *args: P.args, **kwargs: P.kwargs) -> R:
    """Map library errors to exit codes."""
    try:
        return f(*args, **kwargs)
    except CapExceededError as e:
        _fail(str(e), CAP_EXCEEDED)
    except ValueError as e:
        _fail(str(e), INPUT_ERROR)


def _flip(selection: Selection) -> Selection:
    return frozenset(Cell(x, -y) for x, y in selection)


def _directions(direction: str) -> list[Direction]:
    return [Direction.UP, Direction.DOWN] if direction == "any" else [Direction(direction)]


def _oriented(assembly: GridAssembly, direction: Direction, config: PartitionConfig) -> GridAssembly:
    return assembly if direction is Direction.UP else pk.grid.mirror_vertical(assembly, config)


@click.group("partition-kit")
def cli() -> None:
    """Connected assembly partitioning CLI."""
    pass


# ------------------------------------------------------------------------------
# solve
# ------------------------------------------------------------------------------


def _solve_fpt(
    assembly: GridAssembly,
    directions: list[Direction],
    k: int | None,
    stats: SearchStats,
    config: PartitionConfig,
) -> SolveResult | None:
    if k is None and len(directions) == 2:
        return pk.fpt.solve_any(assembly, stats, config)

    budgets = [k] if k is not None else list(range(1, len(assembly.cells) // 2 + 1))
    for budget in budgets:
        for direction in directions:
            selection = pk.fpt.solve_in_direction(assembly, budget, direction, stats, config)
            if selection is not None:
                return SolveResult(selection, direction, budget, stats)

    return None


def _solve_brute(
    assembly: GridAssembly,
    directions: list[Direction],
    k: int | None,
    stats: SearchStats,
    config: PartitionConfig,
) -> SolveResult | None:
    found = []
    for direction in directions:
        partitions = pk.oracle.enumerate_valid_partitions(_oriented(assembly, direction, config), k, config)
        if partitions:
            selection = partitions[0] if direction is Direction.UP else _flip(partitions[0])
            found.append(SolveResult(selection, direction, len(selection), stats))

    return min(found, key=lambda result: result.k, default=None)


def _solve_monotone(
    assembly: GridAssembly,
    directions: list[Direction],
    stats: SearchStats,
    config: PartitionConfig,
) -> SolveResult | None:
    for direction in directions:
        oriented = _oriented(assembly, direction, config)
        if pk.monotone.is_horizontally_monotone(oriented) is pk.monotone.Monotonicity.NEITHER:
            continue
        selection = pk.monotone.partition(oriented, config)
        selection = selection if direction is Direction.UP else _flip(selection)
        return SolveResult(selection, direction, len(selection), stats)

    raise ValueError("Assembly is not horizontally monotone")


def _solve_auto(
    assembly: GridAssembly,
    directions: list[Direction],
    k: int | None,
    stats: SearchStats,
    config: PartitionConfig,
) -> SolveResult | None:
    if len(assembly.cells) >= 2:
        try:
            return _solve_monotone(assembly, directions, stats, config)
        except ValueError:
            pass

    result = _solve_fpt(assembly, directions, k, stats, config)
    if result is None and len(assembly.cells) <= config.oracle_cap:
        result = _solve_brute(assembly, directions, k, stats, config)

    return result


@cli.command("solve")
@click.argument("instance", type=click.File("r"))
@click.option("--algo", type=click.Choice(["fpt", "brute", "monotone", "auto"]), default="auto", show_default=True)
@click.option("--k", "k", type=int, default=None, help="Largest subassembly size to search for.")
@click.option("--direction", type=click.Choice(["+y", "-y", "any"]), default="any", show_default=True)
@click.option("--workers", type=int, default=None, help="Solver threads.")
@click.option("--json", "as_json", is_flag=True, help="Print the result as JSON.")
@click.option("--svg", "svg_path", type=click.Path(dir_okay=False, path_type=Path), default=None)
@click.option("--deterministic", is_flag=True, help="Omit timings from JSON output.")
def solve(
    instance: IO[str],
    algo: str,
    k: int | None,
    direction: str,
    workers: int | None,
    as_json: bool,
    svg_path: Path | None,
    deterministic: bool,
) -> None:
    """Find a connected partition of an assembly."""
    overrides = {} if workers is None else {"workers": workers}
    config = _guard(pk.config.load_config, **overrides)

    document = _guard(pk.instance.parse_instance, instance.read(), config)
    assembly = document.assembly
    if not assembly.connected:
        _fail("Assembly is not connected", INPUT_ERROR)

    directions = _directions(direction)
    stats = SearchStats()
    stopwatch = Stopwatch()

    match algo:
        case "fpt":
            result = _guard(_solve_fpt, assembly, directions, k, stats, config)
        case "brute":
            result = _guard(_solve_brute, assembly, directions, k, stats, config)
        case "monotone":
            result = _guard(_solve_monotone, assembly, directions, stats, config)
        case _:
            result = _guard(_solve_auto, assembly, directions, k, stats, config)

    stats.elapsed_ms = stopwatch.elapsed_ms

    if as_json:
        click.echo(pk.instance.emit_result(result, stats, directions[0], timing=not deterministic))
    elif result is None:
        click.echo(f"No connected partition ({algo}, {stats.nodes} nodes)")
    else:
        cells = " ".join(f"{x},{y}" for x, y in sorted(result.selection))
        click.echo(f"Found {len(result.selection)} cells translating {result.direction.value}: {cells}")

    if svg_path is not None:
        selection = None if result is None else result.selection
        svg_path.write_text(pk.render.render_svg(assembly, selection, config))

    if result is None:
        raise click.exceptions.Exit(NONE)


# ------------------------------------------------------------------------------
# validate
# ------------------------------------------------------------------------------


@cli.command("validate")
@click.argument("instance", type=click.File("r"))
@click.option("--partition", "partition_file", type=click.File("r"), required=True, help="Cells translating away.")
@click.option("--direction", type=click.Choice(["+y", "-y"]), default="+y", show_default=True)
def validate(instance: IO[str], partition_file: IO[str], direction: str) -> None:
    """Check a proposed connected partition."""
    document = _guard(pk.instance.parse_instance, instance.read())
    selection = _guard(pk.instance.parse_instance, partition_file.read()).assembly.cells

    assembly = document.assembly
    if direction == Direction.DOWN.value:
        assembly = pk.grid.mirror_vertical(assembly)
        selection = _flip(selection)

    verdict = pk.grid.validate_partition(assembly, selection)
    if verdict.valid:
        click.echo("valid")
        return

    assert verdict.reason is not None
    witness = " ".join(f"{x},{y}" for x, y in verdict.witness)
    click.echo(f"invalid: {verdict.reason.value} {witness}".rstrip())
    raise click.exceptions.Exit(NONE)


# ------------------------------------------------------------------------------
# reduce-sat
# ------------------------------------------------------------------------------


def _has_single_roots(formula: PlanarCnf) -> bool:
    for side in Side:
        roots = [c for c in formula.clauses if c.parent is None and c.side is side]
        if len(roots) != 1 or len(roots[0].literals) != 2:
            return False
    return True


@cli.command("reduce-sat")
@click.argument("formula_file", type=click.File("r"))
@click.option("--stage", type=click.Choice(["nvp", "roots", "assembly"]), default="assembly", show_default=True)
@click.option("--svg", "svg_path", type=click.Path(dir_okay=False, path_type=Path), default=None)
def reduce_sat(formula_file: IO[str], stage: str, svg_path: Path | None) -> None:
    """Transform a monotone planar formula, optionally down to an assembly."""
    formula = _guard(pk.cnf.parse_formula, formula_file.read())

    formula = _guard(pk.cnf.to_nvp, formula)
    if stage == "nvp":
        click.echo(pk.cnf.format_formula(formula), nl=False)
        return

    if stage == "roots" or not _has_single_roots(formula):
        formula = pk.cnf.add_root_clauses(formula)
    if stage == "roots":
        click.echo(pk.cnf.format_formula(formula), nl=False)
        return

    layout = _guard(pk.gadgets.compile_to_assembly, formula)
    click.echo(pk.instance.format_instance(pk.instance.layout_document(layout)), nl=False)

    if svg_path is not None:
        assignment = pk.cnf.sat_dpll(formula)
        selection = None if assignment is None else pk.gadgets.assignment_to_partition(layout, assignment)
        svg_path.write_text(pk.render.render_svg(layout, selection))


# ------------------------------------------------------------------------------
# render
# ------------------------------------------------------------------------------


@cli.command("render")
@click.argument("instance", type=click.File("r"))
@click.option("--partition", "partition_file", type=click.File("r"), default=None, help="Cells to lift.")
@click.option("--output", type=click.Path(dir_okay=False, path_type=Path), default=None)
def render(instance: IO[str], partition_file: IO[str] | None, output: Path | None) -> None:
    """Render an instance as SVG."""
    document = _guard(pk.instance.parse_instance, instance.read())

    selection = None
    if partition_file is not None:
        selection = _guard(pk.instance.parse_instance, partition_file.read()).assembly.cells

    labels = {cell: _guard(pk.gadgets.parse_role, label) for cell, label in document.labels.items()}

    svg = pk.render.render_svg(document.assembly, selection, labels=labels)

    if output is None:
        click.echo(svg, nl=False)
    else:
        output.write_text(svg)


# ------------------------------------------------------------------------------
# gen-monotone
# ------------------------------------------------------------------------------


@cli.command("gen-monotone")
@click.option("--cells", "n_cells", type=int, required=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--grid", "as_grid", is_flag=True, help="Print an ASCII grid instead of a cell list.")
def gen_monotone(n_cells: int, seed: int, as_grid: bool) -> None:
    """Generate a horizontally monotone assembly."""
    assembly = _guard(pk.monotone.generate, n_cells, np.random.default_rng(seed))

    if as_grid:
        click.echo(pk.instance.format_grid(assembly), nl=False)
    else:
        document = pk.instance.InstanceDocument(assembly, {}, {"seed": str(seed)}, pk.instance.InstanceFormat.CELLS)
        click.echo(pk.instance.format_instance(document), nl=False)
