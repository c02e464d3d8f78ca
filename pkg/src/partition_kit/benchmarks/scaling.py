"""Monotone solver correctness sweep and running time scaling."""

from collections.abc import Sequence
import logging

import numpy as np
from pandas import DataFrame
from tqdm.auto import tqdm

import partition_kit as pk
from partition_kit.config import PartitionConfig, load_config
from partition_kit.tools import Stopwatch, default_arg

__all__ = [
    "check_monotone",
    "time_monotone",
]

logger = logging.getLogger(__name__)


def check_monotone(
    n_instances: int,
    max_cells: int,
    seed: int | None = None,
    config: PartitionConfig | None = None,
) -> DataFrame:
    """Validate the monotone solver on random generated assemblies."""
    # Defaults
    seed = default_arg(seed, 0)
    config = default_arg(config, default_factory=load_config)

    rng = np.random.default_rng(seed)

    rows = []
    for _ in tqdm(range(n_instances), desc="monotone"):
        n_cells = int(rng.integers(2, max_cells + 1))
        assembly = pk.monotone.generate(n_cells, rng, config)
        selection = pk.monotone.partition(assembly, config)
        verdict = pk.grid.validate_partition(assembly, selection)
        rows.append(
            {
                "cells": n_cells,
                "selected": len(selection),
                "valid": verdict.valid,
                "reason": None if verdict.reason is None else verdict.reason.value,
            }
        )

    return DataFrame(rows)


def time_monotone(
    sizes: Sequence[int] | None = None,
    repeats: int | None = None,
    seed: int | None = None,
    bound: float | None = None,
    config: PartitionConfig | None = None,
) -> DataFrame:
    """Median monotone solve time per size with the ratio to the previous size.

    within_bound flags sizes whose time per cell stays within bound times the
    smallest size's time per cell.
    """
    # Defaults
    sizes = default_arg(sizes, [10_000 * 2**i for i in range(8)])
    repeats = default_arg(repeats, 5)
    seed = default_arg(seed, 0)
    bound = default_arg(bound, 2.5)
    config = default_arg(config, default_factory=load_config)

    # Validate
    if repeats < 1:
        raise ValueError(f"Invalid repeats={repeats}: expected a positive integer")

    rng = np.random.default_rng(seed)

    rows = []
    for n_cells in tqdm(sizes, desc="scaling"):
        assembly = pk.monotone.generate(n_cells, rng, config)

        # Warm up caches before timing
        pk.monotone.partition(assembly, config)

        timings = []
        for _ in range(repeats):
            stopwatch = Stopwatch()
            pk.monotone.partition(assembly, config)
            timings.append(stopwatch.elapsed_ms)
        rows.append({"cells": n_cells, "elapsed_ms": float(np.median(timings))})

    data = DataFrame(rows)
    data["ratio"] = data["elapsed_ms"] / data["elapsed_ms"].shift(1)
    data["us_per_cell"] = 1000 * data["elapsed_ms"] / data["cells"]
    data["within_bound"] = data["us_per_cell"] <= bound * data["us_per_cell"].iloc[0]

    logger.info(f"Monotone scaling ratios: {data['ratio'].dropna().round(2).tolist()}")

    return data
