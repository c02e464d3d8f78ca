from . import (
    benchmarks,
    cnf,
    config,
    fpt,
    gadgets,
    grid,
    instance,
    monotone,
    oracle,
    render,
    shadow,
    tools,
)

__all__ = [
    "benchmarks",
    "cnf",
    "config",
    "fpt",
    "gadgets",
    "grid",
    "instance",
    "monotone",
    "oracle",
    "render",
    "shadow",
    "tools",
]
