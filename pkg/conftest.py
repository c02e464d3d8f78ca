from tests.fixtures.assemblies import (
    block,
    c_shape,
    domino,
    neg,
    neg_cells,
    nonmono,
    oracle_config,
    random_assemblies,
    ring,
    table,
)
from tests.fixtures.formulas import phi1, phi2, phi3
from tests.fixtures.workspace import (
    log_levels,
    rng,
    workspace_env,
    workspace_path,
)

__all__ = [
    "block",
    "c_shape",
    "domino",
    "log_levels",
    "neg",
    "neg_cells",
    "nonmono",
    "oracle_config",
    "phi1",
    "phi2",
    "phi3",
    "random_assemblies",
    "ring",
    "rng",
    "table",
    "workspace_env",
    "workspace_path",
]
