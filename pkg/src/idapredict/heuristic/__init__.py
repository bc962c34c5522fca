from .evaluate import (
    CONSISTENT_KINDS,
    MODE_NAMES,
    DomainMismatch,
    HeuristicSpec,
    Kind,
    evaluate,
    evaluate_many,
)
from .pdb import (
    CapacityError,
    FormatError,
    PatternDatabase,
    PatternDef,
    build_pdb,
    cached_pdb,
    load_pdb,
    save_pdb,
)
from .unconditional import (
    TypedUnconditional,
    UnconditionalDist,
    combine_max_independent,
    unconditional_from_pdb,
)

__all__ = [
    "CONSISTENT_KINDS", "MODE_NAMES", "DomainMismatch", "HeuristicSpec", "Kind", "evaluate",
    "evaluate_many", "CapacityError", "FormatError", "PatternDatabase", "PatternDef", "build_pdb", "cached_pdb",
    "load_pdb", "save_pdb", "TypedUnconditional", "UnconditionalDist", "combine_max_independent",
    "unconditional_from_pdb",
]
