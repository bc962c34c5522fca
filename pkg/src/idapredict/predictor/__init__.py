from .cdp import (SeedVector, bpmx_survival_probability, equilibrium_seed, predict_bounds, predict_cdp, predict_cdp_bpmx,
                  seed_base_cases)
from .exact import ConditionsNotMet, ExactPredictor, exact_abstract_predict
from .levels import LevelCounts, brute_force_level_counts, predict_kre
from .lookahead import lookahead_frontier, predict_with_lookahead
from .result import PredictionResult

__all__ = [
    "SeedVector", "bpmx_survival_probability", "equilibrium_seed", "predict_bounds", "predict_cdp", "predict_cdp_bpmx",
    "seed_base_cases", "ConditionsNotMet", "ExactPredictor", "exact_abstract_predict", "LevelCounts",
    "brute_force_level_counts", "predict_kre", "lookahead_frontier", "predict_with_lookahead",
    "PredictionResult",
]
