from .analysis import DistributionReport, neighbor_correlation, neighbor_pairs, pearson, validate_distribution
from .conditional import (MODELS, ONE_STEP, TWO_STEP, TYPED_TWO_STEP, ConditionalDistribution, ModelMismatch,
                          flattened)
from .io import DistFormatError, load_distribution, save_distribution
from .sampling import (EXHAUSTIVE, SAMPLED, SamplePlan, SampleReport, estimate_conditional,
                       estimate_unconditional, sample_tables)

__all__ = [
    "DistributionReport", "neighbor_correlation", "neighbor_pairs", "pearson", "validate_distribution", "MODELS",
    "ONE_STEP", "TWO_STEP", "TYPED_TWO_STEP", "ConditionalDistribution", "ModelMismatch", "flattened",
    "DistFormatError", "load_distribution", "save_distribution", "EXHAUSTIVE", "SAMPLED", "SamplePlan",
    "SampleReport", "estimate_conditional", "estimate_unconditional", "sample_tables",
]
