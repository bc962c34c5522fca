from dataclasses import dataclass, field
from typing import Dict, List

import numpy as np


@dataclass
class PredictionResult:
    """Expected node counts per level.

    ``levels[i]`` holds the level-i table (indexed by the heuristic value
    first, then whatever context the model carries).  ``total_expanded`` is
    the prediction summed over the whole start set; ``mean`` divides by the
    seed mass.
    """

    d: int
    model: str
    levels: List[np.ndarray]
    total_expanded: float
    n_starts: float = 1.0
    provenance: Dict[str, str] = field(default_factory=dict)
    unpopulated_mass: float = 0.0

    @property
    def mean(self) -> float:
        return self.total_expanded / self.n_starts if self.n_starts else 0.0

    def per_level(self) -> np.ndarray:
        return np.array([float(np.sum(t)) for t in self.levels])

    def dump_rows(self):
        """(level, v, count) rows with counts summed over the context axes."""
        for i, t in enumerate(self.levels):
            t = np.asarray(t)
            byv = t.reshape(t.shape[0], -1).sum(axis=1) if t.ndim > 1 else t
            for v, c in enumerate(byv):
                if c:
                    yield i, v, float(c)
