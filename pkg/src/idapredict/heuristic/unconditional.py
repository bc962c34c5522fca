"""Unconditional heuristic-value distributions."""

from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from .pdb import UNSET, PatternDatabase

TOL = 1e-9


@dataclass(eq=False)
class UnconditionalDist:
    """``p[v]`` for v in 0..h_max.  ``counts`` keeps the raw histogram when
    the distribution was tallied rather than derived."""

    p: np.ndarray
    counts: Optional[np.ndarray] = None

    def __post_init__(self):
        p = np.asarray(self.p, dtype=np.float64)
        if p.ndim != 1 or p.size == 0:
            raise ValueError("p must be a non-empty vector")
        if np.any(p < 0) or abs(p.sum() - 1.0) > TOL:
            raise ValueError("p must be a probability vector")
        self.p = p

    @classmethod
    def from_counts(cls, counts) -> "UnconditionalDist":
        c = np.asarray(counts, dtype=np.int64)
        return cls(c / c.sum(), c)

    @property
    def h_max(self) -> int:
        return int(self.p.size - 1)

    @property
    def P(self) -> np.ndarray:
        """Cumulative P[v] = sum_{i <= v} p(i)."""
        c = np.cumsum(self.p)
        c[-1] = 1.0
        return np.minimum(c, 1.0)

    def cdf(self, v) -> float:
        if v < 0:
            return 0.0
        if v >= self.h_max:
            return 1.0
        return float(self.P[int(v)])

    @property
    def mean(self) -> float:
        return float(np.dot(np.arange(self.p.size), self.p))

    def __eq__(self, other):
        return isinstance(other, UnconditionalDist) and np.allclose(self.p, other.p, atol=1e-15, rtol=0)


@dataclass(eq=False)
class TypedUnconditional:
    """One distribution per node type plus the type frequencies."""

    dists: List[UnconditionalDist]
    type_freq: np.ndarray

    def cdf(self, t: int, v) -> float:
        return self.dists[t].cdf(v)


def unconditional_from_pdb(pdb: PatternDatabase) -> UnconditionalDist:
    """Histogram of the reachable entries.  Valid when every abstract state
    has the same number of preimages."""
    e = pdb.entries
    e = e[e != UNSET]
    return UnconditionalDist.from_counts(np.bincount(e))


def combine_max_independent(dists: List[UnconditionalDist]) -> UnconditionalDist:
    """Distribution of the max of independent variables: P_out = prod P_i."""
    if not dists:
        raise ValueError("need at least one distribution")
    h = max(d.h_max for d in dists)
    cum = np.ones(h + 1)
    for d in dists:
        c = np.ones(h + 1)
        c[:d.h_max + 1] = d.P
        cum *= c
    p = np.diff(np.concatenate([[0.0], cum]))
    p = np.clip(p, 0.0, None)
    return UnconditionalDist(p / p.sum())
