"""Sizes of the operator-pruned brute-force tree, and the KRE formula."""

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from ..domain.core import Domain
from ..domain.kernels import CUBE
from ..heuristic.unconditional import TypedUnconditional
from .result import PredictionResult


@dataclass
class LevelCounts:
    """``N[i]`` nodes at depth i; ``w[i, t]`` type fractions (tiles only)."""

    N: np.ndarray
    w: Optional[np.ndarray] = None

    @property
    def d(self) -> int:
        return len(self.N) - 1


def _flat(s):
    return np.asarray(s.flat if hasattr(s, "flat") else s)


def brute_force_level_counts(domain: Domain, starts: Sequence, d: int, lasts=None) -> LevelCounts:
    """Exact level sizes by dynamic programming over pruning classes.

    Tiles: the class is (blank cell, last operator); cube: the last move
    (its face decides what may follow)."""
    if d < 0:
        raise ValueError("d must be >= 0")
    starts = list(starts)
    lasts = [-1] * len(starts) if lasts is None else list(lasts)
    if domain.kind == CUBE:
        allowed = domain.pack.allowed.astype(np.float64)  # [last+1, op]
        cur = np.zeros(19)
        for l in lasts:
            cur[l + 1] += 1
        N = np.zeros(d + 1)
        N[0] = cur.sum()
        for i in range(1, d + 1):
            nxt = np.zeros(19)
            nxt[1:] = cur @ allowed
            cur = nxt
            N[i] = cur.sum()
        return LevelCounts(N)
    n, nbr = domain.n, domain.nbr
    cur = np.zeros((n, 5))  # last op 0..3, 4 = none
    for s, l in zip(starts, lasts):
        b = int(np.flatnonzero(_flat(s) == 0)[0])
        cur[b, 4 if l < 0 else l] += 1
    N = np.zeros(d + 1)
    w = np.zeros((d + 1, domain.n_types))

    def tally(i, c):
        per_cell = c.sum(axis=1)
        N[i] = per_cell.sum()
        if N[i] > 0:
            w[i] = np.bincount(domain.ctype, weights=per_cell, minlength=domain.n_types) / N[i]

    tally(0, cur)
    for i in range(1, d + 1):
        nxt = np.zeros_like(cur)
        for o in range(4):
            src = np.flatnonzero(nbr[:, o] >= 0)
            # every class except the one whose last move o undoes
            mass = cur[src].sum(axis=1) - cur[src, 3 - o]
            np.add.at(nxt[:, o], nbr[src, o], mass)
        cur = nxt
        tally(i, cur)
    return LevelCounts(N, w)


def predict_kre(levels: LevelCounts, dist, d: int, n_starts: Optional[float] = None) -> PredictionResult:
    """Sum over levels of N_i times the cumulative probability P(d - i)."""
    D = min(d, levels.d)
    per = np.zeros(d + 1)
    for i in range(D + 1):
        if isinstance(dist, TypedUnconditional):
            if levels.w is None:
                raise ValueError("typed KRE needs per-level type fractions")
            per[i] = levels.N[i] * sum(levels.w[i, t] * dist.cdf(t, d - i) for t in range(len(dist.dists)))
        else:
            per[i] = levels.N[i] * dist.cdf(d - i)
    n = levels.N[0] if n_starts is None else n_starts
    return PredictionResult(d, "kre", [per[i:i + 1] for i in range(d + 1)], float(per.sum()), float(n))
