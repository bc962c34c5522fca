"""Neighbour correlation and sanity checks on estimated distributions."""

from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from .._jit import njit
from ..domain.kernels import apply_op, find_blank, op_allowed
from ..heuristic.evaluate import WS_LEN, HeuristicSpec, h_eval
from ..search.starts import random_states
from .conditional import ConditionalDistribution

TOL = 1e-9


def pearson(x, y) -> Optional[float]:
    """Pearson coefficient, or None when either side has zero variance."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    n = len(x)
    sx, sy = x.sum(), y.sum()
    vx = n * (x * x).sum() - sx * sx
    vy = n * (y * y).sum() - sy * sy
    if vx <= 0 or vy <= 0:
        return None
    return float((n * (x * y).sum() - sx * sy) / np.sqrt(vx * vy))


@njit
def _pairs(dp, hp, states, seed, hx, hy):
    np.random.seed(seed)
    ws = np.zeros(WS_LEN, dtype=np.int64)
    tmp = np.empty(states.shape[1], dtype=states.dtype)
    cand = np.empty(dp.n_ops, dtype=np.int64)
    for j in range(states.shape[0]):
        s = states[j]
        b = find_blank(dp, s)
        hx[j] = h_eval(hp, dp, s, b, ws)
        k = 0
        for o in range(dp.n_ops):
            if op_allowed(dp, -1, o, b):
                cand[k] = o
                k += 1
        bc = apply_op(dp, s, tmp, b, cand[np.random.randint(0, k)])
        hy[j] = h_eval(hp, dp, tmp, bc, ws)


def neighbor_pairs(spec: HeuristicSpec, n_pairs: int, seed: int) -> Tuple[np.ndarray, np.ndarray]:
    rng = np.random.default_rng(seed)
    states = random_states(spec.domain, n_pairs, rng)
    hx = np.zeros(n_pairs, dtype=np.int64)
    hy = np.zeros(n_pairs, dtype=np.int64)
    _pairs(spec.domain.pack, spec.pack, states, int(rng.integers(0, 2**31 - 1)), hx, hy)
    return hx, hy


def neighbor_correlation(domain, spec: HeuristicSpec, n_pairs: int, seed: int) -> Optional[float]:
    """Correlation of h over random (state, random neighbour) pairs; None if undefined."""
    if n_pairs < 2:
        raise ValueError("need at least two pairs")
    if spec.domain != domain:
        raise ValueError("heuristic does not belong to the domain")
    return pearson(*neighbor_pairs(spec, n_pairs, seed))


@dataclass
class DistributionReport:
    violations: List[str] = field(default_factory=list)
    off_tridiagonal_mass: float = 0.0
    under_floor: List[Tuple[int, ...]] = field(default_factory=list)
    populated: int = 0

    @property
    def ok(self) -> bool:
        return not self.violations


def validate_distribution(dist: ConditionalDistribution, max_branching: Optional[float] = None,
                          consistent: bool = False, floor: int = 1000, p=None) -> DistributionReport:
    """Check column sums and branching factors; measure mass off the
    tridiagonal.  ``p`` lets callers pass an already-normalised (possibly
    tampered) probability table for checking."""
    rep = DistributionReport()
    probs = dist.p() if p is None else np.asarray(p)
    tot = dist.child_totals
    pop = dist.parents > 0
    rep.populated = int(pop.sum())
    sums = probs.sum(axis=(0, 1))
    bad = pop & (np.abs(sums - 1.0) > TOL)
    for ctx in zip(*np.nonzero(bad)):
        rep.violations.append(f"column {tuple(int(c) for c in ctx)} sums to {sums[ctx]:.6g}")
    b = dist.b()
    if np.any(b < 0):
        rep.violations.append("negative branching factor")
    if max_branching is not None:
        for ctx in zip(*np.nonzero(b > max_branching + TOL)):
            rep.violations.append(f"branching {b[ctx]:.4g} above {max_branching} at {tuple(int(c) for c in ctx)}")
    H = dist.counts.shape[0]
    v = np.arange(H)[:, None]
    vp = np.arange(H)[None, :]
    far = np.abs(v - vp) > 1
    c = dist.counts.sum(axis=(1, 3, 4, 5))
    total = c.sum()
    rep.off_tridiagonal_mass = float(c[far].sum() / total) if total else 0.0
    if consistent and rep.off_tridiagonal_mass > 0:
        rep.violations.append(f"off-tridiagonal mass {rep.off_tridiagonal_mass:.3g} for a consistent heuristic")
    rep.under_floor = [tuple(int(x) for x in ctx) for ctx in zip(*np.nonzero(pop & (tot < floor)))]
    return rep
