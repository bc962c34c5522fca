"""Conditional-distribution prediction (CDP) and its variants.

Node counts are propagated level by level.  Contexts flatten (value, type)
into one index ``k = v * T + t``; a level table is ``N[k]`` for the one-step
model and ``N[k, k_parent]`` for the two-step models.  A node at depth ``i``
is expanded when its value is at most ``d - i``, and only expanded nodes
feed the next level.
"""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .._jit import njit
from ..distribution.conditional import (ONE_STEP, TWO_STEP, TYPED_TWO_STEP, ConditionalDistribution,
                                        ModelMismatch, flattened)
from ..domain.kernels import apply_op, find_blank, node_type, op_allowed
from ..heuristic.evaluate import WS_LEN, HeuristicSpec, h_eval
from ..heuristic.unconditional import UnconditionalDist
from .result import PredictionResult


@dataclass
class SeedVector:
    """Per-start base cases: the start's value and type, and its children's
    values and types in operator order (``-1`` pads)."""

    model: str
    root_v: np.ndarray
    root_t: np.ndarray
    child_v: np.ndarray
    child_t: np.ndarray
    weight: np.ndarray

    @property
    def mass(self) -> float:
        return float(self.weight.sum())

    @property
    def typed(self) -> bool:
        return self.model == TYPED_TWO_STEP

    def scaled(self, f: float) -> "SeedVector":
        return SeedVector(self.model, self.root_v, self.root_t, self.child_v, self.child_t, self.weight * f)

    def level0(self, H: int, T: int) -> np.ndarray:
        """N0 as an (H, T) table."""
        out = np.zeros((H, T))
        np.add.at(out, (np.minimum(self.root_v, H - 1), self.root_t % T), self.weight)
        return out


@njit
def _expand_values(dp, hp, states, lasts, seed, rv, rt, cv, ct):
    if seed >= 0:
        np.random.seed(seed)
    ws = np.zeros(WS_LEN, dtype=np.int64)
    tmp = np.empty(states.shape[1], dtype=states.dtype)
    for j in range(states.shape[0]):
        s = states[j]
        b = find_blank(dp, s)
        rv[j] = h_eval(hp, dp, s, b, ws)
        rt[j] = node_type(dp, b)
        k = 0
        for o in range(dp.n_ops):
            if not op_allowed(dp, lasts[j], o, b):
                continue
            bc = apply_op(dp, s, tmp, b, o)
            cv[j, k] = h_eval(hp, dp, tmp, bc, ws)
            ct[j, k] = node_type(dp, bc)
            k += 1


def _as_flat(starts) -> np.ndarray:
    if isinstance(starts, np.ndarray):
        return np.ascontiguousarray(starts.astype(np.int8, copy=False).reshape(len(starts), -1))
    return np.stack([np.asarray(s.flat, dtype=np.int8) for s in starts])


def seed_base_cases(starts, spec: HeuristicSpec, model: str, rng=0, lasts=None, weights=None) -> SeedVector:
    """Values of the starts and their children (root move context unless
    ``lasts`` supplies arrival operators)."""
    arr = _as_flat(starts)
    n = len(arr)
    if n == 0:
        raise ValueError("empty start set")
    dp = spec.domain.pack
    lasts = np.full(n, -1, dtype=np.int64) if lasts is None else np.asarray(lasts, dtype=np.int64)
    seed = int(rng) if isinstance(rng, (int, np.integer)) else int(rng.integers(0, 2**31 - 1))
    rv = np.zeros(n, dtype=np.int64)
    rt = np.zeros(n, dtype=np.int64)
    cv = np.full((n, dp.n_ops), -1, dtype=np.int64)
    ct = np.full((n, dp.n_ops), -1, dtype=np.int64)
    _expand_values(dp, spec.pack, arr, lasts, seed, rv, rt, cv, ct)
    if model != TYPED_TWO_STEP:
        rt[:] = 0
        ct[cv >= 0] = 0
    w = np.ones(n) if weights is None else np.asarray(weights, dtype=np.float64)
    return SeedVector(model, rv, rt, cv, ct, w)


def _root_children(seed: SeedVector, d: int, bpmx: bool) -> np.ndarray:
    """Mask of the start children actually generated at threshold d."""
    gen = (seed.child_v >= 0) & (seed.root_v <= d)[:, None]
    if bpmx:
        # the root is abandoned right after the first child with h > d + 1
        big = np.cumsum(seed.child_v > d + 1, axis=1)
        prior = np.concatenate([np.zeros((len(big), 1), dtype=big.dtype), big[:, :-1]], axis=1)
        gen &= prior == 0
    return gen


def _survival(b: np.ndarray, q: np.ndarray) -> np.ndarray:
    """sum_{l=1}^{ceil b} w_l q^(l-1) with w_l = min(1, b - (l-1))."""
    out = np.zeros(np.broadcast(b, q).shape)
    L = int(np.ceil(np.max(b))) if b.size else 0
    for l in range(1, L + 1):
        w = np.clip(b - (l - 1), 0.0, 1.0)
        out += w * q ** (l - 1)
    return out


def bpmx_survival_probability(l: int, d: int, i: int, v_p: int, cond: ConditionalDistribution) -> float:
    """Chance that the l-th child of a depth-i parent with value v_p is
    generated: every earlier sibling must have h <= d - i + 1."""
    if l < 1:
        raise ValueError("l counts children from 1")
    c = cond.one_step().untyped()
    p = c.p()[:, 0, :, 0, 0, 0]
    if not 0 <= v_p <= c.h_max:
        return 1.0 if l == 1 else 0.0
    lim = d - i + 1
    q = p[: max(0, min(lim, c.h_max) + 1), v_p].sum() if lim >= 0 else 0.0
    return float(min(1.0, max(0.0, q)) ** (l - 1))


def _check_model(seed: SeedVector, cond: ConditionalDistribution):
    if seed.model == ONE_STEP and cond.model != ONE_STEP:
        raise ModelMismatch("one-step seed needs a one-step distribution")
    if seed.model in (TWO_STEP, TYPED_TWO_STEP) and cond.model == ONE_STEP:
        raise ModelMismatch("two-step seed needs a two-step distribution")
    if seed.model == TYPED_TWO_STEP and cond.n_types == 1:
        raise ModelMismatch("typed seed needs a typed distribution")


def predict_cdp(seed: SeedVector, cond: ConditionalDistribution, d: int, bpmx: bool = False,
                gp_survival: bool = False, cutoff: bool = True, model_name: Optional[str] = None,
                ) -> PredictionResult:
    """Expected IDA* expansions at threshold d.

    ``bpmx`` weighs each child location by its survival probability;
    ``gp_survival`` conditions that probability on the grandparent too
    (two-step only).  ``cutoff=False`` lets every node generate children,
    which turns the recursion into the potential-node estimate."""
    _check_model(seed, cond)
    if seed.model != TYPED_TWO_STEP and cond.n_types > 1:
        cond = cond.untyped()
    H, T = cond.counts.shape[:2]
    K = H * T
    vals = np.repeat(np.arange(H), T)
    kid = lambda v, t: np.minimum(v, H - 1) * T + t % T
    parents = cond.parents
    gen = _root_children(seed, d, bpmx)
    if not cutoff:
        gen = seed.child_v >= 0
    rows, cols = np.nonzero(gen)
    w = seed.weight[rows]
    levels = []
    lost = 0.0
    level0 = np.zeros(K)
    np.add.at(level0, kid(seed.root_v, seed.root_t), seed.weight)
    levels.append(level0)
    total = level0[vals <= d].sum()
    name = model_name or {ONE_STEP: "cdp1", TWO_STEP: "cdp2", TYPED_TWO_STEP: "cdp2t"}[seed.model]
    if bpmx:
        name += "-bpmx"

    def expanded(i):
        return (vals <= d - i) if cutoff else np.ones(K, dtype=bool)

    if cond.model == ONE_STEP:
        p1 = cond.p()[:, :, :, :, 0, 0].reshape(K, K)
        bp1 = cond.bp()[:, :, :, :, 0, 0].reshape(K, K)
        b1 = cond.b()[:, :, 0, 0].reshape(K)
        pop = parents[:, :, 0, 0].reshape(K) > 0
        rootc = np.zeros(K)
        np.add.at(rootc, kid(seed.root_v[rows], seed.root_t[rows]), w)
        lost += rootc[~pop].sum()
        N = p1 @ rootc
        if d >= 1:
            levels.append(N)
            total += N[vals <= d - 1].sum()
        for i in range(2, d + 1):
            prev = N * expanded(i - 1)
            lost += prev[~pop].sum()
            M = bp1
            if bpmx:
                q = _q_one_step(cond, d, i - 1, H, T)
                f = np.where(b1 > 0, _survival(b1, q) / np.maximum(b1, 1e-300), 0.0)
                M = bp1 * f[None, :]
            N = M @ prev
            levels.append(N)
            total += N[vals <= d - i].sum()
    else:
        bp2 = cond.bp().reshape(K, K, K)
        b2 = cond.b().reshape(K, K)
        pop = parents.reshape(K, K) > 0
        N = np.zeros((K, K))
        np.add.at(N, (kid(seed.child_v[rows, cols], seed.child_t[rows, cols]),
                      kid(seed.root_v[rows], seed.root_t[rows])), w)
        if d >= 1:
            levels.append(N)
            total += N[vals <= d - 1].sum()
        for i in range(2, d + 1):
            prev = N * expanded(i - 1)[:, None]
            lost += prev[~pop].sum()
            M = bp2
            if bpmx:
                if gp_survival:
                    q = _q_two_step(cond, d, i - 1, H, T)
                else:
                    q = _q_one_step(cond, d, i - 1, H, T)[:, None]
                f = np.where(b2 > 0, _survival(b2, q) / np.maximum(b2, 1e-300), 0.0)
                M = bp2 * f[None]
            N = np.einsum("abc,bc->ab", M, prev)
            levels.append(N)
            total += N[vals <= d - i].sum()
    return PredictionResult(d, name, levels, float(total), seed.mass, unpopulated_mass=float(lost))


def _q_one_step(cond, d, i, H, T):
    """P(child h <= d - i + 1 | parent context), per flattened parent index."""
    p = cond.one_step().p()[:, :, :, :, 0, 0].sum(axis=1)  # [h, vp, tp]
    lim = d - i + 1
    if lim < 0:
        return np.zeros(H * T)
    return p[: min(lim, H - 1) + 1].sum(axis=0).reshape(H * T)


def _q_two_step(cond, d, i, H, T):
    p = cond.p().sum(axis=1)  # [h, vp, tp, vg, tg]
    lim = d - i + 1
    if lim < 0:
        return np.zeros((H * T, H * T))
    return p[: min(lim, H - 1) + 1].sum(axis=0).reshape(H * T, H * T)


def predict_cdp_bpmx(seed: SeedVector, cond: ConditionalDistribution, d: int,
                     gp_survival: bool = False) -> PredictionResult:
    return predict_cdp(seed, cond, d, bpmx=True, gp_survival=gp_survival)


def equilibrium_seed(dist: UnconditionalDist, levels, mass: float = 1.0) -> SeedVector:
    """One-step seed whose level-0 values follow ``dist`` exactly, with the
    root branching taken from brute-force level counts."""
    H = dist.h_max + 1
    kids = int(round(levels.N[1] / levels.N[0])) if levels.d >= 1 and levels.N[0] else 0
    child = np.zeros((H, max(kids, 1)), dtype=np.int64) - (1 if kids == 0 else 0)
    return SeedVector(ONE_STEP, np.arange(H), np.zeros(H, dtype=np.int64), child, child.copy(),
                      dist.p * mass)


def predict_bounds(levels, cond: ConditionalDistribution, dist: UnconditionalDist, seed: SeedVector,
                   d: int, equilibrium_upper: bool = True) -> Tuple[PredictionResult, PredictionResult]:
    """(upper, lower) estimates from one-step inputs.

    Upper: every node at every level generates children, i.e. the count of
    potential nodes.  By default the recursion starts from the equilibrium
    distribution ``dist`` (scaled to the seed's mass, root branching from
    ``levels``), which estimates the potential nodes for a random start;
    with ``equilibrium_upper=False`` it starts from ``seed`` itself.
    Lower: children ignore their parent's value and follow ``dist``."""
    c1 = cond.one_step().untyped()
    s1 = SeedVector(ONE_STEP, seed.root_v, np.zeros_like(seed.root_t), seed.child_v,
                    np.where(seed.child_v >= 0, 0, -1), seed.weight)
    su = equilibrium_seed(dist, levels, seed.mass) if equilibrium_upper else s1
    upper = predict_cdp(su, c1, d, cutoff=False, model_name="upper")
    upper.n_starts = seed.mass
    lower = predict_cdp(s1, flattened(c1, dist.p), d, model_name="lower")
    return upper, lower
