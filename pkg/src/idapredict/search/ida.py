"""IDA* iterations with per-level accounting and optional BPMX.

One iteration is a complete depth-first traversal: every node reached with
``g + h <= d`` counts as expanded and the goal does not stop the search.
Children are generated in operator order with operator pruning.  With BPMX
the parent at depth ``i`` is abandoned as soon as a child with
``h > d - i + 1`` is generated (its remaining children are not generated);
the parent still counts as expanded.
"""

from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .._jit import njit
from ..domain.core import State, domain_of
from ..domain.kernels import apply_op, find_blank, is_goal, op_allowed
from ..heuristic.evaluate import WS_LEN, Kind, HeuristicSpec, h_eval

INF = 1 << 30


@dataclass
class SearchStats:
    d: int
    expanded_per_level: np.ndarray
    generated_per_level: np.ndarray
    bpmx_abandonments: int = 0
    next_threshold: Optional[int] = None
    goal_found: bool = False

    @property
    def total_expanded(self) -> int:
        return int(self.expanded_per_level.sum())

    @property
    def total_generated(self) -> int:
        return int(self.generated_per_level.sum())

    def __add__(self, other: "SearchStats") -> "SearchStats":
        if other.d != self.d:
            raise ValueError("cannot merge stats for different thresholds")
        nt = [x for x in (self.next_threshold, other.next_threshold) if x is not None]
        return SearchStats(
            self.d, self.expanded_per_level + other.expanded_per_level,
            self.generated_per_level + other.generated_per_level,
            self.bpmx_abandonments + other.bpmx_abandonments,
            min(nt) if nt else None, self.goal_found or other.goal_found,
        )


@dataclass
class ThresholdSchedule:
    thresholds: List[int] = field(default_factory=list)
    complete: bool = False
    capped: bool = False


class Workspace:
    """Per-depth DFS buffers for depth limit ``d``."""

    def __init__(self, state_len: int, d: int):
        m = max(d, 0) + 2
        self.states = np.zeros((m, state_len), dtype=np.int8)
        self.blanks = np.zeros(m, dtype=np.int64)
        self.hv = np.zeros(m, dtype=np.int64)
        self.last = np.zeros(m, dtype=np.int64)
        self.nxt = np.zeros(m, dtype=np.int64)
        self.ws = np.zeros(WS_LEN, dtype=np.int64)


@njit
def dfs_iteration(dp, hp, start, last0, h0, d, bpmx, deep, stop_goal,
                  exp, gen, states, blanks, hv, last, nxt, ws):
    """One bounded DFS from ``start`` (heuristic ``h0`` already evaluated).

    ``exp``/``gen`` are incremented in place.  Returns
    (min f above d, abandonments, goal reached within the bound).
    """
    if h0 > d:
        return h0, 0, False
    n = start.shape[0]
    for i in range(n):
        states[0, i] = start[i]
    blanks[0] = find_blank(dp, start)
    hv[0] = h0
    last[0] = last0
    nxt[0] = 0
    exp[0] += 1
    goal = False
    if h0 == 0 and is_goal(dp, start):
        goal = True
        if stop_goal:
            return INF, 0, True
    min_exceed = INF
    abandons = 0
    k = 0
    while k >= 0:
        o = nxt[k]
        if o >= dp.n_ops:
            # backtrack; with deep propagation a raised value abandons the
            # parent too when it exceeds the parent's own cutoff
            if deep and k > 0 and hv[k] > d - k + 2:
                if nxt[k - 1] < dp.n_ops:
                    abandons += 1
                nxt[k - 1] = dp.n_ops
                hv[k - 1] = hv[k] - 1
                f = k - 1 + hv[k - 1]
                if f < min_exceed:
                    min_exceed = f
            k -= 1
            continue
        nxt[k] = o + 1
        if not op_allowed(dp, last[k], o, blanks[k]):
            continue
        c = k + 1
        b = apply_op(dp, states[k], states[c], blanks[k], o)
        gen[c] += 1
        hc = h_eval(hp, dp, states[c], b, ws)
        if bpmx and hc > d - k + 1:
            abandons += 1
            nxt[k] = dp.n_ops
            hv[k] = hc - 1
            f = k + hc - 1
            if f < min_exceed:
                min_exceed = f
            continue
        if c + hc > d:
            if c + hc < min_exceed:
                min_exceed = c + hc
            continue
        exp[c] += 1
        if hc == 0 and is_goal(dp, states[c]):
            goal = True
            if stop_goal:
                return min_exceed, abandons, True
        blanks[c] = b
        hv[c] = hc
        last[c] = o
        nxt[c] = 0
        k = c
    return min_exceed, abandons, goal


@njit
def _root_h(dp, hp, s, ws):
    return h_eval(hp, dp, s, find_blank(dp, s), ws)


@njit
def _batch_iterations(dp, hp, starts, lasts, seeds, d, bpmx, deep,
                      exp, gen, out_next, out_aband, states, blanks, hv, last, nxt, ws):
    for j in range(starts.shape[0]):
        if seeds[j] >= 0:
            np.random.seed(seeds[j])
        h0 = _root_h(dp, hp, starts[j], ws)
        me, ab, _ = dfs_iteration(dp, hp, starts[j], lasts[j], h0, d, bpmx, deep, False,
                                  exp[j], gen[j], states, blanks, hv, last, nxt, ws)
        out_next[j] = me
        out_aband[j] = ab


def start_seeds(seed: int, n: int) -> np.ndarray:
    """Independent per-start rng seeds derived from one base seed."""
    ss = np.random.SeedSequence(int(seed))
    return ss.generate_state(max(n, 1), dtype=np.uint32)[:n].astype(np.int64) & 0x7FFFFFFF


def _as_batch(starts):
    if isinstance(starts, np.ndarray):
        return np.ascontiguousarray(np.atleast_2d(starts), dtype=np.int8)
    return np.stack([s.flat for s in starts]).astype(np.int8)


def ida_iterations(spec: HeuristicSpec, starts, d: int, bpmx: bool = False, seed: int = 0,
                   deep_bpmx: bool = False, lasts=None):
    """Run the threshold-``d`` iteration from every start.

    Returns per-start arrays ``(expanded[n, d+1], generated[n, d+2],
    next_threshold[n], abandonments[n])``.
    """
    batch = _as_batch(starts)
    n = batch.shape[0]
    dp, hp = spec.domain.pack, spec.pack
    dd = max(d, 0)
    exp = np.zeros((n, dd + 1), dtype=np.int64)
    gen = np.zeros((n, dd + 2), dtype=np.int64)
    nxt_thr = np.zeros(n, dtype=np.int64)
    aband = np.zeros(n, dtype=np.int64)
    if lasts is None:
        lasts = np.full(n, -1, dtype=np.int64)
    w = Workspace(batch.shape[1], dd)
    _batch_iterations(dp, hp, batch, np.asarray(lasts, dtype=np.int64), start_seeds(seed, n), d,
                      bool(bpmx), bool(deep_bpmx), exp, gen, nxt_thr, aband,
                      w.states, w.blanks, w.hv, w.last, w.nxt, w.ws)
    return exp, gen, nxt_thr, aband


def ida_iteration(start: State, d: int, spec: HeuristicSpec, bpmx: bool = False, rng=0,
                  deep_bpmx: bool = False) -> SearchStats:
    """Complete IDA* iteration with threshold ``d`` from ``start``."""
    if domain_of(start) != spec.domain:
        raise ValueError("start state does not match the heuristic's domain")
    seed = rng if isinstance(rng, (int, np.integer)) else int(rng.integers(0, 2**31 - 1))
    exp, gen, nt, ab = ida_iterations(spec, [start], d, bpmx, int(seed), deep_bpmx)
    if d < 0:
        exp = np.zeros((1, 0), dtype=np.int64)
        gen = np.zeros((1, 1), dtype=np.int64)
    return SearchStats(d, exp[0], gen[0], int(ab[0]), int(nt[0]) if nt[0] < INF else None)


@njit
def schedule_kernel(dp, hp, start, d_cap, target, states, blanks, hv, last, nxt, ws, out):
    """Thresholds IDA* visits from ``start`` (stopping once an iteration finds
    the goal), written to ``out``.  Iterations at or above ``target`` are not
    run: the next threshold only depends on iterations below it.  Returns the
    number of entries and a status (0 goal found, 1 capped, 2 target reached,
    3 dead end)."""
    h0 = _root_h(dp, hp, start, ws)
    d = h0
    n = 0
    exp = np.zeros(d_cap + 2, dtype=np.int64)
    gen = np.zeros(d_cap + 3, dtype=np.int64)
    while True:
        if d > d_cap:
            return n, 1
        out[n] = d
        n += 1
        if d >= target:
            return n, 2
        me, _, goal = dfs_iteration(dp, hp, start, -1, h0, d, False, False, True,
                                    exp, gen, states, blanks, hv, last, nxt, ws)
        if goal:
            return n, 0
        if me >= INF:
            return n, 3
        d = me


def threshold_schedule(start: State, spec: HeuristicSpec, d_cap: int, rng=0) -> ThresholdSchedule:
    """Thresholds of successive IDA* iterations from ``start``, up to ``d_cap``."""
    if spec.kind == Kind.PDB_RANDOM_SYMMETRY:
        seed = rng if isinstance(rng, (int, np.integer)) else int(rng.integers(0, 2**31 - 1))
        _seed_jit(int(seed))
    w = Workspace(spec.domain.state_len, d_cap + 1)
    out = np.zeros(d_cap + 2, dtype=np.int64)
    n, status = schedule_kernel(spec.domain.pack, spec.pack, start.flat.astype(np.int8), d_cap, INF,
                                w.states, w.blanks, w.hv, w.last, w.nxt, w.ws, out)
    return ThresholdSchedule(out[:n].tolist(), complete=status == 0, capped=status == 1)


@njit
def _seed_jit(seed):
    np.random.seed(seed)


@njit
def _accept_batch(dp, hp, cands, seeds, d, states, blanks, hv, last, nxt, ws, out):
    sched = np.zeros(d + 2, dtype=np.int64)
    for j in range(cands.shape[0]):
        if seeds[j] >= 0:
            np.random.seed(seeds[j])
        n, status = schedule_kernel(dp, hp, cands[j], d, d, states, blanks, hv, last, nxt, ws, sched)
        out[j] = status == 2 and sched[n - 1] == d


def accepts_threshold(spec: HeuristicSpec, starts, d: int, seed: int = 0) -> np.ndarray:
    """Boolean mask: does IDA* from each start perform an iteration at ``d``?"""
    batch = _as_batch(starts)
    w = Workspace(batch.shape[1], d + 1)
    out = np.zeros(batch.shape[0], dtype=np.bool_)
    _accept_batch(spec.domain.pack, spec.pack, batch, start_seeds(seed, batch.shape[0]), d,
                  w.states, w.blanks, w.hv, w.last, w.nxt, w.ws, out)
    return out


@njit
def _schedule_batch(dp, hp, cands, seeds, d_max, states, blanks, hv, last, nxt, ws, out):
    sched = np.zeros(d_max + 2, dtype=np.int64)
    for j in range(cands.shape[0]):
        if seeds[j] >= 0:
            np.random.seed(seeds[j])
        n, _ = schedule_kernel(dp, hp, cands[j], d_max, d_max, states, blanks, hv, last, nxt, ws, sched)
        for k in range(n):
            if sched[k] <= d_max:
                out[j, sched[k]] = True


def schedule_membership(spec: HeuristicSpec, starts, d_max: int, seed: int = 0) -> np.ndarray:
    """``out[j, d]`` is True when IDA* from start j performs an iteration at
    threshold d (for every d <= d_max), from a single schedule run per start."""
    batch = _as_batch(starts)
    w = Workspace(batch.shape[1], d_max + 1)
    out = np.zeros((batch.shape[0], d_max + 1), dtype=np.bool_)
    _schedule_batch(spec.domain.pack, spec.pack, batch, start_seeds(seed, batch.shape[0]), d_max,
                    w.states, w.blanks, w.hv, w.last, w.nxt, w.ws, out)
    return out
