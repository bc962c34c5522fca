"""Single-start prediction refined by a small initial search."""

import numpy as np

from .._jit import njit
from ..domain.kernels import apply_op, find_blank, op_allowed
from ..heuristic.evaluate import WS_LEN, HeuristicSpec, h_eval
from .cdp import predict_cdp, seed_base_cases
from .result import PredictionResult


@njit
def _frontier(dp, hp, start, d, r, seed, exp, out, out_last):
    """DFS to depth r expanding nodes with g + h <= d.  Depth-r nodes
    generated by expanded parents go to ``out``; returns how many were
    found (which may exceed the capacity, in which case the caller retries)."""
    np.random.seed(seed)
    L = start.shape[0]
    ws = np.zeros(WS_LEN, dtype=np.int64)
    st = np.empty((r + 1, L), dtype=start.dtype)
    bl = np.empty(r + 1, dtype=np.int64)
    la = np.empty(r + 1, dtype=np.int64)
    nx = np.zeros(r + 1, dtype=np.int64)
    for i in range(L):
        st[0, i] = start[i]
    bl[0] = find_blank(dp, start)
    la[0] = -1
    n_out = 0
    if h_eval(hp, dp, st[0], bl[0], ws) > d:
        return 0
    exp[0] += 1
    k = 0
    while k >= 0:
        o = nx[k]
        if o >= dp.n_ops:
            k -= 1
            continue
        nx[k] = o + 1
        if not op_allowed(dp, la[k], o, bl[k]):
            continue
        b = apply_op(dp, st[k], st[k + 1], bl[k], o)
        if k + 1 == r:
            if n_out < out.shape[0]:
                for i in range(L):
                    out[n_out, i] = st[k + 1, i]
                out_last[n_out] = o
            n_out += 1
            continue
        if k + 1 + h_eval(hp, dp, st[k + 1], b, ws) > d:
            continue
        exp[k + 1] += 1
        bl[k + 1] = b
        la[k + 1] = o
        nx[k + 1] = 0
        k += 1
    return n_out


def lookahead_frontier(start, d: int, r: int, spec: HeuristicSpec, seed: int = 0):
    """(depth-r states, their arrival operators, expansions at depths < r)."""
    flat = np.asarray(start.flat if hasattr(start, "flat") else start, dtype=np.int8)
    dp, hp = spec.domain.pack, spec.pack
    cap = 1 << 14
    while True:
        exp = np.zeros(max(r, 1), dtype=np.int64)
        out = np.zeros((cap, flat.size), dtype=np.int8)
        out_last = np.zeros(cap, dtype=np.int64)
        n = _frontier(dp, hp, flat, d, r, seed, exp, out, out_last)
        if n <= cap:
            return out[:n], out_last[:n], exp[:r]
        cap = n


def predict_with_lookahead(start, d: int, r: int, spec: HeuristicSpec, cond, rng=0,
                           model=None) -> PredictionResult:
    """Search from ``start`` to depth r, then predict the rest of the
    iteration from the depth-r nodes with threshold d - r."""
    if not 0 <= r < d:
        raise ValueError("need 0 <= r < d")
    model = model or cond.model
    seed = int(rng) if isinstance(rng, (int, np.integer)) else int(rng.integers(0, 2**31 - 1))
    if r == 0:
        sv = seed_base_cases([start] if hasattr(start, "flat") else start[None], spec, model, seed)
        res = predict_cdp(sv, cond, d)
        res.provenance["lookahead"] = "0"
        return res
    states, lasts, exp = lookahead_frontier(start, d, r, spec, seed)
    base = float(exp.sum())
    if len(states) == 0:
        return PredictionResult(d, f"{model}+r{r}", [exp.astype(float)], base, 1.0, {"lookahead": str(r)})
    sv = seed_base_cases(states, spec, model, seed + 1, lasts=lasts)
    sub = predict_cdp(sv, cond, d - r)
    levels = [np.array([float(e)]) for e in exp] + sub.levels
    return PredictionResult(d, f"{sub.model}+r{r}", levels, base + sub.total_expanded, 1.0,
                            {"lookahead": str(r)}, sub.unpopulated_mass)
