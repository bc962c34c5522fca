"""Text persistence of conditional distributions.

::

    # idapredict distribution v1
    model=two_step
    domain=cube
    heuristic=...
    h_max=10
    types=1
    samples=...
    seed=...
    C <context...> <v> [<t>] <count>
    B <context...> <children_total> <parent_count>

Context columns are ``v_p`` (one-step), ``v_p v_gp`` (two-step) or
``v_p t_p v_gp t_gp`` (typed).  Only non-zero entries are written.
"""

import numpy as np

from .conditional import MODELS, ONE_STEP, TWO_STEP, TYPED_TWO_STEP, ConditionalDistribution

MAGIC = "# idapredict distribution v1"


class DistFormatError(ValueError):
    pass


def _ctx_axes(model):
    # which of (vp, tp, vg, tg) appear on a line
    return {ONE_STEP: (0,), TWO_STEP: (0, 2), TYPED_TWO_STEP: (0, 1, 2, 3)}[model]


def save_distribution(dist: ConditionalDistribution, path) -> None:
    axes = _ctx_axes(dist.model)
    typed = dist.model == TYPED_TWO_STEP
    with open(path, "w") as f:
        f.write(MAGIC + "\n")
        f.write(f"model={dist.model}\n")
        for k in ("domain", "heuristic", "samples", "seed", "mode"):
            if k in dist.meta:
                f.write(f"{k}={dist.meta[k]}\n")
        f.write(f"h_max={dist.h_max}\ntypes={dist.n_types}\n")
        c = dist.counts
        for idx in zip(*np.nonzero(c)):
            v, t, *ctx = (int(x) for x in idx)
            cols = [ctx[a] for a in axes]
            child = [v, t] if typed else [v]
            f.write("C " + " ".join(map(str, cols + child + [int(c[idx])])) + "\n")
        tot = dist.child_totals
        for idx in zip(*np.nonzero(dist.parents)):
            ctx = [int(x) for x in idx]
            cols = [ctx[a] for a in axes]
            f.write("B " + " ".join(map(str, cols + [int(tot[idx]), int(dist.parents[idx])])) + "\n")
        f.write("END\n")


def load_distribution(path) -> ConditionalDistribution:
    with open(path) as f:
        lines = f.read().splitlines()
    if not lines or lines[0] != MAGIC:
        raise DistFormatError(f"{path}: not a distribution file (bad or missing header)")
    if lines[-1] != "END":
        raise DistFormatError(f"{path}: truncated (no END marker)")
    meta = {}
    i = 1
    while i < len(lines) and "=" in lines[i] and not lines[i].startswith(("C ", "B ")):
        k, v = lines[i].split("=", 1)
        meta[k] = v
        i += 1
    try:
        model = meta.pop("model")
        h_max = int(meta.pop("h_max"))
        types = int(meta.pop("types"))
    except (KeyError, ValueError) as e:
        raise DistFormatError(f"{path}: incomplete header ({e})") from None
    if model not in MODELS:
        raise DistFormatError(f"{path}: unknown model {model!r}")
    dist = ConditionalDistribution.empty(model, h_max, types, **meta)
    axes = _ctx_axes(model)
    typed = model == TYPED_TWO_STEP
    btot = np.zeros_like(dist.parents)
    for ln, line in enumerate(lines[i:-1], start=i + 1):
        parts = line.split()
        try:
            nums = [int(x) for x in parts[1:]]
            ctx = [0, 0, 0, 0]
            for a, x in zip(axes, nums):
                ctx[a] = x
            rest = nums[len(axes):]
            if parts[0] == "C":
                v, t = (rest[0], rest[1]) if typed else (rest[0], 0)
                dist.counts[(v, t, *ctx)] = rest[-1]
            elif parts[0] == "B":
                btot[tuple(ctx)] = rest[0]
                dist.parents[tuple(ctx)] = rest[1]
            else:
                raise ValueError(parts[0])
        except (ValueError, IndexError):
            raise DistFormatError(f"{path}:{ln}: malformed line {line!r}") from None
    if not np.array_equal(btot, dist.child_totals):
        raise DistFormatError(f"{path}: child totals disagree with the counts")
    return dist
