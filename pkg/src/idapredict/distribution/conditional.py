"""Conditional heuristic-value distributions.

All models share one dense layout.  ``counts[v, t, vp, tp, vg, tg]`` counts
children of value ``v`` and type ``t`` generated by a parent ``(vp, tp)``
whose own parent was ``(vg, tg)``.  The one-step model has singleton
grandparent axes, untyped models a singleton type axis.  ``parents`` counts
parent expansions per context, so ``b = counts.sum((0, 1)) / parents`` and
``b * p(v|ctx) = counts / parents``.
"""

from dataclasses import dataclass, field
from typing import Dict

import numpy as np

ONE_STEP = "one_step"
TWO_STEP = "two_step"
TYPED_TWO_STEP = "typed_two_step"
MODELS = (ONE_STEP, TWO_STEP, TYPED_TWO_STEP)


class ModelMismatch(ValueError):
    pass


@dataclass(eq=False)
class ConditionalDistribution:
    model: str
    counts: np.ndarray
    parents: np.ndarray
    meta: Dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if self.model not in MODELS:
            raise ValueError(f"unknown model {self.model!r}")
        self.counts = np.asarray(self.counts, dtype=np.int64)
        self.parents = np.asarray(self.parents, dtype=np.int64)
        if self.counts.ndim != 6 or self.parents.shape != self.counts.shape[2:]:
            raise ValueError("counts must be 6-d and parents must match its context axes")

    @classmethod
    def empty(cls, model: str, h_max: int, n_types: int = 1, **meta) -> "ConditionalDistribution":
        H = h_max + 1
        T = n_types if model == TYPED_TWO_STEP else 1
        G, TG = (1, 1) if model == ONE_STEP else (H, T)
        return cls(model, np.zeros((H, T, H, T, G, TG), dtype=np.int64),
                   np.zeros((H, T, G, TG), dtype=np.int64), dict(meta))

    @property
    def h_max(self) -> int:
        return self.counts.shape[0] - 1

    @property
    def n_types(self) -> int:
        return self.counts.shape[1]

    @property
    def child_totals(self) -> np.ndarray:
        return self.counts.sum(axis=(0, 1))

    def p(self) -> np.ndarray:
        """p(v, t | context); columns without data are all zero."""
        tot = self.child_totals
        with np.errstate(invalid="ignore", divide="ignore"):
            out = self.counts / np.where(tot > 0, tot, 1)
        return out

    def b(self) -> np.ndarray:
        with np.errstate(invalid="ignore", divide="ignore"):
            return np.where(self.parents > 0, self.child_totals / np.maximum(self.parents, 1), 0.0)

    def bp(self) -> np.ndarray:
        """Expected children of each (v, t) per parent expansion in a context."""
        return self.counts / np.maximum(self.parents, 1)

    def merge(self, other: "ConditionalDistribution") -> "ConditionalDistribution":
        if other.model != self.model or other.counts.shape != self.counts.shape:
            raise ModelMismatch("cannot merge distributions of different models or shapes")
        meta = dict(self.meta)
        if "samples" in self.meta and "samples" in other.meta:
            meta["samples"] = str(int(self.meta["samples"]) + int(other.meta["samples"]))
        return ConditionalDistribution(self.model, self.counts + other.counts,
                                       self.parents + other.parents, meta)

    def untyped(self) -> "ConditionalDistribution":
        """Sum out every type axis."""
        if self.n_types == 1:
            return self
        c = self.counts.sum(axis=(1, 3, 5), keepdims=True)
        par = self.parents.sum(axis=(1, 3), keepdims=True)
        model = TWO_STEP if self.model == TYPED_TWO_STEP else self.model
        return ConditionalDistribution(model, c, par, dict(self.meta))

    def one_step(self) -> "ConditionalDistribution":
        """Marginal one-step model (grandparent axes summed out)."""
        if self.model == ONE_STEP:
            return self
        c = self.counts.sum(axis=(4, 5), keepdims=True)
        par = self.parents.sum(axis=(2, 3), keepdims=True)
        return ConditionalDistribution(ONE_STEP, c, par, dict(self.meta))

    def resized(self, h_max: int) -> "ConditionalDistribution":
        """Pad (or trim empty rows) to a new value range."""
        H = h_max + 1
        T = self.n_types
        G = 1 if self.model == ONE_STEP else H
        TG = self.counts.shape[5]
        c = np.zeros((H, T, H, T, G, TG), dtype=np.int64)
        par = np.zeros((H, T, G, TG), dtype=np.int64)
        h = min(H, self.counts.shape[0])
        g = min(G, self.counts.shape[4])
        if self.counts[h:].any() or self.counts[:, :, h:].any():
            raise ValueError("cannot trim rows that hold data")
        c[:h, :, :h, :, :g] = self.counts[:h, :, :h, :, :g]
        par[:h, :, :g] = self.parents[:h, :, :g]
        return ConditionalDistribution(self.model, c, par, dict(self.meta))

    def __eq__(self, other):
        return (isinstance(other, ConditionalDistribution) and self.model == other.model
                and np.array_equal(self.counts, other.counts) and np.array_equal(self.parents, other.parents))


def flattened(cond: ConditionalDistribution, p_uncond: np.ndarray) -> ConditionalDistribution:
    """Same branching factors, every column replaced by the unconditional
    distribution (type axes must be singleton).  Counts are kept as floats
    scaled per column, so this is for prediction only."""
    if cond.n_types != 1:
        raise ValueError("flattened() needs an untyped distribution")
    H = cond.h_max + 1
    pu = np.zeros(H)
    m = min(H, len(p_uncond))
    pu[:m] = p_uncond[:m]
    tot = cond.child_totals.astype(np.float64)
    counts = pu[:, None, None, None, None, None] * tot[None, None]
    out = ConditionalDistribution.__new__(ConditionalDistribution)
    out.model, out.meta = cond.model, dict(cond.meta)
    out.counts, out.parents = counts, cond.parents.copy()
    return out
