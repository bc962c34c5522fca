"""Exact expansion counts by propagating counters through the abstract space.

When the heuristic is a regular lookup in a tile PDB whose pattern includes
the blank, a node's heuristic value and its set of legal moves depend only
on its abstract state, so the brute-force tree can be counted at the level
of abstract states.  Counters are keyed by (abstract state, last operator)
so parent pruning is exact.
"""

import numpy as np

from .._jit import njit
from ..heuristic.evaluate import HeuristicSpec, Kind
from ..heuristic.pdb import PT_TILE, UNSET, PatternDatabase, abstract_move, abstract_tables
from ..heuristic.ranking import rank, unrank

NONE = 4


class ConditionsNotMet(ValueError):
    pass


@njit
def _transitions(fpos, fori, k, npos, n_entries, out):
    pos = np.empty(k, dtype=np.int64)
    ori = np.zeros(k, dtype=np.int64)
    p2 = np.empty(k, dtype=np.int64)
    used = np.empty(npos, dtype=np.int64)
    for r in range(n_entries):
        unrank(r, pos, ori, k, npos, 1, used)
        for o in range(4):
            for i in range(k):
                p2[i] = pos[i]
            if abstract_move(PT_TILE, fpos, fori, p2, ori, k, 1, o):
                out[r, o] = rank(p2, ori, k, npos, 1)
            else:
                out[r, o] = -1


@njit
def _propagate(trans, entries, cnt, d, per_level):
    n = trans.shape[0]
    cur = cnt
    for i in range(d + 1):
        nxt = np.zeros_like(cur)
        lim = d - i
        tot = 0
        for a in range(n):
            e = entries[a]
            if e > lim:
                continue
            for l in range(5):
                c = cur[a, l]
                if c == 0:
                    continue
                tot += c
                if i == d:
                    continue
                for o in range(4):
                    b = trans[a, o]
                    if b < 0 or (l < 4 and o == 3 - l):
                        continue
                    nxt[b, o] += c
        per_level[i] = tot
        cur = nxt


class ExactPredictor:
    """Precomputed abstract transition table for one PDB; reusable across
    start sets and thresholds."""

    def __init__(self, pdb: PatternDatabase):
        pat = pdb.pattern
        if pat.ptype != PT_TILE or pat.pieces[0] != 0:
            raise ConditionsNotMet("exact prediction needs a tile pattern that includes the blank")
        self.pdb = pdb
        self.k = len(pat.pieces)
        self.npos = pat.npos
        fpos, fori = abstract_tables(pat)
        self.trans = np.zeros((pdb.entry_count, 4), dtype=np.int64)
        _transitions(fpos, fori, self.k, self.npos, pdb.entry_count, self.trans)
        self.pieces = np.array(pat.pieces)
        self.entries = pdb.entries.astype(np.int64)
        self.entries[pdb.entries == UNSET] = 1 << 30

    def project(self, flat) -> int:
        flat = np.asarray(flat)
        pos = np.array([int(np.flatnonzero(flat == t)[0]) for t in self.pieces], dtype=np.int64)
        return int(rank(pos, np.zeros(self.k, dtype=np.int64), self.k, self.npos, 1))

    def per_level(self, starts, d: int, lasts=None) -> np.ndarray:
        cnt = np.zeros((self.trans.shape[0], 5), dtype=np.int64)
        starts = list(starts)
        lasts = [-1] * len(starts) if lasts is None else lasts
        for s, l in zip(starts, lasts):
            cnt[self.project(s.flat if hasattr(s, "flat") else s), NONE if l < 0 else l] += 1
        out = np.zeros(d + 1, dtype=np.int64)
        _propagate(self.trans, self.entries, cnt, d, out)
        return out

    def count(self, starts, d: int) -> int:
        return int(self.per_level(starts, d).sum())


def exact_abstract_predict(pdb, starts, d: int) -> int:
    """Exact number of nodes IDA* expands from ``starts`` (summed) at threshold d."""
    if isinstance(pdb, HeuristicSpec):
        if pdb.kind != Kind.PDB_REGULAR or len(pdb.pdbs) != 1:
            raise ConditionsNotMet("exact prediction needs a single regular PDB lookup")
        pdb = pdb.pdbs[0]
    return ExactPredictor(pdb).count(starts, d)
