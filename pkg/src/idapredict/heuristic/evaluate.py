"""Heuristic specifications and the per-node evaluation kernel."""

from collections import namedtuple
from dataclasses import dataclass, field
from enum import IntEnum
from typing import List, Optional

import numpy as np

from .._jit import njit
from ..domain import cube as cb
from ..domain import tiles as tl
from ..domain.core import Domain, domain_of
from ..domain.kernels import CUBE, TILE, find_blank
from .pdb import PT_EDGE, PT_TILE, PatternDatabase
from .ranking import rank


class Kind(IntEnum):
    MANHATTAN = 0
    PDB_REGULAR = 1
    PDB_DUAL = 2
    PDB_RANDOM_SYMMETRY = 3
    PDB_MAX = 4
    BLANK_PARITY_SPLIT = 5
    INTERLEAVE_ZERO = 6
    ZERO = 7


MODE_NAMES = {
    "md": Kind.MANHATTAN, "manhattan": Kind.MANHATTAN,
    "regular": Kind.PDB_REGULAR, "dual": Kind.PDB_DUAL, "randsym": Kind.PDB_RANDOM_SYMMETRY,
    "max": Kind.PDB_MAX, "split": Kind.BLANK_PARITY_SPLIT, "interleave": Kind.INTERLEAVE_ZERO,
    "zero": Kind.ZERO,
}

_N_PDBS = {
    Kind.MANHATTAN: 0, Kind.ZERO: 0, Kind.PDB_REGULAR: 1, Kind.PDB_DUAL: 1,
    Kind.PDB_RANDOM_SYMMETRY: 1, Kind.BLANK_PARITY_SPLIT: 2, Kind.INTERLEAVE_ZERO: 1,
}

# consistent heuristics: neighbouring values differ by at most one
CONSISTENT_KINDS = (Kind.MANHATTAN, Kind.PDB_REGULAR, Kind.PDB_MAX, Kind.ZERO)

HPack = namedtuple(
    "HPack",
    ["kind", "n_pdb", "ptype", "plen", "npos", "base", "pieces", "pidx", "table", "offs",
     "md", "syms", "syms_inv"],
)


class DomainMismatch(ValueError):
    pass


@dataclass(eq=False)
class HeuristicSpec:
    """``kind`` plus the PDBs it consults.  ``stream`` names the rng stream of
    the random-symmetry kind."""

    kind: Kind
    pdbs: List[PatternDatabase] = field(default_factory=list)
    domain: Optional[Domain] = None
    stream: int = 0
    _pack: Optional[HPack] = field(default=None, repr=False)

    def __post_init__(self):
        self.kind = Kind(self.kind)
        need = _N_PDBS.get(self.kind)
        if need is not None and len(self.pdbs) != need:
            raise ValueError(f"{self.kind.name} needs {need} pattern database(s), got {len(self.pdbs)}")
        if self.kind == Kind.PDB_MAX and not self.pdbs:
            raise ValueError("PDB_MAX needs at least one pattern database")
        kinds = {p.pattern.domain_kind for p in self.pdbs}
        if len(kinds) > 1:
            raise DomainMismatch("pattern databases from different domains")
        if self.domain is None:
            if not self.pdbs:
                raise ValueError("domain required for heuristics without pattern databases")
            p = self.pdbs[0].pattern
            from ..domain.core import CubeDomain, TileDomain
            self.domain = TileDomain(p.width, p.height) if p.domain_kind == TILE else CubeDomain()
        for p in self.pdbs:
            pat = p.pattern
            if pat.domain_kind != self.domain.kind or (
                    pat.domain_kind == TILE and (pat.width, pat.height) != (self.domain.width, self.domain.height)):
                raise DomainMismatch("pattern database does not match the domain")
        tile_only = (Kind.MANHATTAN, Kind.BLANK_PARITY_SPLIT, Kind.INTERLEAVE_ZERO)
        if self.kind in tile_only and self.domain.kind != TILE:
            raise DomainMismatch(f"{self.kind.name} applies to tile domains only")
        cube_only = (Kind.PDB_DUAL, Kind.PDB_RANDOM_SYMMETRY)
        if self.kind in cube_only and self.domain.kind != CUBE:
            raise DomainMismatch(f"{self.kind.name} lookups are implemented for the cube only")

    @property
    def consistent(self) -> bool:
        return self.kind in CONSISTENT_KINDS

    @property
    def h_max(self) -> int:
        if self.kind == Kind.ZERO:
            return 0
        if self.kind == Kind.MANHATTAN:
            return tl.max_manhattan(self.domain.width, self.domain.height)
        return max(p.h_max for p in self.pdbs)

    @property
    def pack(self) -> HPack:
        if self._pack is None:
            self._pack = make_pack(self)
        return self._pack

    def describe(self) -> str:
        inner = "+".join(p.pattern.describe() for p in self.pdbs)
        return f"{self.kind.name.lower()}({inner})" if inner else self.kind.name.lower()


def make_pack(spec: HeuristicSpec) -> HPack:
    pdbs = spec.pdbs
    k = max(1, len(pdbs))
    ptype = np.zeros(k, dtype=np.int64)
    plen = np.zeros(k, dtype=np.int64)
    npos = np.ones(k, dtype=np.int64)
    base = np.ones(k, dtype=np.int64)
    pieces = np.zeros((k, 64), dtype=np.int64)
    pidx = np.full((k, 64), -1, dtype=np.int64)
    offs = np.zeros(k, dtype=np.int64)
    total = sum(p.entry_count for p in pdbs)
    table = np.empty(max(total, 1), dtype=np.uint8)
    o = 0
    for i, p in enumerate(pdbs):
        pat = p.pattern
        ptype[i] = pat.ptype
        plen[i] = len(pat.pieces)
        npos[i] = pat.npos
        base[i] = pat.base
        for j, x in enumerate(pat.pieces):
            pieces[i, j] = x
            pidx[i, x] = j
        offs[i] = o
        table[o:o + p.entry_count] = p.entries
        o += p.entry_count
    d = spec.domain
    if d.kind == TILE:
        md = tl.manhattan_table(d.width, d.height).astype(np.int64)
    else:
        md = np.zeros((1, 1), dtype=np.int64)
    return HPack(int(spec.kind), len(pdbs), ptype, plen, npos, base, pieces, pidx, table, offs,
                 md, cb.SYMS.astype(np.int64), cb.SYMS_INV.astype(np.int64))


@njit(inline="always")
def _lookup_regular(hp, i, s, pos, ori):
    pt = hp.ptype[i]
    k = hp.plen[i]
    if pt == PT_TILE:
        for p in range(hp.npos[i]):
            j = hp.pidx[i, s[p]]
            if j >= 0:
                pos[j] = p
        ori[0] = 0
    elif pt == PT_EDGE:
        for p in range(12):
            j = hp.pidx[i, s[16 + p]]
            if j >= 0:
                pos[j] = p
                ori[j] = s[28 + p]
    else:
        for p in range(8):
            j = hp.pidx[i, s[p]]
            if j >= 0:
                pos[j] = p
                ori[j] = s[8 + p]
    r = rank(pos, ori, k, hp.npos[i], hp.base[i])
    return np.int64(hp.table[hp.offs[i] + r])


@njit(inline="always")
def _lookup_dual(hp, i, s, pos, ori):
    # in the inverse element, cubie c sits where s moved position c's cubie:
    # location s.p[c], twist -s.o[c]
    k = hp.plen[i]
    if hp.ptype[i] == PT_EDGE:
        for j in range(k):
            e = hp.pieces[i, j]
            pos[j] = s[16 + e]
            ori[j] = s[28 + e]
    else:
        for j in range(k):
            c = hp.pieces[i, j]
            pos[j] = s[c]
            ori[j] = (3 - s[8 + c]) % 3
    r = rank(pos, ori, k, hp.npos[i], hp.base[i])
    return np.int64(hp.table[hp.offs[i] + r])


@njit(inline="always")
def _conjugate(hp, sym, s, out, tmp):
    # out = S * s * S^-1
    a = hp.syms[sym]
    b = hp.syms_inv[sym]
    for i in range(8):
        j = s[i]
        tmp[i] = a[j]
        tmp[8 + i] = (a[8 + j] + s[8 + i]) % 3
    for i in range(12):
        j = s[16 + i]
        tmp[16 + i] = a[16 + j]
        tmp[28 + i] = (a[28 + j] + s[28 + i]) % 2
    for i in range(8):
        j = b[i]
        out[i] = tmp[j]
        out[8 + i] = (tmp[8 + j] + b[8 + i]) % 3
    for i in range(12):
        j = b[16 + i]
        out[16 + i] = tmp[16 + j]
        out[28 + i] = (tmp[28 + j] + b[28 + i]) % 2


@njit
def h_eval(hp, dp, s, blank, ws):
    """Heuristic value of flat state ``s``.  ``ws`` is an int64 work array of
    length ``WS_LEN``.  Random-symmetry lookups draw one symmetry per call."""
    kind = hp.kind
    pos = ws[0:32]
    ori = ws[32:64]
    if kind == 0:
        h = 0
        for p in range(dp.n):
            h += hp.md[s[p], p]
        return h
    if kind == 1:
        return _lookup_regular(hp, 0, s, pos, ori)
    if kind == 2:
        return _lookup_dual(hp, 0, s, pos, ori)
    if kind == 3:
        sym = np.random.randint(0, 24)
        out = ws[64:104]
        tmp = ws[104:144]
        _conjugate(hp, sym, s, out, tmp)
        return _lookup_regular(hp, 0, out, pos, ori)
    if kind == 4:
        best = 0
        for i in range(hp.n_pdb):
            v = _lookup_regular(hp, i, s, pos, ori)
            if v > best:
                best = v
        return best
    if kind == 5 or kind == 6:
        if blank < 0:
            blank = find_blank(dp, s)
        same = dp.cpar[blank] == dp.cpar[0]
        if kind == 5:
            return _lookup_regular(hp, 0 if same else 1, s, pos, ori)
        if same:
            return _lookup_regular(hp, 0, s, pos, ori)
        return np.int64(0)
    return np.int64(0)


WS_LEN = 144


def new_workspace() -> np.ndarray:
    return np.zeros(WS_LEN, dtype=np.int64)


@njit
def _eval_batch(hp, dp, states, seed, out):
    if seed >= 0:
        np.random.seed(seed)
    ws = np.zeros(WS_LEN, dtype=np.int64)
    for i in range(states.shape[0]):
        out[i] = h_eval(hp, dp, states[i], -1, ws)


def evaluate_many(spec: HeuristicSpec, states: np.ndarray, seed: int = -1) -> np.ndarray:
    """Vectorised evaluation over rows of flat states (int8)."""
    states = np.ascontiguousarray(states, dtype=np.int8)
    out = np.empty(states.shape[0], dtype=np.int64)
    _eval_batch(spec.pack, spec.domain.pack, states, int(seed), out)
    return out


def evaluate(spec: HeuristicSpec, state, rng=None) -> int:
    """Heuristic value of one state.  ``rng`` (a numpy Generator or int seed)
    drives the random-symmetry kind; other kinds ignore it."""
    d = domain_of(state)
    if d != spec.domain:
        raise DomainMismatch(f"heuristic for {spec.domain!r} applied to {d!r}")
    seed = -1
    if spec.kind == Kind.PDB_RANDOM_SYMMETRY:
        if rng is None:
            rng = np.random.default_rng(spec.stream)
        if isinstance(rng, np.random.Generator):
            seed = int(rng.integers(0, 2**31 - 1))
        else:
            seed = int(rng)
    flat = state.flat[None, :]
    return int(evaluate_many(spec, flat, seed)[0])
