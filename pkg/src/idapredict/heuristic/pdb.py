"""Pattern databases: construction by breadth-first search over the abstract
space, plus a compact binary file format.

Abstract spaces are undirected, so a forward BFS from the abstract goal gives
the distance *to* the goal of every abstract state.  The BFS runs layer by
layer over the table itself (no queue), which keeps peak memory at one byte
per entry.
"""

import struct
from dataclasses import dataclass, field
from typing import Tuple

import numpy as np

from .._jit import njit
from ..domain import cube as cb
from ..domain import tiles as tl
from ..domain.kernels import CUBE, TILE
from .ranking import entry_count as _entry_count
from .ranking import rank, unrank

UNSET = 255
PT_TILE, PT_CORNER, PT_EDGE = 0, 1, 2
MAGIC = b"PDB1"
DEFAULT_CAPACITY = 1 << 31


class CapacityError(RuntimeError):
    pass


class FormatError(ValueError):
    pass


@dataclass(frozen=True)
class PatternDef:
    """Tracked pieces.  Tile patterns always track the blank (kept implicit in
    ``tiles``); cube patterns track either corners or edges."""

    domain_kind: int
    width: int = 0
    height: int = 0
    tiles: Tuple[int, ...] = ()
    corners: Tuple[int, ...] = ()
    edges: Tuple[int, ...] = ()

    def __post_init__(self):
        if self.domain_kind == TILE:
            n = self.width * self.height
            if self.corners or self.edges:
                raise ValueError("tile pattern cannot track cubies")
            if len(set(self.tiles)) != len(self.tiles) or not all(0 < t < n for t in self.tiles):
                raise ValueError("tile ids must be distinct and in 1..n-1")
            if not self.tiles:
                raise ValueError("empty pattern")
        else:
            if bool(self.corners) == bool(self.edges):
                raise ValueError("cube pattern tracks corners or edges (exactly one kind)")
            ids, lim = (self.corners, 8) if self.corners else (self.edges, 12)
            if len(set(ids)) != len(ids) or not all(0 <= x < lim for x in ids):
                raise ValueError("cubie ids must be distinct and in range")

    @classmethod
    def tile(cls, width, height, tiles):
        return cls(TILE, int(width), int(height), tuple(int(t) for t in tiles))

    @classmethod
    def cube_edges(cls, edges):
        return cls(CUBE, edges=tuple(int(e) for e in edges))

    @classmethod
    def cube_corners(cls, corners):
        return cls(CUBE, corners=tuple(int(c) for c in corners))

    @property
    def ptype(self) -> int:
        if self.domain_kind == TILE:
            return PT_TILE
        return PT_CORNER if self.corners else PT_EDGE

    @property
    def pieces(self) -> Tuple[int, ...]:
        if self.ptype == PT_TILE:
            return (0,) + self.tiles
        return self.corners if self.corners else self.edges

    @property
    def npos(self) -> int:
        return (self.width * self.height, 8, 12)[self.ptype]

    @property
    def base(self) -> int:
        return (1, 3, 2)[self.ptype]

    @property
    def entry_count(self) -> int:
        return _entry_count(self.npos, len(self.pieces), self.base)

    def describe(self) -> str:
        if self.ptype == PT_TILE:
            return f"tile{self.width}x{self.height}:" + ",".join(map(str, self.tiles))
        kind = "corners" if self.corners else "edges"
        return f"cube-{kind}:" + ",".join(map(str, self.pieces))


@dataclass(eq=False)
class PatternDatabase:
    pattern: PatternDef
    entries: np.ndarray = field(repr=False)

    @property
    def entry_count(self) -> int:
        return int(self.entries.shape[0])

    @property
    def h_max(self) -> int:
        e = self.entries
        valid = e[e != UNSET]
        return int(valid.max()) if valid.size else 0

    def __eq__(self, other):
        return (isinstance(other, PatternDatabase) and self.pattern == other.pattern
                and np.array_equal(self.entries, other.entries))


def abstract_tables(pattern: PatternDef):
    """Forward move tables for abstract moves: ``fpos[op, p]`` is where a
    piece at location ``p`` goes, ``fori[op, p]`` the twist it gains.  For
    tiles ``fpos`` is the blank neighbour table (pieces are swapped, not
    mapped)."""
    if pattern.ptype == PT_TILE:
        nbr = tl.neighbor_table(pattern.width, pattern.height).astype(np.int64)
        return nbr, np.zeros_like(nbr)
    if pattern.ptype == PT_CORNER:
        return cb.FWD_CP.astype(np.int64), cb.FWD_CO.astype(np.int64)
    return cb.FWD_EP.astype(np.int64), cb.FWD_EO.astype(np.int64)


@njit(inline="always")
def abstract_move(ptype, fpos, fori, pos, ori, k, base, op):
    """Apply ``op`` in place; returns False for an illegal tile move."""
    if ptype == PT_TILE:
        nb = fpos[pos[0], op]
        if nb < 0:
            return False
        for i in range(1, k):
            if pos[i] == nb:
                pos[i] = pos[0]
                break
        pos[0] = nb
        return True
    for i in range(k):
        p = pos[i]
        pos[i] = fpos[op, p]
        ori[i] = (ori[i] + fori[op, p]) % base
    return True


@njit
def _bfs_kernel(table, ptype, fpos, fori, k, npos, base, goal_rank, n_ops):
    # Layers are grown top-down (expand the frontier) while the frontier is
    # small and bottom-up (an unset entry joins the next layer as soon as one
    # neighbour is on the frontier) once it outgrows the unset remainder.
    table[goal_rank] = 0
    pos0 = np.empty(k, dtype=np.int64)
    ori0 = np.empty(k, dtype=np.int64)
    pos = np.empty(k, dtype=np.int64)
    ori = np.empty(k, dtype=np.int64)
    used = np.empty(npos, dtype=np.int64)
    n = table.shape[0]
    depth = 0
    frontier = 1
    unset = n - 1
    while frontier > 0 and depth < 254:
        added = 0
        bottom_up = frontier > unset
        for r in range(n):
            t = table[r]
            if bottom_up:
                if t != 255:
                    continue
            elif t != depth:
                continue
            unrank(r, pos0, ori0, k, npos, base, used)
            for op in range(n_ops):
                for i in range(k):
                    pos[i] = pos0[i]
                    ori[i] = ori0[i]
                if not abstract_move(ptype, fpos, fori, pos, ori, k, base, op):
                    continue
                c = rank(pos, ori, k, npos, base)
                if bottom_up:
                    if table[c] == depth:
                        table[r] = depth + 1
                        added += 1
                        break
                elif table[c] == 255:
                    table[c] = depth + 1
                    added += 1
        unset -= added
        frontier = added
        depth += 1
    return depth - 1


def goal_positions(pattern: PatternDef) -> np.ndarray:
    # goal: every piece on its home location, no twist
    return np.array(pattern.pieces, dtype=np.int64)


def build_pdb(pattern: PatternDef, capacity: int = DEFAULT_CAPACITY) -> PatternDatabase:
    count = pattern.entry_count
    if count > capacity:
        raise CapacityError(f"pattern needs {count} entries, limit is {capacity}")
    k = len(pattern.pieces)
    fpos, fori = abstract_tables(pattern)
    g = goal_positions(pattern)
    goal_rank = rank(g, np.zeros(k, dtype=np.int64), k, pattern.npos, pattern.base)
    table = np.full(count, UNSET, dtype=np.uint8)
    n_ops = tl.N_OPS if pattern.ptype == PT_TILE else cb.N_MOVES
    _bfs_kernel(table, pattern.ptype, fpos, fori, k, pattern.npos, pattern.base, goal_rank, n_ops)
    return PatternDatabase(pattern, table)


def save_pdb(pdb: PatternDatabase, path) -> None:
    p = pdb.pattern
    if p.ptype == PT_TILE:
        ids = list(p.pieces)
        w, h = p.width, p.height
    else:
        ids = list(p.corners) if p.corners else [100 + e for e in p.edges]
        w = h = 0
    e = np.ascontiguousarray(pdb.entries, dtype=np.uint8)
    with open(path, "wb") as f:
        f.write(MAGIC)
        f.write(struct.pack("<BBBB", p.domain_kind, w, h, len(ids)))
        f.write(bytes(ids))
        f.write(struct.pack("<QB", e.shape[0], pdb.h_max))
        f.write(e.tobytes())


def load_pdb(path) -> PatternDatabase:
    with open(path, "rb") as f:
        data = f.read()
    if len(data) < 9 or data[:4] != MAGIC:
        raise FormatError(f"{path}: not a PDB1 file")
    kind, w, h, plen = struct.unpack_from("<BBBB", data, 4)
    off = 8
    if len(data) < off + plen + 9:
        raise FormatError(f"{path}: truncated header")
    ids = list(data[off:off + plen])
    off += plen
    count, _hmax = struct.unpack_from("<QB", data, off)
    off += 9
    if len(data) - off != count:
        raise FormatError(f"{path}: expected {count} entries, found {len(data) - off}")
    if kind == TILE:
        if not ids or ids[0] != 0:
            raise FormatError(f"{path}: tile pattern must start with the blank")
        pat = PatternDef.tile(w, h, ids[1:])
    elif kind == CUBE:
        if all(i >= 100 for i in ids):
            pat = PatternDef.cube_edges([i - 100 for i in ids])
        else:
            pat = PatternDef.cube_corners(ids)
    else:
        raise FormatError(f"{path}: unknown domain tag {kind}")
    if pat.entry_count != count:
        raise FormatError(f"{path}: entry count does not match the pattern")
    entries = np.frombuffer(data, dtype=np.uint8, offset=off, count=count).copy()
    return PatternDatabase(pat, entries)


def cache_dir():
    import os
    from pathlib import Path
    d = os.environ.get("IDAPREDICT_CACHE")
    p = Path(d) if d else Path.home() / ".cache" / "idapredict"
    p.mkdir(parents=True, exist_ok=True)
    return p


def cached_pdb(pattern: PatternDef, capacity: int = DEFAULT_CAPACITY) -> PatternDatabase:
    """Load ``pattern``'s PDB from the cache directory, building it on a miss."""
    name = pattern.describe().replace(":", "_").replace(",", "-") + ".pdb"
    path = cache_dir() / name
    if path.exists():
        try:
            pdb = load_pdb(path)
            if pdb.pattern == pattern:
                return pdb
        except FormatError:
            pass
    pdb = build_pdb(pattern, capacity)
    tmp = path.with_suffix(".tmp")
    save_pdb(pdb, tmp)
    tmp.replace(path)
    return pdb
