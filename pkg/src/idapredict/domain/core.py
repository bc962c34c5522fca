"""State types, domain objects and the public domain operations."""

from dataclasses import dataclass
from enum import IntEnum
from typing import List, Optional, Tuple, Union

import numpy as np

from . import cube as cb
from . import tiles as tl
from .kernels import CUBE, TILE, DomainPack


class BlankType(IntEnum):
    CORNER = tl.CORNER
    EDGE = tl.EDGE
    INTERIOR = tl.INTERIOR


@dataclass(frozen=True)
class MoveContext:
    """Operator pruning state: the operator that produced the node (None at a root)."""

    last_op: Optional[int] = None

    @property
    def code(self) -> int:
        return -1 if self.last_op is None else int(self.last_op)


NONE_CTX = MoveContext()


@dataclass(frozen=True, eq=False)
class TileState:
    cells: np.ndarray
    width: int
    height: int

    def __post_init__(self):
        cells = np.asarray(self.cells, dtype=np.int8)
        object.__setattr__(self, "cells", cells)
        n = self.width * self.height
        if cells.shape != (n,) or sorted(cells.tolist()) != list(range(n)):
            raise ValueError("cells must be a permutation of 0..w*h-1")
        if not tl.is_solvable(cells, self.width):
            raise ValueError("tile state is not reachable from the goal")

    @property
    def blank_pos(self) -> int:
        return int(np.flatnonzero(self.cells == 0)[0])

    @property
    def flat(self) -> np.ndarray:
        return self.cells

    def __eq__(self, other):
        return (isinstance(other, TileState) and self.width == other.width
                and self.height == other.height and np.array_equal(self.cells, other.cells))

    def __hash__(self):
        return hash((self.width, self.height, self.cells.tobytes()))

    def __repr__(self):
        return f"TileState({self.width}x{self.height}, {self.cells.tolist()})"


@dataclass(frozen=True, eq=False)
class CubeState:
    corner_perm: np.ndarray
    corner_ori: np.ndarray
    edge_perm: np.ndarray
    edge_ori: np.ndarray

    def __post_init__(self):
        for name in ("corner_perm", "corner_ori", "edge_perm", "edge_ori"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=np.int8))
        if not cb.is_valid(self.flat):
            raise ValueError("invalid cube state")

    @classmethod
    def from_flat(cls, flat) -> "CubeState":
        flat = np.asarray(flat, dtype=np.int8)
        return cls(flat[cb.CP], flat[cb.CO], flat[cb.EP], flat[cb.EO])

    @property
    def flat(self) -> np.ndarray:
        return np.concatenate([self.corner_perm, self.corner_ori, self.edge_perm, self.edge_ori])

    def __eq__(self, other):
        return isinstance(other, CubeState) and np.array_equal(self.flat, other.flat)

    def __hash__(self):
        return hash(self.flat.tobytes())

    def __repr__(self):
        return f"CubeState({encode_state(self)})"


State = Union[TileState, CubeState]


class TileDomain:
    kind = TILE
    name = "tile"
    n_ops = tl.N_OPS
    max_branching = 4
    n_types = tl.N_TYPES

    def __init__(self, width: int, height: int):
        if width < 2 or height < 2:
            raise ValueError("board must be at least 2x2")
        self.width, self.height = int(width), int(height)
        self.n = self.width * self.height
        self.state_len = self.n
        self.nbr = tl.neighbor_table(self.width, self.height)
        self.ctype = tl.cell_types(self.width, self.height)
        self.cpar = tl.cell_parity(self.width, self.height)
        self.pack = DomainPack(
            TILE, self.width, self.n, tl.N_OPS, self.nbr,
            np.zeros((1, 40), dtype=np.int8), np.zeros((1, 18), dtype=np.bool_),
            np.arange(self.n, dtype=np.int8), self.ctype, self.cpar,
        )

    @property
    def tag(self) -> str:
        return f"tile{self.width}x{self.height}"

    def goal(self) -> TileState:
        return TileState(np.arange(self.n), self.width, self.height)

    def state(self, flat) -> TileState:
        return TileState(np.asarray(flat), self.width, self.height)

    def __eq__(self, other):
        return isinstance(other, TileDomain) and (self.width, self.height) == (other.width, other.height)

    def __hash__(self):
        return hash(self.tag)

    def __repr__(self):
        return f"TileDomain({self.width}, {self.height})"


class CubeDomain:
    kind = CUBE
    name = "cube"
    n_ops = cb.N_MOVES
    max_branching = cb.MAX_BRANCHING
    n_types = 1
    state_len = cb.STATE_LEN
    width = height = 0
    tag = "cube"

    def __init__(self):
        self.pack = DomainPack(
            CUBE, 0, cb.STATE_LEN, cb.N_MOVES, np.full((1, 4), -1, dtype=np.int16),
            cb.MOVES, cb.ALLOWED, cb.GOAL.copy(), np.zeros(1, dtype=np.int8), np.zeros(1, dtype=np.int8),
        )

    def goal(self) -> CubeState:
        return CubeState.from_flat(cb.GOAL)

    def state(self, flat) -> CubeState:
        return CubeState.from_flat(flat)

    def __eq__(self, other):
        return isinstance(other, CubeDomain)

    def __hash__(self):
        return hash(self.tag)

    def __repr__(self):
        return "CubeDomain()"


Domain = Union[TileDomain, CubeDomain]


def make_domain(tag: str) -> Domain:
    """``cube``, ``8puzzle``, ``15puzzle`` or ``tileWxH``."""
    t = tag.strip().lower()
    if t in ("cube", "rubik", "rubiks"):
        return CubeDomain()
    if t in ("8puzzle", "8-puzzle"):
        return TileDomain(3, 3)
    if t in ("15puzzle", "15-puzzle"):
        return TileDomain(4, 4)
    if t.startswith("tile"):
        w, h = t[4:].split("x")
        return TileDomain(int(w), int(h))
    raise ValueError(f"unknown domain {tag!r}")


def domain_of(state: State) -> Domain:
    if isinstance(state, TileState):
        return TileDomain(state.width, state.height)
    return CubeDomain()


def expand(state: State, ctx: MoveContext = NONE_CTX) -> List[Tuple[int, State]]:
    """Children after operator pruning, in the fixed operator order."""
    out = []
    last = ctx.code
    if isinstance(state, TileState):
        w = state.width
        nbr = tl.neighbor_table(w, state.height)
        b = state.blank_pos
        for op in range(tl.N_OPS):
            nb = nbr[b, op]
            if nb < 0 or (last >= 0 and op == 3 - last):
                continue
            c = state.cells.copy()
            c[b], c[nb] = c[nb], 0
            out.append((op, TileState(c, w, state.height)))
        return out
    s = state.flat
    for op in range(cb.N_MOVES):
        if cb.ALLOWED[last + 1, op]:
            out.append((op, CubeState.from_flat(cb.compose(s, cb.MOVES[op]))))
    return out


def dual_state(state: State) -> State:
    """Swap the roles of pieces and locations.

    Tiles: inverse permutation of ``cells``.  This is only a state of the same
    puzzle when the blank is on its home cell (otherwise the inverse lands in
    the other parity class), so other tile states raise ``ValueError``.
    Cube: group inverse.
    """
    if isinstance(state, TileState):
        if state.blank_pos != 0:
            raise ValueError("tile dual is defined only for states with the blank at its goal cell")
        inv = np.argsort(state.cells).astype(np.int8)
        return TileState(inv, state.width, state.height)
    return CubeState.from_flat(cb.inverse(state.flat))


def symmetry_map(state: CubeState, sym: int) -> CubeState:
    """Conjugate by whole-cube rotation ``sym`` (0 is the identity)."""
    if not isinstance(state, CubeState):
        raise TypeError("symmetry_map applies to cube states")
    if not 0 <= sym < 24:
        raise ValueError("sym must be in 0..23")
    s = cb.compose(cb.compose(cb.SYMS[sym], state.flat), cb.SYMS_INV[sym])
    return CubeState.from_flat(s)


def cube_random_flat(rng: np.random.Generator, length: int = 180) -> Tuple[np.ndarray, int]:
    s = cb.GOAL.copy()
    last = -1
    for _ in range(length):
        ops = np.flatnonzero(cb.ALLOWED[last + 1])
        op = int(ops[rng.integers(len(ops))])
        s = cb.compose(s, cb.MOVES[op])
        last = op
    return s, last


def random_state(domain: Domain, seed) -> State:
    """Cube: 180 pruned random moves from the goal.  Tiles: uniform over the
    reachable half of the permutations."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    if isinstance(domain, CubeDomain):
        return CubeState.from_flat(cube_random_flat(rng)[0])
    return TileState(tl.random_cells(domain.width, domain.height, rng), domain.width, domain.height)


def classify_blank_type(state: TileState) -> BlankType:
    t = tl.cell_types(state.width, state.height)[state.blank_pos]
    return BlankType(int(t))


def encode_state(state: State) -> str:
    if isinstance(state, TileState):
        return " ".join(str(x) for x in [state.width, state.height] + state.cells.tolist())
    f = state.flat

    def j(a):
        return ",".join(str(int(x)) for x in a)
    return f"CP:{j(f[cb.CP])} CO:{j(f[cb.CO])} EP:{j(f[cb.EP])} EO:{j(f[cb.EO])}"


def decode_state(text: str) -> State:
    text = text.strip()
    if text.startswith("CP:"):
        parts = dict(p.split(":", 1) for p in text.split())
        vals = [np.array([int(x) for x in parts[k].split(",")], dtype=np.int8)
                for k in ("CP", "CO", "EP", "EO")]
        return CubeState(*vals)
    nums = [int(x) for x in text.split()]
    w, h = nums[0], nums[1]
    return TileState(np.array(nums[2:], dtype=np.int8), w, h)
