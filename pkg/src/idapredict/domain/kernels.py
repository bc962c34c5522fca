"""Per-node primitives shared by every search and sampling kernel.

Domains are passed to kernels as a :class:`DomainPack`.  Tiles and cubes share
one pack type (unused tables are 1-row dummies) so each kernel compiles once.
"""

from collections import namedtuple

import numpy as np

from .._jit import njit

TILE, CUBE = 0, 1

DomainPack = namedtuple(
    "DomainPack",
    ["kind", "width", "n", "n_ops", "nbr", "moves", "allowed", "goal", "ctype", "cpar"],
)


@njit(inline="always")
def find_blank(dp, s):
    if dp.kind == TILE:
        for p in range(dp.n):
            if s[p] == 0:
                return p
    return -1


@njit(inline="always")
def op_allowed(dp, last, op, blank):
    """Operator pruning plus board edges."""
    if dp.kind == TILE:
        if dp.nbr[blank, op] < 0:
            return False
        return last < 0 or op != 3 - last
    return dp.allowed[last + 1, op]


@njit(inline="always")
def apply_op(dp, src, dst, blank, op):
    """Write the child of ``src`` under ``op`` into ``dst``; returns the
    child's blank cell (tiles) or -1 (cube)."""
    if dp.kind == TILE:
        nb = dp.nbr[blank, op]
        for i in range(dp.n):
            dst[i] = src[i]
        dst[blank] = src[nb]
        dst[nb] = 0
        return nb
    m = dp.moves[op]
    for i in range(8):
        j = m[i]
        dst[i] = src[j]
        dst[8 + i] = (src[8 + j] + m[8 + i]) % 3
    for i in range(12):
        j = m[16 + i]
        dst[16 + i] = src[16 + j]
        dst[28 + i] = (src[28 + j] + m[28 + i]) % 2
    return -1


@njit(inline="always")
def node_type(dp, blank):
    if dp.kind == TILE:
        return dp.ctype[blank]
    return 0


@njit(inline="always")
def is_goal(dp, s):
    for i in range(s.shape[0]):
        if s[i] != dp.goal[i]:
            return False
    return True


@njit
def random_walk(dp, s, blank, length, last):
    """In-place operator-pruned uniform random walk; returns (blank, last op)."""
    tmp = np.empty_like(s)
    cand = np.empty(dp.n_ops, dtype=np.int64)
    for _ in range(length):
        k = 0
        for o in range(dp.n_ops):
            if op_allowed(dp, last, o, blank):
                cand[k] = o
                k += 1
        o = cand[np.random.randint(0, k)]
        blank = apply_op(dp, s, tmp, blank, o)
        for i in range(s.shape[0]):
            s[i] = tmp[i]
        last = o
    return blank, last
