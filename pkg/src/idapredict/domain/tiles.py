"""Sliding-tile puzzles on a ``width x height`` board.

``cells[pos]`` is the tile at cell ``pos`` (row-major), 0 is the blank and
the goal is ``cells == arange(n)``.  Operators move the blank: 0 up, 1 left,
2 right, 3 down, so the undo of operator ``o`` is ``3 - o``.
"""

import numpy as np

N_OPS = 4
OP_NAMES = ("up", "left", "right", "down")
CORNER, EDGE, INTERIOR = 0, 1, 2
N_TYPES = 3


def neighbor_table(width: int, height: int) -> np.ndarray:
    """``nbr[pos, op]``: cell the blank moves to, or -1 if the move is off-board."""
    n = width * height
    nbr = np.full((n, N_OPS), -1, dtype=np.int16)
    for p in range(n):
        r, c = divmod(p, width)
        if r > 0:
            nbr[p, 0] = p - width
        if c > 0:
            nbr[p, 1] = p - 1
        if c < width - 1:
            nbr[p, 2] = p + 1
        if r < height - 1:
            nbr[p, 3] = p + width
    return nbr


def cell_types(width: int, height: int) -> np.ndarray:
    n = width * height
    out = np.empty(n, dtype=np.int8)
    for p in range(n):
        r, c = divmod(p, width)
        on_row = r == 0 or r == height - 1
        on_col = c == 0 or c == width - 1
        if on_row and on_col:
            out[p] = CORNER
        elif on_row or on_col:
            out[p] = EDGE
        else:
            out[p] = INTERIOR
    return out


def cell_parity(width: int, height: int) -> np.ndarray:
    """Checkerboard colour of every cell."""
    r, c = np.divmod(np.arange(width * height), width)
    return ((r + c) & 1).astype(np.int8)


def manhattan_table(width: int, height: int) -> np.ndarray:
    """``md[tile, pos]``: grid distance of ``tile`` at ``pos`` from its goal cell
    (zero for the blank)."""
    n = width * height
    r, c = np.divmod(np.arange(n), width)
    md = np.abs(r[:, None] - r[None, :]) + np.abs(c[:, None] - c[None, :])
    md[0, :] = 0
    return md.astype(np.int8)


def perm_parity(perm) -> int:
    perm = list(perm)
    seen = [False] * len(perm)
    par = 0
    for i in range(len(perm)):
        if not seen[i]:
            j, k = i, 0
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                k += 1
            par ^= (k - 1) & 1
    return par


def is_solvable(cells, width: int) -> bool:
    """Reachability from the goal.

    Every move is a transposition with the blank and shifts the blank by one
    cell, so the parity of the whole permutation (blank included) always
    equals the parity of the blank's grid distance from its home cell.
    """
    cells = list(cells)
    b = cells.index(0)
    r, c = divmod(b, width)
    return perm_parity(cells) == ((r + c) & 1)


def random_cells(width: int, height: int, rng: np.random.Generator) -> np.ndarray:
    n = width * height
    while True:
        cells = rng.permutation(n).astype(np.int8)
        if is_solvable(cells, width):
            return cells


def max_manhattan(width: int, height: int) -> int:
    """Largest Manhattan distance over all tile arrangements (a max-weight
    assignment of tiles to cells, ignoring solvability)."""
    from scipy.optimize import linear_sum_assignment
    md = manhattan_table(width, height).astype(np.int64)[1:, :]
    r, c = linear_sum_assignment(md, maximize=True)
    return int(md[r, c].sum())
