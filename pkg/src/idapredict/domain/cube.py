"""3x3x3 Rubik's Cube at the cubie level.

A state is stored in "replaced-by" form: ``cp[i]`` is the corner cubie sitting
in corner position ``i`` and ``co[i]`` its twist; ``ep``/``eo`` likewise for
edges.  Applying move ``m`` to ``s`` is the product ``s * m`` with

    (a * b).cp[i] = a.cp[b.cp[i]]
    (a * b).co[i] = (a.co[b.cp[i]] + b.co[i]) % 3

Move and whole-cube rotation tables are not typed in by hand: they are
derived at import time from a sticker-level geometric model (positions in
{-1,0,1}^3, integer rotation matrices), so the conventions below are the only
things to get right.

Axes: U=+z, R=+x, F=-y, D=-z, L=-x, B=+y.  Faces are indexed U R F D L B
(0..5), so the opposite of face f is (f + 3) % 6.  Move id = 3*face + k with
k = 0, 1, 2 for a 90, 180, 270 degree clockwise turn.

Flat kernel layout of a state (int8[40]): cp[0:8], co[8:16], ep[16:28],
eo[28:40].
"""

import numpy as np

FACE_NAMES = "URFDLB"
FACE_NORMALS = np.array(
    [[0, 0, 1], [1, 0, 0], [0, -1, 0], [0, 0, -1], [-1, 0, 0], [0, 1, 0]], dtype=np.int64
)
N_FACES = 6
N_MOVES = 18
MAX_BRANCHING = 18
STATE_LEN = 40
CP, CO, EP, EO = slice(0, 8), slice(8, 16), slice(16, 28), slice(28, 40)

CORNER_NAMES = ["URF", "UFL", "ULB", "UBR", "DFR", "DLF", "DBL", "DRB"]
EDGE_NAMES = ["UR", "UF", "UL", "UB", "DR", "DF", "DL", "DB", "FR", "FL", "BL", "BR"]

_AXIS = {"U": (0, 0, 1), "D": (0, 0, -1), "R": (1, 0, 0), "L": (-1, 0, 0), "F": (0, -1, 0), "B": (0, 1, 0)}


def _pos(name):
    return np.sum([np.array(_AXIS[c]) for c in name], axis=0).astype(np.int64)


CORNER_POS = np.array([_pos(n) for n in CORNER_NAMES])
EDGE_POS = np.array([_pos(n) for n in EDGE_NAMES])


def _corner_facelets(p):
    # reference (U/D) normal first, remaining two in clockwise order seen
    # from outside the corner: det(n0, n1, n2) == -1
    n0 = np.array([0, 0, p[2]])
    a = np.array([p[0], 0, 0])
    b = np.array([0, p[1], 0])
    if round(np.linalg.det(np.array([n0, a, b]))) == -1:
        return [n0, a, b]
    return [n0, b, a]


def _edge_facelets(p):
    # reference facelet: U/D for top and bottom layer edges, F/B for the middle layer
    if p[2] != 0:
        n0 = np.array([0, 0, p[2]])
    else:
        n0 = np.array([0, p[1], 0])
    n1 = p - n0
    return [n0, n1]


CORNER_FACELETS = [_corner_facelets(p) for p in CORNER_POS]
EDGE_FACELETS = [_edge_facelets(p) for p in EDGE_POS]


def _rot_matrix(axis, quarter_turns_cw):
    """Integer rotation matrix: ``quarter_turns_cw`` clockwise quarter turns
    about ``axis`` as seen from the tip of ``axis``."""
    a = np.asarray(axis, dtype=np.int64)
    k = quarter_turns_cw % 4
    cross = np.array([[0, -a[2], a[1]], [a[2], 0, -a[0]], [-a[1], a[0], 0]])
    outer = np.outer(a, a)
    eye = np.eye(3, dtype=np.int64)
    # theta = -90 * k degrees
    cos = [1, 0, -1, 0][k]
    sin = [0, -1, 0, 1][k]
    return cos * eye + sin * cross + (1 - cos) * outer


def _index_of(vecs, v):
    for i, w in enumerate(vecs):
        if np.array_equal(w, v):
            return i
    raise ValueError("vector not found")


def _transform(rot, layer_normal=None):
    """Cubie-level element for rigidly rotating the positions selected by
    ``layer_normal`` (all positions when None) with matrix ``rot``."""
    inv = rot.T
    out = np.zeros(STATE_LEN, dtype=np.int8)
    for i, p in enumerate(CORNER_POS):
        if layer_normal is not None and p @ layer_normal != 1:
            out[i] = i
            continue
        j = _index_of(CORNER_POS, inv @ p)
        out[CP][i] = j
        out[CO][i] = _index_of(CORNER_FACELETS[i], rot @ CORNER_FACELETS[j][0])
    for i, p in enumerate(EDGE_POS):
        if layer_normal is not None and p @ layer_normal != 1:
            out[EP][i] = i
            continue
        j = _index_of(EDGE_POS, inv @ p)
        out[EP][i] = j
        out[EO][i] = _index_of(EDGE_FACELETS[i], rot @ EDGE_FACELETS[j][0])
    return out


def compose(a, b):
    """Product ``a * b`` (apply ``a`` then ``b``) of flat int8[40] elements."""
    out = np.empty(STATE_LEN, dtype=np.int8)
    bcp, bep = b[CP], b[EP]
    out[CP] = a[CP][bcp]
    out[CO] = (a[CO][bcp] + b[CO]) % 3
    out[EP] = a[EP][bep]
    out[EO] = (a[EO][bep] + b[EO]) % 2
    return out


def inverse(a):
    out = np.empty(STATE_LEN, dtype=np.int8)
    out[CP][a[CP]] = np.arange(8)
    out[CO][a[CP]] = (3 - a[CO]) % 3
    out[EP][a[EP]] = np.arange(12)
    out[EO][a[EP]] = a[EO]
    return out


GOAL = np.concatenate(
    [np.arange(8), np.zeros(8), np.arange(12), np.zeros(12)]
).astype(np.int8)


def _build_moves():
    mv = np.zeros((N_MOVES, STATE_LEN), dtype=np.int8)
    for f in range(N_FACES):
        for k in range(3):
            rot = _rot_matrix(FACE_NORMALS[f], k + 1)
            mv[3 * f + k] = _transform(rot, FACE_NORMALS[f])
    return mv


def _build_rotations():
    """The 24 proper rotations of the cube, identity first, closed under
    composition (breadth-first closure over quarter turns about x, y, z)."""
    gens = [_rot_matrix(FACE_NORMALS[1], 1), _rot_matrix(FACE_NORMALS[5], 1), _rot_matrix(FACE_NORMALS[0], 1)]
    mats = [np.eye(3, dtype=np.int64)]
    frontier = list(mats)
    while frontier:
        nxt = []
        for m in frontier:
            for g in gens:
                c = g @ m
                if not any(np.array_equal(c, x) for x in mats):
                    mats.append(c)
                    nxt.append(c)
        frontier = nxt
    assert len(mats) == 24
    return mats


MOVES = _build_moves()
ROTATION_MATRICES = _build_rotations()
SYMS = np.array([_transform(r) for r in ROTATION_MATRICES], dtype=np.int8)
SYMS_INV = np.array([inverse(s) for s in SYMS], dtype=np.int8)
MOVE_NAMES = [f + ["", "2", "'"][k] for f in FACE_NAMES for k in range(3)]

# forward maps used by abstract (PDB) moves: a cubie at position p moves to
# FWD_*P[m, p] and gains FWD_*O[m, p] of twist
FWD_CP = np.zeros((N_MOVES, 8), dtype=np.int8)
FWD_CO = np.zeros((N_MOVES, 8), dtype=np.int8)
FWD_EP = np.zeros((N_MOVES, 12), dtype=np.int8)
FWD_EO = np.zeros((N_MOVES, 12), dtype=np.int8)
for _m in range(N_MOVES):
    for _i in range(8):
        FWD_CP[_m, MOVES[_m, _i]] = _i
        FWD_CO[_m, MOVES[_m, _i]] = MOVES[_m, 8 + _i]
    for _i in range(12):
        FWD_EP[_m, MOVES[_m, 16 + _i]] = _i
        FWD_EO[_m, MOVES[_m, 16 + _i]] = MOVES[_m, 28 + _i]


def _build_allowed():
    """ALLOWED[last + 1, m]: move m may follow last move ``last`` (-1 = root)."""
    allowed = np.ones((N_MOVES + 1, N_MOVES), dtype=np.bool_)
    for last in range(N_MOVES):
        lf = last // 3
        for m in range(N_MOVES):
            f = m // 3
            if f == lf:
                allowed[last + 1, m] = False
            elif f == (lf + 3) % 6 and f < lf:
                allowed[last + 1, m] = False
    return allowed


ALLOWED = _build_allowed()


def walk_last_move_distribution():
    """Stationary distribution of the last move of a long operator-pruned
    uniform random walk."""
    p = ALLOWED[1:].astype(np.float64)
    p /= p.sum(axis=1, keepdims=True)
    pi = np.full(N_MOVES, 1.0 / N_MOVES)
    for _ in range(500):
        pi = pi @ p
    return pi / pi.sum()


def corner_parity(cp):
    cp = list(cp)
    seen = [False] * len(cp)
    par = 0
    for i in range(len(cp)):
        if not seen[i]:
            j, n = i, 0
            while not seen[j]:
                seen[j] = True
                j = cp[j]
                n += 1
            par ^= (n - 1) & 1
    return par


def is_valid(flat):
    flat = np.asarray(flat)
    cp, co, ep, eo = flat[CP], flat[CO], flat[EP], flat[EO]
    if sorted(cp.tolist()) != list(range(8)) or sorted(ep.tolist()) != list(range(12)):
        return False
    if np.any((co < 0) | (co > 2)) or np.any((eo < 0) | (eo > 1)):
        return False
    if int(co.sum()) % 3 or int(eo.sum()) % 2:
        return False
    return corner_parity(cp) == corner_parity(ep)
