"""Dense ranking of abstract states.

An abstract state is the list of locations of the tracked pieces (``pos``)
plus, for cubies, their orientations (``ori``).  The rank is

    perm_rank(pos) * base**m + ori_rank

where ``perm_rank`` is the mixed-radix partial-permutation index (digit i is
``pos[i]`` minus the number of earlier pieces on smaller locations, radix
``npos - i``) and ``ori_rank`` reads ``ori[0..m-1]`` as a base-``base``
number, most significant first.  ``m`` is the number of pieces, minus one
when every cubie of the kind is tracked (the last twist is then implied).
"""

from .._jit import njit


def n_placements(npos: int, k: int) -> int:
    out = 1
    for i in range(k):
        out *= npos - i
    return out


def ori_digits(npos: int, k: int, base: int) -> int:
    if base <= 1:
        return 0
    return k - 1 if k == npos else k


def entry_count(npos: int, k: int, base: int) -> int:
    return n_placements(npos, k) * base ** ori_digits(npos, k, base)


@njit(inline="always")
def rank(pos, ori, k, npos, base):
    r = 0
    for i in range(k):
        d = pos[i]
        for j in range(i):
            if pos[j] < pos[i]:
                d -= 1
        r = r * (npos - i) + d
    if base > 1:
        m = k - 1 if k == npos else k
        for i in range(m):
            r = r * base + ori[i]
    return r


@njit(inline="always")
def unrank(r, pos, ori, k, npos, base, used):
    if base > 1:
        m = k - 1 if k == npos else k
        tot = 0
        for i in range(m - 1, -1, -1):
            ori[i] = r % base
            tot += ori[i]
            r //= base
        if m < k:
            ori[k - 1] = (base - tot % base) % base
    else:
        for i in range(k):
            ori[i] = 0
    for i in range(k - 1, -1, -1):
        rad = npos - i
        pos[i] = r % rad
        r //= rad
    for p in range(npos):
        used[p] = 0
    for i in range(k):
        d = pos[i]
        p = 0
        while True:
            if used[p] == 0:
                if d == 0:
                    break
                d -= 1
            p += 1
        used[p] = 1
        pos[i] = p
