"""Random start states, full enumeration of small tile puzzles, and start
sets restricted to a given IDA* threshold."""

from typing import List

import numpy as np

from .._jit import njit
from ..domain.core import Domain, TileDomain
from ..domain.kernels import CUBE, random_walk
from ..heuristic.evaluate import HeuristicSpec, Kind, evaluate_many
from .ida import accepts_threshold

CUBE_WALK = 180


class SamplingExhausted(RuntimeError):
    pass


@njit
def _cube_walks(dp, seeds, length, out, lasts):
    for j in range(out.shape[0]):
        np.random.seed(seeds[j])
        s = out[j]
        for i in range(s.shape[0]):
            s[i] = dp.goal[i]
        _, lasts[j] = random_walk(dp, s, -1, length, -1)


def random_states(domain: Domain, n: int, rng: np.random.Generator, walk: int = CUBE_WALK,
                  with_last: bool = False):
    """``n`` random flat states.  Cube: pruned random walks of length ``walk``
    from the goal; tiles: uniform over the reachable permutations."""
    if domain.kind == CUBE:
        out = np.zeros((n, domain.state_len), dtype=np.int8)
        lasts = np.zeros(n, dtype=np.int64)
        seeds = rng.integers(0, 2**31 - 1, size=n)
        _cube_walks(domain.pack, seeds, walk, out, lasts)
        return (out, lasts) if with_last else out
    m = domain.n
    rows = []
    have = 0
    while have < n:
        # uniform permutations, rejecting the unreachable half
        k = 2 * (n - have) + 16
        perms = np.argsort(rng.random((k, m)), axis=1).astype(np.int8)
        blank = np.argmax(perms == 0, axis=1)
        r, c = np.divmod(blank, domain.width)
        perms = perms[perm_parities(perms) == ((r + c) & 1)]
        rows.append(perms)
        have += len(perms)
    perms = np.concatenate(rows)[:n]
    if with_last:
        return perms, np.full(n, -1, dtype=np.int64)
    return perms


@njit
def _parities(perms, out):
    m = perms.shape[1]
    seen = np.zeros(m, dtype=np.bool_)
    for i in range(perms.shape[0]):
        seen[:] = False
        par = 0
        for s in range(m):
            if not seen[s]:
                j = s
                k = 0
                while not seen[j]:
                    seen[j] = True
                    j = perms[i, j]
                    k += 1
                par ^= (k - 1) & 1
        out[i] = par


def perm_parities(perms: np.ndarray) -> np.ndarray:
    out = np.zeros(perms.shape[0], dtype=np.int64)
    _parities(np.ascontiguousarray(perms), out)
    return out


@njit
def _all_perms(n, out):
    # lexicographic enumeration of all permutations of 0..n-1
    a = np.arange(n)
    idx = 0
    while True:
        for i in range(n):
            out[idx, i] = a[i]
        idx += 1
        i = n - 2
        while i >= 0 and a[i] >= a[i + 1]:
            i -= 1
        if i < 0:
            break
        j = n - 1
        while a[j] <= a[i]:
            j -= 1
        a[i], a[j] = a[j], a[i]
        a[i + 1:] = a[i + 1:][::-1].copy()
    return idx


def all_states(domain: TileDomain) -> np.ndarray:
    """Every state reachable from the goal, as flat rows (boards up to 10 cells)."""
    if domain.kind == CUBE or domain.n > 10:
        raise ValueError("full enumeration is limited to tile boards with at most 10 cells")
    import math
    total = math.factorial(domain.n)
    perms = np.zeros((total, domain.n), dtype=np.int8)
    _all_perms(domain.n, perms)
    blank = np.argmax(perms == 0, axis=1)
    r, c = np.divmod(blank, domain.width)
    ok = perm_parities(perms) == ((r + c) & 1)
    return perms[ok]


def parity_filter_applies(spec: HeuristicSpec) -> bool:
    """Tile heuristics whose value has the parity of the blank's distance from
    home: every threshold from a start then has the parity of h(start)."""
    if spec.domain.kind == CUBE:
        return False
    return spec.kind in (Kind.MANHATTAN, Kind.PDB_REGULAR, Kind.PDB_MAX, Kind.BLANK_PARITY_SPLIT)


def restricted_start_array(domain: Domain, spec: HeuristicSpec, d: int, n: int, seed: int,
                           batch: int = 2000, min_rate: float = 1e-4) -> np.ndarray:
    rng = np.random.default_rng(seed)
    found = []
    have = tried = 0
    while have < n:
        cands = random_states(domain, batch, rng)
        tried += batch
        h = evaluate_many(spec, cands, int(rng.integers(0, 2**31 - 1)))
        keep = h <= d
        if parity_filter_applies(spec):
            keep &= (h % 2) == (d % 2)
        cands = cands[keep]
        if len(cands):
            ok = accepts_threshold(spec, cands, d, int(rng.integers(0, 2**31 - 1)))
            found.append(cands[ok])
            have += int(ok.sum())
        if tried >= 10 * batch and have < min_rate * tried:
            raise SamplingExhausted(
                f"acceptance rate {have / tried:.2e} below floor {min_rate:.0e} for d={d}")
    return np.concatenate(found)[:n]


def generate_restricted_starts(domain: Domain, spec: HeuristicSpec, d: int, n: int, seed: int,
                               **kw) -> List:
    """``n`` random states from which IDA* performs an iteration with threshold ``d``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    arr = restricted_start_array(domain, spec, d, n, seed, **kw)
    return [domain.state(row) for row in arr]
