"""Sampling and enumeration of heuristic-value distributions.

Every sampled root ``g`` (a random state with a move context) contributes
its children ``p`` as parents: each child ``c`` of ``p`` is tallied under
the one-step context ``(v_p, t_p)`` and the two-step context
``(v_p, t_p, v_g, t_g)``.  Exhaustive mode uses every reachable state as a
root with no move context, which visits every directed edge ``g -> p`` once.
"""

import os
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from .._jit import njit
from ..domain import cube as cb
from ..domain.kernels import CUBE, apply_op, find_blank, node_type, op_allowed, random_walk
from ..heuristic.evaluate import WS_LEN, HeuristicSpec, Kind, evaluate_many, h_eval
from ..heuristic.pdb import PT_EDGE, PT_TILE
from ..heuristic.ranking import unrank
from ..heuristic.unconditional import TypedUnconditional, UnconditionalDist
from ..search.starts import _cube_walks, all_states, random_states
from .conditional import ONE_STEP, TWO_STEP, TYPED_TWO_STEP, ConditionalDistribution

SAMPLED, EXHAUSTIVE = "sampled", "exhaustive"
STACK_CAP = 4096
BATCH = 4096
# window chains used to enrich tile contexts without a PDB class source
CHAIN_LEN, CHAIN_BURN, CHAIN_THIN = 200, 200, 8

MODE_MAIN, MODE_ENRICH1, MODE_ENRICH2 = 0, 1, 2


@dataclass
class SamplePlan:
    """How to estimate a distribution.

    ``budget`` counts parent expansions (nodes whose children are tallied).
    ``floor`` is the enrichment target: the minimum number of child samples
    per populated context.  ``deepening`` keeps generating below a new
    context until no unseen context appears (typed two-step model).
    """

    mode: str = SAMPLED
    budget: int = 1_000_000
    seed: int = 0
    floor: int = 1000
    deepening: bool = False
    enrich: bool = True
    enrich_cap: int = 200_000
    shards: int = 8
    walk: int = 180

    def __post_init__(self):
        if self.mode not in (SAMPLED, EXHAUSTIVE):
            raise ValueError(f"unknown sampling mode {self.mode!r}")
        if self.mode == SAMPLED and self.budget < 1:
            raise ValueError("budget must be >= 1 in sampled mode")


@dataclass
class SampleReport:
    parents: int = 0
    roots: int = 0
    enrichment_roots: int = 0
    under_floor_one_step: int = 0
    under_floor_two_step: int = 0
    notes: List[str] = field(default_factory=list)


@njit
def _tally(dp, hp, roots, lasts, mode, typed, c1, t1, p1, c2, t2, p2, floor1, floor2, deepen,
           ws, sk_s, sk_b, sk_l, sk_v, sk_t, sk_vg, sk_tg, tmp):
    n_par = 0
    H = c1.shape[0]
    for j in range(roots.shape[0]):
        root = roots[j]
        b0 = find_blank(dp, root)
        hg = h_eval(hp, dp, root, b0, ws)
        if hg >= H:
            hg = H - 1
        tg = node_type(dp, b0) if typed else 0
        sp = 0
        if mode == 1:
            for i in range(root.shape[0]):
                sk_s[0, i] = root[i]
            sk_b[0] = b0
            sk_l[0] = lasts[j]
            sk_v[0] = hg
            sk_t[0] = tg
            sk_vg[0] = -1
            sk_tg[0] = -1
            sp = 1
        else:
            for o in range(dp.n_ops):
                if not op_allowed(dp, lasts[j], o, b0):
                    continue
                b = apply_op(dp, root, sk_s[sp], b0, o)
                sk_b[sp] = b
                sk_l[sp] = o
                hv0 = h_eval(hp, dp, sk_s[sp], b, ws)
                sk_v[sp] = hv0 if hv0 < H else H - 1
                sk_t[sp] = node_type(dp, b) if typed else 0
                sk_vg[sp] = hg
                sk_tg[sp] = tg
                sp += 1
        while sp > 0:
            sp -= 1
            vx = sk_v[sp]
            tx = sk_t[sp]
            vg = sk_vg[sp]
            tgx = sk_tg[sp]
            bx = sk_b[sp]
            lx = sk_l[sp]
            x = sk_s[sp].copy()
            do1 = mode != 2 and (floor1 == 0 or t1[vx, tx, 0, 0] < floor1)
            do2 = vg >= 0 and mode != 1 and (floor2 == 0 or t2[vx, tx, vg, tgx] < floor2)
            if not (do1 or do2):
                continue
            if do1:
                p1[vx, tx, 0, 0] += 1
            if do2:
                p2[vx, tx, vg, tgx] += 1
            n_par += 1
            for o in range(dp.n_ops):
                if not op_allowed(dp, lx, o, bx):
                    continue
                b = apply_op(dp, x, tmp, bx, o)
                hc = h_eval(hp, dp, tmp, b, ws)
                if hc >= H:
                    hc = H - 1
                tc = node_type(dp, b) if typed else 0
                if do1:
                    c1[hc, tc, vx, tx, 0, 0] += 1
                    t1[vx, tx, 0, 0] += 1
                if do2:
                    c2[hc, tc, vx, tx, vg, tgx] += 1
                    t2[vx, tx, vg, tgx] += 1
                    if deepen and p2[hc, tc, vx, tx] == 0 and sp < sk_s.shape[0]:
                        for i in range(tmp.shape[0]):
                            sk_s[sp, i] = tmp[i]
                        sk_b[sp] = b
                        sk_l[sp] = o
                        sk_v[sp] = hc
                        sk_t[sp] = tc
                        sk_vg[sp] = vx
                        sk_tg[sp] = tx
                        sp += 1
    return n_par


@njit
def _seed(seed):
    np.random.seed(seed)


@njit
def _tile_arrivals(dp, roots, out):
    # a random operator that could have produced each state
    cand = np.empty(4, dtype=np.int64)
    for j in range(roots.shape[0]):
        b = find_blank(dp, roots[j])
        k = 0
        for o in range(4):
            if dp.nbr[b, 3 - o] >= 0:
                cand[k] = o
                k += 1
        out[j] = cand[np.random.randint(0, k)]


@njit
def _shuffle_fill(vals, nv, slots, ns):
    # Fisher-Yates shuffle of vals[:nv]; caller guarantees nv == ns
    for i in range(nv - 1, 0, -1):
        j = np.random.randint(0, i + 1)
        t = vals[i]
        vals[i] = vals[j]
        vals[j] = t


@njit
def _parity(a, n):
    seen = np.zeros(n, dtype=np.bool_)
    par = 0
    for s in range(n):
        if not seen[s]:
            j = s
            k = 0
            while not seen[j]:
                seen[j] = True
                j = a[j]
                k += 1
            par ^= (k - 1) & 1
    return par


@njit
def _random_fill_cubies(perm, ori, npieces, base, tracked_mask):
    """Place the untracked cubies (perm == -1 slots) at random with random
    twists, keeping the twist sum valid."""
    free_vals = np.empty(npieces, dtype=np.int64)
    free_pos = np.empty(npieces, dtype=np.int64)
    nv = 0
    for c in range(npieces):
        if not tracked_mask[c]:
            free_vals[nv] = c
            nv += 1
    ns = 0
    for p in range(npieces):
        if perm[p] < 0:
            free_pos[ns] = p
            ns += 1
    _shuffle_fill(free_vals, nv, free_pos, ns)
    for i in range(ns):
        perm[free_pos[i]] = free_vals[i]
        ori[free_pos[i]] = np.random.randint(0, base)
    tot = 0
    for p in range(npieces):
        tot += ori[p]
    if ns > 0:
        p = free_pos[ns - 1]
        ori[p] = (ori[p] - tot) % base
        if ori[p] < 0:
            ori[p] += base
    return ns


@njit
def _class_roots(dp, ptype, pieces, k, npos, base, idx, invert, last_cdf, out, lasts):
    """Uniform states whose regular lookup (or, with ``invert``, whose dual
    lookup) hits one of the PDB entries listed in ``idx``."""
    pos = np.empty(k, dtype=np.int64)
    ori = np.empty(k, dtype=np.int64)
    used = np.empty(npos, dtype=np.int64)
    n = out.shape[0]
    j = 0
    tries = 0
    while j < n and tries < 100 * n:
        tries += 1
        r = idx[np.random.randint(0, idx.shape[0])]
        unrank(r, pos, ori, k, npos, base, used)
        s = out[j]
        if ptype == PT_TILE:
            m = dp.n
            cells = np.full(m, -1, dtype=np.int64)
            tracked = np.zeros(m, dtype=np.bool_)
            for i in range(k):
                cells[pos[i]] = pieces[i]
                tracked[pieces[i]] = True
            dummy = np.zeros(m, dtype=np.int64)
            nfree = _random_fill_cubies(cells, dummy, m, 1, tracked)
            b = pos[0]
            rr = b // dp.width
            cc = b % dp.width
            if _parity(cells, m) != ((rr + cc) & 1):
                if nfree < 2:
                    continue
                a1 = -1
                a2 = -1
                for p in range(m):
                    if not tracked[cells[p]]:
                        if a1 < 0:
                            a1 = p
                        else:
                            a2 = p
                            break
                t = cells[a1]
                cells[a1] = cells[a2]
                cells[a2] = t
            for p in range(m):
                s[p] = cells[p]
            # arrival operator
            cand = np.empty(4, dtype=np.int64)
            kk = 0
            for o in range(4):
                if dp.nbr[b, 3 - o] >= 0:
                    cand[kk] = o
                    kk += 1
            lasts[j] = cand[np.random.randint(0, kk)]
            j += 1
            continue
        cp = np.full(8, -1, dtype=np.int64)
        co = np.zeros(8, dtype=np.int64)
        ep = np.full(12, -1, dtype=np.int64)
        eo = np.zeros(12, dtype=np.int64)
        ctr = np.zeros(8, dtype=np.bool_)
        etr = np.zeros(12, dtype=np.bool_)
        if ptype == PT_EDGE:
            for i in range(k):
                ep[pos[i]] = pieces[i]
                eo[pos[i]] = ori[i]
                etr[pieces[i]] = True
        else:
            for i in range(k):
                cp[pos[i]] = pieces[i]
                co[pos[i]] = ori[i]
                ctr[pieces[i]] = True
        nfe = _random_fill_cubies(ep, eo, 12, 2, etr)
        _random_fill_cubies(cp, co, 8, 3, ctr)
        if _parity(cp, 8) != _parity(ep, 12):
            if ptype == PT_EDGE:
                a = cp[0]
                cp[0] = cp[1]
                cp[1] = a
                a = co[0]
                co[0] = co[1]
                co[1] = a
            else:
                if nfe < 2:
                    continue
                a = ep[0]
                ep[0] = ep[1]
                ep[1] = a
                a = eo[0]
                eo[0] = eo[1]
                eo[1] = a
        for i in range(8):
            s[i] = cp[i]
            s[8 + i] = co[i]
        for i in range(12):
            s[16 + i] = ep[i]
            s[28 + i] = eo[i]
        if invert:
            t = s.copy()
            for i in range(8):
                s[t[i]] = i
                s[8 + t[i]] = (3 - t[8 + i]) % 3
            for i in range(12):
                s[16 + t[16 + i]] = i
                s[28 + t[16 + i]] = t[28 + i]
        u = np.random.random()
        o = 0
        while o < last_cdf.shape[0] - 1 and last_cdf[o] < u:
            o += 1
        lasts[j] = o
        j += 1
    return j


@njit
def _walk_roots(dp, out, lasts, length):
    for j in range(out.shape[0]):
        s = out[j]
        for i in range(s.shape[0]):
            s[i] = dp.goal[i]
        _, lasts[j] = random_walk(dp, s, find_blank(dp, s), length, -1)


@njit
def _chain_step(dp, hp, s, b, h, v, width, ws):
    """One proposal (a 3-cycle of tiles or a blank move), kept when the new
    h lies within ``width`` of v.  Returns the h of the resulting state."""
    n = s.shape[0]
    if np.random.random() < 0.5:
        i = np.random.randint(0, n)
        j = np.random.randint(0, n)
        k = np.random.randint(0, n)
        if i == j or j == k or i == k or i == b or j == b or k == b:
            return h
        t = s[i]
        s[i] = s[j]
        s[j] = s[k]
        s[k] = t
        hc = h_eval(hp, dp, s, b, ws)
        if abs(hc - v) <= width:
            return hc
        t = s[k]
        s[k] = s[j]
        s[j] = s[i]
        s[i] = t
        return h
    nb = dp.nbr[b, np.random.randint(0, 4)]
    if nb < 0:
        return h
    s[b] = s[nb]
    s[nb] = 0
    hc = h_eval(hp, dp, s, nb, ws)
    if abs(hc - v) <= width:
        return hc
    s[nb] = s[b]
    s[b] = 0
    return h


@njit
def _window_roots(dp, hp, v, width, burn, thin, out, ws):
    """Tile states drawn from a Metropolis chain that is uniform over the
    states with ``|h - v| <= width``.

    Proposals are 3-cycles of tiles and single blank moves.  Both are
    symmetric and keep the state solvable, so restricting them to the window
    leaves the uniform distribution stationary; every h inside the window is
    then sampled uniformly too.  Returns the number of rows filled (0 if
    the window could not be reached).
    """
    n = out.shape[1]
    s = dp.goal.copy()
    b = find_blank(dp, s)
    h = h_eval(hp, dp, s, b, ws)
    # reach the window first, with the same proposals but accepting
    # anything that does not move h further away from v
    steps = 0
    while abs(h - v) > width:
        steps += 1
        if steps > 20000:
            return 0
        h = _chain_step(dp, hp, s, b, h, v, abs(h - v), ws)
        b = find_blank(dp, s)
    got = 0
    total = burn + out.shape[0] * thin
    for it in range(total):
        h = _chain_step(dp, hp, s, b, h, v, width, ws)
        b = find_blank(dp, s)
        if it >= burn and (it - burn) % thin == thin - 1:
            for c in range(n):
                out[got, c] = s[c]
            got += 1
    return got


class _Tables:
    def __init__(self, H, T):
        self.c1 = np.zeros((H, T, H, T, 1, 1), dtype=np.int64)
        self.t1 = np.zeros((H, T, 1, 1), dtype=np.int64)
        self.p1 = np.zeros((H, T, 1, 1), dtype=np.int64)
        self.c2 = np.zeros((H, T, H, T, H, T), dtype=np.int64)
        self.t2 = np.zeros((H, T, H, T), dtype=np.int64)
        self.p2 = np.zeros((H, T, H, T), dtype=np.int64)

    def add(self, o):
        for k in ("c1", "t1", "p1", "c2", "t2", "p2"):
            getattr(self, k).__iadd__(getattr(o, k))


class _Sampler:
    def __init__(self, spec: HeuristicSpec, typed: bool, h_max: int):
        self.spec = spec
        self.dom = spec.domain
        self.typed = typed
        self.T = self.dom.n_types if typed else 1
        self.H = h_max + 1
        L = self.dom.state_len
        self.ws = np.zeros(WS_LEN, dtype=np.int64)
        self.sk = (np.zeros((STACK_CAP, L), dtype=np.int8), np.zeros(STACK_CAP, dtype=np.int64),
                   np.zeros(STACK_CAP, dtype=np.int64), np.zeros(STACK_CAP, dtype=np.int64),
                   np.zeros(STACK_CAP, dtype=np.int64), np.zeros(STACK_CAP, dtype=np.int64),
                   np.zeros(STACK_CAP, dtype=np.int64))
        self.tmp = np.zeros(L, dtype=np.int8)

    def tally(self, tab, roots, lasts, mode=MODE_MAIN, floor1=0, floor2=0, deepen=False):
        return _tally(self.dom.pack, self.spec.pack, roots, lasts, mode, self.typed,
                      tab.c1, tab.t1, tab.p1, tab.c2, tab.t2, tab.p2, floor1, floor2, deepen,
                      self.ws, *self.sk, self.tmp)

    def random_roots(self, n, rng, walk):
        d = self.dom
        if d.kind == CUBE:
            out = np.zeros((n, d.state_len), dtype=np.int8)
            lasts = np.zeros(n, dtype=np.int64)
            _cube_walks(d.pack, rng.integers(0, 2**31 - 1, size=n), walk, out, lasts)
            return out, lasts
        out = random_states(d, n, rng)
        lasts = np.zeros(n, dtype=np.int64)
        _tile_arrivals(d.pack, out, lasts)
        return out, lasts


def _mean_branching(spec):
    d = spec.domain
    return 13.35 if d.kind == CUBE else 2.0


def _shard_run(args):
    spec, typed, h_max, budget, seed, walk, deepen = args
    s = _Sampler(spec, typed, h_max)
    tab = _Tables(s.H, s.T)
    rng = np.random.default_rng(seed)
    _seed(int(rng.integers(0, 2**31 - 1)))
    done = 0
    roots_used = 0
    per_root = _mean_branching(spec)
    while done < budget:
        n = int(min(BATCH, max(16, (budget - done) / per_root + 1)))
        roots, lasts = s.random_roots(n, rng, walk)
        done += s.tally(tab, roots, lasts, MODE_MAIN, 0, 0, deepen)
        roots_used += n
    return tab, done, roots_used


def _workers() -> int:
    try:
        return max(1, int(os.environ.get("WORKERS", "1")))
    except ValueError:
        return 1


def _map(fn, jobs):
    w = _workers()
    if w <= 1 or len(jobs) <= 1:
        return [fn(j) for j in jobs]
    from concurrent.futures import ProcessPoolExecutor
    with ProcessPoolExecutor(max_workers=w) as ex:
        return list(ex.map(fn, jobs))


def _class_source(spec: HeuristicSpec):
    """(pdb, invert) when states of a given heuristic value can be built
    directly from PDB entries, else None."""
    if spec.kind in (Kind.PDB_REGULAR, Kind.PDB_RANDOM_SYMMETRY, Kind.INTERLEAVE_ZERO):
        return spec.pdbs[0], False
    if spec.kind == Kind.PDB_DUAL:
        return spec.pdbs[0], True
    if spec.kind == Kind.BLANK_PARITY_SPLIT:
        return spec.pdbs[0], False
    return None


def _enrich(s: _Sampler, tab: _Tables, plan: SamplePlan, rng, report: SampleReport, two_step: bool):
    spec = s.spec
    src = _class_source(spec)
    dom = s.dom
    if dom.kind == CUBE:
        last_cdf = np.cumsum(cb.walk_last_move_distribution())
    else:
        last_cdf = np.ones(4)
    floor = plan.floor
    if src is not None:
        pdb, invert = src
        pat = pdb.pattern
        pieces = np.array(pat.pieces, dtype=np.int64)
        entries = pdb.entries
    # a context is wanted once some tallied child lands in it; going from
    # high to low values lets each enriched level expose the next one down
    for v in range(s.H - 1, -1, -1):
        used = 0
        stall = 0
        while used < plan.enrich_cap:
            if two_step:
                tot = tab.t2[:, :, v, :]
                seen = (tot > 0) | (tab.c2[:, :, v].sum(axis=(3, 4)) > 0)
                need = (seen & (tot < floor)).any()
            else:
                tot = tab.t1[v]
                seen = (tot > 0) | (tab.c1[v].sum(axis=(1, 2, 3, 4)) > 0)[:, None, None]
                need = (seen & (tot < floor)).any()
            if not need:
                break
            n = 2000
            roots = np.zeros((n, dom.state_len), dtype=np.int8)
            lasts = np.zeros(n, dtype=np.int64)
            if src is not None:
                idx = np.flatnonzero(entries == v)
                if idx.size == 0:
                    break
                got = _class_roots(dom.pack, pat.ptype, pieces, len(pieces), pat.npos, pat.base,
                                   idx, invert, last_cdf, roots, lasts)
                roots, lasts = roots[:got], lasts[:got]
            elif dom.kind == CUBE:
                _walk_roots(dom.pack, roots, lasts, v)
            else:
                got = 0
                for _ in range(n // CHAIN_LEN):
                    got += _window_roots(dom.pack, spec.pack, v, 1, CHAIN_BURN, CHAIN_THIN,
                                         roots[got:got + CHAIN_LEN], s.ws)
                if got == 0:
                    break
                roots, lasts = roots[:got], lasts[:got]
                _tile_arrivals(dom.pack, roots, lasts)
            before = tab.t2.sum() if two_step else tab.t1.sum()
            if two_step:
                s.tally(tab, roots, lasts, MODE_ENRICH2, 0, floor, False)
            else:
                s.tally(tab, roots, lasts, MODE_ENRICH1, floor, 0, False)
            used += len(roots)
            gained = (tab.t2.sum() if two_step else tab.t1.sum()) - before
            stall = stall + 1 if gained == 0 else 0
            if stall >= 3:
                break
        report.enrichment_roots += used


def sample_tables(spec: HeuristicSpec, plan: SamplePlan, typed: bool = False,
                  h_max: Optional[int] = None) -> Tuple[ConditionalDistribution, ConditionalDistribution, SampleReport]:
    """Estimate the one-step and (typed) two-step models together."""
    h_max = spec.h_max if h_max is None else h_max
    report = SampleReport()
    dom = spec.domain
    s = _Sampler(spec, typed, h_max)
    if plan.mode == EXHAUSTIVE:
        if dom.kind == CUBE:
            raise ValueError("exhaustive enumeration is only available for small tile puzzles")
        roots = all_states(dom)
        lasts = np.full(len(roots), -1, dtype=np.int64)
        tab = _Tables(s.H, s.T)
        _seed(plan.seed)
        report.parents = int(s.tally(tab, roots, lasts))
        report.roots = len(roots)
    else:
        shards = max(1, plan.shards)
        seeds = np.random.SeedSequence(plan.seed).generate_state(shards)
        per = [plan.budget // shards + (1 if i < plan.budget % shards else 0) for i in range(shards)]
        jobs = [(spec, typed, h_max, per[i], int(seeds[i]), plan.walk, plan.deepening) for i in range(shards)]
        tab = _Tables(s.H, s.T)
        for t, done, nroots in _map(_shard_run, jobs):
            tab.add(t)
            report.parents += int(done)
            report.roots += int(nroots)
        if plan.enrich and plan.floor > 0:
            rng = np.random.default_rng([plan.seed, 1])
            _seed(int(rng.integers(0, 2**31 - 1)))
            _enrich(s, tab, plan, rng, report, two_step=False)
            _enrich(s, tab, plan, rng, report, two_step=True)
    t1 = tab.t1
    t2 = tab.t2
    report.under_floor_one_step = int(((t1 > 0) & (t1 < plan.floor)).sum())
    report.under_floor_two_step = int(((t2 > 0) & (t2 < plan.floor)).sum())
    meta = {"domain": dom.tag, "heuristic": spec.describe(), "samples": str(report.parents),
            "seed": str(plan.seed), "mode": plan.mode}
    one = ConditionalDistribution(ONE_STEP, tab.c1, tab.p1, dict(meta))
    two = ConditionalDistribution(TYPED_TWO_STEP if typed else TWO_STEP, tab.c2, tab.p2, dict(meta))
    return one, two, report


def estimate_conditional(domain, spec: HeuristicSpec, model: str, plan: SamplePlan,
                         h_max: Optional[int] = None) -> ConditionalDistribution:
    if spec.domain != domain:
        raise ValueError("heuristic does not belong to the domain")
    if model not in (ONE_STEP, TWO_STEP, TYPED_TWO_STEP):
        raise ValueError(f"unknown model {model!r}")
    typed = model == TYPED_TWO_STEP
    one, two, _ = sample_tables(spec, plan, typed=typed, h_max=h_max)
    return one if model == ONE_STEP else two


def estimate_unconditional(domain, spec: HeuristicSpec, plan: SamplePlan, typed: bool = False,
                           h_max: Optional[int] = None):
    """Histogram of h over random (or all) states; ``typed`` splits by blank type."""
    h_max = spec.h_max if h_max is None else h_max
    if plan.mode == EXHAUSTIVE:
        states = all_states(domain)
        h = evaluate_many(spec, states, plan.seed)
    else:
        rng = np.random.default_rng(plan.seed)
        chunks = []
        left = plan.budget
        while left > 0:
            n = min(left, 100_000)
            st = random_states(domain, n, rng, plan.walk)
            chunks.append((st, evaluate_many(spec, st, int(rng.integers(0, 2**31 - 1)))))
            left -= n
        states = np.concatenate([c[0] for c in chunks])
        h = np.concatenate([c[1] for c in chunks])
    h = np.minimum(h, h_max)
    if not typed:
        return UnconditionalDist.from_counts(np.bincount(h, minlength=h_max + 1))
    if domain.kind == CUBE:
        raise ValueError("typed distributions are defined for tile domains")
    blank = np.argmax(states == 0, axis=1)
    t = domain.ctype[blank]
    dists = []
    freq = np.zeros(domain.n_types)
    for k in range(domain.n_types):
        hk = h[t == k]
        freq[k] = hk.size
        cnt = np.bincount(hk, minlength=h_max + 1) if hk.size else np.eye(h_max + 1, dtype=np.int64)[0]
        dists.append(UnconditionalDist.from_counts(cnt))
    return TypedUnconditional(dists, freq / freq.sum())
