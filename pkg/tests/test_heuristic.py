from collections import deque

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from idapredict.domain import CubeState, TileState, dual_state, expand, make_domain, random_state
from idapredict.domain import cube as cb
from idapredict.heuristic import (CapacityError, DomainMismatch, FormatError, HeuristicSpec, Kind, PatternDef,
                                  build_pdb, cached_pdb, combine_max_independent, evaluate, evaluate_many,
                                  load_pdb, save_pdb, unconditional_from_pdb)
from idapredict.heuristic.ranking import entry_count, rank, unrank
from idapredict.search.starts import all_states


@pytest.fixture(scope="module")
def pdb4():
    return cached_pdb(PatternDef.tile(3, 3, (1, 2, 3, 4)))


@pytest.fixture(scope="module")
def true_distance():
    """Exact 8-puzzle distances by breadth-first search from the goal."""
    dom = make_domain("8puzzle")
    g = dom.goal()
    dist = {g.cells.tobytes(): 0}
    q = deque([g])
    while q:
        s = q.popleft()
        d = dist[s.cells.tobytes()]
        for _, c in expand(s):
            k = c.cells.tobytes()
            if k not in dist:
                dist[k] = d + 1
                q.append(c)
    return dist


@given(st.integers(0, 12), st.data())
def test_rank_unrank_inverse(k, data):
    npos, base = 12, 2
    k = max(k, 1)
    r = data.draw(st.integers(0, entry_count(npos, k, base) - 1))
    pos = np.zeros(k, dtype=np.int64)
    ori = np.zeros(k, dtype=np.int64)
    unrank(r, pos, ori, k, npos, base, np.zeros(npos, dtype=np.int64))
    assert len(set(pos.tolist())) == k
    assert rank(pos, ori, k, npos, base) == r


def test_pdb_sizes(pdb4):
    assert pdb4.entry_count == 15120
    assert PatternDef.cube_edges((0, 1, 4, 7, 9, 10)).entry_count == 42577920
    assert PatternDef.cube_corners(range(8)).entry_count == 88179840


def test_tile_pdb_is_admissible_and_consistent(pdb4, true_distance):
    dom = make_domain("8puzzle")
    spec = HeuristicSpec(Kind.PDB_REGULAR, [pdb4], dom)
    S = all_states(dom)[::37]
    h = evaluate_many(spec, S)
    for s, v in zip(S, h):
        assert v <= true_distance[s.tobytes()]
        st_ = dom.state(s)
        for _, c in expand(st_):
            assert abs(evaluate(spec, c) - v) <= 1


def test_manhattan_values(true_distance):
    dom = make_domain("8puzzle")
    md = HeuristicSpec(Kind.MANHATTAN, [], dom)
    assert evaluate(md, dom.goal()) == 0
    s = TileState(np.array([1, 0, 2, 3, 4, 5, 6, 7, 8], dtype=np.int8), 3, 3)
    assert evaluate(md, s) == 1
    S = all_states(dom)[::101]
    h = evaluate_many(md, S)
    assert all(v <= true_distance[s.tobytes()] for s, v in zip(S, h))
    assert h.max() <= md.h_max == 22


def test_split_and_interleave_lookups(pdb4):
    dom = make_domain("8puzzle")
    pdb5 = cached_pdb(PatternDef.tile(3, 3, (5, 6, 7, 8)))
    a = HeuristicSpec(Kind.PDB_REGULAR, [pdb4], dom)
    b = HeuristicSpec(Kind.PDB_REGULAR, [pdb5], dom)
    split = HeuristicSpec(Kind.BLANK_PARITY_SPLIT, [pdb4, pdb5], dom)
    inter = HeuristicSpec(Kind.INTERLEAVE_ZERO, [pdb4], dom)
    S = all_states(dom)[::211]
    blank = np.argmax(S == 0, axis=1)
    even = ((blank // 3 + blank % 3) % 2) == 0
    hs, ha, hb, hi = (evaluate_many(x, S) for x in (split, a, b, inter))
    assert np.array_equal(hs, np.where(even, ha, hb))
    assert np.array_equal(hi, np.where(even, ha, 0))


def test_dual_lookup_equals_regular_on_dual_state():
    dom = make_domain("cube")
    pdb = cached_pdb(PatternDef.cube_edges((0, 1, 4, 7, 9, 10)))
    reg = HeuristicSpec(Kind.PDB_REGULAR, [pdb], dom)
    dual = HeuristicSpec(Kind.PDB_DUAL, [pdb], dom)
    for i in range(20):
        s = random_state(dom, i)
        assert evaluate(dual, s) == evaluate(reg, dual_state(s))
    assert evaluate(reg, dom.goal()) == evaluate(dual, dom.goal()) == 0


def test_random_symmetry_is_one_of_the_24():
    dom = make_domain("cube")
    pdb = cached_pdb(PatternDef.cube_edges((0, 1, 4, 7, 9, 10)))
    reg = HeuristicSpec(Kind.PDB_REGULAR, [pdb], dom)
    rs = HeuristicSpec(Kind.PDB_RANDOM_SYMMETRY, [pdb], dom)
    s = random_state(dom, 3)
    options = {evaluate(reg, CubeState.from_flat(cb.compose(cb.compose(cb.SYMS[k], s.flat), cb.SYMS_INV[k])))
               for k in range(24)}
    got = {evaluate(rs, s, np.random.default_rng(i)) for i in range(40)}
    assert got <= options


def test_save_load_and_errors(tmp_path, pdb4):
    p = tmp_path / "x.pdb"
    save_pdb(pdb4, p)
    assert load_pdb(p) == pdb4
    data = p.read_bytes()
    (tmp_path / "t.pdb").write_bytes(data[:-10])
    with pytest.raises(FormatError):
        load_pdb(tmp_path / "t.pdb")
    (tmp_path / "m.pdb").write_bytes(b"XXXX" + data[4:])
    with pytest.raises(FormatError):
        load_pdb(tmp_path / "m.pdb")
    with pytest.raises(CapacityError):
        build_pdb(PatternDef.tile(3, 3, (1, 2, 3, 4)), capacity=1000)


def test_spec_validation(pdb4):
    dom = make_domain("cube")
    with pytest.raises(DomainMismatch):
        HeuristicSpec(Kind.PDB_REGULAR, [pdb4], dom)
    with pytest.raises(ValueError):
        HeuristicSpec(Kind.BLANK_PARITY_SPLIT, [pdb4])
    with pytest.raises(DomainMismatch):
        HeuristicSpec(Kind.MANHATTAN, [], dom)
    with pytest.raises(ValueError):
        PatternDef.tile(3, 3, (1, 1))


def test_unconditional_distributions(pdb4):
    u = unconditional_from_pdb(pdb4)
    assert np.isclose(u.p.sum(), 1.0)
    assert u.cdf(-1) == 0 and np.isclose(u.cdf(u.h_max), 1.0)
    m = combine_max_independent([u, u])
    # P(max <= v) = P(h <= v)^2 under independence
    for v in range(u.h_max + 1):
        assert np.isclose(m.cdf(v), u.cdf(v) ** 2)
