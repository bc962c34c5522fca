import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from idapredict.domain import MoveContext, expand, make_domain
from idapredict.heuristic import HeuristicSpec, Kind, PatternDef, cached_pdb, evaluate
from idapredict.search import (accepts_threshold, ida_iteration, ida_iterations, schedule_membership,
                               threshold_schedule)
from idapredict.search.starts import SamplingExhausted, random_states, restricted_start_array


@pytest.fixture(scope="module")
def spec8():
    dom = make_domain("8puzzle")
    return HeuristicSpec(Kind.PDB_REGULAR, [cached_pdb(PatternDef.tile(3, 3, (1, 2, 3, 4)))], dom)


@pytest.fixture(scope="module")
def split8():
    dom = make_domain("8puzzle")
    a = cached_pdb(PatternDef.tile(3, 3, (1, 2, 3, 4)))
    b = cached_pdb(PatternDef.tile(3, 3, (5, 6, 7, 8)))
    return HeuristicSpec(Kind.BLANK_PARITY_SPLIT, [a, b], dom)


def dfs(spec, s, ctx, g, d, exp, nxt):
    """Plain recursive IDA* iteration (the oracle): per-level expansions and
    the smallest f beyond d.  Goal nodes are expanded like any other."""
    f = g + evaluate(spec, s)
    if f > d:
        nxt[0] = min(nxt[0], f)
        return
    exp[g] += 1
    for op, c in expand(s, ctx):
        dfs(spec, c, MoveContext(op), g + 1, d, exp, nxt)


def oracle(spec, s, d):
    exp = np.zeros(d + 1, dtype=np.int64)
    nxt = [1 << 30]
    dfs(spec, s, MoveContext(), 0, d, exp, nxt)
    return exp, nxt[0]


@given(st.integers(0, 10**6), st.integers(0, 14))
def test_iteration_matches_recursive_oracle(spec8, seed, d):
    s = random_states(spec8.domain, 1, np.random.default_rng(seed))[0]
    exp, nxt = oracle(spec8, spec8.domain.state(s), d)
    stats = ida_iteration(spec8.domain.state(s), d, spec8)
    assert stats.expanded_per_level.tolist() == exp.tolist()
    assert (stats.next_threshold if stats.next_threshold is not None else 1 << 30) == nxt


@given(st.integers(0, 10**6), st.integers(0, 13))
def test_inconsistent_iteration_matches_oracle(split8, seed, d):
    s = random_states(split8.domain, 1, np.random.default_rng(seed))[0]
    exp, _ = oracle(split8, split8.domain.state(s), d)
    assert ida_iterations(split8, s[None], d)[0][0].tolist() == exp.tolist()


def brute_schedule(spec, s, cap):
    """Thresholds by repeated oracle iterations until the goal is expanded."""
    out = []
    goal = spec.domain.goal()
    d = evaluate(spec, s)
    while d <= cap:
        out.append(d)
        _, nxt = oracle(spec, s, d)
        goal_reached = False

        def has_goal(st_, ctx, g):
            nonlocal goal_reached
            if goal_reached or g + evaluate(spec, st_) > d:
                return
            if st_ == goal:
                goal_reached = True
                return
            for op, c in expand(st_, ctx):
                has_goal(c, MoveContext(op), g + 1)
        has_goal(s, MoveContext(), 0)
        if goal_reached:
            break
        d = nxt
    return out


def test_schedule_matches_brute_force(spec8):
    dom = spec8.domain
    rs = random_states(dom, 12, np.random.default_rng(4))
    for s in rs:
        st_ = dom.state(s)
        sch = threshold_schedule(st_, spec8, 18)
        assert sch.thresholds == brute_schedule(spec8, st_, 18)


def test_acceptance_and_membership_agree_with_schedules(split8):
    dom = split8.domain
    rs = random_states(dom, 60, np.random.default_rng(8))
    M = schedule_membership(split8, rs, 24)
    for d in (14, 17, 20, 24):
        ok = accepts_threshold(split8, rs, d)
        assert np.array_equal(ok, M[:, d])
    for i, s in enumerate(rs[:15]):
        sch = threshold_schedule(dom.state(s), split8, 24).thresholds
        assert sorted(np.flatnonzero(M[i]).tolist()) == sch


def test_restricted_starts_reach_their_threshold(spec8):
    st = restricted_start_array(spec8.domain, spec8, 20, 30, seed=1)
    assert len(st) == 30
    for s in st:
        assert 20 in threshold_schedule(spec8.domain.state(s), spec8, 20).thresholds
    with pytest.raises(SamplingExhausted):
        restricted_start_array(spec8.domain, spec8, 1, 5, seed=1, batch=200)


def test_bpmx_changes_nothing_for_consistent_heuristics(spec8):
    rs = random_states(spec8.domain, 20, np.random.default_rng(2))
    a = ida_iterations(spec8, rs, 18)[0]
    b = ida_iterations(spec8, rs, 18, bpmx=True)[0]
    assert np.array_equal(a, b)


def test_bpmx_on_split_heuristic_is_a_no_op(split8):
    # every child of a node consults the same (consistent) PDB, so siblings
    # differ by at most 2 and one-level pathmax can never cut a parent off
    rs = random_states(split8.domain, 40, np.random.default_rng(3))
    a = ida_iterations(split8, rs, 20)[0]
    b = ida_iterations(split8, rs, 20, bpmx=True)[0]
    assert np.array_equal(a, b)


def test_bpmx_prunes_dual_lookups():
    dom = make_domain("cube")
    pdb = cached_pdb(PatternDef.cube_edges((0, 1, 4, 7, 9, 10)))
    dual = HeuristicSpec(Kind.PDB_DUAL, [pdb], dom)
    rs = random_states(dom, 30, np.random.default_rng(3))
    a = ida_iterations(dual, rs, 8)[0].sum(axis=1)
    b, _, _, aband = ida_iterations(dual, rs, 8, bpmx=True)
    assert np.all(b.sum(axis=1) <= a) and b.sum() < a.sum() and aband.sum() > 0


def test_stats_merge_and_mismatch(spec8):
    s = spec8.domain.state(random_states(spec8.domain, 1, np.random.default_rng(0))[0])
    a = ida_iteration(s, 16, spec8)
    assert (a + a).total_expanded == 2 * a.total_expanded
    with pytest.raises(ValueError):
        a + ida_iteration(s, 17, spec8)
    with pytest.raises(ValueError):
        ida_iteration(make_domain("cube").goal(), 3, spec8)
