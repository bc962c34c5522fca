import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from idapredict.distribution import EXHAUSTIVE, ModelMismatch, SamplePlan, estimate_unconditional, sample_tables
from idapredict.domain import MoveContext, expand, make_domain
from idapredict.heuristic import HeuristicSpec, Kind, PatternDef, cached_pdb, evaluate, unconditional_from_pdb
from idapredict.predictor import (ConditionsNotMet, ExactPredictor, bpmx_survival_probability,
                                  brute_force_level_counts, exact_abstract_predict, lookahead_frontier,
                                  predict_bounds, predict_cdp, predict_cdp_bpmx, predict_kre,
                                  predict_with_lookahead, seed_base_cases)
from idapredict.search import ida_iterations
from idapredict.search.starts import random_states, restricted_start_array


@pytest.fixture(scope="module")
def puzzle():
    dom = make_domain("8puzzle")
    pdb = cached_pdb(PatternDef.tile(3, 3, (1, 2, 3, 4)))
    spec = HeuristicSpec(Kind.PDB_REGULAR, [pdb], dom)
    one, two, _ = sample_tables(spec, SamplePlan(mode=EXHAUSTIVE))
    starts = restricted_start_array(dom, spec, 20, 40, 2)
    return dom, pdb, spec, one, two, starts


@pytest.fixture(scope="module")
def split():
    dom = make_domain("8puzzle")
    a = cached_pdb(PatternDef.tile(3, 3, (1, 2, 3, 4)))
    b = cached_pdb(PatternDef.tile(3, 3, (5, 6, 7, 8)))
    spec = HeuristicSpec(Kind.BLANK_PARITY_SPLIT, [a, b], dom)
    one, two, _ = sample_tables(spec, SamplePlan(mode=EXHAUSTIVE), typed=True)
    return spec, one, two


def tree_levels(s, d):
    """Pruned-tree level sizes by explicit enumeration."""
    out = np.zeros(d + 1, dtype=np.int64)

    def rec(x, ctx, g):
        out[g] += 1
        if g < d:
            for op, c in expand(x, ctx):
                rec(c, MoveContext(op), g + 1)
    rec(s, MoveContext(), 0)
    return out


@given(st.integers(0, 10**6), st.integers(0, 9))
def test_tile_level_counts_match_enumeration(seed, d):
    dom = make_domain("8puzzle")
    s = dom.state(random_states(dom, 1, np.random.default_rng(seed))[0])
    lv = brute_force_level_counts(dom, [s], d)
    assert lv.N.tolist() == tree_levels(s, d).tolist()
    assert np.allclose(lv.w.sum(axis=1), 1.0)


def test_level_counts_add_over_starts():
    dom = make_domain("tile4x3")
    S = random_states(dom, 3, np.random.default_rng(1))
    total = sum(brute_force_level_counts(dom, [s], 8).N for s in S)
    assert np.array_equal(brute_force_level_counts(dom, list(S), 8).N, total)


def test_kre_with_zero_heuristic_counts_the_whole_tree():
    dom = make_domain("8puzzle")
    zero = HeuristicSpec(Kind.ZERO, [], dom)
    u = estimate_unconditional(dom, zero, SamplePlan(mode=EXHAUSTIVE))
    s = dom.goal()
    lv = brute_force_level_counts(dom, [s], 10)
    assert predict_kre(lv, u, 10).total_expanded == pytest.approx(lv.N.sum())


def test_two_step_first_levels_are_exact(puzzle):
    dom, _, spec, _, two, starts = puzzle
    d = 20
    res = predict_cdp(seed_base_cases(starts, spec, "two_step"), two, d)
    exp = ida_iterations(spec, starts, d)[0]
    assert res.per_level()[0] == len(starts)
    # level 1 holds the starts' real children; those with h <= d - 1 are expanded
    lvl1 = res.levels[1].sum(axis=1)
    assert lvl1[: d - 1 + 1].sum() == pytest.approx(exp[:, 1].sum())


def test_cdp2_is_close_on_the_8_puzzle(puzzle):
    _, _, spec, _, two, starts = puzzle
    actual = ida_iterations(spec, starts, 20)[0].sum(axis=1).mean()
    pred = predict_cdp(seed_base_cases(starts, spec, "two_step"), two, 20).mean
    assert 0.7 < pred / actual < 1.4


def test_prediction_is_linear_in_seed_mass(puzzle):
    _, _, spec, one, two, starts = puzzle
    for model, cond in (("one_step", one), ("two_step", two)):
        sv = seed_base_cases(starts, spec, model)
        a = predict_cdp(sv, cond, 20).total_expanded
        assert predict_cdp(sv.scaled(0.25), cond, 20).total_expanded == pytest.approx(0.25 * a, rel=1e-12)
        half = seed_base_cases(starts[:20], spec, model)
        rest = seed_base_cases(starts[20:], spec, model)
        assert (predict_cdp(half, cond, 20).total_expanded + predict_cdp(rest, cond, 20).total_expanded
                == pytest.approx(a, rel=1e-12))


def test_model_mismatch(puzzle):
    _, _, spec, one, two, starts = puzzle
    with pytest.raises(ModelMismatch):
        predict_cdp(seed_base_cases(starts, spec, "one_step"), two, 10)
    with pytest.raises(ModelMismatch):
        predict_cdp(seed_base_cases(starts, spec, "two_step"), one, 10)
    with pytest.raises(ModelMismatch):
        predict_cdp(seed_base_cases(starts, spec, "typed_two_step"), two, 10)


def test_bpmx_prediction_bounds(split):
    spec, one, two = split
    dom = spec.domain
    S = random_states(dom, 50, np.random.default_rng(5))
    for model, cond in (("one_step", one.untyped()), ("two_step", two.untyped())):
        sv = seed_base_cases(S, spec, model)
        for d in (14, 18, 22):
            assert predict_cdp_bpmx(sv, cond, d).total_expanded <= predict_cdp(sv, cond, d).total_expanded + 1e-9


def test_survival_probability(puzzle, split):
    _, _, _, one, _, _ = puzzle
    assert bpmx_survival_probability(1, 20, 5, 8, one) == 1.0
    ps = [bpmx_survival_probability(l, 12, 6, 8, split[1]) for l in (1, 2, 3)]
    assert ps[0] == 1.0 and 0 <= ps[2] <= ps[1] <= 1.0
    with pytest.raises(ValueError):
        bpmx_survival_probability(0, 12, 6, 8, one)
    # zero heuristic: no child is ever pruned, so the factor is 1 and bpmx is a no-op
    zero = HeuristicSpec(Kind.ZERO, [], spec_domain := split[0].domain)
    z1, z2, _ = sample_tables(zero, SamplePlan(mode=EXHAUSTIVE))
    S = random_states(spec_domain, 10, np.random.default_rng(0))
    for model, cond in (("one_step", z1), ("two_step", z2)):
        sv = seed_base_cases(S, zero, model)
        assert predict_cdp_bpmx(sv, cond, 9).total_expanded == pytest.approx(
            predict_cdp(sv, cond, 9).total_expanded, rel=1e-12)


def test_bounds_order_termwise(puzzle):
    dom, pdb, spec, one, _, starts = puzzle
    u = unconditional_from_pdb(pdb)
    sv = seed_base_cases(starts, spec, "one_step")
    for d in (16, 20, 24):
        lv = brute_force_level_counts(dom, list(starts), d)
        up, lo = predict_bounds(lv, one, u, sv, d, equilibrium_upper=False)
        mid = predict_cdp(sv, one, d)

        def expanded(res):
            return np.array([t[:max(d - i + 1, 0)].sum() for i, t in enumerate(res.levels)])
        assert np.all(expanded(lo) <= expanded(mid) + 1e-9)
        assert np.all(expanded(mid) <= expanded(up) + 1e-9)
        eq_up, _ = predict_bounds(lv, one, u, sv, d)
        assert eq_up.n_starts == pytest.approx(sv.mass)


def test_exact_predictor_equals_search(puzzle):
    dom, pdb, spec, _, _, _ = puzzle
    ex = ExactPredictor(pdb)
    S = random_states(dom, 25, np.random.default_rng(9))
    for d in (10, 15, 19):
        assert exact_abstract_predict(pdb, S, d) == int(ida_iterations(spec, S, d)[0].sum())
        per = ex.per_level(S, d)
        assert per.tolist() == ida_iterations(spec, S, d)[0].sum(axis=0).tolist()


def test_exact_predictor_conditions():
    dom = make_domain("8puzzle")
    a = cached_pdb(PatternDef.tile(3, 3, (1, 2, 3, 4)))
    b = cached_pdb(PatternDef.tile(3, 3, (5, 6, 7, 8)))
    with pytest.raises(ConditionsNotMet):
        exact_abstract_predict(HeuristicSpec(Kind.BLANK_PARITY_SPLIT, [a, b], dom), [dom.goal().flat], 5)
    with pytest.raises(ConditionsNotMet):
        exact_abstract_predict(HeuristicSpec(Kind.PDB_MAX, [a, b], dom), [dom.goal().flat], 5)


def test_lookahead(puzzle):
    _, _, spec, _, two, starts = puzzle
    s = starts[0]
    d = 20
    r0 = predict_with_lookahead(s, d, 0, spec, two)
    assert r0.total_expanded == pytest.approx(
        predict_cdp(seed_base_cases(s[None], spec, "two_step"), two, d).total_expanded, rel=1e-12)
    exp = ida_iterations(spec, s[None], d)[0][0]
    for r in (2, 5):
        res = predict_with_lookahead(s, d, r, spec, two)
        assert res.per_level()[:r].tolist() == exp[:r].tolist()
        states, lasts, e = lookahead_frontier(s, d, r, spec)
        assert len(states) == len(lasts)
        # frontier holds the generated depth-r nodes on f <= d paths
        assert len(states) >= exp[r]
        assert np.all([evaluate(spec, spec.domain.state(x)) >= 0 for x in states])
    with pytest.raises(ValueError):
        predict_with_lookahead(s, d, d, spec, two)


def test_result_dump_rows(puzzle):
    _, _, spec, _, two, starts = puzzle
    res = predict_cdp(seed_base_cases(starts, spec, "two_step"), two, 18)
    rows = list(res.dump_rows())
    assert sum(c for _, _, c in rows) == pytest.approx(res.per_level().sum())
