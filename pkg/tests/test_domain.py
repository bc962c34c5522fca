import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from idapredict.domain import (CubeState, MoveContext, TileState, classify_blank_type, decode_state, dual_state,
                               encode_state, expand, make_domain, random_state, symmetry_map)
from idapredict.domain import cube as cb
from idapredict.domain import tiles as tl
from idapredict.predictor import brute_force_level_counts
from idapredict.search.starts import all_states, random_states

moves = st.lists(st.integers(0, 17), max_size=25)


def apply_moves(seq):
    s = cb.GOAL.copy()
    for m in seq:
        s = cb.compose(s, cb.MOVES[m])
    return s


def test_cube_moves_have_order_four():
    for m in range(0, 18, 3):
        s = cb.GOAL
        for _ in range(4):
            s = cb.compose(s, cb.MOVES[m])
        assert np.array_equal(s, cb.GOAL)
        # X2 = X X and X' = X X X
        assert np.array_equal(cb.MOVES[m + 1], cb.compose(cb.MOVES[m], cb.MOVES[m]))
        assert np.array_equal(cb.MOVES[m + 2], cb.compose(cb.MOVES[m + 1], cb.MOVES[m]))


@given(moves)
def test_cube_states_stay_valid_and_invert(seq):
    s = apply_moves(seq)
    assert cb.is_valid(s)
    assert np.array_equal(cb.compose(s, cb.inverse(s)), cb.GOAL)


@given(moves)
def test_cube_dual_is_an_involution(seq):
    s = CubeState.from_flat(apply_moves(seq))
    assert dual_state(dual_state(s)) == s


@given(moves, st.integers(0, 23))
def test_symmetry_preserves_distance_structure(seq, k):
    s = CubeState.from_flat(apply_moves(seq))
    t = symmetry_map(s, k)
    assert cb.is_valid(t.flat)
    # conjugation maps the goal to itself and is undone by the inverse rotation
    assert symmetry_map(CubeState.from_flat(cb.GOAL), k) == CubeState.from_flat(cb.GOAL)
    back = CubeState.from_flat(cb.compose(cb.compose(cb.SYMS_INV[k], t.flat), cb.SYMS[k]))
    assert back == s


def test_cube_pruned_tree_level_sizes():
    dom = make_domain("cube")
    lv = brute_force_level_counts(dom, [dom.goal()], 4)
    assert lv.N.tolist() == [1, 18, 243, 3240, 43254]


def test_cube_expand_pruning():
    dom = make_domain("cube")
    g = dom.goal()
    assert len(expand(g)) == 18
    after_u = expand(g, MoveContext(0))
    assert len(after_u) == 15 and all(op // 3 != 0 for op, _ in after_u)
    # D after U is allowed, U after D is not (opposite faces in one order)
    after_d = expand(g, MoveContext(9))
    assert all(op // 3 not in (0, 3) for op, _ in after_d)


def test_tile_expand_and_parent_pruning():
    dom = make_domain("8puzzle")
    g = dom.goal()
    kids = expand(g)
    assert len(kids) == 2
    op, child = kids[0]
    back = expand(child, MoveContext(op))
    assert all(c != g for _, c in back)
    assert len(expand(child)) == len(back) + 1


def test_all_states_is_the_reachable_half():
    dom = make_domain("8puzzle")
    S = all_states(dom)
    assert len(S) == 181440
    assert len(np.unique(S, axis=0)) == len(S)
    assert all(tl.is_solvable(s, 3) for s in S[::997])


def test_random_tile_states_are_solvable():
    dom = make_domain("15puzzle")
    S = random_states(dom, 200, np.random.default_rng(0))
    assert all(tl.is_solvable(s, 4) for s in S)
    assert all(tl.is_solvable(random_state(dom, i).cells, 4) for i in range(20))


@pytest.mark.parametrize("tag", ["8puzzle", "15puzzle", "tile4x3", "cube"])
def test_encode_decode_round_trip(tag):
    dom = make_domain(tag)
    for i in range(5):
        s = random_state(dom, i)
        assert decode_state(encode_state(s)) == s


def test_tile_dual_requires_home_blank():
    g = make_domain("8puzzle").goal()
    assert dual_state(g) == g
    moved = expand(g)[0][1]
    with pytest.raises(ValueError):
        dual_state(moved)


def test_blank_types_and_max_manhattan():
    g = make_domain("8puzzle").goal()
    assert int(classify_blank_type(g)) == tl.cell_types(3, 3)[0]
    assert sorted(set(tl.cell_types(3, 3).tolist())) == [0, 1, 2]
    assert tl.max_manhattan(3, 3) == 22
    # assignment bound: on 2x2 every tile can sit in its opposite corner
    assert tl.max_manhattan(2, 2) == 6


def test_bad_domains_rejected():
    with pytest.raises(ValueError):
        make_domain("chess")
    with pytest.raises(ValueError):
        TileState(np.array([1, 1, 2, 0], dtype=np.int8), 2, 2)


@settings(max_examples=25)
@given(st.integers(0, 2**31 - 1))
def test_cube_random_walk_states_valid(seed):
    s = random_state(make_domain("cube"), seed)
    assert cb.is_valid(s.flat)
