"""End-to-end runs on the large domains at small thresholds."""
import numpy as np
import pytest

from idapredict.distribution import SamplePlan, sample_tables
from idapredict.domain import make_domain
from idapredict.heuristic import HeuristicSpec, Kind, PatternDef, cached_pdb, evaluate_many
from idapredict.predictor import brute_force_level_counts, predict_cdp, predict_kre, seed_base_cases
from idapredict.distribution import estimate_unconditional
from idapredict.search import ida_iterations
from idapredict.search.starts import restricted_start_array


def test_cube_max_of_three_pdbs():
    dom = make_domain("cube")
    pdbs = [cached_pdb(PatternDef.cube_corners(tuple(range(8)))),
            cached_pdb(PatternDef.cube_edges((0, 1, 4, 7, 9, 10))),
            cached_pdb(PatternDef.cube_edges((2, 3, 5, 6, 8, 11)))]
    spec = HeuristicSpec(Kind.PDB_MAX, pdbs, dom)
    S = restricted_start_array(dom, spec, 10, 20, seed=3)
    h = evaluate_many(spec, S)
    for p in pdbs:
        assert np.all(h >= evaluate_many(HeuristicSpec(Kind.PDB_REGULAR, [p], dom), S))
    _, two, _ = sample_tables(spec, SamplePlan(budget=100_000, seed=1))
    actual = ida_iterations(spec, S, 10)[0].sum(axis=1).mean()
    pred = predict_cdp(seed_base_cases(S, spec, "two_step"), two, 10).mean
    assert actual > 0 and 0.5 < pred / actual < 2.0


def test_fifteen_puzzle_manhattan_pipeline():
    dom = make_domain("15puzzle")
    spec = HeuristicSpec(Kind.MANHATTAN, [], dom)
    d = 36
    S = restricted_start_array(dom, spec, d, 100, seed=2)
    one, two, rep = sample_tables(spec, SamplePlan(budget=1_000_000, seed=4), typed=True)
    assert rep.parents >= 1_000_000 and rep.enrichment_roots > 0
    actual = ida_iterations(spec, S, d)[0].sum(axis=1).mean()
    res = predict_cdp(seed_base_cases(S, spec, "typed_two_step"), two, d)
    # low-h contexts are reached only through enrichment; nothing may fall through
    assert res.unpopulated_mass == 0.0
    assert 0.67 < res.mean / actual < 1.5
    u = estimate_unconditional(dom, spec, SamplePlan(budget=200_000, seed=4))
    kre = predict_kre(brute_force_level_counts(dom, [dom.goal()], d), u, d).mean
    assert kre > 0 and np.isfinite(kre)


if __name__ == "__main__":
    pytest.main([__file__, "-q"])
