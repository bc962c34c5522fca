"""Time the hot kernels under numba and under the pure-Python fallback.

Each backend runs in its own interpreter (the switch is read at import
time).  Both runs must produce the same numbers; only the timings differ.

    python benchmarks/bench_kernels.py [--repeat 3]
"""

import argparse
import json
import os
import subprocess
import sys
import time

WORKLOAD = r"""
import json, sys, time
import numpy as np
from idapredict._jit import backend
from idapredict.domain import make_domain
from idapredict.heuristic import HeuristicSpec, Kind, PatternDef, build_pdb, evaluate_many
from idapredict.distribution import SamplePlan, sample_tables
from idapredict.search import ida_iterations
from idapredict.search.starts import random_states
from idapredict.predictor import predict_cdp, seed_base_cases

repeat = int(sys.argv[1])
dom = make_domain("8puzzle")
out = {"backend": backend(), "times": {}, "values": {}}

def timed(name, fn):
    fn()  # warm-up (compilation for numba)
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        v = fn()
        best = min(best, time.perf_counter() - t)
    out["times"][name] = best
    out["values"][name] = v

pdb = build_pdb(PatternDef.tile(3, 3, (1, 2, 3, 4)))
spec = HeuristicSpec(Kind.PDB_REGULAR, [pdb], dom)
states = random_states(dom, 2000, np.random.default_rng(0))
starts = states[:20]

timed("build_pdb", lambda: int(build_pdb(PatternDef.tile(3, 3, (1, 2, 3, 4))).entries.sum()))
timed("evaluate_many", lambda: int(evaluate_many(spec, states).sum()))
timed("ida_iterations", lambda: int(ida_iterations(spec, starts, 20)[0].sum()))
plan = SamplePlan(budget=20000, seed=1, enrich=False, shards=2)
timed("sample_tables", lambda: int(sample_tables(spec, plan)[1].counts.sum()))
_, two, _ = sample_tables(spec, plan)
timed("predict_cdp", lambda: round(predict_cdp(seed_base_cases(starts, spec, "two_step"), two, 20).mean, 6))
print(json.dumps(out))
"""


def run(nojit: bool, repeat: int) -> dict:
    env = dict(os.environ, IDAPREDICT_NOJIT="1" if nojit else "0", WORKERS="1")
    t = time.perf_counter()
    res = subprocess.run([sys.executable, "-c", WORKLOAD, str(repeat)], env=env, check=True,
                         capture_output=True, text=True)
    data = json.loads(res.stdout.strip().splitlines()[-1])
    data["wall"] = time.perf_counter() - t
    return data


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    a = ap.parse_args()
    jit = run(False, a.repeat)
    py = run(True, a.repeat)
    print(f"{'kernel':<16}{'numba s':>12}{'python s':>12}{'speedup':>10}  same result")
    for k in jit["times"]:
        tj, tp = jit["times"][k], py["times"][k]
        same = jit["values"][k] == py["values"][k]
        print(f"{k:<16}{tj:>12.4f}{tp:>12.4f}{tp / tj:>10.1f}  {same}")
    print(f"process wall time: numba {jit['wall']:.1f}s (includes compilation), python {py['wall']:.1f}s")
    if jit["values"] != py["values"]:
        sys.exit("backends disagree")


if __name__ == "__main__":
    main()
