"""Command line interface: ``idapredict <subcommand> ...``.

Exit codes: 0 success, 1 validation failed (``validate-dist``), 2 bad
arguments or config, 3 capacity exceeded, 4 I/O or file-format error.
``WORKERS`` sets the process count used for sampling shards and searches.
"""

import argparse
import configparser
import csv
import sys

from ..distribution import (EXHAUSTIVE, MODELS, SAMPLED, DistFormatError, SamplePlan, load_distribution,
                            sample_tables, save_distribution, validate_distribution)
from ..heuristic import CapacityError, FormatError, build_pdb, save_pdb
from ..heuristic.pdb import DEFAULT_CAPACITY
from ..search import SamplingExhausted, ida_iterations
from .common import make_domain, make_spec, parse_pattern, resolve_starts, write_states
from .experiment import (CONFIG_HELP, MODEL_NAMES, ComparisonRow, ExperimentConfig, Models, rows_to_csv,
                         rows_to_table, run_experiment)

__all__ = ["main", "ExperimentConfig", "ComparisonRow", "run_experiment", "rows_to_csv"]

MODES = "md|regular|dual|randsym|max|split|interleave|zero"


def _open_out(path):
    return open(path, "w", newline="") if path and path != "-" else sys.stdout


def _close(f):
    if f is not sys.stdout:
        f.close()


def cmd_build_pdb(a):
    dom = make_domain(a.domain)
    pdb = build_pdb(parse_pattern(dom, a.pattern), a.capacity)
    save_pdb(pdb, a.out)
    print(f"{pdb.pattern.describe()}: {pdb.entry_count} entries, h_max {pdb.h_max} -> {a.out}")


def cmd_sample_dist(a):
    dom = make_domain(a.domain)
    spec = make_spec(dom, a.heuristic, a.mode, a.seed)
    plan = SamplePlan(mode=EXHAUSTIVE if a.exhaustive else SAMPLED, budget=a.samples, seed=a.seed,
                      floor=a.floor, deepening=a.deepening, enrich=not a.no_enrich)
    one, two, rep = sample_tables(spec, plan, typed=a.model == "typed_two_step")
    meta = {"domain": dom.tag, "heuristic": spec.describe(), "samples": rep.parents, "seed": a.seed,
            "mode": plan.mode}
    for d in (one, two):
        d.meta.update(meta)
    save_distribution(one if a.model == "one_step" else two, a.out)
    if a.also_one_step and a.model != "one_step":
        save_distribution(one, a.also_one_step)
    print(f"parents {rep.parents}, roots {rep.roots}, enrichment roots {rep.enrichment_roots}, "
          f"under floor {rep.under_floor_one_step}/{rep.under_floor_two_step}")
    for n in rep.notes:
        print(n)


def cmd_search(a):
    dom = make_domain(a.domain)
    spec = make_spec(dom, a.heuristic, a.mode, a.seed)
    starts = resolve_starts(spec, a.starts, a.d, a.seed)
    exp, gen, _, _ = ida_iterations(spec, starts, a.d, a.bpmx, a.seed)
    f = _open_out(a.out)
    w = csv.writer(f, lineterminator="\n")
    w.writerow(["state_id", "d", "level", "expanded", "generated"])
    for i in range(len(starts)):
        for lvl in range(gen.shape[1]):
            e = int(exp[i, lvl]) if lvl < exp.shape[1] else 0
            if e or gen[i, lvl]:
                w.writerow([i, a.d, lvl, e, int(gen[i, lvl])])
    _close(f)


def cmd_predict(a):
    dom = make_domain(a.domain)
    pdbs = "+".join(a.pdb) if a.pdb else a.heuristic
    spec = make_spec(dom, pdbs, a.mode, a.seed)
    dists = {}
    for p in a.dist or []:
        d = load_distribution(p)
        dists[d.model] = d
    models = Models(spec, dists, a.seed, a.samples)
    starts = resolve_starts(spec, a.starts, a.d, a.seed)
    out = [(m, *models.predict(m, starts, a.d, a.r)) for m in a.model]
    f = _open_out(a.out)
    w = csv.writer(f, lineterminator="\n")
    w.writerow(["d", "model", "prediction"])
    for m, mean, _ in out:
        w.writerow([a.d, m, f"{mean:.10g}"])
    _close(f)
    dumps = [(m, res) for m, _, res in out if res is not None]
    if a.levels_out:
        with open(a.levels_out, "w", newline="") as g:
            lw = csv.writer(g, lineterminator="\n")
            lw.writerow(["model", "level", "v", "count"])
            for m, res in dumps:
                for lvl, v, c in res.dump_rows():
                    lw.writerow([m, lvl, v, f"{c / res.n_starts:.10g}"])


def cmd_gen_starts(a):
    dom = make_domain(a.domain)
    spec = make_spec(dom, a.heuristic, a.mode, a.seed)
    starts = resolve_starts(spec, a.starts, a.d, a.seed)
    write_states(dom, starts, a.out)
    print(f"{len(starts)} states -> {a.out}")


def cmd_compare(a):
    cfg = ExperimentConfig.from_file(a.config)
    if a.out:
        cfg.csv_out = a.out
    rows = run_experiment(cfg)
    text = rows_to_csv(rows, cfg.models)
    f = _open_out(cfg.csv_out)
    f.write(text)
    _close(f)
    if cfg.table_out:
        with open(cfg.table_out, "w") as g:
            g.write(rows_to_table(rows, cfg.models))


def cmd_validate_dist(a):
    dist = load_distribution(a.dist)
    rep = validate_distribution(dist, a.max_branching, a.consistent, a.floor)
    print(f"model {dist.model}, h_max {dist.h_max}, types {dist.n_types}, populated contexts {rep.populated}")
    print(f"off-tridiagonal mass {rep.off_tridiagonal_mass:.6g}, contexts under floor {len(rep.under_floor)}")
    for v in rep.violations:
        print("violation:", v)
    print("ok" if rep.ok else "FAILED")
    return 0 if rep.ok else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="idapredict", description="Predict and measure IDA* expansions.",
                                epilog="Env WORKERS sets the worker process count. Exit codes: 0 ok, "
                                       "1 validation failed, 2 config error, 3 capacity error, 4 I/O error.")
    sub = p.add_subparsers(dest="cmd", required=True)

    def common(sp, heuristic=True):
        sp.add_argument("--domain", default="8puzzle", help="cube, 8puzzle, 15puzzle or tileWxH")
        if heuristic:
            sp.add_argument("--heuristic", help="pattern (tiles:1,2,3 / edges:... / corners:...) or .pdb "
                                                "file; join several with '+'")
            sp.add_argument("--mode", default="regular", help=MODES)
        sp.add_argument("--seed", type=int, default=0)

    sp = sub.add_parser("build-pdb", help="build and save a pattern database")
    common(sp, heuristic=False)
    sp.add_argument("--pattern", required=True)
    sp.add_argument("--capacity", type=int, default=DEFAULT_CAPACITY)
    sp.add_argument("--out", required=True)
    sp.set_defaults(fn=cmd_build_pdb)

    sp = sub.add_parser("sample-dist", help="estimate a conditional distribution")
    common(sp)
    sp.add_argument("--model", choices=MODELS, default="two_step")
    sp.add_argument("--samples", type=int, default=1_000_000, help="parent budget in sampled mode")
    sp.add_argument("--exhaustive", action="store_true", help="use every state as a root (small puzzles)")
    sp.add_argument("--deepening", action="store_true", help="on-demand deepening for unseen contexts")
    sp.add_argument("--no-enrich", action="store_true", help="skip rare-context enrichment")
    sp.add_argument("--floor", type=int, default=1000)
    sp.add_argument("--also-one-step", metavar="PATH", help="also save the one-step table here")
    sp.add_argument("--out", required=True)
    sp.set_defaults(fn=cmd_sample_dist)

    sp = sub.add_parser("search", help="run one IDA* iteration per start")
    common(sp)
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--starts", required=True, help="file, random:N (restricted to d) or h:<v>[:N]")
    sp.add_argument("--bpmx", action="store_true")
    sp.add_argument("--out", help="CSV path (default stdout)")
    sp.set_defaults(fn=cmd_search)

    sp = sub.add_parser("predict", help="predict expansions for a start set")
    common(sp)
    sp.add_argument("--model", action="append", choices=MODEL_NAMES, required=True, help="repeatable")
    sp.add_argument("--dist", action="append", help="distribution file (repeatable)")
    sp.add_argument("--pdb", action="append", help="pattern database file (repeatable)")
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--starts", required=True, help="file, random:N (restricted to d) or h:<v>[:N]")
    sp.add_argument("--r", type=int, default=0, help="lookahead depth")
    sp.add_argument("--samples", type=int, default=1_000_000, help="for sampled h distributions")
    sp.add_argument("--out", help="CSV path (default stdout)")
    sp.add_argument("--levels-out", help="per-level dump: model,level,v,count")
    sp.set_defaults(fn=cmd_predict)

    sp = sub.add_parser("gen-starts", help="write start states, one per line")
    common(sp)
    sp.add_argument("--d", type=int, help="restrict random starts to threshold d")
    sp.add_argument("--starts", default="random:1000", help="random:N or h:<v>[:N]")
    sp.add_argument("--out", required=True)
    sp.set_defaults(fn=cmd_gen_starts)

    sp = sub.add_parser("compare", help="run an experiment config", description=CONFIG_HELP,
                        formatter_class=argparse.RawDescriptionHelpFormatter)
    sp.add_argument("config")
    sp.add_argument("--out", help="CSV path, overrides [output] csv")
    sp.set_defaults(fn=cmd_compare)

    sp = sub.add_parser("validate-dist", help="check a distribution file")
    sp.add_argument("--dist", required=True)
    sp.add_argument("--max-branching", type=float)
    sp.add_argument("--consistent", action="store_true", help="require a tridiagonal table")
    sp.add_argument("--floor", type=int, default=1000)
    sp.set_defaults(fn=cmd_validate_dist)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        rc = args.fn(args)
    except CapacityError as e:
        print(f"capacity error: {e}", file=sys.stderr)
        return 3
    except (OSError, FormatError, DistFormatError) as e:
        print(f"I/O error: {e}", file=sys.stderr)
        return 4
    except (ValueError, KeyError, configparser.Error, SamplingExhausted) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    return int(rc or 0)


if __name__ == "__main__":
    sys.exit(main())
