"""Search-versus-prediction harness.

A config names a domain, a heuristic, how to obtain the conditional
distributions, a threshold range, a start set and a list of models.
:func:`run_experiment` runs IDA* from every start at every threshold,
evaluates each model on the same starts and returns one
:class:`ComparisonRow` per threshold (and h group).  Everything downstream
of the config is seeded from ``seed``, so reruns give identical tables.
"""

import configparser
import contextlib
import csv
import io
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import numpy as np

from ..distribution import (EXHAUSTIVE, ONE_STEP, SAMPLED, TWO_STEP, TYPED_TWO_STEP, SamplePlan,
                            load_distribution, sample_tables, save_distribution)
from ..distribution.sampling import _map
from ..predictor import (brute_force_level_counts, exact_abstract_predict, predict_bounds, predict_cdp,
                         predict_kre, predict_with_lookahead, seed_base_cases)
from ..search import accepts_threshold, ida_iterations
from .common import make_domain, make_spec, parse_range, resolve_starts, split_csv, unconditional_for

MODEL_NAMES = ("kre", "kret", "cdp1", "cdp2", "cdp2t", "upper", "lower", "cdp1-bpmx", "cdp2-bpmx", "exact")
_NEEDS = {
    "cdp1": ONE_STEP, "cdp1-bpmx": ONE_STEP, "upper": ONE_STEP, "lower": ONE_STEP,
    "cdp2": TWO_STEP, "cdp2-bpmx": TWO_STEP, "cdp2t": TYPED_TWO_STEP,
}

CONFIG_HELP = """\
config keys (line-based key = value under [section] headers):
  [domain]        name = cube | 8puzzle | 15puzzle | tileWxH
  [heuristic]     pdb = <pattern or .pdb path>[+<pattern or path>]   e.g. edges:0,1,4,7,9,10
                  mode = md | regular | dual | randsym | max | split | interleave | zero
  [distribution]  mode = sampled | exhaustive       (default sampled)
                  samples = <parents>               (default 1000000)
                  seed = <int>                      (default: experiment seed)
                  deepening = true | false          (default false)
                  enrich = true | false             (default true)
                  floor = <int>                     (default 1000)
                  file = <path>                     load instead of sampling (two-step or typed file)
                  one_step_file = <path>            optional separate one-step file
                  save = <path prefix>              write <prefix>.one / <prefix>.two
  [experiment]    models = kre, cdp1, cdp2, ...     (empty: actuals only)
                  d = 8..10 | 8,9,10
                  starts = random:N | h:<v>[:N][,h:<v>...] | file:<path>
                  seed = <int>                      (required)
                  bpmx = true | false               (BPMX in the actual search)
                  lookahead = <r>                   (default 0)
  [output]        csv = <path>                      (default stdout)
                  table = <path>                    aligned plain-text copy
models: """ + " ".join(MODEL_NAMES)


@dataclass
class ExperimentConfig:
    domain: str
    mode: str
    seed: int
    thresholds: List[int]
    starts: str
    heuristic: Optional[str] = None
    models: Tuple[str, ...] = ()
    dist_mode: str = SAMPLED
    samples: int = 1_000_000
    dist_seed: Optional[int] = None
    deepening: bool = False
    enrich: bool = True
    floor: int = 1000
    dist_file: Optional[str] = None
    one_step_file: Optional[str] = None
    save_prefix: Optional[str] = None
    bpmx: bool = False
    lookahead: int = 0
    csv_out: Optional[str] = None
    table_out: Optional[str] = None

    def __post_init__(self):
        if not self.thresholds:
            raise ValueError("threshold range is empty")
        bad = [m for m in self.models if m not in MODEL_NAMES]
        if bad:
            raise ValueError(f"unknown model(s) {bad}; choose from {MODEL_NAMES}")
        for p in (self.dist_file, self.one_step_file):
            if p and not Path(p).exists():
                raise FileNotFoundError(p)
        if self.dist_mode not in (SAMPLED, EXHAUSTIVE):
            raise ValueError(f"distribution mode must be {SAMPLED} or {EXHAUSTIVE}")

    @classmethod
    def from_file(cls, path) -> "ExperimentConfig":
        cp = configparser.ConfigParser()
        if not cp.read(path):
            raise FileNotFoundError(path)
        return cls.from_parser(cp)

    @classmethod
    def from_parser(cls, cp: configparser.ConfigParser) -> "ExperimentConfig":
        def get(sec, key, default=None):
            return cp.get(sec, key, fallback=default) if cp.has_section(sec) else default

        def flag(sec, key, default):
            return cp.getboolean(sec, key, fallback=default) if cp.has_section(sec) else default

        seed = get("experiment", "seed")
        if seed is None:
            raise ValueError("[experiment] seed is required")
        ds = get("distribution", "seed")
        return cls(
            domain=get("domain", "name", "8puzzle"),
            heuristic=get("heuristic", "pdb"),
            mode=get("heuristic", "mode", "regular"),
            seed=int(seed),
            thresholds=parse_range(get("experiment", "d", "")),
            starts=get("experiment", "starts", "random:100"),
            models=split_csv(get("experiment", "models", "")),
            dist_mode=get("distribution", "mode", SAMPLED),
            samples=int(get("distribution", "samples", 1_000_000)),
            dist_seed=None if ds is None else int(ds),
            deepening=flag("distribution", "deepening", False),
            enrich=flag("distribution", "enrich", True),
            floor=int(get("distribution", "floor", 1000)),
            dist_file=get("distribution", "file"),
            one_step_file=get("distribution", "one_step_file"),
            save_prefix=get("distribution", "save"),
            bpmx=flag("experiment", "bpmx", False),
            lookahead=int(get("experiment", "lookahead", 0)),
            csv_out=get("output", "csv"),
            table_out=get("output", "table"),
        )


@dataclass
class ComparisonRow:
    d: int
    n: int
    actual: float
    group: str = ""
    predictions: Dict[str, float] = field(default_factory=dict)

    def ratio(self, model: str) -> float:
        return self.predictions[model] / self.actual if self.actual > 0 else float("nan")


@contextlib.contextmanager
def stage(name: str):
    """Prefix any error escaping the block with the stage that raised it."""
    try:
        yield
    except Exception as e:
        if not getattr(e, "_staged", False):
            msg = str(e.args[0]) if e.args else type(e).__name__
            e.args = (f"[{name}] {msg}",) + tuple(e.args[1:])
            e._staged = True
        raise


class Models:
    """Lazily derived inputs (distributions, level counts) shared by the
    predictors for one heuristic."""

    def __init__(self, spec, dists: Dict[str, object], seed: int, samples: int = 1_000_000):
        self.spec = spec
        self.dists = dists
        self.seed = seed
        self.samples = samples
        self._uncond = {}

    def cond(self, model: str):
        need = _NEEDS[model]
        d = self.dists
        if need in d:
            return d[need]
        if need == ONE_STEP:
            for k in (TWO_STEP, TYPED_TWO_STEP):
                if k in d:
                    return d[k].one_step().untyped()
        if need == TWO_STEP and TYPED_TWO_STEP in d:
            return d[TYPED_TWO_STEP].untyped()
        raise ValueError(f"model {model} needs a {need} distribution")

    def uncond(self, typed: bool):
        if typed not in self._uncond:
            self._uncond[typed] = unconditional_for(self.spec, self.samples, self.seed, typed)
        return self._uncond[typed]

    def predict(self, model: str, starts: np.ndarray, d: int, r: int = 0):
        """Mean predicted expansions per start; also the PredictionResult when
        one exists (None for lookahead sums)."""
        spec, n = self.spec, len(starts)
        if model == "exact":
            return exact_abstract_predict(spec, starts, d) / n, None
        if model in ("kre", "kret"):
            typed = model == "kret"
            levels = brute_force_level_counts(spec.domain, list(starts), d)
            res = predict_kre(levels, self.uncond(typed), d, n)
            return res.mean, res
        cond = self.cond(model)
        smodel = cond.model
        if model in ("upper", "lower"):
            levels = brute_force_level_counts(spec.domain, list(starts), d)
            sv = seed_base_cases(starts, spec, ONE_STEP, self.seed)
            up, lo = predict_bounds(levels, cond, self.uncond(False), sv, d)
            res = up if model == "upper" else lo
            return res.mean, res
        if r > 0:
            if model.endswith("-bpmx"):
                raise ValueError("lookahead is not combined with BPMX predictions")
            tot = sum(predict_with_lookahead(s, d, r, spec, cond, self.seed + i, smodel).total_expanded
                      for i, s in enumerate(starts))
            return tot / n, None
        sv = seed_base_cases(starts, spec, smodel, self.seed)
        res = predict_cdp(sv, cond, d, bpmx=model.endswith("-bpmx"), model_name=model)
        return res.mean, res


def _search_chunk(job):
    spec, chunk, d, bpmx, seed = job
    return ida_iterations(spec, chunk, d, bpmx, seed)[0].sum(axis=1)


def actual_expansions(spec, starts: np.ndarray, d: int, bpmx: bool, seed: int) -> np.ndarray:
    """Per-start expansions.  Chunks (and their seeds) do not depend on the
    worker count, so the result does not either."""
    step = 64
    jobs = [(spec, starts[i:i + step], d, bpmx, seed + i) for i in range(0, len(starts), step)]
    return np.concatenate(_map(_search_chunk, jobs))


def _distributions(cfg: ExperimentConfig, spec) -> Dict[str, object]:
    typed = "cdp2t" in cfg.models
    out = {}
    if cfg.dist_file:
        dist = load_distribution(cfg.dist_file)
        out[dist.model] = dist
        if cfg.one_step_file:
            one = load_distribution(cfg.one_step_file)
            out[one.model] = one
        return out
    if not any(m in _NEEDS for m in cfg.models):
        return out
    seed = cfg.seed if cfg.dist_seed is None else cfg.dist_seed
    plan = SamplePlan(mode=cfg.dist_mode, budget=cfg.samples, seed=seed, floor=cfg.floor,
                      deepening=cfg.deepening, enrich=cfg.enrich)
    one, two, _ = sample_tables(spec, plan, typed=typed)
    out[ONE_STEP] = one
    out[two.model] = two
    if cfg.save_prefix:
        save_distribution(one, f"{cfg.save_prefix}.one")
        save_distribution(two, f"{cfg.save_prefix}.two")
    return out


def _start_groups(cfg: ExperimentConfig, spec, d: int) -> List[Tuple[str, np.ndarray]]:
    """(label, starts) pairs; h groups are filtered to starts that reach d."""
    text = cfg.starts.strip()
    if text.startswith("h:"):
        groups = []
        for part in split_csv(text):
            st = resolve_starts(spec, part, None, cfg.seed)
            ok = accepts_threshold(spec, st, d, cfg.seed)
            groups.append((part, st[ok]))
        return groups
    return [("", resolve_starts(spec, text, d, cfg.seed + d))]


def run_experiment(cfg: ExperimentConfig) -> List[ComparisonRow]:
    with stage("heuristic"):
        domain = make_domain(cfg.domain)
        spec = make_spec(domain, cfg.heuristic, cfg.mode, stream=cfg.seed)
    with stage("distribution"):
        models = Models(spec, _distributions(cfg, spec), cfg.seed, cfg.samples)
    rows = []
    for d in cfg.thresholds:
        with stage(f"starts d={d}"):
            groups = _start_groups(cfg, spec, d)
        for label, st in groups:
            if len(st) == 0:
                rows.append(ComparisonRow(d, 0, float("nan"), label))
                continue
            with stage(f"search d={d}"):
                actual = float(actual_expansions(spec, st, d, cfg.bpmx, cfg.seed).mean())
            row = ComparisonRow(d, len(st), actual, label)
            for m in cfg.models:
                with stage(f"predict {m} d={d}"):
                    row.predictions[m] = float(models.predict(m, st, d, cfg.lookahead)[0])
            rows.append(row)
    return rows


def _fmt(x: float) -> str:
    return "nan" if x != x else f"{x:.10g}"


def rows_to_csv(rows: List[ComparisonRow], models) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    head = ["d", "group", "n", "actual"]
    for m in models:
        head += [m, f"{m}_ratio"]
    w.writerow(head)
    for r in rows:
        line = [r.d, r.group, r.n, _fmt(r.actual)]
        for m in models:
            if m in r.predictions:
                line += [_fmt(r.predictions[m]), _fmt(r.ratio(m))]
            else:
                line += ["", ""]
        w.writerow(line)
    return buf.getvalue()


def rows_to_table(rows: List[ComparisonRow], models) -> str:
    text = list(csv.reader(io.StringIO(rows_to_csv(rows, models))))
    widths = [max(len(r[i]) for r in text) for i in range(len(text[0]))]
    return "\n".join("  ".join(c.rjust(wd) for c, wd in zip(r, widths)) for r in text) + "\n"
