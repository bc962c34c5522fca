"""Argument helpers shared by the subcommands and the experiment harness."""

import os
from pathlib import Path
from typing import List, Optional, Tuple

import numpy as np

from ..distribution import EXHAUSTIVE, SAMPLED, SamplePlan, estimate_unconditional
from ..domain import decode_state, encode_state, make_domain
from ..domain.core import CUBE
from ..heuristic import (MODE_NAMES, HeuristicSpec, Kind, PatternDef, cached_pdb, combine_max_independent,
                         evaluate_many, load_pdb, unconditional_from_pdb)
from ..search.starts import all_states, random_states, restricted_start_array

# modes taking exactly one PDB; the others take one per "+"-separated part
SINGLE = (Kind.PDB_REGULAR, Kind.PDB_DUAL, Kind.PDB_RANDOM_SYMMETRY, Kind.INTERLEAVE_ZERO)


def parse_pattern(domain, text: str) -> PatternDef:
    """``tiles:1,2,3,4``, ``edges:0,1,4,7,9,10`` or ``corners:0,...``."""
    try:
        kind, ids = text.split(":", 1)
        nums = [int(x) for x in ids.split(",") if x.strip()]
    except ValueError:
        raise ValueError(f"bad pattern {text!r} (expected kind:id,id,...)") from None
    kind = kind.strip().lower()
    if kind == "tiles":
        if domain.kind == CUBE:
            raise ValueError("tile pattern given for the cube")
        return PatternDef.tile(domain.width, domain.height, nums)
    if domain.kind != CUBE:
        raise ValueError(f"{kind} pattern given for a tile puzzle")
    if kind == "edges":
        return PatternDef.cube_edges(nums)
    if kind == "corners":
        return PatternDef.cube_corners(nums)
    raise ValueError(f"unknown pattern kind {kind!r}")


def load_pdb_arg(domain, text: str):
    text = text.strip()
    if text.endswith(".pdb") or os.path.exists(text):
        return load_pdb(text)
    return cached_pdb(parse_pattern(domain, text))


def make_spec(domain, heuristic: Optional[str], mode: str, stream: int = 0) -> HeuristicSpec:
    try:
        kind = MODE_NAMES[mode.strip().lower()]
    except KeyError:
        raise ValueError(f"unknown mode {mode!r}; choose from {sorted(MODE_NAMES)}") from None
    parts = [p for p in (heuristic or "").split("+") if p.strip()]
    pdbs = [load_pdb_arg(domain, p) for p in parts]
    if kind in (Kind.MANHATTAN, Kind.ZERO):
        pdbs = []
    return HeuristicSpec(kind, pdbs, domain, stream=stream)


def read_states(path) -> np.ndarray:
    rows = []
    with open(path) as f:
        for ln, line in enumerate(f, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            try:
                rows.append(decode_state(line).flat)
            except (ValueError, KeyError, TypeError) as e:
                raise ValueError(f"{path}:{ln}: cannot parse state ({e})") from None
    if not rows:
        raise ValueError(f"{path}: no states")
    return np.stack(rows).astype(np.int8)


def write_states(domain, states, path) -> None:
    with open(path, "w") as f:
        for row in states:
            f.write(encode_state(domain.state(row)) + "\n")


def _small(domain) -> bool:
    return domain.kind != CUBE and domain.n <= 9


def states_with_h(spec: HeuristicSpec, v: int, n: Optional[int], seed: int) -> np.ndarray:
    """States whose heuristic value is ``v``: every one of them on puzzles of
    at most nine cells when ``n`` is None, else ``n`` random ones."""
    dom = spec.domain
    if n is None and _small(dom):
        st = all_states(dom)
        return st[evaluate_many(spec, st, seed) == v]
    n = 1000 if n is None else n
    rng = np.random.default_rng(seed)
    found, have, tried = [], 0, 0
    while have < n:
        st = random_states(dom, 20000, rng)
        tried += len(st)
        st = st[evaluate_many(spec, st, int(rng.integers(0, 2**31 - 1))) == v]
        found.append(st)
        have += len(st)
        if tried >= 2_000_000 and have == 0:
            raise ValueError(f"no random state with h={v} in {tried} tries")
    return np.concatenate(found)[:n]


def resolve_starts(spec: HeuristicSpec, text: str, d: Optional[int], seed: int) -> np.ndarray:
    """``file:<path>`` or a path, ``random:N`` (restricted to threshold d when
    d is given), ``h:<v>`` or ``h:<v>:N``."""
    text = text.strip()
    if text.startswith("random:"):
        n = int(text.split(":", 1)[1])
        if n < 1:
            raise ValueError("random:N needs N >= 1")
        if d is None:
            return random_states(spec.domain, n, np.random.default_rng(seed))
        return restricted_start_array(spec.domain, spec, d, n, seed)
    if text.startswith("h:"):
        bits = text.split(":")
        v = int(bits[1])
        n = int(bits[2]) if len(bits) > 2 else None
        return states_with_h(spec, v, n, seed)
    path = text[5:] if text.startswith("file:") else text
    arr = read_states(path)
    if arr.shape[1] != spec.domain.state_len:
        raise ValueError(f"{path}: states do not belong to the {spec.domain.tag} domain")
    return arr


def parse_range(text: str) -> List[int]:
    """``8..10``, ``8,9,10`` or ``22``."""
    out = []
    for part in str(text).split(","):
        part = part.strip()
        if not part:
            continue
        if ".." in part:
            a, b = part.split("..", 1)
            out.extend(range(int(a), int(b) + 1))
        else:
            out.append(int(part))
    if not out:
        raise ValueError("empty threshold range")
    return out


def unconditional_for(spec: HeuristicSpec, samples: int, seed: int, typed: bool = False):
    """h distribution over all states: read off the PDB when a single lookup
    decides h, else enumerated (small puzzles) or sampled."""
    if not typed and spec.kind in (Kind.PDB_REGULAR, Kind.PDB_DUAL, Kind.PDB_RANDOM_SYMMETRY):
        return unconditional_from_pdb(spec.pdbs[0])
    if not typed and spec.kind == Kind.PDB_MAX and spec.domain.kind == CUBE:
        return combine_max_independent([unconditional_from_pdb(p) for p in spec.pdbs])
    plan = SamplePlan(mode=EXHAUSTIVE if _small(spec.domain) else SAMPLED, budget=samples, seed=seed)
    return estimate_unconditional(spec.domain, spec, plan, typed=typed)


def domain_arg(text: str):
    return make_domain(text)


def out_path(text: Optional[str]) -> Optional[Path]:
    return Path(text) if text else None


def split_csv(text: str) -> Tuple[str, ...]:
    return tuple(x.strip() for x in str(text).split(",") if x.strip())
