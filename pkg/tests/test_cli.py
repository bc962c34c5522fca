import csv

import pytest

from idapredict.cli import main
from idapredict.cli.common import parse_range
from idapredict.distribution import load_distribution
from idapredict.heuristic import load_pdb

PAT = "tiles:1,2,3,4"


def rows(path):
    with open(path, newline="") as f:
        return list(csv.DictReader(f))


def config(tmp_path, models="kre, cdp1, cdp2, upper, lower, exact", extra=""):
    p = tmp_path / "exp.ini"
    p.write_text(f"""[domain]
name = 8puzzle
[heuristic]
pdb = {PAT}
mode = regular
[distribution]
mode = exhaustive
[experiment]
models = {models}
d = 16..17
starts = random:30
seed = 5
{extra}
""")
    return p


def test_build_sample_predict_pipeline(tmp_path):
    pdb = tmp_path / "a.pdb"
    assert main(["build-pdb", "--domain", "8puzzle", "--pattern", PAT, "--out", str(pdb)]) == 0
    assert load_pdb(pdb).h_max > 0
    two, one = tmp_path / "t.two", tmp_path / "t.one"
    assert main(["sample-dist", "--domain", "8puzzle", "--heuristic", str(pdb), "--exhaustive",
                 "--out", str(two), "--also-one-step", str(one)]) == 0
    assert load_distribution(two).model == "two_step" and load_distribution(one).model == "one_step"
    assert main(["validate-dist", "--dist", str(two), "--max-branching", "3", "--consistent"]) == 0

    st = tmp_path / "s.txt"
    assert main(["gen-starts", "--domain", "8puzzle", "--heuristic", str(pdb), "--d", "18",
                 "--starts", "random:12", "--out", str(st)]) == 0
    assert len([ln for ln in st.read_text().splitlines() if ln and not ln.startswith("#")]) == 12

    out, lv = tmp_path / "p.csv", tmp_path / "lv.csv"
    assert main(["predict", "--domain", "8puzzle", "--heuristic", str(pdb), "--dist", str(two), "--dist", str(one),
                 "--model", "cdp1", "--model", "cdp2", "--model", "exact", "--d", "18", "--starts", str(st),
                 "--out", str(out), "--levels-out", str(lv)]) == 0
    got = {r["model"]: float(r["prediction"]) for r in rows(out)}
    assert set(got) == {"cdp1", "cdp2", "exact"}

    srch = tmp_path / "s.csv"
    assert main(["search", "--domain", "8puzzle", "--heuristic", str(pdb), "--d", "18",
                 "--starts", str(st), "--out", str(srch)]) == 0
    per_start = {}
    for r in rows(srch):
        per_start[r["state_id"]] = per_start.get(r["state_id"], 0) + int(r["expanded"])
    assert len(per_start) == 12
    # the exact predictor on a consistent PDB reproduces the search
    assert got["exact"] == pytest.approx(sum(per_start.values()) / 12)
    # the exact count has no per-level heuristic histogram to dump
    assert {r["model"] for r in rows(lv)} == {"cdp1", "cdp2"}


def test_compare_is_deterministic_and_independent_of_workers(tmp_path, monkeypatch):
    cfg = config(tmp_path)
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    monkeypatch.setenv("WORKERS", "1")
    assert main(["compare", str(cfg), "--out", str(a)]) == 0
    monkeypatch.setenv("WORKERS", "2")
    assert main(["compare", str(cfg), "--out", str(b)]) == 0
    assert a.read_text() == b.read_text()
    r = rows(a)
    assert [int(x["d"]) for x in r] == [16, 17]
    for x in r:
        assert float(x["exact"]) == pytest.approx(float(x["actual"]))
        assert float(x["lower"]) <= float(x["cdp1"]) * (1 + 1e-9)


def test_compare_without_models_gives_actuals(tmp_path):
    cfg = config(tmp_path, models="")
    out = tmp_path / "o.csv"
    assert main(["compare", str(cfg), "--out", str(out)]) == 0
    assert list(rows(out)[0].keys()) == ["d", "group", "n", "actual"]


def test_exit_codes(tmp_path):
    # configuration errors
    assert main(["compare", str(config(tmp_path, models="nonsense"))]) == 2
    bad = tmp_path / "noseed.ini"
    bad.write_text(config(tmp_path).read_text().replace("seed = 5", ""))
    assert main(["compare", str(bad)]) == 2
    assert main(["search", "--domain", "chess", "--heuristic", PAT, "--d", "3", "--starts", "random:2"]) == 2
    # capacity
    assert main(["build-pdb", "--domain", "8puzzle", "--pattern", PAT, "--capacity", "10",
                 "--out", str(tmp_path / "x.pdb")]) == 3
    # I/O and format errors
    assert main(["validate-dist", "--dist", str(tmp_path / "missing.two")]) == 4
    junk = tmp_path / "junk.two"
    junk.write_text("not a table\n")
    assert main(["validate-dist", "--dist", str(junk)]) == 4
    # validation failure
    two = tmp_path / "t.two"
    assert main(["sample-dist", "--domain", "8puzzle", "--heuristic", PAT, "--mode", "split",
                 "--heuristic", PAT + "+tiles:5,6,7,8", "--exhaustive", "--out", str(two)]) == 0
    assert main(["validate-dist", "--dist", str(two), "--consistent"]) == 1


def test_parse_range():
    assert parse_range("8..10") == [8, 9, 10]
    assert parse_range("8, 10,9") == [8, 10, 9]
    with pytest.raises(ValueError):
        parse_range("10..8")
