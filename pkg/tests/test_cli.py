import csv
import json
import math
import subprocess
import sys
from collections import defaultdict

import pytest

from cayleywalk import cli
from cayleywalk.limitlaws import theorem1_pmf
from cayleywalk.core import Parity, WalkParams


def read_rows(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def run(tmp_path, *argv, name="out.csv"):
    out = tmp_path / name
    code = cli.main([*argv, "--out", str(out)])
    return code, out


def test_zero_steps(tmp_path):
    code, out = run(tmp_path, "simulate-line", "--steps", "0")
    assert code == 0
    assert read_rows(out) == [{"t": "0", "x": "0", "p": "1"}]


def test_line_localization_b(tmp_path):
    code, out = run(tmp_path, "simulate-line", "--kappa", "3", "--case", "B", "--steps", "500", "--every", "500")
    assert code == 0
    rows = [r for r in read_rows(out) if r["t"] == "500"]
    p0 = next(float(r["p"]) for r in rows if r["x"] == "0")
    assert p0 == pytest.approx(0.25, abs=0.02)
    assert math.fsum(float(r["p"]) for r in rows) == pytest.approx(1.0, abs=1e-10)
    final = read_rows(tmp_path / "out_final.csv")
    assert math.fsum(float(r["classical"]) for r in final) == pytest.approx(1.0, abs=1e-12)
    assert float(final[0]["quantum"]) == pytest.approx(p0, rel=1e-15)


def test_json_schema(tmp_path):
    code, out = run(tmp_path, "simulate-line", "--steps", "6", "--format", "json", name="out.json")
    assert code == 0
    doc = json.loads(out.read_text())
    assert set(doc) == {"params", "series"}
    assert doc["params"]["kappa"] == 3
    assert [s["t"] for s in doc["series"]] == list(range(7))
    for s in doc["series"]:
        assert isinstance(s["pmf"], list)
        assert all(isinstance(v, float) for v in s["pmf"])
        assert sum(s["pmf"]) == pytest.approx(1.0, abs=1e-14)


def test_tree_guard(tmp_path):
    code, out = run(tmp_path, "simulate-tree", "--steps", str(cli.TREE_MAX_STEPS + 1))
    assert code == 3
    assert not out.exists()


def test_tree_uniform_on_spheres(tmp_path):
    code, out = run(tmp_path, "simulate-tree", "--kappa", "3", "--case", "A", "--steps", "10")
    assert code == 0
    by_len = defaultdict(list)
    for r in read_rows(out):
        by_len[int(r["length"])].append(float(r["p"]))
    total = 0.0
    for n, ps in by_len.items():
        assert len(ps) == (1 if n == 0 else 3 * 2 ** (n - 1))
        assert max(ps) - min(ps) < 1e-13 * max(1.0, max(ps))
        total += sum(ps)
    assert total == pytest.approx(1.0, abs=1e-12)
    lemma = read_rows(tmp_path / "out_lemma1.csv")
    assert max(float(r["violation"]) for r in lemma) < 1e-12
    classes = read_rows(tmp_path / "out_classes.csv")
    assert math.fsum(float(r["p"]) for r in classes) == pytest.approx(1.0, abs=1e-12)
    dist = read_rows(tmp_path / "out_distance.csv")
    for r in dist:
        assert float(r["p"]) == pytest.approx(sum(by_len[int(r["x"])]), abs=1e-14)


def test_case_b_localizes_more(tmp_path):
    p0 = {}
    for case in "AB":
        code, out = run(tmp_path, "localization", "--case", case, "--steps", "400", name=f"{case}.csv")
        assert code == 0
        rows = read_rows(out)
        p0[case] = float(next(r["simulated"] for r in rows if r["t"] == "400" and r["x"] == "0"))
        for r in rows:
            assert float(r["abs_error"]) == pytest.approx(abs(float(r["simulated"]) - float(r["theorem"])), abs=1e-16)
    assert p0["B"] > p0["A"]
    assert p0["B"] == pytest.approx(theorem1_pmf(WalkParams(3, "B"), Parity.EVEN, 0), abs=1e-3)


def test_unwritable_path(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    code = cli.main(["density", "--out", str(blocker / "sub" / "d.csv")])
    assert code == 2


def test_genfun_check(tmp_path):
    code, out = run(tmp_path, "genfun-check", "--steps", "20", "--case", "B")
    assert code == 0
    rows = read_rows(out)
    assert len(rows) == 20
    assert max(float(r["max_abs_diff"]) for r in rows) < 1e-8


def test_deterministic(tmp_path):
    outs = []
    for i in range(2):
        code, out = run(tmp_path, "weak-limit", "--steps", "300", "--seed", str(i), name=f"w{i}.csv")
        assert code == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


def test_config_file_and_flag_priority(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# demo\nkappa = 5\ncase = B\nsteps = 3\n")
    code, out = run(tmp_path, "simulate-line", "--config", str(cfg), "--format", "json", name="c.json")
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["params"]["kappa"] == 5 and doc["params"]["case"] == "B"
    assert doc["params"]["gamma"] == pytest.approx(math.pi)
    assert doc["series"][-1]["t"] == 3
    code, out = run(tmp_path, "simulate-line", "--config", str(cfg), "--kappa", "4", "--format", "json", name="d.json")
    assert json.loads(out.read_text())["params"]["kappa"] == 4


def test_bad_config(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("not a pair\n")
    assert cli.main(["density", "--config", str(cfg), "--out", str(tmp_path / "d.csv")]) == 2
    assert cli.main(["density", "--config", str(tmp_path / "missing.cfg"), "--out", str(tmp_path / "d.csv")]) == 2


@pytest.mark.parametrize("argv", [["density", "--kappa", "2"], ["simulate-line", "--steps", "-1"], ["density", "--grid", "3"]])
def test_bad_arguments(argv):
    with pytest.raises(SystemExit) as exc:
        cli.main(argv)
    assert exc.value.code == 2


def test_density_and_continuous(tmp_path):
    code, out = run(tmp_path, "density", "--which", "rho", "--grid", "40")
    assert code == 0
    rows = read_rows(out)
    assert len(rows) == 40 and float(rows[0]["x"]) == 0.0
    code, out = run(tmp_path, "continuous", "--times", "10,50", name="ct.csv")
    assert code == 0
    ks = read_rows(tmp_path / "ct_ks.csv")
    assert [float(r["t"]) for r in ks] == [10.0, 50.0]
    assert all(abs(float(r["total"]) - 1) < 1e-10 for r in ks)


def test_console_entry_point(tmp_path):
    out = tmp_path / "m.csv"
    res = subprocess.run(
        [sys.executable, "-m", "cayleywalk", "density", "--which", "konno", "--out", str(out)],
        capture_output=True, text=True,
    )
    assert res.returncode == 0, res.stderr
    assert len(read_rows(out)) == 20
