import csv
import json
import subprocess
import sys

import numpy as np
import pytest

from leakcap import INF, LeakagePair, bwc_frontier, frontier_distance
from leakcap.channel import random_channel, save_channel
from leakcap.cli import main
from leakcap.frontier import FrontierCurve

SUBCOMMANDS = ("region", "blackwell", "fme", "verify")


def run(*argv):
    return subprocess.run([sys.executable, "-m", "leakcap.cli", *argv], capture_output=True, text=True)


@pytest.mark.parametrize("cmd", SUBCOMMANDS)
def test_help(cmd):
    r = run(cmd, "--help")
    assert r.returncode == 0 and "--out" in r.stdout


def test_usage_errors_exit_2(tmp_path):
    assert run("region", "--channel", "blackwell", "--id", "det", "--bogus").returncode == 2
    assert run("nope").returncode == 2
    r = run("region", "--channel", str(tmp_path / "missing.json"), "--id", "det", "--out", str(tmp_path))
    assert r.returncode == 2 and "error" in r.stderr
    r = run("region", "--channel", "blackwell", "--id", "pd", "--out", str(tmp_path))
    assert r.returncode == 2
    r = run("region", "--channel", "blackwell", "--id", "det", "--l1", "-1", "--out", str(tmp_path))
    assert r.returncode == 2


def _header(path):
    lines = path.read_text().splitlines()
    return [ln for ln in lines if ln.startswith("#")]


def test_region_det_on_blackwell(tmp_path):
    out = tmp_path / "r"
    rc = main(["region", "--channel", "blackwell", "--id", "det", "--l1", "inf", "--l2", "inf",
               "--grid", "20", "--samples", "50", "--refine", "5", "--seed", "4", "--out", str(out), "--svg"])
    assert rc == 0
    csv_path = out / "region_det_l1_inf_l2_inf.csv"
    head = _header(csv_path)
    assert head[0].startswith("# invocation: leakcap region") and head[1] == "# seed: 4"
    curve = FrontierCurve.from_csv(csv_path.read_text())
    closed = bwc_frontier(LeakagePair(INF, INF), resolution=2e-3)
    assert curve.distance_to(closed).max() <= 3e-3
    assert frontier_distance(curve, closed) <= 0.05
    prov = json.loads((out / "region_det_l1_inf_l2_inf_provenance.json").read_text())
    assert prov["header"]["seed"] == 4
    assert set(prov["sources"]) == set(curve.provenance)
    polys = json.loads((out / "region_det_l1_inf_l2_inf_polytopes.json").read_text())
    assert set(polys["polytopes"]) == set(prov["sources"])
    assert (out / "region_det_l1_inf_l2_inf.svg").read_text().startswith("<svg")


def test_region_rerun_is_byte_identical(tmp_path):
    argv = ["region", "--channel", "blackwell", "--id", "sd0", "--l1", "0.1", "--l2", "0",
            "--grid", "2", "--samples", "20", "--refine", "2", "--out", str(tmp_path)]
    assert main(argv) == 0
    first = {p.name: p.read_bytes() for p in tmp_path.iterdir()}
    assert main(argv) == 0
    assert {p.name: p.read_bytes() for p in tmp_path.iterdir()} == first


def test_region_reads_a_channel_file(tmp_path):
    ch = tmp_path / "c.json"
    save_channel(random_channel(np.random.default_rng(5), 3, 2, 2), ch)
    assert main(["region", "--channel", str(ch), "--id", "inner", "--l1", "0.2", "--l2", "0.2", "--grid", "1",
                 "--samples", "10", "--refine", "0", "--out", str(tmp_path)]) == 0
    assert (tmp_path / "region_inner_l1_0.2_l2_0.2.csv").exists()


def test_fme_builtin(tmp_path, capsys):
    assert main(["fme", "--builtin", "achievability", "--out", str(tmp_path)]) == 0
    assert "canonical_equal: true" in capsys.readouterr().out
    verdict = json.loads((tmp_path / "verdict.json").read_text())
    assert verdict["canonical_equal"] is True and verdict["header"]["seed"] == 0
    assert _header(tmp_path / "derived.txt")


def test_fme_reference_mismatch_exits_1(tmp_path):
    ref = tmp_path / "ref.txt"
    ref.write_text("R1 <= I(U1;Y1)\n")
    assert main(["fme", "--builtin", "achievability", "--reference", str(ref), "--out", str(tmp_path)]) == 1
    verdict = json.loads((tmp_path / "verdict.json").read_text())
    assert verdict["canonical_equal"] is False and verdict["only_in_reference"]


def test_fme_toy_system(tmp_path):
    sys_file = tmp_path / "toy.txt"
    sys_file.write_text("variables: x, r\nx <= I(A;B)\n0 <= x\nr - x <= I(C;D)\n")
    ref = tmp_path / "ref.txt"
    ref.write_text("r <= I(A;B) + I(C;D)\n0 <= I(A;B)\n")
    assert main(["fme", "--system", str(sys_file), "--eliminate", "x", "--reference", str(ref),
                 "--prune", "syntactic", "--out", str(tmp_path)]) == 0
    derived = (tmp_path / "derived.txt").read_text()
    assert "x" not in "".join(ln for ln in derived.splitlines() if not ln.startswith("#"))
    assert main(["fme", "--system", str(sys_file), "--eliminate", "y", "--out", str(tmp_path)]) == 2
    bad = tmp_path / "bad.txt"
    bad.write_text("x <= I(A;\n")
    assert main(["fme", "--system", str(bad), "--out", str(tmp_path)]) == 2


def test_verify_is_reproducible(tmp_path):
    argv = ["verify", "--trials", "10", "--seed", "7", "--out", str(tmp_path)]
    r1 = run(*argv)
    assert r1.returncode == 0, r1.stdout + r1.stderr
    first = (tmp_path / "verify_report.json").read_bytes()
    r2 = run(*argv)
    assert r2.returncode == 0 and r2.stdout == r1.stdout
    assert (tmp_path / "verify_report.json").read_bytes() == first
    assert all(ln.startswith("PASS") for ln in r1.stdout.splitlines())


def test_verify_fails_on_a_noisy_channel(tmp_path):
    ch = tmp_path / "noisy.json"
    save_channel(random_channel(np.random.default_rng(6), 3, 2, 2), ch)
    r = run("verify", "--trials", "3", "--channel", str(ch), "--out", str(tmp_path))
    assert r.returncode == 1
    assert "FAIL" in r.stdout and "failed checks" in r.stderr


def test_blackwell_study(tmp_path):
    assert main(["blackwell", "--grid", "100", "--lstep", "0.05", "--out", str(tmp_path), "--svg"]) == 0
    names = {p.name for p in tmp_path.iterdir()}
    for fam in ("l2inf", "l1inf", "equal"):
        assert {f"frontier_{fam}_{v:g}.csv" for v in (0.0, 0.05, 0.1, 0.4)} <= names
        assert f"frontiers_{fam}.svg" in names
    assert {"frontier_unconstrained.csv", "sumrate.csv", "shapes.json", "thresholds.csv"} <= names
    rows = list(csv.reader(ln for ln in (tmp_path / "thresholds.csv").read_text().splitlines()
                           if not ln.startswith("#")))
    assert rows[0] == ["L_bits", "threshold_bits", "alpha", "beta", "reference_bits"]
    assert [r[0] for r in rows[1:]] == ["0", "0.05", "0.1", "0.4"]
    assert json.loads((tmp_path / "shapes.json").read_text())["header"]["invocation"].startswith("leakcap blackwell")
