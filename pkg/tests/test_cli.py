import json

import numpy as np
import pytest

from denseforest import __version__, cli
from denseforest.generators import read_points_csv, spec_to_json, ThreeGrid


def run(*argv):
    return cli.run(list(argv))


def test_help_exits_zero(capsys):
    assert run("--help") == 0
    assert "generate" in capsys.readouterr().out


def test_missing_subcommand_is_argument_error(capsys):
    assert run() == 2


def test_unknown_subcommand_is_argument_error(capsys):
    assert run("frobnicate", "--out", "x.json") == 2


def test_generate_writes_csv_and_sidecar(tmp_path):
    out = tmp_path / "pts.csv"
    assert run("generate", "--spec", "z2", "--radius", "3.5",
               "--out", str(out)) == 0
    pts = read_points_csv(out)
    assert pts.shape == (49, 2)
    meta = json.loads((tmp_path / "pts.csv.meta.json").read_text())
    assert meta["tool"] == "denseforest"
    assert meta["version"] == __version__
    assert meta["command"] == "generate"
    assert meta["config"]["radius"] == 3.5
    assert meta["config"]["spec"] == "z2"


def test_generate_rerun_is_byte_identical(tmp_path):
    out = tmp_path / "pts.csv"
    args = ("generate", "--spec", "peres", "--radius", "4.0", "--out", str(out))
    assert run(*args) == 0
    first = out.read_bytes()
    first_meta = (tmp_path / "pts.csv.meta.json").read_bytes()
    assert run(*args) == 0
    assert out.read_bytes() == first
    assert (tmp_path / "pts.csv.meta.json").read_bytes() == first_meta


def test_generate_accepts_spec_file(tmp_path):
    spec_path = tmp_path / "spec.json"
    spec_path.write_text(json.dumps(spec_to_json(ThreeGrid())))
    out = tmp_path / "tg.csv"
    assert run("generate", "--spec", str(spec_path), "--radius", "3.0",
               "--out", str(out)) == 0
    assert read_points_csv(out).shape[0] > 20


def test_generate_bad_spec_is_argument_error(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run("generate", "--spec", str(bad), "--radius", "2.0",
               "--out", str(tmp_path / "x.csv")) == 2
    assert run("generate", "--spec", "no-such-preset", "--radius", "2.0",
               "--out", str(tmp_path / "x.csv")) == 2


def test_generate_huge_radius_is_resource_error(tmp_path, capsys):
    assert run("generate", "--spec", "z2", "--radius", "100000",
               "--out", str(tmp_path / "x.csv")) == 3
    assert "resource" in capsys.readouterr().err.lower()


def test_dispersion_and_discrepancy_pipeline(tmp_path):
    pts = tmp_path / "pts.csv"
    pts.write_text("x1\n0.25\n0.75\n")
    disp_out = tmp_path / "disp.json"
    assert run("dispersion", "--points", str(pts), "--out", str(disp_out)) == 0
    doc = json.loads(disp_out.read_text())
    assert doc["N"] == 2 and doc["exact"] is True
    assert doc["value"] == pytest.approx(0.25)
    disc_out = tmp_path / "disc.json"
    assert run("discrepancy", "--points", str(pts), "--out", str(disc_out)) == 0
    assert json.loads(disc_out.read_text())["value"] == pytest.approx(0.5)


def test_dispersion_rejects_points_outside_unit_cube(tmp_path, capsys):
    pts = tmp_path / "pts.csv"
    pts.write_text("x1\n0.25\n1.75\n")
    assert run("dispersion", "--points", str(pts),
               "--out", str(tmp_path / "d.json")) == 2


def test_sud_writes_rows(tmp_path):
    out = tmp_path / "sud.csv"
    assert run("sud", "--seq", "golden", "--n", "8,16", "--m-max", "4",
               "--xi-count", "8", "--seed", "1", "--out", str(out)) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "N,value"
    ns = [int(row.split(",")[0]) for row in lines[1:]]
    assert ns == [8, 16]


def test_sud_concat_linear_requires_thetas(tmp_path):
    out = tmp_path / "sud.csv"
    assert run("sud", "--seq", "concat-linear", "--n", "8",
               "--out", str(out)) == 2
    assert run("sud", "--seq", "concat-linear", "--thetas", "[[0.5],[0.25]]",
               "--n", "8", "--m-max", "2", "--xi-count", "4",
               "--out", str(out)) == 0


def test_visibility_rows(tmp_path):
    out = tmp_path / "vis.csv"
    assert run("visibility", "--spec", "z2", "--eps", "0.6,0.51",
               "--l-max", "8", "--count", "64", "--radius", "5",
               "--seed", "3", "--out", str(out)) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "epsilon,estimate"
    assert len(lines) == 3


def test_tube_json(tmp_path):
    out = tmp_path / "tube.json"
    assert run("tube", "--spec", "z2", "--eps", "0.3", "--radius", "5",
               "--offsets", "16", "--out", str(out)) == 0
    doc = json.loads(out.read_text())
    assert doc["length"] == pytest.approx(10.0, abs=1e-6)
    assert len(doc["base"]) == 2 and len(doc["direction"]) == 2


def test_strip_json(tmp_path):
    out = tmp_path / "strip.json"
    assert run("strip", "--spec", "z2", "--radius", "10",
               "--out", str(out)) == 0
    doc = json.loads(out.read_text())
    assert doc["width"] == pytest.approx(1.0, abs=1e-9)
    assert doc["window_radius"] == pytest.approx(10.0)


def test_density_rows(tmp_path):
    out = tmp_path / "density.csv"
    assert run("density", "--spec", "z2", "--radii", "5,10",
               "--out", str(out)) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "T,quotient"
    t, q = lines[2].split(",")
    assert float(t) == 10.0 and float(q) == 317 / 100.0


def test_mingap_json(tmp_path):
    out = tmp_path / "gap.json"
    assert run("mingap", "--spec", "z2", "--radius", "4",
               "--out", str(out)) == 0
    assert json.loads(out.read_text())["min_gap"] == pytest.approx(1.0)


def test_net_and_verify_net_pipeline(tmp_path):
    net_out = tmp_path / "net.csv"
    assert run("net", "--method", "d2", "--eps", "0.02",
               "--out", str(net_out)) == 0
    report_out = tmp_path / "report.json"
    assert run("verify-net", "--net", str(net_out), "--eps", "0.02",
               "--method", "D2Aligned", "--sampler", "aligned",
               "--volume", "0.02", "--trials", "200", "--seed", "2",
               "--out", str(report_out)) == 0
    doc = json.loads(report_out.read_text())
    assert doc["hit_fraction"] == 1.0
    assert doc["boxes_tested"] == 200
    assert doc["slab_lower_bound"]["volume"] > 0.0


def test_udt_json(tmp_path):
    out = tmp_path / "udt.json"
    assert run("udt", "--thetas", "[0.0, 1.618033988749895]", "--xi", "0.0",
               "--t", "10", "--out", str(out)) == 0
    doc = json.loads(out.read_text())
    assert doc["best_index"] == 2
    assert doc["margin"] == pytest.approx(0.0557, abs=5e-4)


def test_heavy_box_json(tmp_path):
    pts = tmp_path / "pts.csv"
    pts.write_text("x1,x2\n" + "\n".join(
        f"{x},{y}" for x, y in np.random.default_rng(0).uniform(0, 1, (50, 2))))
    out = tmp_path / "box.json"
    assert run("heavy-box", "--points", str(pts), "--eps", "0.1",
               "--out", str(out)) == 0
    doc = json.loads(out.read_text())
    assert doc["count"] >= 1
    assert doc["volume"] >= 0.1
    assert len(doc["intervals"]) == 2


def test_calibrate_json(tmp_path):
    out = tmp_path / "cal.json"
    assert run("calibrate", "--eps", "0.6", "--l-max", "16", "--count", "32",
               "--radius", "5", "--seed", "1", "--out", str(out)) == 0
    doc = json.loads(out.read_text())
    assert doc["hw_C"] == 16.0
    cal = doc["peres_visibility"]
    assert cal["epsilons"] == [0.6]
    assert len(cal["estimates"]) == 1
    assert cal["check_lengths"][0] == pytest.approx(2.0 * cal["estimates"][0])


def test_threads_flag_does_not_change_output(tmp_path):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    assert run("mingap", "--spec", "peres", "--radius", "6", "--threads", "1",
               "--out", str(a)) == 0
    assert run("mingap", "--spec", "peres", "--radius", "6", "--threads", "4",
               "--out", str(b)) == 0
    assert json.loads(a.read_text())["min_gap"] == \
        json.loads(b.read_text())["min_gap"]
