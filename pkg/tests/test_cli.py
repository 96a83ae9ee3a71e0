import json
import xml.etree.ElementTree as ET

import pytest

from sepspace.cli import fit_exponent, main, strip_timing
from sepspace.generators import GenSpec, gen_penny
from sepspace.io import save
from sepspace.penny import build_subdivision

SVG = "{http://www.w3.org/2000/svg}"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def pair_file(tmp_path):
    path = tmp_path / "pair.txt"
    path.write_text("penny v1\ndisk 0 0 0\ndisk 1 2 0\narc 0 1\n")
    return path


@pytest.fixture
def p5_file(tmp_path):
    path = tmp_path / "p5.txt"
    path.write_text("chordal v1\n" + "".join(f"biarc {i} {i + 1}\n" for i in range(4)))
    return path


class TestReach:
    def test_reachable_pair(self, capsys, pair_file):
        code, out, _ = run(capsys, "reach", pair_file, "--from", 0, "--to", 1)
        assert code == 0 and out.strip() == "reachable"

    def test_unreachable_pair(self, capsys, pair_file):
        code, out, _ = run(capsys, "reach", pair_file, "--from", 1, "--to", 0, "--check")
        assert code == 1 and out.strip() == "unreachable"

    def test_report_written(self, capsys, p5_file, tmp_path):
        rep = tmp_path / "r.json"
        code, _, _ = run(capsys, "reach", p5_file, "--from", 4, "--to", 0, "--report", rep)
        data = json.loads(rep.read_text())
        assert code == 0 and data["answer"] is True and data["schema_version"] == 1

    def test_unknown_disk(self, capsys, pair_file):
        code, out, err = run(capsys, "reach", pair_file, "--from", 0, "--to", 500)
        assert code == 2 and out == ""
        assert err.count("\n") == 1 and "500" in err


class TestErrors:
    def test_malformed_file(self, capsys, tmp_path):
        bad = tmp_path / "bad.txt"
        bad.write_text("penny v1\ndisk 0 zero 0\n")
        code, _, err = run(capsys, "sep", bad)
        assert code == 2 and "line 2" in err and err.count("\n") == 1

    def test_not_chordal(self, capsys, tmp_path):
        c4 = tmp_path / "c4.txt"
        c4.write_text("chordal v1\nbiarc 0 1\nbiarc 1 2\nbiarc 2 3\nbiarc 3 0\n")
        code, _, err = run(capsys, "sep", c4)
        assert code == 2 and "chordal" in err

    def test_missing_file(self, capsys, tmp_path):
        code, _, err = run(capsys, "sep", tmp_path / "nope.txt")
        assert code == 2 and err.startswith("sepspace sep:")

    def test_overlay_wrong_family(self, capsys, p5_file):
        code, _, _ = run(capsys, "viz", p5_file, "--overlay", "subdiv")
        assert code == 2


class TestSep:
    def test_p5(self, capsys, p5_file):
        code, out, _ = run(capsys, "sep", p5_file)
        rep = json.loads(out)
        assert code == 0 and rep["separator_size"] == 1 and rep["separator"] == [2]
        assert rep["is_clique"] and rep["max_component_weight"] == "2/5"

    def test_penny(self, capsys, tmp_path):
        path = tmp_path / "p.txt"
        save(gen_penny(GenSpec("penny", 150, seed=3)), path)
        code, out, _ = run(capsys, "sep", path, "--beta", 0.5)
        rep = json.loads(out)
        assert code == 0 and rep["pipeline"].startswith("penny")
        assert rep["max_component"] <= 8 * rep["budget"]

    def test_jordan(self, capsys, tmp_path):
        path = tmp_path / "j.txt"
        assert run(capsys, "gen", "jordan", "--n", 30, "--seed", 2, "-o", path)[0] == 0
        code, out, _ = run(capsys, "sep", path)
        assert code == 0 and "side_weights" in json.loads(out)


class TestGenViz:
    def test_gen_stdout_deterministic(self, capsys):
        a = run(capsys, "gen", "chordal", "--n", 25, "--seed", 4, "--k", 3)[1]
        b = run(capsys, "gen", "chordal", "--n", 25, "--seed", 4, "--k", 3)[1]
        assert a == b and a.startswith("chordal v1")

    def test_subdivision_lines(self, capsys, tmp_path):
        ds = gen_penny(GenSpec("penny", 100, seed=1, params={"style": "random"}))
        path = tmp_path / "p.txt"
        save(ds, path)
        code, out, _ = run(capsys, "viz", path, "--overlay", "subdiv")
        root = ET.fromstring(out)
        assert code == 0 and root.tag == SVG + "svg"
        assert len(root.findall(f".//{SVG}line")) == len(build_subdivision(ds, 0.5).lines)
        assert len(root.findall(f".//{SVG}circle")) == 100

    @pytest.mark.parametrize("overlay", [None, "sep", "aux"])
    def test_well_formed(self, capsys, tmp_path, overlay):
        path = tmp_path / "p.txt"
        save(gen_penny(GenSpec("penny", 60, seed=2)), path)
        argv = ["viz", path] + (["--overlay", overlay] if overlay else [])
        code, out, _ = run(capsys, *argv)
        assert code == 0 and ET.fromstring(out).tag == SVG + "svg"

    def test_chordal_and_jordan_viz(self, capsys, p5_file, tmp_path):
        assert ET.fromstring(run(capsys, "viz", p5_file, "--overlay", "sep")[1]) is not None
        path = tmp_path / "j.txt"
        run(capsys, "gen", "jordan", "--n", 12, "--seed", 1, "-o", path)
        assert ET.fromstring(run(capsys, "viz", path, "--overlay", "sep")[1]) is not None


class TestBench:
    def test_schema_and_determinism(self, capsys):
        argv = ["bench", "--family", "chordal", "--sizes", "40,80,160", "--trials", 2, "--seed", 5, "--k", 2]
        code, out, _ = run(capsys, *argv)
        rep = json.loads(out)
        assert code == 0
        assert {"exponents", "runs", "parameters"} <= set(rep)
        assert rep["exponents"]["x"] == "m" and len(rep["runs"]) == 6
        assert all(r["schema_version"] == 1 for r in rep["runs"])
        again = json.loads(run(capsys, *argv)[1])
        assert strip_timing(again) == strip_timing(rep)

    def test_penny_axis(self, capsys):
        code, out, _ = run(capsys, "bench", "--family", "penny", "--sizes", "50,100", "--trials", 1)
        assert code == 0 and json.loads(out)["exponents"]["x"] == "n"

    def test_parallel_matches_serial(self, capsys):
        argv = ["bench", "--family", "jordan", "--sizes", "20,30", "--trials", 2, "--seed", 1]
        one = strip_timing(json.loads(run(capsys, *argv)[1]))
        two = strip_timing(json.loads(run(capsys, *argv, "--jobs", 2)[1]))
        assert one == two


class TestFit:
    def test_exact_power(self):
        xs = [10, 100, 1000]
        assert fit_exponent(xs, [x ** 0.5 for x in xs]) == pytest.approx(0.5)

    def test_degenerate(self):
        assert fit_exponent([10, 10], [1, 2]) is None
