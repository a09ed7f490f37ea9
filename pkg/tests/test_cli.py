import json

import pytest

from skewbraid.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestAnalyze:
    def test_ex2(self, capsys):
        code, out, _ = run(capsys, "analyze", "--preset", "d3-ex2-adm", "--steps", "512")
        assert code == 0
        rep = json.loads(out)
        assert rep["schema"] == "skewbraid/1"
        assert rep["monodromy"]["cycle_type"] == [3]
        assert rep["braid"]["invariants"]["component_count"] == 1
        assert rep["braid"]["invariants"]["windings"] == [3]
        assert all(rep["agreement"].values())
        assert rep["reference_diagram"]["discrepancy"] is False

    def test_ex1_flags_diagram(self, capsys):
        _, out, _ = run(capsys, "analyze", "--preset", "d3-ex1-adm", "--steps", "512")
        rep = json.loads(out)
        assert rep["braid"]["invariants"]["exponent_sum"] == 6
        assert rep["reference_diagram"]["exponent_sum"] == 0
        assert rep["reference_diagram"]["discrepancy"] is True

    def test_not_admissible(self, capsys):
        code, out, _ = run(capsys, "analyze", "--preset", "d2-s0")
        assert code == 0
        rep = json.loads(out)
        assert rep["admissibility"]["admissible"] is False
        assert rep["monodromy"] is None

    def test_deterministic(self, capsys, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        run(capsys, "analyze", "--preset", "d2-s1-adm", "--steps", "256", "--out", str(a))
        run(capsys, "analyze", "--preset", "d2-s1-adm", "--steps", "256", "--out", str(b))
        assert a.read_bytes() == b.read_bytes()
        assert json.loads(a.read_text())["config"]["steps"] == 256

    def test_params_file(self, capsys, tmp_path):
        p = tmp_path / "p.json"
        p.write_text(json.dumps({"d": 2, "a": [[[0, 0], [8, 0], [0, 0]]]}))
        code, out, _ = run(capsys, "analyze", "--params", str(p), "--steps", "256")
        assert code == 0
        assert json.loads(out)["braid"]["word"] == "s1"

    def test_figure(self, capsys, tmp_path):
        fig = tmp_path / "f.png"
        run(capsys, "analyze", "--preset", "d2-s2-adm", "--steps", "256", "--figure", str(fig))
        assert fig.read_bytes()[:4] == b"\x89PNG"


class TestBraid:
    def test_outputs(self, capsys, tmp_path):
        svg, csv, fig = tmp_path / "b.svg", tmp_path / "b.csv", tmp_path / "b.png"
        code, out, _ = run(capsys, "braid", "--preset", "d3-ex2-adm", "--steps", "256",
                           "--svg", str(svg), "--csv", str(csv), "--figure", str(fig))
        assert code == 0
        assert out.strip() == "s2 s1"
        assert svg.read_text().startswith("<svg")
        assert csv.read_text().splitlines()[0] == "strand_id,t,re_w,im_w"
        assert fig.stat().st_size > 0


class TestOtherCommands:
    def test_img_verify(self, capsys):
        code, out, _ = run(capsys, "img-verify", "--preset", "d3-ex3-adm", "--level", "2", "--turns", "1",
                           "--steps", "512")
        assert code == 0
        assert json.loads(out)["match"] is True

    @pytest.mark.parametrize("a, b, c, s, word", [("0", "1", "0", 1, "s1"), ("1", "0", "0", 2, "s1 s1"),
                                                  ("0", "0", "1", 0, "e")])
    def test_quad(self, capsys, a, b, c, s, word):
        code, out, _ = run(capsys, "quad", "--a", a, "--b", b, "--c", c)
        doc = json.loads(out)
        assert code == 0 and doc["s"] == s and doc["word"] == word

    def test_scan_e(self, capsys, tmp_path):
        p = tmp_path / "p.json"
        p.write_text(json.dumps({"d": 2, "a": [[[1, 0], [1, 0], [0, 0]]]}))
        csv, fig = tmp_path / "e.csv", tmp_path / "e.png"
        code, out, _ = run(capsys, "scan-e", "--params", str(p), "--csv", str(csv), "--figure", str(fig))
        doc = json.loads(out)
        assert code == 0 and doc["in_E"] is True
        assert len(csv.read_text().splitlines()) == 2
        assert fig.exists()

    def test_factory(self, capsys):
        code, out, _ = run(capsys, "factory", "--d", "5", "--fixed", "0", "--cycles", "2,3", "--radii", "2,3",
                           "--steps", "512")
        doc = json.loads(out)
        assert code == 0
        assert doc["pipeline"]["match"] is True
        assert doc["pipeline"]["tracked_cycle_type"] == [3, 2]

    def test_suspension(self, capsys):
        code, out, _ = run(capsys, "suspension", "--perm", "(1 2 3)", "--d", "3", "--code", "1")
        doc = json.loads(out)
        assert code == 0 and doc["winding"] == 3 and doc["h_code"] == "2:1"


class TestErrors:
    def test_unknown_preset(self, capsys):
        code, _, err = run(capsys, "analyze", "--preset", "nope")
        assert code == 1
        assert json.loads(err)["error"] == "UnknownPreset"

    def test_bad_usage(self, capsys):
        code, _, _ = run(capsys, "analyze", "--bogus")
        assert code == 1

    def test_not_admissible_braid(self, capsys):
        code, _, err = run(capsys, "braid", "--preset", "d2-s0")
        assert code == 1
        assert json.loads(err)["error"] == "NotAdmissible"

    def test_bad_spec(self, capsys):
        code, _, err = run(capsys, "factory", "--d", "3", "--cycles", "1,2")
        assert code == 1
        assert json.loads(err)["error"] == "SpecInvalid"

    def test_boundary_quad(self, capsys):
        code, _, err = run(capsys, "quad", "--a", "0", "--b", "1", "--c", "1")
        assert code == 1
        assert json.loads(err)["error"] == "BoundaryRoot"
