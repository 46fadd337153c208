import json

import pytest

from hyperlab.cli import emit_svg_polyline, main, parse_config
from hyperlab.measures import MeasureError


def run(argv, capsys):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestParseConfig:
    def test_flags_parsed(self):
        cmd, cfg, _ = parse_config(["invariant-density", "--gamma", "1.0",
                                    "--bins", "4096"])
        assert cmd == "invariant-density"
        assert cfg["gamma"] == 1.0
        assert cfg["bins"] == 4096

    def test_negative_gamma_usage_error(self, capsys):
        code, _, err = run(["coverage", "--gamma", "-1"], capsys)
        assert code == 2
        record = json.loads(err)
        assert record["key"] == "gamma"
        assert record["schemaVersion"] == 1

    def test_flag_overrides_file(self, tmp_path):
        cfgfile = tmp_path / "exp.cfg"
        cfgfile.write_text("gamma=1.0\nbins=64\n")
        _, cfg, _ = parse_config(["invariant-density", "--config",
                                  str(cfgfile), "--gamma", "1.5"])
        assert cfg["gamma"] == 1.5
        assert cfg["bins"] == 64

    def test_unknown_config_key_rejected(self, tmp_path, capsys):
        cfgfile = tmp_path / "exp.cfg"
        cfgfile.write_text("nonsense=3\n")
        code, _, err = run(["coverage", "--config", str(cfgfile)], capsys)
        assert code == 2
        assert json.loads(err)["key"] == "nonsense"

    def test_unknown_flag_rejected(self, capsys):
        code, _, _ = run(["coverage", "--bogus", "1"], capsys)
        assert code == 2


class TestRunExperiment:
    def test_annihilator_check_json(self, capsys):
        code, out, _ = run(["annihilator-check", "--gamma", "1",
                            "--gridn", "2000"], capsys)
        assert code == 0
        record = json.loads(out)
        assert record["schemaVersion"] == 1
        assert record["periodizedResidualSum1"] <= 1e-8
        assert record["periodizedResidualSum2"] <= 1e-8

    def test_csv_embeds_resolved_config(self, capsys):
        code, out, _ = run(["coverage", "--gamma", "0.5", "--iterates", "3",
                            "--gridn", "100"], capsys)
        assert code == 0
        head = [ln for ln in out.splitlines() if ln.startswith("#")]
        assert "# command = coverage" in head
        assert "# gamma = 0.5" in head
        assert "# gridn = 100" in head

    def test_determinism(self, tmp_path):
        args = ["sici-spiral", "--n", "40"]
        out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(args + ["--out", str(out1)]) == 0
        assert main(args + ["--out", str(out2)]) == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_runtime_error_record(self, capsys):
        # xi2 shift is rejected by the distorted-cross model
        code, _, err = run(["distorted-cross", "--xi1", "1.0",
                            "--xi2", "0.5"], capsys)
        assert code == 1
        record = json.loads(err)
        assert record["command"] == "distorted-cross"
        assert record["message"]


class TestSvgPolyline:
    def test_two_points(self, tmp_path):
        path = tmp_path / "p.svg"
        emit_svg_polyline([(0.0, 0.0), (1.0, 1.0)], "segment", str(path))
        text = path.read_text()
        assert text.startswith("<?xml")
        assert 'version="1.1"' in text
        assert "<path" in text

    def test_byte_stable(self, tmp_path):
        pts = [(0.0, 0.0), (0.5, 0.25), (1.0, 1.0)]
        p1, p2 = tmp_path / "a.svg", tmp_path / "b.svg"
        emit_svg_polyline(pts, "t", str(p1))
        emit_svg_polyline(pts, "t", str(p2))
        assert p1.read_bytes() == p2.read_bytes()

    def test_empty_input_no_file(self, tmp_path):
        path = tmp_path / "nope.svg"
        with pytest.raises(MeasureError):
            emit_svg_polyline([], "empty", str(path))
        assert not path.exists()

    def test_single_point_rejected(self, tmp_path):
        with pytest.raises(MeasureError):
            emit_svg_polyline([(1.0, 2.0)], "one", str(tmp_path / "x.svg"))

    def test_nonfinite_rejected(self, tmp_path):
        with pytest.raises(MeasureError):
            emit_svg_polyline([(0.0, 0.0), (float("nan"), 1.0)], "bad",
                              str(tmp_path / "x.svg"))
