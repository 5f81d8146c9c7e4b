"""Command-line interface and on-disk formats."""

import numpy as np
import pytest

from flexscat import FarFieldMatrix, fileio, make_grid
from flexscat.cli import main
from flexscat.indicators import IndicatorField

KAPPA = 2.0 * np.pi

CONFIG = """\
[physics]
kappa = 6.283185307179586

[discretization]
n_directions = 64
half_nodes = 48

[scene.1]
kind = "circle"
radius = 0.4

[reconstruct]
method = "W1"
grid = [-2.0, 2.0, -2.0, 2.0]
resolution = [9, 9]
"""


@pytest.fixture
def config_path(tmp_path):
    p = tmp_path / "exp.toml"
    p.write_text(CONFIG)
    return p


class TestFarfieldFormat:
    def test_round_trip_bits(self, tmp_path):
        rng = np.random.default_rng(0)
        m = rng.standard_normal((16, 16)) + 1j * rng.standard_normal((16, 16))
        f = FarFieldMatrix(entries=m, kappa=KAPPA)
        path = tmp_path / "f.txt"
        fileio.write_farfield(path, f)
        g = fileio.read_farfield(path)
        assert np.array_equal(f.entries, g.entries)
        assert g.kappa == f.kappa

    def test_header(self, tmp_path, config_path):
        assert main(["simulate", "--config", str(config_path),
                     "--output-dir", str(tmp_path / "o")]) == 0
        first = (tmp_path / "o" / "farfield.txt").read_text().splitlines()[0]
        assert first == "BIHFAR1 64 6.283185307179586"

    def test_rejects_garbage(self, tmp_path):
        p = tmp_path / "bad.txt"
        p.write_text("NOTAFARFIELD 3 1.0\n")
        with pytest.raises(ValueError, match="BIHFAR1"):
            fileio.read_farfield(p)


class TestFieldAndHeatmapFormats:
    def _field(self, values, method="W1"):
        grid = make_grid((0, 1, 0, 1), 3, 3)
        return IndicatorField(grid=grid, values=np.asarray(values, float),
                              method=method)

    def test_field_rows(self, tmp_path):
        field = self._field(np.linspace(1, 9, 9))
        path = tmp_path / "f.csv"
        fileio.write_field(path, field)
        lines = path.read_text().splitlines()
        assert lines[0] == "x,y,value"
        assert len(lines) == 10
        assert lines[1] == "0.0,0.0,1.0"

    def test_count_fields_serialize_as_integers(self, tmp_path):
        field = self._field(np.arange(9.0), method="W3")
        fileio.write_field(tmp_path / "f.csv", field)
        rows = (tmp_path / "f.csv").read_text().splitlines()[1:]
        assert all(r.rsplit(",", 1)[1].isdigit() for r in rows)

    def test_heatmap_layout_and_monotonicity(self, tmp_path):
        field = self._field(np.linspace(0, 8, 9))
        path = tmp_path / "h.pgm"
        fileio.write_heatmap(path, field)
        lines = path.read_text().splitlines()
        assert lines[:3] == ["P2", "3 3", "65535"]
        rows = [list(map(int, r.split())) for r in lines[3:]]
        assert rows[0] == [49151, 57343, 65535]   # top row is ymax
        assert rows[2] == [0, 8192, 16384]
        flat = [v for r in rows for v in r]
        order = np.argsort(field.values.reshape(3, 3)[::-1].ravel())
        assert np.all(np.diff(np.asarray(flat)[order]) >= 0)

    def test_constant_field_maps_to_zero(self, tmp_path):
        field = self._field(np.full(9, 3.7))
        path = tmp_path / "h.pgm"
        fileio.write_heatmap(path, field)
        body = path.read_text().splitlines()[3:]
        assert all(set(r.split()) == {"0"} for r in body)


class TestSimulateCommand:
    def test_delta_zero_and_omitted_agree(self, tmp_path, config_path):
        noisy_cfg = tmp_path / "n.toml"
        noisy_cfg.write_text(CONFIG + "\n[noise]\nlevel = 0.0\nseed = 3\n")
        main(["simulate", "--config", str(config_path),
              "--output-dir", str(tmp_path / "a")])
        main(["simulate", "--config", str(noisy_cfg),
              "--output-dir", str(tmp_path / "b")])
        assert ((tmp_path / "a" / "farfield.txt").read_bytes()
                == (tmp_path / "b" / "farfield.txt").read_bytes())
        assert not (tmp_path / "b" / "farfield_noisy.txt").exists()


class TestReconstructCommand:
    def test_outputs_and_determinism(self, tmp_path, config_path):
        for name in ("r1", "r2"):
            assert main(["reconstruct", "--config", str(config_path),
                         "--output-dir", str(tmp_path / name)]) == 0
        for fn in ("field.csv", "spectrum.csv", "farfield.txt"):
            assert ((tmp_path / "r1" / fn).read_bytes()
                    == (tmp_path / "r2" / fn).read_bytes())
        lines = (tmp_path / "r1" / "field.csv").read_text().splitlines()
        assert len(lines) == 9 * 9 + 1
        assert (tmp_path / "r1" / "heatmap.pgm").exists()
        assert (tmp_path / "r1" / "field.png").exists()
        assert (tmp_path / "r1" / "manifest.json").exists()

    def test_reconstruct_from_farfield_file(self, tmp_path, config_path):
        main(["simulate", "--config", str(config_path),
              "--output-dir", str(tmp_path / "sim")])
        assert main(["reconstruct", "--config", str(config_path),
                     "--farfield", str(tmp_path / "sim" / "farfield.txt"),
                     "--output-dir", str(tmp_path / "rec")]) == 0
        assert (tmp_path / "rec" / "field.csv").exists()

    def test_mismatched_farfield_fails(self, tmp_path, config_path):
        bad = FarFieldMatrix(entries=np.eye(16, dtype=complex), kappa=KAPPA)
        fileio.write_farfield(tmp_path / "bad.txt", bad)
        with pytest.raises(SystemExit, match="does not match"):
            main(["reconstruct", "--config", str(config_path),
                  "--farfield", str(tmp_path / "bad.txt"),
                  "--output-dir", str(tmp_path / "rec")])

    def test_method_override(self, tmp_path, config_path):
        assert main(["reconstruct", "--config", str(config_path),
                     "--method", "W3", "--threads", "2",
                     "--output-dir", str(tmp_path / "w3")]) == 0
        rows = (tmp_path / "w3" / "field.csv").read_text().splitlines()[1:]
        assert all(r.rsplit(",", 1)[1].isdigit() for r in rows)

    def test_manifest_contents(self, tmp_path, config_path):
        import json
        main(["reconstruct", "--config", str(config_path),
              "--output-dir", str(tmp_path / "m")])
        manifest = json.loads((tmp_path / "m" / "manifest.json").read_text())
        assert manifest["method"] == "W1"
        assert manifest["residuals"]["unitarity"] < 1e-5
        assert manifest["residuals"]["far_identity"] < 1e-5
        assert manifest["convention"] == "negative"


class TestValidateCommand:
    def test_quick_passes(self, capsys):
        assert main(["validate", "--level", "quick"]) == 0
        out = capsys.readouterr().out
        assert "PASS" in out and "FAIL" not in out
        assert "residual" in out and "tol" in out


class TestShapesCommand:
    def test_lists_all_kinds(self, capsys):
        assert main(["shapes"]) == 0
        out = capsys.readouterr().out
        for kind in ("circle", "ellipse", "rounded_square",
                     "rounded_triangle", "kite"):
            assert kind in out
