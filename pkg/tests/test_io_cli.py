import json
import math
import subprocess
import sys

import numpy as np
import pytest

from nhssh.cli import main
from nhssh.cookbook import FIGURES, invocations
from nhssh.io import dumps, manifest_path, read_csv, to_jsonable, write_csv, with_suffix

QUICK_COMMANDS = [
    ["band", "--t1", "1", "--t2", "2", "--d1", "0.1", "--d2", "1.2", "--nk", "101"],
    ["spectrum", "--model", "imaginary", "--t1", "1", "--t2", "2", "--u", "2",
     "--boundary", "obc", "--cells", "20"],
    ["spectrum", "--t1", "1", "--t2", "2", "--d1", "0.6", "--d2", "1.3", "--nk", "64"],
    ["skin", "--t1", "1", "--t2", "0.5", "--d1", "0.5", "--d2", "0.3", "--cells", "20"],
    ["berry", "--t1", "1", "--t2", "2", "--u", "0.5", "--nk", "1024"],
    ["invariants", "--t1", "1", "--t2", "2", "--d1", "0.6", "--d2", "1.3", "--nk", "1024"],
    ["invariants", "--model", "pt", "--t1", "1", "--t2", "2", "--u", "1.5", "--nk", "1024"],
    ["phase", "delta-plane", "--t1", "1", "--t2", "0.5", "--n", "50", "--seed", "2"],
    ["phase", "nu-line", "--t1", "1", "--t2", "2", "--d1", "0.5", "--n", "200", "--nk", "1024"],
    ["phase", "nu-prime", "--t1", "1", "--t2", "2"],
    ["phase", "reality", "--t1", "1", "--t2", "0.5", "--n", "200", "--nk", "256"],
]


def _data_files(stem):
    parent = stem.parent
    return sorted(p for p in parent.iterdir()
                  if p.name.startswith(stem.name) and not p.name.endswith(".manifest.json"))


class TestIo:
    def test_csv_round_trip(self, tmp_path):
        path = write_csv(tmp_path / "a.csv", ["x", "y"], [(0.1, 1), (math.pi, True)])
        assert path.read_text().splitlines()[1] == "0.10000000000000001,1"
        header, data = read_csv(path)
        assert header == ["x", "y"]
        np.testing.assert_array_equal(data, [[0.1, 1], [math.pi, 1]])

    def test_jsonable(self):
        out = to_jsonable({"z": 1 + 2j, "n": np.float64("nan"), "a": np.arange(2)})
        assert out == {"z": [1.0, 2.0], "n": None, "a": [0, 1]}
        assert dumps({"b": 1, "a": 2}).index('"a"') < dumps({"b": 1, "a": 2}).index('"b"')

    def test_paths(self, tmp_path):
        assert manifest_path(tmp_path / "run.v1").name == "run.v1.manifest.json"
        assert with_suffix(tmp_path / "run.v1", ".csv").name == "run.v1.csv"


class TestCommands:
    @pytest.mark.parametrize("argv", QUICK_COMMANDS, ids=lambda a: "-".join(a[:2]))
    def test_deterministic_outputs(self, argv, tmp_path):
        a, b = tmp_path / "a" / "run", tmp_path / "b" / "run"
        assert main([*argv, "--out", str(a)]) == 0
        assert main([*argv, "--out", str(b)]) == 0
        files_a, files_b = _data_files(a), _data_files(b)
        assert files_a and [p.name for p in files_a] == [p.name for p in files_b]
        for fa, fb in zip(files_a, files_b):
            assert fa.read_bytes() == fb.read_bytes(), fa.name
        manifest = json.loads(manifest_path(a).read_text())
        assert manifest["settings"]["argv"][: len(argv)] == argv
        assert manifest["tool_version"]
        assert sorted(manifest["output_paths"]) == [str(p) for p in files_a]

    def test_replay_is_byte_identical(self, tmp_path):
        stem = tmp_path / "run"
        assert main([*QUICK_COMMANDS[1], "--out", str(stem)]) == 0
        before = {p.name: p.read_bytes() for p in _data_files(stem)}
        for p in _data_files(stem):
            p.unlink()
        assert main(["replay", str(manifest_path(stem))]) == 0
        assert {p.name: p.read_bytes() for p in _data_files(stem)} == before

    def test_plot_emits_svg(self, tmp_path):
        stem = tmp_path / "band"
        assert main(["band", "--nk", "51", "--plot", "--out", str(stem)]) == 0
        svg = with_suffix(stem, ".svg").read_text()
        assert svg.startswith("<?xml") and "<svg" in svg

    def test_svg_deterministic(self, tmp_path):
        for name in ("a", "b"):
            assert main(["phase", "nu-prime", "--plot", "--out", str(tmp_path / name)]) == 0
        assert (tmp_path / "a.svg").read_bytes() == (tmp_path / "b.svg").read_bytes()

    def test_band_columns_and_hermitian_max(self, tmp_path):
        stem = tmp_path / "band"
        assert main(["band", "--nk", "101", "--out", str(stem)]) == 0
        header, data = read_csv(with_suffix(stem, ".csv"))
        assert header == ["k", "reE_plus", "imE_plus", "reE_minus", "imE_minus"]
        assert data[:, 1].max() == pytest.approx(3.0)
        assert data[np.argmax(data[:, 1]), 0] == pytest.approx(0.0, abs=1e-12)

    def test_band_gap_closes(self, tmp_path):
        stem = tmp_path / "band"
        main(["band", "--d1", "0.1", "--d2", "1.2", "--nk", "401", "--out", str(stem)])
        _, data = read_csv(with_suffix(stem, ".csv"))
        assert np.abs(data[:, 1]).min() < 1e-2

    def test_flat_bands(self, tmp_path):
        stem = tmp_path / "band"
        main(["band", "--model", "imaginary", "--u", "3.5", "--out", str(stem)])
        _, data = read_csv(with_suffix(stem, ".csv"))
        assert np.abs(data[:, [1, 3]]).max() < 1e-12

    def test_obc_edge_weight_column(self, tmp_path):
        stem = tmp_path / "spectrum"
        main([*QUICK_COMMANDS[1], "--out", str(stem)])
        header, data = read_csv(with_suffix(stem, ".csv"))
        assert header == ["index", "re_E", "im_E", "edge_weight"]
        e = data[:, 1] + 1j * data[:, 2]
        near = np.abs(np.abs(e) - 2) < 1e-6
        assert near.sum() == 2 and np.all(data[near, 3] > 0.9)

    def test_skin_verdict(self, tmp_path):
        stem = tmp_path / "skin"
        main(["skin", "--model", "imaginary", "--t1", "1", "--t2", "0.5", "--u", "1",
              "--out", str(stem)])
        verdict = json.loads(with_suffix(stem, ".json").read_text())
        assert verdict["present"] is False and verdict["side"] == "none"

    def test_reality_thresholds_reported(self, tmp_path):
        stem = tmp_path / "real"
        main(["phase", "reality", "--out", str(stem)])
        out = json.loads(with_suffix(stem, ".json").read_text())
        assert out["u_low"] == pytest.approx(1, abs=4 / 399)
        assert out["u_high"] == pytest.approx(3, abs=4 / 399)


class TestExitCodes:
    def test_bad_range(self, tmp_path):
        assert main(["phase", "nu-line", "--range", "2:1", "--out", str(tmp_path / "x")]) == 2
        assert main(["phase", "nu-line", "--range", "a:b", "--out", str(tmp_path / "x")]) == 2

    def test_mixed_model(self, tmp_path):
        assert main(["band", "--d1", "0.3", "--u", "1", "--out", str(tmp_path / "x")]) == 2

    def test_resolution_below_minimum(self, tmp_path):
        assert main(["phase", "nu-line", "--n", "10", "--out", str(tmp_path / "x")]) == 2

    def test_band_touching(self, tmp_path):
        assert main(["berry", "--u", "2", "--out", str(tmp_path / "x")]) == 3

    def test_transition_line(self, tmp_path):
        assert main(["invariants", "--d1", "0.5", "--d2", "0.5", "--out",
                     str(tmp_path / "x")]) == 3

    def test_unwritable(self, tmp_path):
        blocker = tmp_path / "file"
        blocker.write_text("")
        assert main(["band", "--out", str(blocker / "sub" / "x")]) == 4

    def test_unknown_command(self):
        assert main(["frobnicate"]) == 2

    def test_module_entry_point(self, tmp_path):
        out = subprocess.run([sys.executable, "-m", "nhssh", "berry", "--u", "2",
                              "--out", str(tmp_path / "x")], capture_output=True, text=True)
        assert out.returncode == 3 and "perturb u" in out.stderr


class TestCookbook:
    def test_every_figure_mapped(self):
        assert {f"fig{n}" for n in range(3, 14)} <= set(FIGURES)

    def test_invocations_parse(self):
        from nhssh.cli import build_parser
        parser = build_parser()
        for reduced in (False, True):
            for panel, argv in invocations(reduced=reduced):
                parser.parse_args([*argv, "--out", panel])

    def test_unknown_figure(self):
        with pytest.raises(ValueError):
            list(invocations(["fig99"]))

    def test_run_single_figure(self, tmp_path):
        assert main(["cookbook", "--figure", "fig13", "--out-dir", str(tmp_path)]) == 0
        assert json.loads((tmp_path / "fig13a.json").read_text())["present"] is False
