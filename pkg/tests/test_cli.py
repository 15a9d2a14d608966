import json

import numpy as np
import pytest

from qicsim.cli import main

TABLE1_D3 = (0.0, 3.39083e-5, 0.0, 3.45126e-5, 3.73605e-5, 0.0, 3.79689e-5)
SUBSETS = ("B1", "B2", "B3", "B1B2", "B2B3", "B1B3", "B1B2B3")


def read_grid_csv(path):
    header = None
    rows = []
    with open(path) as fh:
        for line in fh:
            if line.startswith("#"):
                header = line[1:].strip()
                continue
            rows.append([float(v) for v in line.split(",")])
    return header.split(","), np.array(rows)


class TestCapacityCommand:
    def test_table1_d3_report(self, tmp_path):
        out = tmp_path / "cap.json"
        assert main(["capacity", "--dim", "3", "--preset", "table1",
                     "--out", str(out)]) == 0
        report = json.loads(out.read_text())
        assert report["dimension"] == 3
        assert report["log_base"] == "2"
        assert report["scenario"]["geometry"] == ["inside", "straddling", "outside"]
        assert report["pairing_error_bound"] < 1e-7
        for label, ref in zip(SUBSETS, TABLE1_D3):
            got = report["capacities"][label]["capacity"]
            if ref == 0.0:
                assert got <= 1e-8
            else:
                assert abs(got - ref) <= 5e-3 * ref

    def test_log_base_disambiguation(self, tmp_path):
        ref_b2 = 0.00872886
        matches = []
        for base in ("2", "e"):
            out = tmp_path / f"cap_{base}.json"
            assert main(["capacity", "--dim", "2", "--preset", "table1",
                         "--log-base", base, "--out", str(out)]) == 0
            got = json.loads(out.read_text())["capacities"]["B2"]["capacity"]
            matches.append(abs(got - ref_b2) <= 5e-3 * ref_b2)
        assert matches == [True, False]

    def test_wrong_preset_kind(self, tmp_path, capsys):
        assert main(["capacity", "--dim", "3", "--preset", "single"]) == 2
        assert "error" in capsys.readouterr().err

    def test_unknown_preset_is_usage_error(self):
        with pytest.raises(SystemExit) as exc:
            main(["capacity", "--dim", "3", "--preset", "nope"])
        assert exc.value.code == 2

    def test_inline_scenario_config(self, tmp_path):
        cfg = {
            "dimension": 3,
            "scenario": {
                "alice": {"kind": "hard_shell", "r_inner": 0.0, "r_outer": 1.0,
                          "center": [0, 0, 0], "t": 0.0, "coupling": 1.0},
                "bobs": [
                    {"kind": "hard_shell", "r_inner": 0.0, "r_outer": 0.9,
                     "center": [0, 0, 0], "t": 2.0, "coupling": 0.2},
                    {"kind": "hard_shell", "r_inner": 1.1, "r_outer": 2.9,
                     "center": [0, 0, 0], "t": 2.0, "coupling": 0.2},
                    {"kind": "hard_shell", "r_inner": 3.1, "r_outer": 4.0,
                     "center": [0, 0, 0], "t": 2.0, "coupling": 0.2},
                ],
            },
            "out": str(tmp_path / "inline.json"),
        }
        cfg_path = tmp_path / "run.json"
        cfg_path.write_text(json.dumps(cfg))
        assert main(["capacity", "--config", str(cfg_path)]) == 0
        report = json.loads((tmp_path / "inline.json").read_text())
        assert abs(report["capacities"]["B2"]["capacity"] - TABLE1_D3[1]) <= 5e-3 * TABLE1_D3[1]

    def test_unknown_config_key_rejected(self, tmp_path, capsys):
        cfg_path = tmp_path / "bad.json"
        cfg_path.write_text(json.dumps({"dimension": 3, "bogus": 1}))
        assert main(["capacity", "--config", str(cfg_path)]) == 2
        assert "bogus" in capsys.readouterr().err


class TestEvolveCommand:
    def test_single_d3_ridge(self, tmp_path):
        out = tmp_path / "line.csv"
        assert main(["evolve", "--dim", "3", "--preset", "single", "--t", "4",
                     "--grid", "x=-6:6:0.05,y=0,z=0", "--out", str(out)]) == 0
        cols, data = read_grid_csv(out)
        assert cols == ["x", "q_field_1", "q_mom_1", "p_field_1", "p_mom_1"]
        xs = data[:, 0]
        ridge = abs(xs[np.abs(data[:, 2]).argmax()])
        assert abs(ridge - 4.0) <= 0.4

    def test_shockwave_d2_has_12_weight_columns(self, tmp_path):
        out = tmp_path / "sw.csv"
        assert main(["shockwave", "--dim", "2", "--t", "8",
                     "--grid", "x=0:16:0.5,y=0", "--out", str(out)]) == 0
        cols, data = read_grid_csv(out)
        assert len(cols) == 1 + 12
        assert np.all(np.isfinite(data))

    def test_zero_size_grid_is_usage_error(self, tmp_path, capsys):
        code = main(["evolve", "--dim", "3", "--preset", "single", "--t", "4",
                     "--grid", "x=5:4:0.1,y=0,z=0", "--out", str(tmp_path / "x.csv")])
        assert code == 2
        assert "error" in capsys.readouterr().err

    def test_bad_grid_axis_name(self, tmp_path):
        code = main(["evolve", "--dim", "3", "--preset", "single", "--t", "4",
                     "--grid", "x=-1:1:0.5,q=0,z=0", "--out", str(tmp_path / "x.csv")])
        assert code == 2

    def test_deterministic_across_runs_and_threads(self, tmp_path):
        args = ["evolve", "--dim", "2", "--preset", "single", "--t", "2",
                "--grid", "x=-3:3:0.25,y=-1:1:0.5"]
        a = tmp_path / "a.csv"
        b = tmp_path / "b.csv"
        c = tmp_path / "c.csv"
        assert main(args + ["--out", str(a)]) == 0
        assert main(args + ["--out", str(b)]) == 0
        assert main(args + ["--out", str(c), "--threads", "3"]) == 0
        assert a.read_bytes() == b.read_bytes() == c.read_bytes()

    def test_default_times_write_one_file_each(self, tmp_path, monkeypatch):
        monkeypatch.chdir(tmp_path)
        assert main(["evolve", "--dim", "3", "--preset", "single",
                     "--grid", "x=0:1:0.5,y=0,z=0"]) == 0
        names = sorted(p.name for p in tmp_path.glob("*.csv"))
        assert names == [
            "evolve_single_d3_t0.csv",
            "evolve_single_d3_t2.csv",
            "evolve_single_d3_t4.csv",
        ]

    def test_sigma_scaling_documented_and_applied(self, tmp_path):
        out = tmp_path / "scaled.csv"
        assert main(["evolve", "--dim", "3", "--preset", "single", "--t", "0",
                     "--grid", "x=0:0.1:0.1,y=0,z=0", "--out", str(out)]) == 0
        text = out.read_text()
        assert "sigma^((d+1)/2)" in text
        cols, data = read_grid_csv(out)
        # scaled field weight at the center is 1/sqrt(2 pi)
        assert data[0, 1] == pytest.approx(1.0 / np.sqrt(2 * np.pi), rel=1e-9)


class TestValidateCommand:
    def test_only_filter(self, capsys):
        assert main(["validate", "--only", "closed-form,involution"]) == 0
        out = capsys.readouterr().out
        assert "closed-form d=3" in out
        assert "f o f = -id" in out
        assert "huygens" not in out

    def test_unknown_check_rejected(self, capsys):
        assert main(["validate", "--only", "nope"]) == 2
        assert "unknown checks" in capsys.readouterr().err
