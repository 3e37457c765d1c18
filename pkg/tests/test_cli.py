import json
import subprocess
import sys

import numpy as np
import pytest

from trajkit.cli import main
from trajkit.dataio import (
    SHAPE_PRESETS,
    TimingSpec,
    generate_synthetic,
    save_dataset,
    shape_polyline,
    synthetic_group,
    write_demo_csv,
)
from trajkit.model import DemonstrationSet, Trajectory


@pytest.fixture
def line_csv(tmp_path):
    path = tmp_path / "line.csv"
    write_demo_csv(path, Trajectory([0.0, 1.0], [[0.0, 0.0], [1.0, 0.0]]))
    return path


@pytest.fixture
def group_dir(tmp_path):
    dset = synthetic_group(
        SHAPE_PRESETS["arc"], n_demos=3, seed=5, noise_sigma=0.0015, name="arc"
    )
    manifest = save_dataset(dset, tmp_path / "data")
    gt = shape_polyline(SHAPE_PRESETS["arc"], 300)
    gt_path = tmp_path / "data" / "gt.csv"
    write_demo_csv(gt_path, Trajectory(np.linspace(0, 1, 300), gt))
    return manifest, gt_path


class TestFilter:
    def test_uniform_line(self, line_csv, tmp_path):
        out = tmp_path / "path.csv"
        code = main(["filter", "--in", str(line_csv), "--delta", "0.25", "--out", str(out)])
        assert code == 0
        rows = out.read_text().strip().split("\n")
        assert rows[0] == "s,t,x0,x1"
        assert len(rows) == 6
        first = [float(v) for v in rows[1].split(",")]
        assert first == [0.0, 0.0, 0.0, 0.0]

    def test_missing_delta_is_usage_error(self, line_csv, tmp_path, capsys):
        with pytest.raises(SystemExit) as err:
            main(["filter", "--in", str(line_csv), "--out", str(tmp_path / "o.csv")])
        assert err.value.code == 2
        assert "usage" in capsys.readouterr().err

    def test_degenerate_demo_exits_4(self, tmp_path):
        still = tmp_path / "still.csv"
        write_demo_csv(still, Trajectory([0.0, 1.0, 2.0], [[1.0], [1.0], [1.0]]))
        code = main(["filter", "--in", str(still), "--delta", "0.1", "--out", str(tmp_path / "o.csv")])
        assert code == 4

    def test_unparseable_demo_exits_3(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("t,x0\n0,1\n0,2\n")
        code = main(["filter", "--in", str(bad), "--delta", "0.1", "--out", str(tmp_path / "o.csv")])
        assert code == 3

    def test_idempotent_output(self, line_csv, tmp_path):
        out1 = tmp_path / "a.csv"
        out2 = tmp_path / "b.csv"
        main(["filter", "--in", str(line_csv), "--delta", "0.25", "--out", str(out1)])
        main(["filter", "--in", str(line_csv), "--delta", "0.25", "--out", str(out2)])
        assert out1.read_bytes() == out2.read_bytes()


class TestOptimizeDelta:
    def test_line_report(self, tmp_path):
        demo = tmp_path / "long_line.csv"
        write_demo_csv(demo, Trajectory(np.linspace(0, 1, 1001), np.linspace(0, 1, 1001)))
        out = tmp_path / "report.json"
        code = main(
            ["optimize-delta", "--in", str(demo), "--dh-star", "0.004", "--dh-tol", "1e-4",
             "--delta1", "1e-3", "--out", str(out)]
        )
        assert code == 0
        doc = json.loads(out.read_text())
        assert doc["feasible"] is True
        assert doc["achieved"] <= 0.004

    def test_tol_must_be_below_target(self, line_csv, tmp_path):
        code = main(
            ["optimize-delta", "--in", str(line_csv), "--dh-star", "0.004", "--dh-tol", "0.01",
             "--out", str(tmp_path / "r.json")]
        )
        assert code == 2

    def test_rerun_is_byte_identical(self, tmp_path):
        demo = tmp_path / "d.csv"
        write_demo_csv(demo, Trajectory(np.linspace(0, 1, 301), np.linspace(0, 2, 301)))
        out1, out2 = tmp_path / "r1.json", tmp_path / "r2.json"
        for out in (out1, out2):
            main(["optimize-delta", "--in", str(demo), "--dh-star", "0.01", "--dh-tol", "1e-3",
                  "--delta1", "2e-3", "--out", str(out)])
        assert out1.read_bytes() == out2.read_bytes()

    def test_infeasible_is_still_success(self, line_csv, tmp_path):
        out = tmp_path / "r.json"
        code = main(
            ["optimize-delta", "--in", str(line_csv), "--dh-star", "1e-9", "--dh-tol", "1e-10",
             "--delta1", "0.5", "--out", str(out)]
        )
        assert code == 0
        assert json.loads(out.read_text())["feasible"] is False


class TestEvaluate:
    def test_writes_metrics_and_barycenter(self, group_dir, tmp_path):
        manifest, _ = group_dir
        out = tmp_path / "results"
        code = main(
            ["evaluate", "--manifest", str(manifest), "--domain", "arclength", "--method", "gmr",
             "--delta", "0.01", "--G", "4", "--resample", "80", "--out", str(out)]
        )
        assert code == 0
        metrics = (out / "metrics.csv").read_text().strip().split("\n")
        assert metrics[0] == "group,domain,method,rho,entropy,sncsd,l2"
        assert metrics[1].startswith("arc,arclength,gmr,")
        assert (out / "barycenter.csv").exists()

    def test_identical_demos_score_zero_l2(self, tmp_path):
        demo = generate_synthetic("sine", TimingSpec(base_duration=2.0), 40.0)
        dset = DemonstrationSet("same", (demo, demo, demo))
        manifest = save_dataset(dset, tmp_path / "same")
        out = tmp_path / "r"
        code = main(
            ["evaluate", "--manifest", str(manifest), "--domain", "time", "--method", "euc",
             "--resample", "60", "--out", str(out)]
        )
        assert code == 0
        row = (out / "metrics.csv").read_text().strip().split("\n")[1]
        l2 = float(row.split(",")[-1])
        assert l2 == pytest.approx(0.0, abs=1e-9)

    def test_domain_comparison_favors_arclength(self, group_dir, tmp_path):
        manifest, _ = group_dir
        l2 = {}
        for domain, delta in (("time", None), ("arclength", "0.02")):
            out = tmp_path / f"r_{domain}"
            argv = ["evaluate", "--manifest", str(manifest), "--domain", domain, "--method", "euc",
                    "--resample", "80", "--out", str(out)]
            if delta:
                argv += ["--delta", delta]
            assert main(argv) == 0
            row = (out / "metrics.csv").read_text().strip().split("\n")[1]
            l2[domain] = float(row.split(",")[-1])
        assert l2["arclength"] < l2["time"]

    def test_unknown_method_is_usage_error(self, group_dir, tmp_path):
        manifest, _ = group_dir
        with pytest.raises(SystemExit) as err:
            main(["evaluate", "--manifest", str(manifest), "--domain", "time", "--method", "centroid",
                  "--out", str(tmp_path / "x")])
        assert err.value.code == 2

    def test_sweeps_and_plots(self, group_dir, tmp_path):
        manifest, gt_path = group_dir
        out = tmp_path / "full"
        code = main(
            ["evaluate", "--manifest", str(manifest), "--domain", "arclength", "--method", "gmr",
             "--delta", "0.01", "--G", "4", "--resample", "80", "--out", str(out),
             "--ground-truth", str(gt_path), "--sweep-g", "2,4", "--sweep-reference", "--plots"]
        )
        assert code == 0
        for name in (
            "metrics.csv", "barycenter.csv", "quality.csv", "gmm_sweep.csv",
            "reference_sensitivity.csv", "gmm_sweep.svg", "reference_sensitivity.svg",
            "group_overlay.svg",
        ):
            assert (out / name).exists(), name
            assert (out / name).stat().st_size > 0, name

    def test_missing_manifest_exits_3(self, tmp_path):
        code = main(["evaluate", "--manifest", str(tmp_path / "nope.json"), "--domain", "time",
                     "--method", "euc", "--out", str(tmp_path / "r")])
        assert code == 3


class TestBenchmark:
    def test_minimal_run(self, tmp_path):
        out = tmp_path / "bench.csv"
        code = main(["benchmark", "--sizes", "32,64", "--repeats", "1", "--out", str(out)])
        assert code == 0
        rows = out.read_text().strip().split("\n")
        assert rows[0] == "algorithm,complexity,size,median_s,iqr_s"
        assert len(rows) == 11

    def test_non_numeric_sizes_exit_2(self, tmp_path):
        code = main(["benchmark", "--sizes", "32,abc", "--out", str(tmp_path / "b.csv")])
        assert code == 2


class TestRpcSubprocess:
    def test_protocol_roundtrip(self):
        requests = "\n".join(
            [
                json.dumps({"id": 1, "op": "dtw", "args": {"a": [[0], [0]], "b": [[1], [1]]}}),
                json.dumps({"id": 2, "op": "hausdorff", "args": {"a": [[0, 0]], "b": [[3, 4]]}}),
                json.dumps({"id": 3, "op": "spatial_sample", "args": {"times": [0, 1], "points": [[0, 0], [1, 0]], "delta": -2}}),
            ]
        )
        proc = subprocess.run(
            [sys.executable, "-m", "trajkit", "rpc"],
            input=requests,
            capture_output=True,
            text=True,
            timeout=120,
        )
        assert proc.returncode == 0
        lines = [json.loads(line) for line in proc.stdout.strip().split("\n")]
        assert lines[0]["ok"] and lines[0]["result"]["distance"] == 2.0
        assert lines[1]["ok"] and lines[1]["result"]["value"] == 5.0
        assert not lines[2]["ok"] and lines[2]["error"]["type"] == "invalid-argument"

    def test_console_entry_point(self, tmp_path, line_csv):
        out = tmp_path / "o.csv"
        proc = subprocess.run(
            [sys.executable, "-m", "trajkit", "filter", "--in", str(line_csv),
             "--delta", "0.5", "--out", str(out)],
            capture_output=True,
            text=True,
            timeout=120,
        )
        assert proc.returncode == 0
        assert out.exists()
