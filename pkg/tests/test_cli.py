import numpy as np
import pytest

from ddmls import compute_indicators, fill_distance_estimate, franke, halton_points, regular_grid, sample, save_csv
from ddmls.cli import main

SMALL_EVAL = "--eval-grid"


def run_cli(capsys, *argv):
    rc = main(list(argv))
    captured = capsys.readouterr()
    return rc, captured.out, captured.err


class TestApproximate:
    def test_default_eval_grid_size(self, capsys):
        rc, out, _ = run_cli(
            capsys, "approximate", "--grid", "5", "--fn", "zcircle",
            "--degree", "1", "--kernel", "W2", "--mode", "dd",
        )
        assert rc == 0
        lines = out.splitlines()
        assert lines[0] == "x,y,f_true,f_approx,abs_err"
        assert len(lines) == 1 + 120 * 120

    def test_runs_on_ingested_nodes(self, capsys, tmp_path):
        path = tmp_path / "data.csv"
        save_csv(sample(franke(), halton_points(500)), path)
        rc, out, _ = run_cli(
            capsys, "approximate", "--nodes", str(path),
            "--degree", "2", "--kernel", "G", "--mode", "linear",
            SMALL_EVAL, "12",
        )
        assert rc == 0
        rows = [l.split(",") for l in out.splitlines()[1:]]
        assert len(rows) == 144
        assert all(r[2] == "" and r[4] == "" for r in rows)  # no truth columns without --fn

    def test_ingested_nodes_with_reference_function(self, capsys, tmp_path):
        path = tmp_path / "data.csv"
        save_csv(sample(franke(), halton_points(500)), path)
        rc, out, _ = run_cli(
            capsys, "approximate", "--nodes", str(path), "--fn", "franke",
            "--degree", "1", "--kernel", "W2", SMALL_EVAL, "8",
        )
        assert rc == 0
        errs = [float(l.split(",")[4]) for l in out.splitlines()[1:]]
        assert max(errs) < 0.05

    def test_missing_degree_is_usage_error(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["approximate", "--grid", "4", "--fn", "franke", "--kernel", "W2"])
        assert exc.value.code == 2

    def test_unknown_flag_rejected(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["approximate", "--grid", "4", "--fn", "franke", "--degree", "1",
                  "--kernel", "W2", "--frobnicate"])
        assert exc.value.code == 2

    def test_missing_fn_with_generated_nodes(self, capsys):
        rc, _, err = run_cli(capsys, "approximate", "--grid", "4", "--degree", "1", "--kernel", "W2")
        assert rc == 2
        assert "--fn" in err

    def test_starved_solve_is_numerical_error(self, capsys):
        rc, _, err = run_cli(
            capsys, "approximate", "--grid", "3", "--fn", "franke",
            "--degree", "2", "--kernel", "W2", "--shape-eps", "200", SMALL_EVAL, "6",
        )
        assert rc == 3
        assert "insufficient" in err

    def test_auto_degree_rescues_starved_queries(self, capsys):
        args = ["approximate", "--grid", "3", "--fn", "franke", "--degree", "2",
                "--kernel", "W2", "--shape-eps", "8", SMALL_EVAL, "9,0.1,0.1,0.9,0.9"]
        rc, _, _ = run_cli(capsys, *args)
        assert rc == 3
        rc, out, _ = run_cli(capsys, *args, "--auto-degree")
        assert rc == 0
        assert len(out.splitlines()) == 1 + 81

    def test_missing_nodes_file_is_io_error(self, capsys):
        rc, _, err = run_cli(capsys, "approximate", "--nodes", "/no/such/file.csv",
                             "--degree", "1", "--kernel", "W2")
        assert rc == 4

    def test_out_writes_file(self, capsys, tmp_path):
        out_path = tmp_path / "field.csv"
        rc, out, _ = run_cli(
            capsys, "approximate", "--grid", "4", "--fn", "franke",
            "--degree", "1", "--kernel", "w2", SMALL_EVAL, "6", "--out", str(out_path),
        )
        assert rc == 0
        assert out == ""
        assert out_path.read_text().startswith("x,y,f_true,f_approx,abs_err\n")


class TestIndicators:
    def test_zcircle_indicator_dump(self, capsys):
        rc, out, _ = run_cli(capsys, "indicators", "--grid", "5", "--fn", "zcircle")
        assert rc == 0
        lines = out.splitlines()
        assert lines[0] == "i,x,y,f,Ni,I"
        assert len(lines) == 1 + 1089
        top = max(float(l.split(",")[5]) for l in lines[1:])
        assert top >= 0.05

    def test_custom_delta_honored(self, capsys):
        rc, out, _ = run_cli(capsys, "indicators", "--grid", "4", "--fn", "franke", "--delta", "0.1")
        assert rc == 0
        nodes = sample(franke(), regular_grid(4))
        field = compute_indicators(nodes, 0.1)
        got = np.array([float(l.split(",")[5]) for l in out.splitlines()[1:]])
        assert np.allclose(got, field.indicators, rtol=1e-15)

    def test_constant_data(self, capsys, tmp_path):
        path = tmp_path / "const.csv"
        nodes = halton_points(64).with_values(np.full(64, 5.0))
        save_csv(nodes, path)
        rc, out, _ = run_cli(capsys, "indicators", "--nodes", str(path))
        assert rc == 0
        assert all(float(l.split(",")[5]) <= 1e-12 for l in out.splitlines()[1:])


class TestConvergence:
    def test_single_level_row(self, capsys):
        rc, out, _ = run_cli(
            capsys, "convergence", "--levels", "4..4", "--source", "grid", "--fn", "franke",
            "--degree", "1", "--kernel", "W2", "--mode", "linear", SMALL_EVAL, "20",
        )
        assert rc == 0
        lines = out.splitlines()
        assert lines[0] == "l,N,h,MAE,rate_inf,RMSE,rate_2"
        assert len(lines) == 2
        fields = lines[1].split(",")
        assert fields[0] == "4" and fields[4] == "" and fields[6] == ""

    def test_halton_h_uses_fill_distance(self, capsys):
        rc, out, _ = run_cli(
            capsys, "convergence", "--levels", "3..3", "--source", "halton", "--fn", "franke",
            "--degree", "1", "--kernel", "W2", "--mode", "linear", SMALL_EVAL, "10",
        )
        assert rc == 0
        h = float(out.splitlines()[1].split(",")[2])
        assert h == pytest.approx(fill_distance_estimate(halton_points(81), 512), rel=1e-12)

    def test_json_output(self, capsys):
        import json

        rc, out, _ = run_cli(
            capsys, "convergence", "--levels", "3..4", "--source", "grid", "--fn", "franke",
            "--degree", "0", "--kernel", "W2", "--mode", "linear", SMALL_EVAL, "10", "--json",
        )
        assert rc == 0
        rows = json.loads(out)
        assert [r["l"] for r in rows] == [3, 4]
        assert rows[0]["rate_inf"] is None and rows[1]["rate_inf"] is not None

    def test_identical_invocations_are_byte_identical(self, capsys):
        args = ["convergence", "--levels", "3..4", "--source", "grid", "--fn", "zcircle",
                "--degree", "1", "--kernel", "W2", "--mode", "dd", SMALL_EVAL, "15"]
        _, first, _ = run_cli(capsys, *args)
        _, second, _ = run_cli(capsys, *args)
        assert first.encode() == second.encode()

    def test_bad_levels_rejected(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["convergence", "--levels", "7..4", "--source", "grid", "--fn", "franke",
                  "--degree", "1", "--kernel", "W2"])
        assert exc.value.code == 2


class TestOscillation:
    def test_reports_two_fields(self, capsys):
        rc, out, _ = run_cli(
            capsys, "oscillation", "--grid", "4", "--fn", "zcircle",
            "--degree", "2", "--kernel", "W2", "--mode", "linear", SMALL_EVAL, "40",
        )
        assert rc == 0
        lines = out.splitlines()
        assert lines[0] == "max_overshoot,band_width"
        overshoot, band = map(float, lines[1].split(","))
        assert overshoot > 0.0 and band > 0.0
