import math

import numpy as np
import pytest

from ddmls import (
    DuplicatePoint,
    NodeSet,
    ParseError,
    eval_test_function,
    franke,
    g_levin,
    halton_points,
    load_csv,
    parse_test_function,
    piecewise_franke,
    regular_grid,
    sample,
    save_csv,
    z_circle,
)


class TestRegularGrid:
    def test_level_one(self):
        nodes = regular_grid(1)
        assert len(nodes) == 9
        assert set(map(tuple, nodes.points)) == {(a, b) for a in (0, 0.5, 1) for b in (0, 0.5, 1)}

    @pytest.mark.parametrize("level,n", [(5, 1089), (7, 16641)])
    def test_node_counts(self, level, n):
        assert len(regular_grid(level)) == n

    def test_rejects_level_zero(self):
        with pytest.raises(ValueError):
            regular_grid(0)


class TestHalton:
    def test_first_point(self):
        nodes = halton_points(1)
        assert np.allclose(nodes.points[0], [0.5, 1 / 3], atol=1e-15)

    def test_first_three_points(self):
        nodes = halton_points(3)
        expected = np.array([[1 / 2, 1 / 3], [1 / 4, 2 / 3], [3 / 4, 1 / 9]])
        assert np.allclose(nodes.points, expected, atol=1e-15)

    def test_distinct_and_inside_unit_square(self):
        nodes = halton_points(1089)
        assert np.unique(nodes.points, axis=0).shape[0] == 1089
        assert np.all(nodes.points >= 0.0) and np.all(nodes.points < 1.0)

    def test_low_discrepancy_on_dyadic_boxes(self):
        pts = halton_points(1024).points
        for k in range(1, 17):
            edge = k / 16
            count = np.sum((pts[:, 0] < edge) & (pts[:, 1] < edge))
            expected = 1024 * edge * edge
            assert 0.8 * expected <= count <= 1.2 * expected


class TestSurfaces:
    def test_zcircle_branches(self):
        fn = z_circle()
        assert eval_test_function(fn, (0.5, 0.5)) == pytest.approx(math.sin(0.25), rel=1e-15)
        assert eval_test_function(fn, (0.0, 0.0)) == 1.0  # cos(0), outside branch
        # on the curve: first (non-strict) branch
        assert eval_test_function(fn, (0.25, 0.5)) == pytest.approx(math.cos(0.125), rel=1e-15)

    def test_zcircle_jump_is_large(self):
        fn = z_circle()
        for x in (0.25, 0.75):
            gap = abs(math.cos(x * 0.5) - math.sin(x * 0.5))
            assert gap > 0.5
            assert fn.curve_distance(np.asarray(x), np.asarray(0.5)) == pytest.approx(0.0, abs=1e-15)

    def test_glevin_center(self):
        assert eval_test_function(g_levin(), (0.5, 0.5)) == 1.0

    def test_glevin_outside_branch(self):
        got = eval_test_function(g_levin(), (0.0, 0.0))
        assert got == pytest.approx(-(0.0 + 0.0 + 1.0) * math.cos(0.0) + math.sin(0.0), rel=1e-15)

    def test_franke_at_origin(self):
        # frozen from a 30-digit mpmath evaluation of the four-term sum
        assert eval_test_function(franke(), (0.0, 0.0)) == pytest.approx(
            0.766420591284923132160950661068, rel=1e-14
        )

    def test_franke_smooth_has_no_curve(self):
        assert franke().curve_distance is None

    def test_piecewise_franke_offset(self):
        fn = piecewise_franke(2.5)
        base = eval_test_function(franke(), (0.9, 0.9))
        assert eval_test_function(fn, (0.9, 0.9)) == pytest.approx(base + 2.5, rel=1e-14)
        inside = eval_test_function(fn, (0.1, 0.1))  # x^2+y^2 = 0.02 < 0.0625
        assert inside == pytest.approx(eval_test_function(franke(), (0.1, 0.1)), rel=1e-14)

    def test_parse_names(self):
        assert parse_test_function("FRANKE").name == "franke"
        assert parse_test_function("zcircle").name == "zcircle"
        assert parse_test_function("pfranke:0.5").name == "pfranke:0.5"
        with pytest.raises(ValueError):
            parse_test_function("lena")

    def test_sample_fills_values(self):
        nodes = sample(z_circle(), regular_grid(5))
        assert np.all(np.isfinite(nodes.values))
        inside = (nodes.points[:, 0] - 0.5) ** 2 + (nodes.points[:, 1] - 0.5) ** 2 < 0.0625
        assert inside.any() and (~inside).any()
        fn = z_circle()
        assert np.allclose(
            nodes.values[inside],
            np.sin(nodes.points[inside, 0] * nodes.points[inside, 1]),
        )

    def test_custom_constant_branches(self):
        from ddmls import custom

        fn = custom(lambda x, y: x - 0.5, lambda x, y: np.ones_like(x), lambda x, y: np.ones_like(x))
        nodes = sample(fn, regular_grid(2))
        assert np.all(nodes.values == 1.0)


class TestCsvRoundTrip:
    def test_round_trip_identity(self, tmp_path):
        nodes = sample(franke(), halton_points(37))
        path = tmp_path / "nodes.csv"
        save_csv(nodes, path)
        back = load_csv(path)
        assert np.array_equal(back.points, nodes.points)
        assert np.array_equal(back.values, nodes.values)

    def test_two_row_file(self, tmp_path):
        path = tmp_path / "two.csv"
        path.write_text("x,y,f\n0.25,0.5,1.0\n0.75,0.5,2.0\n")
        nodes = load_csv(path)
        assert len(nodes) == 2
        assert nodes.dim == 2

    def test_one_dimensional_file(self, tmp_path):
        path = tmp_path / "one.csv"
        path.write_text("x,f\n0.25,1.0\n0.5,2.0\n")
        nodes = load_csv(path)
        assert nodes.dim == 1

    def test_malformed_row_reports_line(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("x,y,f\n0.25,0.5,1.0\n0.75,oops,2.0\n")
        with pytest.raises(ParseError) as err:
            load_csv(path)
        assert err.value.line == 3

    def test_wrong_field_count_reports_line(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("x,y,f\n0.25,0.5\n")
        with pytest.raises(ParseError) as err:
            load_csv(path)
        assert err.value.line == 2

    def test_missing_header(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("0.25,0.5,1.0\n")
        with pytest.raises(ParseError) as err:
            load_csv(path)
        assert err.value.line == 1

    def test_duplicate_points_rejected(self, tmp_path):
        path = tmp_path / "dup.csv"
        path.write_text("x,y,f\n0.25,0.5,1.0\n0.25,0.5,2.0\n")
        with pytest.raises(DuplicatePoint):
            load_csv(path)

    def test_writer_uses_lf_and_17_digits(self, tmp_path):
        nodes = NodeSet([[1 / 3, 2 / 3]], [1 / 7])
        path = tmp_path / "prec.csv"
        save_csv(nodes, path)
        raw = path.read_bytes().decode()
        assert "\r" not in raw
        assert raw.splitlines()[1] == "0.33333333333333331,0.66666666666666663,0.14285714285714285"
