import math

import pytest

from canopy import (
    DomainError,
    ParseError,
    UnderdeterminedError,
    ValidationError,
    WoodType,
    default_breakpoints,
    default_diameter_models,
    fit_piecewise_linear,
    girth_to_diameter,
    load_measurements,
    reference_tables,
)

from reference_values import CONIFER_FIT_ORACLE, CONIFER_PUBLISHED_TOP


class TestGirthConversion:
    def test_published_values(self):
        assert girth_to_diameter(11.0) == pytest.approx(3.503185, rel=1e-6)
        assert girth_to_diameter(100.0) == pytest.approx(31.84713, rel=1e-6)

    def test_pi_girth(self):
        # the tables round pi to 3.14, so a girth of pi maps close to 1
        assert girth_to_diameter(math.pi) == pytest.approx(1.0, rel=1e-3)

    def test_linear(self):
        assert girth_to_diameter(7.0 * 13.0) == pytest.approx(
            7.0 * girth_to_diameter(13.0), rel=1e-12
        )

    def test_nonpositive(self):
        with pytest.raises(DomainError):
            girth_to_diameter(0.0)


class TestReferenceTables:
    def test_row_counts(self):
        tables = reference_tables()
        assert len(tables[WoodType.EVERGREEN]) == 14
        assert len(tables[WoodType.DECIDUOUS]) == 15
        assert len(tables[WoodType.CONIFER]) == 12

    def test_first_and_last_rows(self):
        tables = reference_tables()
        evergreen = tables[WoodType.EVERGREEN][0]
        assert (evergreen.height, evergreen.girth) == (250.0, 11.0)
        deciduous = tables[WoodType.DECIDUOUS][0]
        assert (deciduous.height, deciduous.girth) == (200.0, 10.0)
        conifer = tables[WoodType.CONIFER][-1]
        assert (conifer.height, conifer.girth) == (1100.0, 100.0)

    def test_diameters_consistent_with_conversion(self):
        for rows in reference_tables().values():
            for row in rows:
                assert girth_to_diameter(row.girth) == pytest.approx(
                    row.diameter, rel=1e-6
                )


class TestLoadMeasurements:
    def test_girth_row(self, tmp_path):
        path = tmp_path / "m.csv"
        path.write_text("wood,height_cm,girth_cm\nevergreen,250,11\n")
        (measurement,) = load_measurements(path)
        assert measurement.wood is WoodType.EVERGREEN
        assert measurement.height == 250.0
        assert measurement.diameter == pytest.approx(3.503185, rel=1e-6)

    def test_empty_file(self, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text("")
        assert load_measurements(path) == []

    def test_header_only(self, tmp_path):
        path = tmp_path / "h.csv"
        path.write_text("wood,height_cm,girth_cm,diameter_cm\n")
        assert load_measurements(path) == []

    def test_comments_and_blanks_skipped(self, tmp_path):
        path = tmp_path / "c.csv"
        path.write_text(
            "# survey export\nwood,height_cm,girth_cm,diameter_cm\n\n"
            "EVERGREEN,250,11,\n# trailing note\ndeciduous,200,,3.2\n"
        )
        rows = load_measurements(path)
        assert [m.wood for m in rows] == [WoodType.EVERGREEN, WoodType.DECIDUOUS]
        assert rows[1].diameter == 3.2
        assert rows[1].girth is None

    def test_both_columns_rejected(self, tmp_path):
        path = tmp_path / "b.csv"
        path.write_text("wood,height_cm,girth_cm,diameter_cm\nevergreen,250,11,3.5\n")
        with pytest.raises(ValidationError):
            load_measurements(path)

    def test_neither_column_rejected(self, tmp_path):
        path = tmp_path / "n.csv"
        path.write_text("wood,height_cm,girth_cm,diameter_cm\nevergreen,250,,\n")
        with pytest.raises(ValidationError):
            load_measurements(path)

    def test_nonpositive_value(self, tmp_path):
        path = tmp_path / "np.csv"
        path.write_text("wood,height_cm,girth_cm\nevergreen,-250,11\n")
        with pytest.raises(ValidationError):
            load_measurements(path)

    def test_parse_error_carries_row_number(self, tmp_path):
        path = tmp_path / "p.csv"
        path.write_text("wood,height_cm,girth_cm\nevergreen,250,11\noak,300,12\n")
        with pytest.raises(ParseError) as excinfo:
            load_measurements(path)
        assert excinfo.value.row == 2

    def test_bad_number(self, tmp_path):
        path = tmp_path / "bn.csv"
        path.write_text("wood,height_cm,girth_cm\nevergreen,tallish,11\n")
        with pytest.raises(ParseError) as excinfo:
            load_measurements(path)
        assert excinfo.value.row == 1

    def test_missing_columns(self, tmp_path):
        path = tmp_path / "mc.csv"
        path.write_text("wood,circumference\nevergreen,11\n")
        with pytest.raises(ParseError):
            load_measurements(path)

    def test_unsupported_format(self, tmp_path):
        with pytest.raises(ValueError):
            load_measurements(tmp_path / "x.csv", format="parquet")


class TestFit:
    def test_noiseless_recovery_of_builtin_model(self):
        model = default_diameter_models()[WoodType.EVERGREEN]
        heights = [50.0, 120.0, 240.0, 255.0, 270.0, 295.0, 320.0, 500.0, 900.0]
        points = [
            (h, model.segments[0 if h < 250 else 1 if h < 300 else 2].diameter(h))
            for h in heights
        ]
        result = fit_piecewise_linear(points, [250.0, 300.0])
        for fitted, reference in zip(result.model.segments, model.segments):
            assert fitted.slope == pytest.approx(reference.slope, abs=1e-9)
            assert fitted.intercept == pytest.approx(reference.intercept, abs=1e-9)
        assert result.residual_rms < 1e-10
        assert all(r2 == pytest.approx(1.0, abs=1e-9) for r2 in result.per_segment_r2)

    def test_conifer_reference_fit(self):
        rows = reference_tables()[WoodType.CONIFER]
        result = fit_piecewise_linear(
            [(m.height, m.diameter) for m in rows], [300.0], wood=WoodType.CONIFER
        )
        low, high = result.model.segments
        slope_low, intercept_low, r2_low = CONIFER_FIT_ORACLE["low"]
        assert low.slope == pytest.approx(slope_low, abs=1e-9)
        assert low.intercept == pytest.approx(intercept_low, abs=1e-9)
        assert result.per_segment_r2[0] == pytest.approx(r2_low, abs=1e-9)
        slope_high, intercept_high, r2_high = CONIFER_FIT_ORACLE["high"]
        assert high.slope == pytest.approx(slope_high, abs=1e-9)
        assert high.intercept == pytest.approx(intercept_high, abs=1e-9)
        assert result.per_segment_r2[1] == pytest.approx(r2_high, abs=1e-9)
        assert result.residual_rms == pytest.approx(
            CONIFER_FIT_ORACLE["residual_rms"], abs=1e-9
        )
        # loose agreement with the published coefficients (different data)
        pub_slope, pub_intercept = CONIFER_PUBLISHED_TOP
        assert abs(high.slope - pub_slope) / abs(pub_slope) < 0.25
        assert abs(high.intercept - pub_intercept) / abs(pub_intercept) < 0.25

    def test_boundary_point_feeds_both_segments(self):
        # two points per segment only when the 300 row is shared
        points = [(250.0, 4.140127), (300.0, 4.77707), (350.0, 6.050955)]
        result = fit_piecewise_linear(points, [300.0])
        low, high = result.model.segments
        assert low.slope == pytest.approx((4.77707 - 4.140127) / 50.0, rel=1e-12)
        assert high.slope == pytest.approx((6.050955 - 4.77707) / 50.0, rel=1e-12)

    def test_collinear_points_interpolate_exactly(self):
        points = [(10.0, 1.0), (90.0, 2.0), (110.0, 5.0), (200.0, 8.0)]
        result = fit_piecewise_linear(points, [100.0])
        assert result.residual_rms < 1e-10
        assert result.per_segment_r2 == (pytest.approx(1.0), pytest.approx(1.0))

    def test_empty_segment_named(self):
        points = [(310.0, 5.0), (400.0, 8.0), (500.0, 11.0)]
        with pytest.raises(UnderdeterminedError) as excinfo:
            fit_piecewise_linear(points, [300.0])
        assert "[0, 300)" in str(excinfo.value)

    def test_duplicate_heights_underdetermined(self):
        points = [(50.0, 1.0), (50.0, 1.2), (400.0, 8.0), (500.0, 11.0)]
        with pytest.raises(UnderdeterminedError):
            fit_piecewise_linear(points, [300.0])

    def test_bad_breakpoints(self):
        points = [(10.0, 1.0), (20.0, 2.0)]
        with pytest.raises(ValidationError):
            fit_piecewise_linear(points, [300.0, 200.0])
        with pytest.raises(ValidationError):
            fit_piecewise_linear(points, [-5.0])

    def test_decreasing_data_violates_model(self):
        points = [(10.0, 5.0), (50.0, 4.0), (90.0, 3.0)]
        with pytest.raises(ValidationError):
            fit_piecewise_linear(points, [])

    def test_single_segment_fit(self):
        points = [(10.0, 1.0), (20.0, 2.0), (30.0, 3.0)]
        result = fit_piecewise_linear(points, [])
        (segment,) = result.model.segments
        assert segment.slope == pytest.approx(0.1, rel=1e-9)

    def test_default_breakpoints(self):
        assert default_breakpoints(WoodType.EVERGREEN) == (250.0, 300.0)
        assert default_breakpoints("deciduous") == (300.0,)
        assert default_breakpoints("conifer") == (300.0,)
