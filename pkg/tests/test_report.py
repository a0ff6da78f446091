from __future__ import annotations

import re
from datetime import datetime, timezone

import pytest

from plsql2java.errors import ChartConsistencyError
from plsql2java.report import (
    ChartSeries,
    RunRecord,
    emit_records,
    read_records_csv,
    read_records_json,
    record_to_dict,
    render_svg,
    scatter_chart_data,
    similarity_chart_data,
)

_TS = datetime(2026, 1, 1, tzinfo=timezone.utc)


def _record(file_id="alpha", strategy="all_samples", cp=80.0, tp=50.0,
            score=0.5, outcome=None):
    sr = None if cp is None or tp is None else cp * tp / 100.0
    return RunRecord(
        file_id=file_id,
        strategy=strategy,
        chosen_exemplars=("beta", "gamma"),
        similarity_score=score,
        cp_percent=cp,
        tp_percent=tp,
        sr_percent=sr,
        outcome=outcome,
        timestamp=_TS,
        backend_model="mock",
    )


def _quantized(record: RunRecord) -> dict:
    return record_to_dict(record)


class TestEmitRecords:
    def test_csv_line_count(self, tmp_path):
        path = emit_records([_record()], "csv", tmp_path / "r.csv")
        assert len(path.read_text().splitlines()) == 2

    def test_csv_twenty_records_plus_header(self, tmp_path):
        records = [
            _record(file_id=f"f{i}", strategy=s)
            for i in range(10) for s in ("all_samples", "best_subset")
        ]
        path = emit_records(records, "csv", tmp_path / "r.csv")
        assert len(path.read_text().splitlines()) == 21

    def test_sorted_by_file_then_strategy(self, tmp_path):
        records = [
            _record("b", "best_subset"),
            _record("a", "best_subset"),
            _record("b", "all_samples"),
        ]
        path = emit_records(records, "csv", tmp_path / "r.csv")
        firsts = [line.split(",")[:2] for line in path.read_text().splitlines()[1:]]
        assert firsts == [["a", "best_subset"], ["b", "all_samples"],
                          ["b", "best_subset"]]

    def test_deterministic_re_emission(self, tmp_path):
        records = [_record(), _record(strategy="best_subset", outcome="unchanged")]
        first = emit_records(records, "csv", tmp_path / "a.csv").read_bytes()
        second = emit_records(records, "csv", tmp_path / "b.csv").read_bytes()
        assert first == second
        j1 = emit_records(records, "json", tmp_path / "a.json").read_bytes()
        j2 = emit_records(records, "json", tmp_path / "b.json").read_bytes()
        assert j1 == j2

    def test_empty_records_rejected(self, tmp_path):
        with pytest.raises(ValueError):
            emit_records([], "csv", tmp_path / "r.csv")

    def test_csv_round_trip(self, tmp_path):
        records = [
            _record("a", "all_samples", cp=33.33333, tp=66.66667, score=0.123456789),
            _record("a", "best_subset", outcome="improved"),
            _record("b", "all_samples", cp=None, tp=None),
        ]
        path = emit_records(records, "csv", tmp_path / "r.csv")
        parsed = read_records_csv(path)
        assert [_quantized(r) for r in parsed] == [
            _quantized(r) for r in sorted(records, key=lambda r: (r.file_id, r.strategy))
        ]

    def test_json_round_trip(self, tmp_path):
        records = [_record("x", cp=12.34567, tp=89.01234, score=0.99999)]
        path = emit_records(records, "json", tmp_path / "r.json")
        parsed = read_records_json(path)
        assert [_quantized(r) for r in parsed] == [_quantized(r) for r in records]

    def test_reals_quantized_to_four_decimals(self, tmp_path):
        path = emit_records(
            [_record(cp=33.333333, tp=66.666666)], "csv", tmp_path / "r.csv"
        )
        row = path.read_text().splitlines()[1]
        assert ",33.3333,66.6667," in row


class TestRunRecordInvariants:
    def test_sr_requires_both_metrics(self):
        with pytest.raises(ValueError):
            RunRecord("f", "all_samples", (), 0.5, None, 50.0, 25.0, None,
                      _TS, "m")

    def test_sr_consistency(self):
        with pytest.raises(ValueError):
            RunRecord("f", "all_samples", (), 0.5, 80.0, 50.0, 99.0, None,
                      _TS, "m")

    def test_naive_timestamp_rejected(self):
        with pytest.raises(ValueError):
            RunRecord("f", "all_samples", (), 0.5, None, None, None, None,
                      datetime(2026, 1, 1), "m")


class TestSimilarityChartData:
    def test_two_series_with_file_tags(self):
        series = similarity_chart_data(
            [("b", 0.4, 0.6), ("a", 0.3, 0.5)]
        )
        assert [s.label for s in series] == ["all_samples", "best_subset"]
        assert [p[2] for p in series[0].points] == ["a", "b"]  # sorted by id
        assert [p[1] for p in series[0].points] == [0.3, 0.4]
        assert [p[1] for p in series[1].points] == [0.5, 0.6]

    def test_ten_files_ten_points(self):
        per_file = [(f"f{i}", 0.1, 0.2) for i in range(10)]
        series = similarity_chart_data(per_file)
        assert all(len(s.points) == 10 for s in series)

    def test_consistency_violation_raises(self):
        with pytest.raises(ChartConsistencyError):
            similarity_chart_data([("a", 0.9, 0.2)])

    def test_violation_tolerated_when_not_enforced(self):
        series = similarity_chart_data([("a", 0.9, 0.2)], enforce_consistency=False)
        assert len(series) == 2

    def test_empty_input_skipped(self):
        assert similarity_chart_data([]) == []


class TestScatterChartData:
    def test_two_strategies_ten_points_each(self):
        records = [
            _record(file_id=f"f{i}", strategy=s)
            for i in range(10) for s in ("all_samples", "best_subset")
        ]
        series = scatter_chart_data(records)
        assert [s.label for s in series] == ["all_samples", "best_subset"]
        assert all(len(s.points) == 10 for s in series)

    def test_coordinate_mapping(self):
        series = scatter_chart_data([_record(cp=100.0, tp=0.0)])
        assert series[0].points[0][:2] == (0.0, 100.0)

    def test_records_without_metrics_skipped(self):
        series = scatter_chart_data([_record(cp=None, tp=None)])
        assert all(not s.points for s in series)

    def test_empty_records(self):
        series = scatter_chart_data([])
        assert all(not s.points for s in series)


class TestRenderSvg:
    def test_scatter_has_two_legend_entries(self, tmp_path):
        series = [
            ChartSeries("all_samples", ((1.0, 2.0, "a"),)),
            ChartSeries("best_subset", ((3.0, 4.0, "b"),)),
        ]
        out = render_svg(series, "scatter", tmp_path / "s.svg")
        svg = out.read_text()
        assert svg.count('class="legend-entry"') == 2
        assert svg.count("<circle") == 2 + 2  # data points + legend markers

    def test_bars_rect_count(self, tmp_path):
        points_a = tuple((float(i), 0.5, f"f{i}") for i in range(10))
        points_b = tuple((float(i), 0.7, f"f{i}") for i in range(10))
        series = [ChartSeries("all_samples", points_a),
                  ChartSeries("best_subset", points_b)]
        out = render_svg(series, "bars", tmp_path / "b.svg")
        assert out.read_text().count("<rect") == 20

    def test_deterministic_bytes(self, tmp_path):
        series = [ChartSeries("all_samples", ((0.0, 0.5, "x"),))]
        first = render_svg(series, "bars", tmp_path / "1.svg").read_bytes()
        second = render_svg(series, "bars", tmp_path / "2.svg").read_bytes()
        assert first == second

    def test_fixed_viewport_and_axis_labels(self, tmp_path):
        series = [ChartSeries("all_samples", ((10.0, 20.0, "x"), (30.0, 90.0, "y")))]
        svg = render_svg(series, "scatter", tmp_path / "s.svg").read_text()
        assert 'viewBox="0 0 800 500"' in svg
        assert svg.count("<line") == 2  # the two axes
        # min/max labels on both axes
        assert re.search(r">0<", svg)
        assert re.search(r">30<", svg)
        assert re.search(r">90<", svg)

    def test_empty_series_rejected(self, tmp_path):
        with pytest.raises(ValueError):
            render_svg([], "bars", tmp_path / "x.svg")
        with pytest.raises(ValueError):
            render_svg([ChartSeries("s", ())], "bars", tmp_path / "x.svg")

    def test_unknown_kind_rejected(self, tmp_path):
        series = [ChartSeries("s", ((0.0, 1.0, "t"),))]
        with pytest.raises(ValueError):
            render_svg(series, "pie", tmp_path / "x.svg")
