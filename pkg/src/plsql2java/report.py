"""Run-record emission (CSV/JSON) and the two chart shapes as plain SVG.

Everything here is deterministic: reals are quantized to 4 decimals on the
way out, timestamps travel inside the records, and the SVG is assembled from
fixed-format strings, so re-emitting the same records is byte-identical.
Data bars are the only <rect> elements in a chart (axes are <line>s), which
keeps the structure testable by counting.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from datetime import datetime
from pathlib import Path

from .errors import ChartConsistencyError
from .evaluator import STRATEGIES, STRATEGY_ALL_SAMPLES, STRATEGY_BEST_SUBSET

CSV_FIELDS = (
    "file_id",
    "strategy",
    "chosen_exemplars",
    "similarity_score",
    "cp_percent",
    "tp_percent",
    "sr_percent",
    "outcome",
    "timestamp",
    "backend_model",
)

SERIES_COLORS = {
    STRATEGY_ALL_SAMPLES: "#1f77b4",  # blue, as in the all-samples series
    STRATEGY_BEST_SUBSET: "#d62728",  # red, the selected-subset series
}
_FALLBACK_COLORS = ("#2ca02c", "#9467bd", "#8c564b", "#e377c2")


@dataclass(frozen=True)
class RunRecord:
    file_id: str
    strategy: str
    chosen_exemplars: tuple[str, ...]
    similarity_score: float
    cp_percent: float | None
    tp_percent: float | None
    sr_percent: float | None
    outcome: str | None
    timestamp: datetime
    backend_model: str

    def __post_init__(self) -> None:
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.strategy!r}")
        if self.timestamp.tzinfo is None:
            raise ValueError("timestamp must be timezone-aware")
        if self.cp_percent is not None and self.tp_percent is not None:
            expected = self.cp_percent * self.tp_percent / 100.0
            # records read back from disk carry 4-decimal quantized fields,
            # so the identity holds only up to quantization error
            if self.sr_percent is None or abs(self.sr_percent - expected) > 5e-4:
                raise ValueError(
                    f"sr_percent {self.sr_percent} inconsistent with CP*TP/100"
                )
        elif self.sr_percent is not None:
            raise ValueError("sr_percent requires both cp_percent and tp_percent")


@dataclass(frozen=True)
class ChartSeries:
    label: str
    points: tuple[tuple[float, float, str], ...]


def _quantize(value: float | None) -> float | None:
    return None if value is None else round(value, 4)


def record_to_dict(record: RunRecord) -> dict:
    return {
        "file_id": record.file_id,
        "strategy": record.strategy,
        "chosen_exemplars": list(record.chosen_exemplars),
        "similarity_score": _quantize(record.similarity_score),
        "cp_percent": _quantize(record.cp_percent),
        "tp_percent": _quantize(record.tp_percent),
        "sr_percent": _quantize(record.sr_percent),
        "outcome": record.outcome,
        "timestamp": record.timestamp.isoformat(),
        "backend_model": record.backend_model,
    }


def record_from_dict(data: dict) -> RunRecord:
    return RunRecord(
        file_id=data["file_id"],
        strategy=data["strategy"],
        chosen_exemplars=tuple(data["chosen_exemplars"]),
        similarity_score=float(data["similarity_score"]),
        cp_percent=None if data["cp_percent"] is None else float(data["cp_percent"]),
        tp_percent=None if data["tp_percent"] is None else float(data["tp_percent"]),
        sr_percent=None if data["sr_percent"] is None else float(data["sr_percent"]),
        outcome=data["outcome"] or None,
        timestamp=datetime.fromisoformat(data["timestamp"]),
        backend_model=data["backend_model"],
    )


def _sorted_records(records: list[RunRecord]) -> list[RunRecord]:
    return sorted(records, key=lambda r: (r.file_id, r.strategy))


def emit_records(records: list[RunRecord], format: str, out_path: Path | str) -> Path:
    """Write records sorted by (file_id, strategy); reals at 4 decimals."""
    if not records:
        raise ValueError("records must be non-empty")
    out_path = Path(out_path)
    ordered = _sorted_records(records)

    if format == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(CSV_FIELDS)
        for record in ordered:
            writer.writerow([
                record.file_id,
                record.strategy,
                "+".join(record.chosen_exemplars),
                f"{record.similarity_score:.4f}",
                "" if record.cp_percent is None else f"{record.cp_percent:.4f}",
                "" if record.tp_percent is None else f"{record.tp_percent:.4f}",
                "" if record.sr_percent is None else f"{record.sr_percent:.4f}",
                record.outcome or "",
                record.timestamp.isoformat(),
                record.backend_model,
            ])
        out_path.write_text(buffer.getvalue(), encoding="utf-8")
    elif format == "json":
        payload = [record_to_dict(r) for r in ordered]
        out_path.write_text(
            json.dumps(payload, indent=2, ensure_ascii=False) + "\n",
            encoding="utf-8",
        )
    else:
        raise ValueError(f"unknown record format {format!r}")
    return out_path


def read_records_csv(path: Path | str) -> list[RunRecord]:
    with open(path, newline="", encoding="utf-8") as handle:
        rows = list(csv.DictReader(handle))
    records = []
    for row in rows:
        records.append(RunRecord(
            file_id=row["file_id"],
            strategy=row["strategy"],
            chosen_exemplars=tuple(
                row["chosen_exemplars"].split("+") if row["chosen_exemplars"] else ()
            ),
            similarity_score=float(row["similarity_score"]),
            cp_percent=float(row["cp_percent"]) if row["cp_percent"] else None,
            tp_percent=float(row["tp_percent"]) if row["tp_percent"] else None,
            sr_percent=float(row["sr_percent"]) if row["sr_percent"] else None,
            outcome=row["outcome"] or None,
            timestamp=datetime.fromisoformat(row["timestamp"]),
            backend_model=row["backend_model"],
        ))
    return records


def read_records_json(path: Path | str) -> list[RunRecord]:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    return [record_from_dict(item) for item in data]


def similarity_chart_data(
    per_file: list[tuple[str, float, float]],
    enforce_consistency: bool = True,
) -> list[ChartSeries]:
    """Two bar series (all_samples, best_subset) over files sorted by id.

    When the full candidate set was inside the search space, the best-subset
    score can never be below the all-samples score; enforce_consistency
    raises ChartConsistencyError on any violation. Empty input returns [].
    """
    if not per_file:
        return []
    ordered = sorted(per_file, key=lambda item: item[0])
    if enforce_consistency:
        for file_id, all_score, best_score in ordered:
            if best_score < all_score - 1e-12:
                raise ChartConsistencyError(
                    f"{file_id}: best_subset score {best_score} below "
                    f"all_samples score {all_score}"
                )
    all_points = tuple(
        (float(i), all_score, file_id)
        for i, (file_id, all_score, _) in enumerate(ordered)
    )
    best_points = tuple(
        (float(i), best_score, file_id)
        for i, (file_id, _, best_score) in enumerate(ordered)
    )
    return [
        ChartSeries(STRATEGY_ALL_SAMPLES, all_points),
        ChartSeries(STRATEGY_BEST_SUBSET, best_points),
    ]


def scatter_chart_data(records: list[RunRecord]) -> list[ChartSeries]:
    """One series per strategy; x = tests passed, y = code preserved."""
    series = []
    for strategy in STRATEGIES:
        points = tuple(
            (record.tp_percent, record.cp_percent, record.file_id)
            for record in _sorted_records(records)
            if record.strategy == strategy
            and record.cp_percent is not None
            and record.tp_percent is not None
        )
        series.append(ChartSeries(strategy, points))
    return series


# -- SVG rendering ------------------------------------------------------------

_WIDTH, _HEIGHT = 800, 500
_ML, _MR, _MT, _MB = 60, 20, 20, 40
_PLOT_W = _WIDTH - _ML - _MR
_PLOT_H = _HEIGHT - _MT - _MB


def _series_color(label: str, index: int) -> str:
    return SERIES_COLORS.get(label, _FALLBACK_COLORS[index % len(_FALLBACK_COLORS)])


def _scale(value: float, lo: float, hi: float, out_lo: float, out_hi: float) -> float:
    if hi == lo:
        return (out_lo + out_hi) / 2.0
    return out_lo + (value - lo) * (out_hi - out_lo) / (hi - lo)


def _axis_elements(x_lo: float, x_hi: float, y_lo: float, y_hi: float) -> list[str]:
    bottom = _MT + _PLOT_H
    right = _ML + _PLOT_W
    return [
        f'<line x1="{_ML}" y1="{bottom}" x2="{right}" y2="{bottom}" stroke="black"/>',
        f'<line x1="{_ML}" y1="{_MT}" x2="{_ML}" y2="{bottom}" stroke="black"/>',
        f'<text x="{_ML}" y="{bottom + 16}" font-size="11">{x_lo:g}</text>',
        f'<text x="{right}" y="{bottom + 16}" font-size="11" text-anchor="end">{x_hi:g}</text>',
        f'<text x="{_ML - 6}" y="{bottom}" font-size="11" text-anchor="end">{y_lo:g}</text>',
        f'<text x="{_ML - 6}" y="{_MT + 10}" font-size="11" text-anchor="end">{y_hi:g}</text>',
    ]


def _legend_elements(labels: list[str]) -> list[str]:
    elements = []
    for i, label in enumerate(labels):
        cy = _MT + 12 + 18 * i
        cx = _ML + _PLOT_W - 150
        color = _series_color(label, i)
        elements.append(
            f'<g class="legend-entry"><circle cx="{cx}" cy="{cy}" r="5" fill="{color}"/>'
            f'<text x="{cx + 10}" y="{cy + 4}" font-size="12">{label}</text></g>'
        )
    return elements


def render_svg(series: list[ChartSeries], kind: str, out_path: Path | str) -> Path:
    """Write a self-contained 800x500 chart; kind is "bars" or "scatter"."""
    if not series:
        raise ValueError("series must be non-empty")
    for s in series:
        if not s.points:
            raise ValueError(f"series {s.label!r} has no points")
    if kind not in ("bars", "scatter"):
        raise ValueError(f"unknown chart kind {kind!r}")

    xs = [p[0] for s in series for p in s.points]
    ys = [p[1] for s in series for p in s.points]
    y_lo, y_hi = min(0.0, min(ys)), max(ys)
    if y_hi == y_lo:
        y_hi = y_lo + 1.0
    bottom = _MT + _PLOT_H

    body: list[str] = []
    if kind == "bars":
        x_lo, x_hi = 0.0, float(int(max(xs)) + 1)
        group_count = int(max(xs)) + 1
        group_w = _PLOT_W / group_count
        bar_w = group_w * 0.8 / len(series)
        for s_index, s in enumerate(series):
            color = _series_color(s.label, s_index)
            for x, y, tag in s.points:
                left = _ML + x * group_w + group_w * 0.1 + s_index * bar_w
                top = _scale(y, y_lo, y_hi, bottom, _MT)
                height = bottom - top
                body.append(
                    f'<rect x="{left:.2f}" y="{top:.2f}" width="{bar_w:.2f}" '
                    f'height="{height:.2f}" fill="{color}">'
                    f"<title>{tag}: {y:.4f}</title></rect>"
                )
    else:
        x_lo, x_hi = min(0.0, min(xs)), max(xs)
        if x_hi == x_lo:
            x_hi = x_lo + 1.0
        for s_index, s in enumerate(series):
            color = _series_color(s.label, s_index)
            for x, y, tag in s.points:
                cx = _scale(x, x_lo, x_hi, _ML, _ML + _PLOT_W)
                cy = _scale(y, y_lo, y_hi, bottom, _MT)
                body.append(
                    f'<circle cx="{cx:.2f}" cy="{cy:.2f}" r="5" fill="{color}" '
                    f'fill-opacity="0.7"><title>{tag}: ({x:.4f}, {y:.4f})</title></circle>'
                )

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {_WIDTH} {_HEIGHT}" '
        f'width="{_WIDTH}" height="{_HEIGHT}" font-family="sans-serif">',
        *_axis_elements(x_lo, x_hi, y_lo, y_hi),
        *body,
        *_legend_elements([s.label for s in series]),
        "</svg>",
    ]
    out_path = Path(out_path)
    out_path.write_text("\n".join(parts) + "\n", encoding="utf-8")
    return out_path
