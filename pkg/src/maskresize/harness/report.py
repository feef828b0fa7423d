"""Comparison reports: score tables plus percentage increase over the NN-NN baseline.

Scores are rounded half-even to 6 decimals when the report is built, and
percentage increases are computed from those rounded scores, so every
increase cell can be recomputed from the score cells of the same file.

CSV layout (column order is fixed)::

    # comment lines with run metadata
    target_size,strategy,label,metric,value
    ...per-label rows, then label=ALL aggregate rows...
    <blank line>
    target_size,strategy,label,metric,increase_pct,baseline
    ...

Undefined values are written as ``NA`` (CSV) or ``null`` (JSON).
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, field
from decimal import ROUND_HALF_EVEN, Decimal
from pathlib import Path

from .. import __version__
from ..metrics import percentage_increase

SCHEMA_VERSION = 1
SCORE_COLUMNS = ("target_size", "strategy", "label", "metric", "value")
INCREASE_COLUMNS = ("target_size", "strategy", "label", "metric", "increase_pct", "baseline")
PER_LABEL_METRICS = ("accuracy", "iou", "bf")
AGGREGATE_METRICS = ("global_accuracy", "mean_accuracy", "mean_iou", "weighted_iou", "mean_bf")
ALL = "ALL"
NA = "NA"
NOTE = ("scores measure mask-resampling fidelity: ground truth is NN-downsampled to the source size "
        "and resampled back; no segmentation network is trained")

_STEP = Decimal("0.000001")


def quantize(x: float | None) -> float | None:
    if x is None:
        return None
    return float(Decimal(x).quantize(_STEP, rounding=ROUND_HALF_EVEN)) + 0.0


def fmt(x: float | None) -> str:
    if x is None:
        return NA
    return str(Decimal(x).quantize(_STEP, rounding=ROUND_HALF_EVEN))


@dataclass(frozen=True)
class ReportRow:
    target_size: str
    strategy: str
    label: str
    metric: str
    value: float | None


@dataclass
class ComparisonReport:
    metadata: dict = field(default_factory=dict)
    scores: list = field(default_factory=list)
    increases: list = field(default_factory=list)
    baseline: str = "NN-NN"

    def score(self, target_size, strategy, label, metric) -> float | None:
        for r in self.scores:
            if (r.target_size, r.strategy, r.label, r.metric) == (str(target_size), strategy, str(label), metric):
                return r.value
        raise KeyError((target_size, strategy, label, metric))

    def increase(self, target_size, strategy, label, metric) -> float | None:
        for r in self.increases:
            if (r.target_size, r.strategy, r.label, r.metric) == (str(target_size), strategy, str(label), metric):
                return r.value
        raise KeyError((target_size, strategy, label, metric))

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "baseline": self.baseline,
            "metadata": dict(self.metadata),
            "scores": [asdict(r) for r in self.scores],
            "increases": [asdict(r) for r in self.increases],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ComparisonReport":
        if data.get("schema_version") != SCHEMA_VERSION:
            raise ValueError(f"unsupported report schema {data.get('schema_version')!r}")
        return cls(
            metadata=dict(data["metadata"]),
            scores=[ReportRow(**r) for r in data["scores"]],
            increases=[ReportRow(**r) for r in data["increases"]],
            baseline=data["baseline"],
        )


def _rows_for(size: str, strategy: str, rep) -> list[ReportRow]:
    rows = []
    for label in rep.labels:
        vals = (rep.per_class_accuracy[label], rep.per_class_iou[label], rep.per_class_bf[label])
        rows += [ReportRow(size, strategy, str(label), m, quantize(v)) for m, v in zip(PER_LABEL_METRICS, vals)]
    aggs = rep.aggregates()
    rows += [ReportRow(size, strategy, ALL, m, quantize(aggs[m])) for m in AGGREGATE_METRICS]
    return rows


def build_report(config, sizes, results, n_items: int) -> ComparisonReport:
    """Assemble a report from ``results[(size, strategy)] -> MetricsReport | None``."""
    meta = {
        "schema_version": SCHEMA_VERSION,
        "version": __version__,
        "mode": config.mode,
        "seed": config.seed,
        "config_hash": config.config_hash(),
        "source_size": str(config.source_size),
        "test_items": n_items,
        "note": NOTE,
    }
    report = ComparisonReport(metadata=meta)
    for size in sizes:
        base_rows = None
        for strategy in config.strategies:
            rep = results.get((size, strategy))
            if rep is None:
                continue
            rows = _rows_for(str(size), strategy, rep)
            report.scores += rows
            if strategy == report.baseline:
                base_rows = {(r.label, r.metric): r.value for r in rows}
        if base_rows is None:
            continue
        for r in report.scores:
            if r.target_size != str(size):
                continue
            b = base_rows[(r.label, r.metric)]
            inc = None if r.value is None or b is None else percentage_increase(r.value, b)
            report.increases.append(ReportRow(r.target_size, r.strategy, r.label, r.metric, quantize(inc)))
    return report


def render_csv(report: ComparisonReport) -> str:
    buf = io.StringIO()
    buf.write("# maskresize comparison report\n")
    for k, v in report.metadata.items():
        buf.write(f"# {k}: {v}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SCORE_COLUMNS)
    for r in report.scores:
        w.writerow((r.target_size, r.strategy, r.label, r.metric, fmt(r.value)))
    buf.write("\n")
    w.writerow(INCREASE_COLUMNS)
    for r in report.increases:
        w.writerow((r.target_size, r.strategy, r.label, r.metric, fmt(r.value), report.baseline))
    return buf.getvalue()


def render_json(report: ComparisonReport) -> str:
    return json.dumps(report.to_dict(), indent=2) + "\n"


def parse_csv(text: str) -> tuple[list[dict], list[dict]]:
    """Read back the two sections of a rendered CSV report (comments skipped)."""
    body = [line for line in text.splitlines() if not line.startswith("#")]
    blank = body.index("")
    sections = []
    for chunk in (body[:blank], body[blank + 1:]):
        sections.append(list(csv.DictReader(chunk)))
    return sections[0], sections[1]


def emit_report(report: ComparisonReport, format: str, path) -> Path:
    path = Path(path)
    if format == "csv":
        text = render_csv(report)
    elif format == "json":
        text = render_json(report)
    else:
        raise ValueError(f"unknown report format {format!r}")
    try:
        path.write_text(text)
    except OSError as exc:
        raise OSError(f"cannot write report to {path}: {exc.strerror or exc}") from exc
    return path
