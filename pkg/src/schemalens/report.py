"""Report shaping and rendering: metric tables, score matrices, breakdowns.

Reports come in three formats. ``table`` is aligned text for humans, ``csv``
is the same grid for diffing, and ``records`` is machine-readable JSON that
round-trips: parsing a records dump reproduces the report values exactly
(absent cells carry ``"value": null, "absent": true``).
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .evaluation import ComparisonResult, CriterionSpec, criterion_value, round2
from .graph import MetricGraph
from .metrics import ABSENT, DEFAULT_COEFFICIENTS, Absent, MetricValue, WidthCoefficients

ABSENT_GLYPH = "-"


@dataclass
class MetricReport:
    """Named metric values per schema, one row per criterion target."""

    schemas: list[str]
    rows: list["MetricRow"] = field(default_factory=list)

    def value(self, schema: str, criterion_id: int) -> MetricValue:
        for row in self.rows:
            if row.criterion_id == criterion_id:
                return row.values[schema]
        raise KeyError(criterion_id)


@dataclass
class MetricRow:
    criterion_id: int
    metric: str
    target: str
    values: dict[str, MetricValue]


def build_metric_report(
    graphs: Mapping[str, MetricGraph] | Sequence[tuple[str, MetricGraph]],
    criteria: Sequence[CriterionSpec],
    coefficients: WidthCoefficients = DEFAULT_COEFFICIENTS,
) -> MetricReport:
    pairs = list(graphs.items()) if isinstance(graphs, Mapping) else list(graphs)
    report = MetricReport(schemas=[name for name, _ in pairs])
    for criterion in criteria:
        values = {
            name: criterion_value(graph, criterion, coefficients) for name, graph in pairs
        }
        report.rows.append(
            MetricRow(
                criterion_id=criterion.id,
                metric=criterion.metric,
                target=criterion.target_label(),
                values=values,
            )
        )
    return report


def _cell(value: MetricValue) -> str:
    if isinstance(value, Absent):
        return ABSENT_GLYPH
    if isinstance(value, float) and value.is_integer():
        return str(int(value))
    return str(value)


def render_grid(header: list[str], rows: list[list[str]]) -> str:
    widths = [max(len(str(r[i])) for r in [header] + rows) for i in range(len(header))]
    lines = []
    for row in [header, ["-" * w for w in widths]] + rows:
        lines.append("  ".join(str(cell).ljust(w) for cell, w in zip(row, widths)).rstrip())
    return "\n".join(lines) + "\n"


def grid_csv(header: list[str], rows: list[list[str]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def metric_report_grid(report: MetricReport) -> tuple[list[str], list[list[str]]]:
    header = ["criterion", "metric", *report.schemas]
    rows = [
        [f"Criterion {row.criterion_id}", row.target, *(_cell(row.values[s]) for s in report.schemas)]
        for row in report.rows
    ]
    return header, rows


def render_metric_table(report: MetricReport) -> str:
    return render_grid(*metric_report_grid(report))


def render_metric_csv(report: MetricReport) -> str:
    return grid_csv(*metric_report_grid(report))


def metric_report_records(report: MetricReport) -> list[dict]:
    records = []
    for row in report.rows:
        for schema in report.schemas:
            value = row.values[schema]
            records.append(
                {
                    "schema": schema,
                    "criterion": row.criterion_id,
                    "metric": row.metric,
                    "target": row.target,
                    "value": None if isinstance(value, Absent) else value,
                    "absent": isinstance(value, Absent),
                }
            )
    return records


def parse_metric_records(text: str) -> dict[tuple[str, int], MetricValue]:
    """Inverse of the records dump: (schema, criterion) -> value/ABSENT."""
    out: dict[tuple[str, int], MetricValue] = {}
    for record in json.loads(text):
        value = ABSENT if record["absent"] else record["value"]
        out[(record["schema"], record["criterion"])] = value
    return out


def score_matrix_grid(result: ComparisonResult) -> tuple[list[str], list[list[str]]]:
    header = ["schema", *result.cases]
    rows = [
        [schema, *(f"{round2(result.totals[schema][case]):.2f}" for case in result.cases)]
        for schema in result.schemas
    ]
    return header, rows


def render_score_table(result: ComparisonResult) -> str:
    return render_grid(*score_matrix_grid(result))


def render_score_csv(result: ComparisonResult) -> str:
    return grid_csv(*score_matrix_grid(result))


def score_records(result: ComparisonResult) -> list[dict]:
    return [
        {"schema": schema, "case": case, "score": result.totals[schema][case]}
        for schema in result.schemas
        for case in result.cases
    ]


def breakdown_grid(result: ComparisonResult) -> tuple[list[str], list[list[str]]]:
    header = ["criterion", "direction", *result.schemas]
    rows = []
    for criterion in result.criteria:
        rows.append(
            [
                f"Criterion {criterion.id}",
                criterion.direction,
                *(f"{round2(result.normalized[s][criterion.id]):.2f}" for s in result.schemas),
            ]
        )
    return header, rows


def render_breakdown_table(result: ComparisonResult) -> str:
    return render_grid(*breakdown_grid(result))


def render_breakdown_csv(result: ComparisonResult) -> str:
    return grid_csv(*breakdown_grid(result))
