"""File writers for run reports, heatmaps, and weights.

Everything is written UTF-8. CSV numbers are full precision; rounding
is left to whoever reads them.
"""

from __future__ import annotations

import csv
from pathlib import Path
from typing import Iterable, Mapping

from fieldsim.corpus import TagSet
from fieldsim.predictability import Heatmap
from fieldsim.runner import Report


def write_report_json(report: Report, path: str | Path) -> None:
    Path(path).write_text(report.to_json(), encoding="utf-8")


def write_cycles_csv(report: Report, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(
            ["cycle", "queried", "p1", "p2", "correct_suggestions", "pool_accuracy"]
        )
        for rec in report.cycles:
            writer.writerow(
                [
                    rec.cycle,
                    rec.queried,
                    rec.p1,
                    rec.p2,
                    rec.correct_suggestions,
                    "" if rec.pool_accuracy is None else repr(rec.pool_accuracy),
                ]
            )


def write_ledger_csv(report: Report, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["cycle", "p1", "p2", "correct_suggestions"])
        for rec in report.cycles:
            writer.writerow([rec.cycle, rec.p1, rec.p2, rec.correct_suggestions])


SUMMARY_FIELDS = ["language", "experiment", "accuracy", "nes", "p1", "p2", "p3", "n"]


def summary_row(report: Report, experiment: int | str) -> list:
    return [
        report.config["language"],
        experiment,
        repr(report.final_accuracy),
        repr(report.nes),
        report.p1,
        report.p2,
        report.p3,
        report.n_total,
    ]


def write_summary_csv(rows: Iterable[list], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(SUMMARY_FIELDS)
        for row in rows:
            writer.writerow(row)


def write_heatmap_csv(heatmap: Heatmap, path: str | Path) -> None:
    """Accuracy matrix then count matrix, absent pairs left empty."""
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        header = ["source\\target"] + [t.canonical for t in heatmap.targets]
        writer.writerow(["# accuracy"])
        writer.writerow(header)
        for i, src in enumerate(heatmap.sources):
            writer.writerow(
                [src.canonical]
                + ["" if v is None else repr(v) for v in heatmap.acc[i]]
            )
        writer.writerow(["# counts"])
        writer.writerow(header)
        for i, src in enumerate(heatmap.sources):
            writer.writerow([src.canonical] + list(heatmap.counts[i]))


def write_weights_csv(weights: Mapping[TagSet, float], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["tagset", "weight"])
        for tags in sorted(weights, key=lambda t: t.canonical):
            writer.writerow([tags.canonical, repr(weights[tags])])


def _ramp(value: float) -> str:
    """White at 0 through steel blue at 1; absent cells are drawn grey."""
    r = round(255 + (70 - 255) * value)
    g = round(255 + (130 - 255) * value)
    b = round(255 + (180 - 255) * value)
    return f"#{r:02x}{g:02x}{b:02x}"


def render_heatmap_svg(heatmap: Heatmap, path: str | Path) -> None:
    cell = 64
    label = 120
    width = label + cell * len(heatmap.targets)
    height = label + cell * len(heatmap.sources)
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'font-family="sans-serif" font-size="11">'
    ]
    for j, tgt in enumerate(heatmap.targets):
        x = label + j * cell + cell // 2
        parts.append(
            f'<text x="{x}" y="{label - 8}" text-anchor="middle">{tgt.canonical}</text>'
        )
    for i, src in enumerate(heatmap.sources):
        y = label + i * cell + cell // 2 + 4
        parts.append(
            f'<text x="{label - 8}" y="{y}" text-anchor="end">{src.canonical}</text>'
        )
        for j in range(len(heatmap.targets)):
            value = heatmap.acc[i][j]
            x = label + j * cell
            top = label + i * cell
            fill = "#dddddd" if value is None else _ramp(value)
            parts.append(
                f'<rect x="{x}" y="{top}" width="{cell}" height="{cell}" '
                f'fill="{fill}" stroke="#666666"/>'
            )
            if value is not None:
                parts.append(
                    f'<text x="{x + cell // 2}" y="{top + cell // 2 + 4}" '
                    f'text-anchor="middle">{value:.2f}</text>'
                )
    parts.append("</svg>")
    Path(path).write_text("\n".join(parts) + "\n", encoding="utf-8")
