"""Report output: JSON, delimited CSV, and rendered figures.

The CSV is the machine-readable artifact; the figures give reviewers a
quick visual read of per-group metrics and per-field F1 without opening
the numbers.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

from .evaluation import MetricsReport

CSV_COLUMNS = (
    "scope",
    "name",
    "e_gt",
    "e_pred",
    "e_align",
    "e_correct",
    "precision",
    "recall",
    "f1",
    "accuracy",
)


def write_report_json(path: str | Path, report: MetricsReport) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(report.to_dict(), handle, ensure_ascii=False, indent=2)


def write_report_csv(path: str | Path, report: MetricsReport) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(CSV_COLUMNS)
        for name, row in sorted(report.per_field.items()):
            writer.writerow(_row("field", name, row))
        for name, row in sorted(report.per_group.items()):
            writer.writerow(_row("group", name, row))
        writer.writerow(_row("overall", "overall", report.overall))
        macro = report.macro
        writer.writerow(
            (
                "macro",
                "macro",
                "",
                "",
                "",
                "",
                f"{macro.precision:.6f}",
                f"{macro.recall:.6f}",
                f"{macro.f1:.6f}",
                f"{macro.accuracy:.6f}",
            )
        )


def _row(scope: str, name: str, row) -> tuple:
    return (
        scope,
        name,
        row.e_gt,
        row.e_pred,
        row.e_align,
        row.e_correct,
        f"{row.precision:.6f}",
        f"{row.recall:.6f}",
        f"{row.f1:.6f}",
        f"{row.accuracy:.6f}",
    )


def render_report_figures(out_dir: str | Path, report: MetricsReport) -> list[Path]:
    """Render metric figures as PNG files next to the delimited output."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    metrics = ("precision", "recall", "f1", "accuracy")
    groups = sorted(report.per_group)
    if groups:
        fig, ax = plt.subplots(figsize=(7.0, 4.0))
        width = 0.18
        for offset, metric in enumerate(metrics):
            xs = [i + (offset - 1.5) * width for i in range(len(groups))]
            ys = [getattr(report.per_group[g], metric) for g in groups]
            ax.bar(xs, ys, width=width, label=metric)
        ax.set_xticks(range(len(groups)))
        ax.set_xticklabels(groups)
        ax.set_ylim(0.0, 1.05)
        ax.set_ylabel("score")
        ax.set_title("Metrics by field group")
        ax.legend(fontsize=8, ncol=4, loc="lower right")
        fig.tight_layout()
        target = out_dir / "group_metrics.png"
        fig.savefig(target, dpi=120)
        plt.close(fig)
        written.append(target)

    fields = sorted(report.per_field)
    if fields:
        fig, ax = plt.subplots(figsize=(7.0, max(2.5, 0.3 * len(fields))))
        ys = range(len(fields))
        ax.barh(list(ys), [report.per_field[f].f1 for f in fields], color="#4878a8")
        ax.set_yticks(list(ys))
        ax.set_yticklabels(fields, fontsize=8)
        ax.invert_yaxis()
        ax.set_xlim(0.0, 1.05)
        ax.set_xlabel("F1")
        ax.set_title("F1 by field")
        fig.tight_layout()
        target = out_dir / "field_f1.png"
        fig.savefig(target, dpi=120)
        plt.close(fig)
        written.append(target)

    return written
