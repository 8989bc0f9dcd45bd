"""Offline report rendering: chart specs to matplotlib PNGs next to CSV output."""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .charts import ChartSpec
from .execution import ResultTable


def _series(spec: ChartSpec, channel: str) -> tuple[str, list]:
    field_name = spec.encodings[channel][0]
    return field_name, [row.get(field_name) for row in spec.data]


def render_chart_png(spec: ChartSpec, path, title: str | None = None) -> None:
    """Draw one chart spec to a PNG file."""
    fig, ax = plt.subplots(figsize=(6, 4))
    try:
        if spec.mark == "value_card":
            value = next(iter(spec.data[0].values())) if spec.data else ""
            ax.text(0.5, 0.5, str(value), ha="center", va="center", fontsize=28)
            ax.axis("off")
        elif spec.mark == "table" or not spec.data:
            ax.axis("off")
            if spec.data:
                headers = list(spec.data[0])
                cells = [[str(row.get(h, "")) for h in headers] for row in spec.data[:20]]
                ax.table(cellText=cells, colLabels=headers, loc="center")
            else:
                ax.text(0.5, 0.5, "(no rows)", ha="center", va="center")
        elif spec.mark == "histogram":
            x_name, xs = _series(spec, "x")
            ax.hist([v for v in xs if v is not None], bins=10)
            ax.set_xlabel(x_name)
            ax.set_ylabel("count")
        elif spec.mark == "heatmap":
            x_name, xs = _series(spec, "x")
            y_name, ys = _series(spec, "y")
            _, counts = _series(spec, "color")
            x_vals = sorted(set(map(str, xs)))
            y_vals = sorted(set(map(str, ys)))
            grid = [[0.0] * len(x_vals) for _ in y_vals]
            for x, y, c in zip(xs, ys, counts):
                grid[y_vals.index(str(y))][x_vals.index(str(x))] = c or 0.0
            image = ax.imshow(grid, aspect="auto")
            ax.set_xticks(range(len(x_vals)), x_vals, rotation=45, ha="right")
            ax.set_yticks(range(len(y_vals)), y_vals)
            ax.set_xlabel(x_name)
            ax.set_ylabel(y_name)
            fig.colorbar(image, ax=ax, label="count")
        else:
            x_name, xs = _series(spec, "x")
            y_name, ys = _series(spec, "y")
            if spec.mark == "bar":
                ax.bar([str(x) for x in xs], [y or 0 for y in ys])
                ax.tick_params(axis="x", rotation=45)
            elif spec.mark == "line":
                points = sorted(zip([str(x) for x in xs], ys))
                ax.plot([p[0] for p in points], [p[1] for p in points], marker="o")
                ax.tick_params(axis="x", rotation=45)
            else:  # scatter
                ax.scatter(xs, ys)
            ax.set_xlabel(x_name)
            ax.set_ylabel(y_name)
        if title:
            ax.set_title(title, fontsize=9)
        fig.tight_layout()
        fig.savefig(path, dpi=100)
    finally:
        plt.close(fig)


def write_result_csv(table: ResultTable, path) -> None:
    """Result rows as CSV, sorted for stable output."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([name for name, _ in table.columns])
        for row in sorted(table.rows, key=lambda r: tuple(str(v) for v in r)):
            writer.writerow(row)


def write_recommendations_csv(recommendations, path) -> None:
    """The ranked recommendation list as CSV."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["rank", "score", "nl", "sql"])
        for rank, rec in enumerate(recommendations):
            from .ir import synthesize_sql

            writer.writerow([rank, f"{rec.score:.6f}", rec.nl_text, synthesize_sql(rec.query)])


def write_report(recommendations, results: list[tuple[ResultTable, ChartSpec]], out_dir) -> list[str]:
    """Write recommendations.csv plus one CSV and PNG per executed candidate.

    Returns the relative file names written, in order.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written: list[str] = []

    write_recommendations_csv(recommendations, out / "recommendations.csv")
    written.append("recommendations.csv")

    for rank, (rec, (table, spec)) in enumerate(zip(recommendations, results)):
        stem = f"rec_{rank:02d}"
        write_result_csv(table, out / f"{stem}.csv")
        render_chart_png(spec, out / f"{stem}.png", title=rec.nl_text)
        written.extend([f"{stem}.csv", f"{stem}.png"])
    return written
