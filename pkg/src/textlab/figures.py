"""Render evaluation reports as figures written next to the delimited output."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def save_confusion_matrix(report: dict, path) -> str:
    """Heatmap of the report's confusion matrix with counts annotated."""
    categories = report["confusion"]["categories"]
    cells = np.array(report["confusion"]["cells"], dtype=float)
    fig, ax = plt.subplots(figsize=(1.2 * len(categories) + 2, 1.2 * len(categories) + 1.5))
    image = ax.imshow(cells, cmap="Blues")
    ax.set_xticks(range(len(categories)), categories, rotation=30, ha="right")
    ax.set_yticks(range(len(categories)), categories)
    ax.set_xlabel("predicted")
    ax.set_ylabel("gold")
    threshold = cells.max() / 2 if cells.max() else 0.5
    for i in range(len(categories)):
        for j in range(len(categories)):
            color = "white" if cells[i, j] > threshold else "black"
            ax.text(j, i, int(cells[i, j]), ha="center", va="center", color=color)
    accuracy = report["metrics"]["accuracy"]
    title = "Confusion matrix"
    if accuracy is not None:
        title += f" (accuracy {accuracy:.2f})"
    ax.set_title(title)
    fig.colorbar(image, ax=ax, shrink=0.8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return str(path)


def save_term_scores(report: dict, path, top: int = 20) -> str:
    """Horizontal bars of per-word scores, colored by predicted category."""
    rows = report["rows"][:top]
    categories = report["confusion"]["categories"]
    palette = plt.get_cmap("tab10")
    color_of = {c: palette(i % 10) for i, c in enumerate(categories)}
    fig, ax = plt.subplots(figsize=(7, 0.45 * max(len(rows), 4) + 1.5))
    positions = range(len(rows))
    ax.barh(positions, [r["score"] for r in rows],
            color=[color_of[r["predicted_category"]] for r in rows])
    ax.set_yticks(positions, [r["word"] for r in rows])
    ax.invert_yaxis()
    ax.set_xlabel("score")
    ax.set_title(f"Term scores (total {report['total_score']})")
    handles = [plt.Rectangle((0, 0), 1, 1, color=color_of[c]) for c in categories]
    ax.legend(handles, categories, loc="lower right", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return str(path)


def save_report_figures(report: dict, directory) -> list[str]:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    return [
        save_confusion_matrix(report, directory / "confusion_matrix.png"),
        save_term_scores(report, directory / "term_scores.png"),
    ]
