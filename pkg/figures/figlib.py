"""Render simulation CSV output into figures.

Consumes only the documented CSV contracts of the simulation toolkit:

  aggregate sweep CSV   n,p,mean_time,std_time,num_converged,num_capped
  per-step report CSV   t,energy,active_energy,lambda,gap_bound,decrement,
                        guaranteed_decrement,total_movement,diameter,components

Lines starting with '#' are provenance comments and are skipped. Rendering
never mutates its input and embeds no timestamps, so identical input gives
byte-identical images.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Optional

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

KINDS = ("time-vs-p", "energy-trace", "lambda-trace")

_REQUIRED = {
    "time-vs-p": ("n", "p", "mean_time"),
    "energy-trace": ("t", "energy"),
    "lambda-trace": ("t", "lambda"),
}

_DEFAULT_LABELS = {
    "time-vs-p": ("edge density p", "mean convergence time (steps)"),
    "energy-trace": ("t", "energy"),
    "lambda-trace": ("t", "second eigenvalue"),
}


@dataclass
class FigureSpec:
    input_csv: str
    kind: str
    output_image: str
    x_label: Optional[str] = None
    y_label: Optional[str] = None

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown figure kind {self.kind!r} (expected one of {KINDS})")


def read_csv_rows(path: str) -> list:
    """Parse a simulation CSV, skipping '#' provenance comment lines."""
    with open(path, newline="") as fh:
        lines = [line for line in fh if not line.startswith("#")]
    if not lines:
        raise ValueError(f"{path} has no header row")
    return list(csv.DictReader(lines))


def render(spec: FigureSpec) -> str:
    """Render the figure and return the output path."""
    rows = read_csv_rows(spec.input_csv)
    header = rows[0].keys() if rows else ()
    missing = [col for col in _REQUIRED[spec.kind] if col not in header]
    if not rows:
        raise ValueError(f"{spec.input_csv} contains no data rows")
    if missing:
        raise ValueError(f"{spec.input_csv} is missing columns {missing} for {spec.kind}")

    x_label, y_label = _DEFAULT_LABELS[spec.kind]
    x_label = spec.x_label or x_label
    y_label = spec.y_label or y_label

    fig, ax = plt.subplots(figsize=(7, 4.5))
    if spec.kind == "time-vs-p":
        by_n: dict = {}
        for row in rows:
            by_n.setdefault(int(row["n"]), []).append(
                (float(row["p"]), float(row["mean_time"]))
            )
        for n, points in sorted(by_n.items()):
            points.sort()
            ax.plot(*zip(*points), marker="o", markersize=3, label=f"n={n}")
        ax.legend()
    else:
        column = "energy" if spec.kind == "energy-trace" else "lambda"
        points = sorted((float(row["t"]), float(row[column])) for row in rows)
        ax.plot(*zip(*points), marker="o", markersize=3)
    ax.set_xlabel(x_label)
    ax.set_ylabel(y_label)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(spec.output_image, dpi=150)
    plt.close(fig)
    return spec.output_image
