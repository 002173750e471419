"""Render dickelab CSV outputs as static figures.

Two figure kinds are supported: a diverging heatmap over (t, beta) and a
trajectory-pair panel (two curves plus a steady-value reference line).
Every rendered number comes straight from a CSV cell; no physics is
recomputed here.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib
matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from matplotlib.colors import Normalize  # noqa: E402

STYLE_VERSION = 1
SAVEFIG_DPI = 150

HEATMAP_COLUMNS = ("beta", "t", "diff_numeric")
TRAJECTORY_COLUMNS = ("t", "value_original", "value_rotated", "steady_value")


class SchemaError(ValueError):
    """The input CSV does not carry the columns the figure kind needs."""


@dataclass(frozen=True)
class FigureSpec:
    kind: str
    input_path: str
    output_path: str
    title: str = ""
    x_label: str = "t"
    y_label: str = ""
    log_y: bool = False
    inset: dict | None = None
    style_version: int = STYLE_VERSION

    @classmethod
    def from_dict(cls, data: dict) -> "FigureSpec":
        kind = data.get("kind")
        if kind not in ("heatmap", "trajectory-pair"):
            raise SchemaError(f"unknown figure kind {kind!r}")
        for key in ("input", "output"):
            if key not in data:
                raise SchemaError(f"figure spec is missing {key!r}")
        return cls(
            kind=kind,
            input_path=data["input"],
            output_path=data["output"],
            title=data.get("title", ""),
            x_label=data.get("x_label", "t"),
            y_label=data.get("y_label", ""),
            log_y=bool(data.get("log_y", False)),
            inset=data.get("inset"),
            style_version=int(data.get("style_version", STYLE_VERSION)),
        )


def read_csv(path) -> dict[str, np.ndarray]:
    """Load a dickelab CSV (comment lines starting with '#', then a header
    row) into named float columns."""
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [row for row in csv.reader(fh) if row and not row[0].startswith("#")]
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    header, data = rows[0], rows[1:]
    table = np.array(data, dtype=float) if data else np.empty((0, len(header)))
    return {name: table[:, idx] for idx, name in enumerate(header)}


def _require_columns(columns: dict, needed, path) -> None:
    missing = [name for name in needed if name not in columns]
    if missing:
        raise SchemaError(f"{path}: missing columns {missing}; found {list(columns)}")


def diverging_norm(values: np.ndarray) -> Normalize:
    """Symmetric normalization around zero so that 0 maps to the colormap
    midpoint; an all-zero field renders as the uniform midpoint color."""
    scale = float(np.max(np.abs(values))) if values.size else 0.0
    if scale == 0.0:
        scale = 1.0
    return Normalize(vmin=-scale, vmax=scale)


def plot_heatmap(spec: FigureSpec) -> Path:
    columns = read_csv(spec.input_path)
    _require_columns(columns, HEATMAP_COLUMNS, spec.input_path)
    betas = np.unique(columns["beta"])
    times = np.unique(columns["t"])
    grid = np.full((betas.size, times.size), np.nan)
    b_idx = np.searchsorted(betas, columns["beta"])
    t_idx = np.searchsorted(times, columns["t"])
    grid[b_idx, t_idx] = columns["diff_numeric"]
    if np.any(np.isnan(grid)):
        raise SchemaError(f"{spec.input_path}: (beta, t) grid is not complete")

    norm = diverging_norm(grid)
    fig, ax = plt.subplots(figsize=(7.0, 4.6))
    mesh = ax.pcolormesh(times, betas, grid, cmap="RdBu_r", norm=norm,
                         shading="nearest")
    fig.colorbar(mesh, ax=ax, label=spec.y_label or "difference")
    ax.set_xlabel(spec.x_label)
    ax.set_ylabel("beta")
    if spec.title:
        ax.set_title(spec.title)
    out = Path(spec.output_path)
    fig.savefig(out, dpi=SAVEFIG_DPI)
    plt.close(fig)
    return out


def plot_trajectories(spec: FigureSpec) -> Path:
    columns = read_csv(spec.input_path)
    _require_columns(columns, TRAJECTORY_COLUMNS, spec.input_path)
    t = columns["t"]
    fig, ax = plt.subplots(figsize=(7.0, 4.6))
    ax.plot(t, columns["value_original"], color="red", label="original")
    ax.plot(t, columns["value_rotated"], color="blue", label="transformed")
    steady = columns["steady_value"][0] if t.size else 0.0
    ax.axhline(steady, color="gray", linestyle="--", linewidth=0.8, label="steady value")
    if spec.log_y:
        ax.set_yscale("log")
    ax.set_xlabel(spec.x_label)
    ax.set_ylabel(spec.y_label or "value")
    ax.legend(loc="upper right")
    if spec.title:
        ax.set_title(spec.title)
    if spec.inset:
        x_min = float(spec.inset["x_min"])
        x_max = float(spec.inset["x_max"])
        sub = ax.inset_axes([0.45, 0.45, 0.5, 0.4])
        window = (t >= x_min) & (t <= x_max)
        sub.plot(t[window], columns["value_original"][window], color="red")
        sub.plot(t[window], columns["value_rotated"][window], color="blue")
        if spec.log_y:
            sub.set_yscale("log")
        sub.set_xlim(x_min, x_max)
    out = Path(spec.output_path)
    fig.savefig(out, dpi=SAVEFIG_DPI)
    plt.close(fig)
    return out


def render(spec: FigureSpec) -> Path:
    if spec.kind == "heatmap":
        return plot_heatmap(spec)
    return plot_trajectories(spec)
