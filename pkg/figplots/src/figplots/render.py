"""Renderers for the three figure families."""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .io import SchemaError, read_heatmap, read_table

KINDS = ("heatmap", "timeseries", "comparison")

#: Columns every dynamics time-series CSV must provide.
TIMESERIES_REQUIRED = ("t", "P_L", "P_R")

#: Columns every modulation-comparison CSV must provide.
COMPARISON_REQUIRED = ("t", "P_L_eng", "P_R_eng", "P_L_full", "P_R_full")

TIME_LABEL = r"$t$ ($1/\kappa$)"


@dataclass(frozen=True)
class FigureSpec:
    """One figure to render: kind, input CSV paths, output image path."""

    kind: str
    inputs: tuple[str, ...]
    out: str
    title: str = ""
    labels: tuple[str, ...] = field(default=())

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown figure kind {self.kind!r}; choose from {KINDS}")
        if not self.inputs:
            raise ValueError("at least one input CSV is required")
        if self.labels and len(self.labels) != len(self.inputs):
            raise ValueError("labels, when given, must match the number of inputs")


def _save(fig, out: str) -> Path:
    out_path = Path(out)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    return out_path


def render_heatmap(spec: FigureSpec) -> Path:
    """Isolation-factor map: masked cells blank, contours at -1, 0, +1."""
    if len(spec.inputs) != 1:
        raise SchemaError("heatmap takes exactly one input CSV")
    dphi, dtheta, values = read_heatmap(spec.inputs[0])
    fig, ax = plt.subplots(figsize=(6.0, 5.0))
    mesh = ax.pcolormesh(
        dphi, dtheta, values, shading="nearest", cmap="RdBu_r", vmin=-1.0, vmax=1.0
    )
    fig.colorbar(mesh, ax=ax, label=r"$\Delta h$")
    # contour needs >= 2 samples per axis and at least one unmasked cell
    if dphi.size > 1 and dtheta.size > 1 and not values.mask.all():
        ax.contour(dphi, dtheta, values, levels=[-1.0, 0.0, 1.0],
                   colors="k", linewidths=0.8)
    ax.set_xlabel(r"$\Delta\varphi$ (rad)")
    ax.set_ylabel(r"$\Delta\theta$ (rad)")
    ax.set_title(spec.title or "Isolation factor")
    return _save(fig, spec.out)


def render_timeseries(spec: FigureSpec) -> Path:
    """Population (and optional concurrence) panels, one per input CSV."""
    n = len(spec.inputs)
    fig, axes = plt.subplots(n, 1, figsize=(6.0, 2.6 * n), sharex=True, squeeze=False)
    for i, path in enumerate(spec.inputs):
        table = read_table(path, TIMESERIES_REQUIRED)
        ax = axes[i, 0]
        ax.plot(table["t"], table["P_L"], label=r"$P_L$")
        ax.plot(table["t"], table["P_R"], label=r"$P_R$")
        if "C" in table:
            ax.plot(table["t"], table["C"], label=r"$C$", linestyle="-.")
        ax.set_ylabel("population")
        name = spec.labels[i] if spec.labels else Path(path).stem
        ax.set_title(name, fontsize=10)
        ax.legend(loc="best", fontsize=8)
    axes[-1, 0].set_xlabel(TIME_LABEL)
    if spec.title:
        fig.suptitle(spec.title)
    fig.tight_layout()
    return _save(fig, spec.out)


def render_comparison(spec: FigureSpec) -> Path:
    """Engineered model (solid) vs coarse-grained full model (dashed)."""
    if len(spec.inputs) != 1:
        raise SchemaError("comparison takes exactly one input CSV")
    table = read_table(spec.inputs[0], COMPARISON_REQUIRED)
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for qubit, color in (("L", "C0"), ("R", "C1")):
        ax.plot(table["t"], table[f"P_{qubit}_eng"], color=color, linestyle="-",
                label=rf"$P_{qubit}$ engineered")
        ax.plot(table["t"], table[f"P_{qubit}_full"], color=color, linestyle="--",
                label=rf"$P_{qubit}$ full (coarse-grained)")
    ax.set_xlabel(TIME_LABEL)
    ax.set_ylabel("population")
    ax.set_title(spec.title or "Engineered vs full modulated model")
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    return _save(fig, spec.out)


_RENDERERS = {
    "heatmap": render_heatmap,
    "timeseries": render_timeseries,
    "comparison": render_comparison,
}


def render(spec: FigureSpec) -> Path:
    """Render one figure; returns the output path."""
    return _RENDERERS[spec.kind](spec)
