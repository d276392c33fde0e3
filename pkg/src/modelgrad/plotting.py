"""Gap-vs-iteration plots with theoretical bound overlays (SVG)."""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .trace import RunTrace  # noqa: E402


@dataclass
class BoundCurve:
    label: str
    ks: np.ndarray
    values: np.ndarray


def emit_plot(traces: dict[str, RunTrace], bound_curves: list[BoundCurve], path) -> Path:
    """Write a self-contained SVG: one solid series per trace with a known
    optimum (log-scale gap axis) plus dashed theoretical-bound curves.

    Traces without a known optimum are skipped with a warning.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    plotted = 0
    floor = 1e-17
    for method, trace in traces.items():
        gaps = trace.gaps(averaged=(trace.method == "gd"))
        if np.all(np.isnan(gaps)):
            warnings.warn(f"trace {method!r} has no known optimum; gap series omitted")
            continue
        ks = trace.column("k")
        ax.semilogy(ks, np.maximum(gaps, floor), label=f"{method} gap")
        plotted += 1
    for curve in bound_curves:
        ax.semilogy(curve.ks, np.maximum(curve.values, floor), "--", label=curve.label)
        plotted += 1
    ax.set_xlabel("iteration k")
    ax.set_ylabel("objective gap")
    ax.grid(True, which="both", alpha=0.3)
    if plotted:
        ax.legend()
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)
    return path
