"""Figure rendering for the report path.

Two figures accompany the delimited report when requested: the cost
trajectory (total cycles after each kernel move, one line per scenario,
with the timing constraints drawn as horizontal guides) and a bar chart of
the percent cycle reduction per scenario.
"""

from __future__ import annotations

import os

from .engine import EngineResult
from .report import ReportRow, Scenario


def render_figures(
    results: list[tuple[Scenario, EngineResult]],
    rows: list[ReportRow],
    out_dir: str,
    stem: str = "hypart",
) -> list[str]:
    """Write the trajectory and reduction figures into ``out_dir``.

    Returns the written paths. Matplotlib is imported lazily so plain
    report runs never touch it.
    """
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    os.makedirs(out_dir, exist_ok=True)
    ordered = sorted(results, key=lambda pair: pair[0].label)
    written = []

    fig, ax = plt.subplots(figsize=(7, 4.5))
    for scenario, result in ordered:
        totals = [result.baseline.t_total] + [cost.t_total for _, cost in result.history]
        ax.plot(range(len(totals)), totals, marker="o", label=scenario.label)
        ax.axhline(scenario.constraint, linestyle="--", linewidth=0.8, color="grey")
    ax.set_xlabel("kernels moved to coarse grain")
    ax.set_ylabel("total cycles")
    ax.set_title("Cost trajectory per scenario")
    ax.legend(fontsize=8)
    fig.tight_layout()
    path = os.path.join(out_dir, f"{stem}_cost_trajectory.png")
    fig.savefig(path, dpi=150)
    plt.close(fig)
    written.append(path)

    fig, ax = plt.subplots(figsize=(7, 4.5))
    labels = [row.label for row in rows]
    ax.bar(labels, [row.pct_reduction for row in rows], color="steelblue")
    ax.set_ylabel("% cycle reduction")
    ax.set_title("Cycle reduction vs all fine-grain")
    ax.tick_params(axis="x", labelrotation=20)
    fig.tight_layout()
    path = os.path.join(out_dir, f"{stem}_pct_reduction.png")
    fig.savefig(path, dpi=150)
    plt.close(fig)
    written.append(path)

    return written
