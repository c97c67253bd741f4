"""Figure rendering for sweep reports.

Companion to the CSV/JSON emitters: each report row set can be rendered
to a PNG next to the delimited output.  Uses the non-interactive Agg
backend so rendering works headless.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .single_execution import EntropyReport
from .two_execution import OverlapPoint


def plot_single_sweep(
    reports: list[EntropyReport], path: str, title: str = ""
) -> None:
    """Before/after entropies and losses against the spectator count."""
    ns = list(range(1, len(reports) + 1))
    fig, (ax_h, ax_loss) = plt.subplots(1, 2, figsize=(9, 3.5))
    ax_h.plot(ns, [r.before for r in reports], label="before", color="k", ls="--")
    ax_h.plot(ns, [r.after for r in reports], label="after", color="C0")
    ax_h.set_xlabel("spectators")
    ax_h.set_ylabel("entropy (bits)")
    ax_h.legend()
    ax_loss.plot(ns, [r.absolute_loss for r in reports], label="absolute", color="C1")
    ax_loss.plot(ns, [r.relative_loss for r in reports], label="relative", color="C2")
    ax_loss.set_xlabel("spectators")
    ax_loss.set_ylabel("loss")
    ax_loss.legend()
    if title:
        fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_overlap_sweep(
    points: list[OverlapPoint], path: str, title: str = ""
) -> None:
    """Conditional entropies and loss ratio against the overlap fraction."""
    overlaps = [p.overlap for p in points]
    fig, (ax_h, ax_r) = plt.subplots(1, 2, figsize=(9, 3.5))
    ax_h.plot(overlaps, [p.prior_entropy for p in points], label="prior", color="k", ls="--")
    ax_h.plot(overlaps, [p.after_first for p in points], label="after first", color="C0")
    ax_h.plot(overlaps, [p.after_second for p in points], label="after second", color="C3")
    ax_h.set_xlabel("spectator overlap")
    ax_h.set_ylabel("entropy (bits)")
    ax_h.legend()
    ax_r.plot(overlaps, [p.second_loss_ratio for p in points], color="C1")
    ax_r.set_xlabel("spectator overlap")
    ax_r.set_ylabel("second-execution loss ratio")
    if title:
        fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
