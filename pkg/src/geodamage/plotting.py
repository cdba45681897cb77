"""Ranked bar charts of normalised damage, one figure per sweep."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .damage import DamageReport  # noqa: E402

STYLE = {
    "font.size": 8,
    "axes.labelsize": 9,
    "axes.titlesize": 10,
    "xtick.labelsize": 7,
    "ytick.labelsize": 7,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "svg.hashsalt": "geodamage",
}

LAYER_COLORS = {"political": "#b2182b", "economic": "#2166ac"}


def plot_ranking(reports: Sequence[DamageReport], path, title: str = "", top: int = 40) -> Path:
    """Horizontal bars of the ``top`` highest normalised damage values."""
    path = Path(path)
    shown = list(reports[:top])[::-1]
    height = max(2.0, 0.16 * len(shown) + 0.8)
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(4.5, height))
        colors = [LAYER_COLORS.get(str(r.scenario.layer), "0.4") for r in shown]
        ax.barh(range(len(shown)), [r.delta_norm for r in shown], color=colors, height=0.7)
        ax.set_yticks(range(len(shown)))
        ax.set_yticklabels([r.entity for r in shown])
        ax.set_xlim(0, 1.02)
        ax.set_xlabel("normalised damage index")
        if title:
            ax.set_title(title)
        fig.tight_layout()
        path.parent.mkdir(parents=True, exist_ok=True)
        # no timestamp/version metadata so reruns are byte-identical
        fig.savefig(path, dpi=150, metadata={"Software": None})
        plt.close(fig)
    return path
