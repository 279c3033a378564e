"""Optional figure rendering for scenario results.

Figures are written next to the CSV/JSON artifacts when the CLI is run
with ``--plot``; the data path never depends on matplotlib being
importable at module load time.
"""

from __future__ import annotations

import math


def render_records(rows, summary: dict, path: str) -> str | None:
    """Render one figure summarising a record set; returns the path.

    Rows whose values vary over an index axis are drawn as decay/growth
    curves (log-log when positive), margin-style rows as a bar chart.
    Returns None when there is nothing worth drawing.
    """
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    numeric = [r for r in rows if isinstance(r.value, (int, float)) and math.isfinite(r.value)]
    if not numeric:
        return None

    by_quantity: dict[str, list] = {}
    for r in numeric:
        by_quantity.setdefault(r.quantity, []).append(r)

    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    curve_like = all(len(v) > 1 for v in by_quantity.values())
    if curve_like:
        for quantity, rs in sorted(by_quantity.items()):
            xs = [r.index for r in rs]
            ys = [r.value for r in rs]
            ax.plot(xs, ys, "o-", label=quantity)
            bound_pts = [(r.index, r.bound) for r in rs if isinstance(r.bound, (int, float))]
            if bound_pts:
                ax.plot(*zip(*bound_pts), "--", color="gray",
                        label=f"{quantity} bound")
        if all(r.value > 0 for rs in by_quantity.values() for r in rs):
            ax.set_xscale("log")
            ax.set_yscale("log")
        ax.set_xlabel("index")
        ax.set_ylabel("value")
        ax.legend(fontsize=8)
    else:
        labels, values = [], []
        for quantity, rs in sorted(by_quantity.items()):
            for r in rs:
                labels.append(f"{quantity}[{r.index}]" if len(rs) > 1 else quantity)
                values.append(r.value)
        ax.bar(range(len(values)), values)
        ax.set_xticks(range(len(values)))
        ax.set_xticklabels(labels, rotation=45, ha="right", fontsize=7)
        ax.axhline(0.0, color="black", linewidth=0.8)
        ax.set_ylabel("value")
    ax.set_title(f"{summary.get('command', '')}: {summary.get('verdict', '')}")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
