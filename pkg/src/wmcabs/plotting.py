"""Figure for ``check --figure``: literal probabilities at both levels."""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def literal_figure(table, path, title: str | None = None) -> None:
    """Scatter Pr(d) against Pr(m(d)) for every high-level literal ``d``.

    Points on the diagonal are literals whose probabilities agree; the
    positive literals are drawn filled and the negative ones hollow.
    """
    fig, ax = plt.subplots(figsize=(5, 5))
    pos = [(float(ph), float(pl)) for d, ph, pl in table if d.positive]
    neg = [(float(ph), float(pl)) for d, ph, pl in table if not d.positive]
    ax.plot([0, 1], [0, 1], color="0.7", linewidth=1, zorder=0)
    if pos:
        ax.scatter(*zip(*pos), label="d = p", color="tab:blue", zorder=2)
    if neg:
        ax.scatter(*zip(*neg), label="d = ~p", facecolors="none",
                   edgecolors="tab:orange", zorder=2)
    mismatched = [(d, ph, pl) for d, ph, pl in table if ph != pl]
    for d, ph, pl in mismatched[:12]:
        ax.annotate(str(d), (float(ph), float(pl)), fontsize=7,
                    xytext=(4, -8), textcoords="offset points")
    ax.set_xlim(-0.03, 1.03)
    ax.set_ylim(-0.03, 1.03)
    ax.set_xlabel("Pr(d) in the high-level theory")
    ax.set_ylabel("Pr(m(d)) in the low-level theory")
    ax.set_title(title or "literal probabilities")
    ax.legend(loc="upper left")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
