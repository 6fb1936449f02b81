"""Tabular and graphical reports of a plan's shortest linearization."""
from __future__ import annotations

import csv
import io

from .linearize import shortest_linearization
from .plans import ConcurrentPlan


def schedule_rows(plan: ConcurrentPlan, lin=None) -> list[tuple[int, str, str, str]]:
    """(tick, agent, step label, action) for every non-noop cell."""
    if lin is None:
        lin = shortest_linearization(plan) or []
    rows = []
    for k, tick in enumerate(lin, start=1):
        for agent in plan.agents:
            sid = tick.get(agent)
            if sid is None:
                continue
            step = plan.ground(plan.steps[sid])
            rows.append((k, agent, f"A{sid}", str(step)))
    return rows


def schedule_tsv(plan: ConcurrentPlan, lin=None) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, delimiter="\t", lineterminator="\n")
    w.writerow(["tick", "agent", "step", "action"])
    w.writerows(schedule_rows(plan, lin))
    return buf.getvalue()


def gantt(plan: ConcurrentPlan, path: str, lin=None, title: str | None = None) -> None:
    """Write a per-agent Gantt chart of the linearization to ``path``."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    if lin is None:
        lin = shortest_linearization(plan) or []
    rows = schedule_rows(plan, lin)
    agents = list(plan.agents)
    names = sorted({r[3].strip("()").split()[0] for r in rows})
    cmap = plt.get_cmap("tab10")
    colour = {n: cmap(k % 10) for k, n in enumerate(names)}

    fig, ax = plt.subplots(figsize=(max(4.0, 1.4 * len(lin) + 1.5), 0.7 * len(agents) + 1.2))
    for tick, agent, label, action in rows:
        y = agents.index(agent)
        ax.broken_barh([(tick - 0.45, 0.9)], (y - 0.35, 0.7),
                       facecolors=colour[action.strip("()").split()[0]], edgecolor="k", linewidth=0.6)
        ax.text(tick, y, f"{label}\n{action}", ha="center", va="center", fontsize=7)
    ax.set_yticks(range(len(agents)))
    ax.set_yticklabels(agents)
    ax.set_xticks(range(1, len(lin) + 1))
    ax.set_xlim(0.4, len(lin) + 0.6)
    ax.set_ylim(-0.6, len(agents) - 0.4)
    ax.invert_yaxis()
    ax.set_xlabel("tick")
    ax.grid(axis="x", linestyle=":", linewidth=0.5)
    ax.set_title(title or plan.name or "plan")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
