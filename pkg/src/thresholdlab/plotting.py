"""Figures written next to the CSV reports."""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .experiments import KKReport  # noqa: E402
from .fragments import ProcessTranscript, success1_log_bound  # noqa: E402

LOG10 = math.log(10)


def _finish(fig, path: Path) -> Path:
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_round_costs(transcripts: list[ProcessTranscript], path: str | Path) -> Path:
    """log10 of each round's cover cost against the round's success bound."""
    fig, ax = plt.subplots(figsize=(6, 4))
    gamma = max(tr.schedule.gamma for tr in transcripts)
    s = transcripts[0].schedule
    rounds = list(range(1, s.gamma + 1))
    ax.plot(rounds, [success1_log_bound(s.L_at(i), s.ell_at(i)) / LOG10 for i in rounds], "k--", label="round bound")
    for tr in transcripts:
        xs = [r.i for r in tr.rounds if r.cover]
        ys = [r.log_cost / LOG10 for r in tr.rounds if r.cover]
        ax.plot(xs, ys, "o-", alpha=0.4, color="tab:green" if tr.terminated_successfully else "tab:red", ms=3)
    ax.set_xlabel("round i")
    ax.set_ylabel("log10 cover cost")
    ax.set_xlim(0.5, gamma + 0.5)
    ax.legend(loc="best", fontsize=8)
    return _finish(fig, Path(path))


def plot_kk(reports: list[KKReport], path: str | Path) -> Path:
    """Expectation threshold against threshold, one point per instance."""
    fig, ax = plt.subplots(figsize=(5, 5))
    pts = [(r.q, r.p_c, str(r.instance)) for r in reports if r.q is not None]
    ax.plot([0, 1], [0, 1], "k:", lw=1)
    for q, pc, label in pts:
        ax.scatter(q, pc, s=14)
        ax.annotate(label, (q, pc), fontsize=6, xytext=(3, 3), textcoords="offset points")
    ax.set_xlabel("q (expectation threshold)")
    ax.set_ylabel("p_c (threshold)")
    ax.set_xlim(0, 1)
    ax.set_ylim(0, 1)
    return _finish(fig, Path(path))
