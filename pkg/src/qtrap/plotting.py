"""Figure rendering: PNG files written next to the delimited output."""

from __future__ import annotations

from typing import Mapping, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .analysis import EventReport


def _masked(values: Sequence[float | None]) -> np.ndarray:
    return np.array([np.nan if v is None else v for v in values], dtype=float)


def render_series(
    path: str,
    t: Sequence[float],
    series: Mapping[str, Sequence[float | None]],
    ylabel: str | None = None,
    title: str | None = None,
) -> None:
    """Single-axes line plot of the named series against rescaled time."""
    fig, ax = plt.subplots(figsize=(9, 4.5))
    for label, values in series.items():
        ax.plot(t, _masked(values), lw=0.8, label=label)
    ax.set_xlabel("t (rescaled)")
    if ylabel:
        ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title)
    if len(series) > 1:
        ax.legend(loc="best", fontsize="small")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_panels(
    path: str,
    panels: Sequence[tuple[str, Sequence[float], Mapping[str, Sequence[float | None]]]],
    title: str | None = None,
) -> None:
    """Stacked subplots, one per (label, t, series) panel, sharing the x axis."""
    fig, axes = plt.subplots(
        len(panels), 1, figsize=(9, 2.8 * len(panels)), sharex=True, squeeze=False
    )
    for ax, (label, t, series) in zip(axes[:, 0], panels):
        for name, values in series.items():
            ax.plot(t, _masked(values), lw=0.8, label=name)
        ax.set_ylabel(label)
        if len(series) > 1:
            ax.legend(loc="best", fontsize="small")
    axes[-1, 0].set_xlabel("t (rescaled)")
    if title:
        fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_events(
    path: str,
    t: Sequence[float],
    sp: Sequence[float | None],
    inv: Sequence[float | None],
    report: EventReport,
) -> None:
    """Inversion and S(P) panels with detected events and onset intervals marked."""
    fig, (ax_inv, ax_sp) = plt.subplots(2, 1, figsize=(9, 5.6), sharex=True)
    ax_inv.plot(t, _masked(inv), lw=0.6, color="tab:gray")
    ax_inv.set_ylabel("Inv")
    ax_sp.plot(t, _masked(sp), lw=0.8, color="tab:blue")
    ax_sp.set_ylabel("S(P)")
    ax_sp.set_xlabel("t (rescaled)")
    colors = {"revival": "tab:green", "collapse": "tab:red"}
    seen = set()
    for ev in report.events:
        label = ev.kind if ev.kind not in seen else None
        seen.add(ev.kind)
        for ax in (ax_inv, ax_sp):
            ax.axvline(ev.t, color=colors.get(ev.kind, "k"), lw=1.0, ls="--",
                       label=label if ax is ax_sp else None)
    for lo, hi in report.onsets:
        ax_sp.axvspan(lo, hi, color="tab:blue", alpha=0.08)
    if report.events:
        ax_sp.legend(loc="best", fontsize="small")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
