"""Matplotlib rendering of integrated trajectories to image files."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .integrate import Trajectory


def render_trajectory_figures(
    traj: Trajectory, state_labels: list[str], stem: Path
) -> list[Path]:
    """Write ``<stem>_states.png`` and ``<stem>_monitors.png``.

    The states figure plots every state component against time; the
    monitors figure shows the Hamiltonian and each stored monitor series.
    Returns the written paths.
    """
    written: list[Path] = []

    fig, ax = plt.subplots(figsize=(8, 5))
    for column, label in enumerate(state_labels):
        ax.plot(traj.times, traj.states[:, column], label=label, linewidth=1.2)
    ax.set_xlabel("t")
    ax.set_ylabel("state")
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=8, ncol=max(1, len(state_labels) // 6))
    fig.tight_layout()
    states_path = stem.with_name(stem.name + "_states.png")
    fig.savefig(states_path, dpi=150)
    plt.close(fig)
    written.append(states_path)

    rows = 1 + (1 if traj.residuals else 0)
    fig, axes = plt.subplots(rows, 1, figsize=(8, 3 * rows), squeeze=False)
    ax_h = axes[0][0]
    drift = np.abs(traj.hamiltonian - traj.hamiltonian[0])
    ax_h.plot(traj.times, traj.hamiltonian, label="H", linewidth=1.2)
    ax_h.set_ylabel("H")
    ax_h.set_title(f"max |H - H(0)| = {np.max(drift, initial=0.0):.3e}", fontsize=9)
    ax_h.grid(True, alpha=0.3)
    if traj.residuals:
        ax_r = axes[1][0]
        for name, series in traj.residuals.items():
            ax_r.plot(traj.times, series, label=name, linewidth=1.2)
        ax_r.set_xlabel("t")
        ax_r.grid(True, alpha=0.3)
        ax_r.legend(fontsize=8)
    fig.tight_layout()
    monitors_path = stem.with_name(stem.name + "_monitors.png")
    fig.savefig(monitors_path, dpi=150)
    plt.close(fig)
    written.append(monitors_path)
    return written
