"""Figure rendering over persisted run directories.

Five kinds: spacetime density maps, three-panel snapshot rows, continuity
curves, survival-vs-N lines per particle, and a density animation.
Rendering is strictly read-only over its inputs.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Optional

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
from matplotlib.animation import PillowWriter
from matplotlib.colors import LogNorm

from .io import MissingDataError, read_continuity, read_snapshots, read_summary

KINDS = ("spacetime", "snapshots", "continuity", "mass_sweep", "animation")

# log-scale floor keeps the empty mid-path visible instead of blank white
DENSITY_FLOOR = 1e-6


@dataclass
class FigureJob:
    run_dir: str
    kind: str
    out_path: str
    colormap: str = "inferno"
    x_range: Optional[tuple[float, float]] = None
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown figure kind {self.kind!r}; have {KINDS}")
        if not os.path.isdir(self.run_dir):
            raise MissingDataError(f"run directory not found: {self.run_dir}")


def _save(fig, out_path: str) -> str:
    os.makedirs(os.path.dirname(os.path.abspath(out_path)), exist_ok=True)
    fig.savefig(out_path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return out_path


def render_spacetime(job: FigureJob) -> str:
    stack = read_snapshots(job.run_dir)
    fig, ax = plt.subplots(figsize=(6.0, 4.5))
    z = np.clip(stack.density, DENSITY_FLOOR, None)
    mesh = ax.pcolormesh(stack.x, stack.times, z, cmap=job.colormap,
                         norm=LogNorm(vmin=DENSITY_FLOOR, vmax=z.max()),
                         shading="nearest")
    fig.colorbar(mesh, ax=ax, label=r"$|\psi(x,t)|^2$ (a.u.)")
    if job.x_range:
        ax.set_xlim(*job.x_range)
    ax.set_xlabel("x (a.u.)")
    ax.set_ylabel("t (a.u.)")
    return _save(fig, job.out_path)


def render_snapshots(job: FigureJob) -> str:
    stack = read_snapshots(job.run_dir)
    n = len(stack.times)
    if n < 3:
        raise MissingDataError("snapshot figure needs at least three frames")
    picks = [0, int(np.argmin(np.abs(stack.times - stack.times[-1] / 2))), n - 1]
    fig, axes = plt.subplots(3, 3, figsize=(10.5, 7.5), sharex="row")
    rows = (("density", stack.density, r"$|\psi|^2$"),
            ("current", stack.current, r"$j(x)$"),
            ("momentum_density", stack.momentum_density, r"$|\hat\psi|^2$"))
    for col, k in enumerate(picks):
        for r, (name, data, label) in enumerate(rows):
            ax = axes[r][col]
            axis = stack.p if name == "momentum_density" else stack.x
            ax.plot(axis, data[k], lw=0.9)
            if r == 0:
                ax.set_title(f"t = {stack.times[k]:.3f} a.u.")
            if col == 0:
                ax.set_ylabel(label)
            if name == "momentum_density":
                ax.set_xlabel("p (a.u.)")
                lim = job.options.get("p_range")
                if lim:
                    ax.set_xlim(-lim, lim)
            else:
                ax.set_xlabel("x (a.u.)")
                if job.x_range:
                    ax.set_xlim(*job.x_range)
    fig.tight_layout()
    return _save(fig, job.out_path)


def render_continuity(job: FigureJob) -> str:
    table = read_continuity(job.run_dir)
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(table["t"], table["norm"], "k-", label="norm")
    ax.plot(table["t"], table["decrement"], "k--",
            label=r"decrement of $P_{[0,\infty)}$")
    ax.plot(table["t"], table["flux_integral"], "-", color="0.6",
            label=r"$-\int_0^t j(0,t')\,dt'$")
    ax.set_xlabel("t (a.u.)")
    ax.set_ylabel("probability")
    ax.set_ylim(-0.05, 1.1)
    ax.legend(loc="center left")
    return _save(fig, job.out_path)


def render_mass_sweep(job: FigureJob) -> str:
    rows = read_summary(job.run_dir)
    particles: dict[str, list[tuple[int, float]]] = {}
    for row in rows:
        if row["n_measurements"] > 0:
            particles.setdefault(row["particle"], []).append(
                (row["n_measurements"], row["survival"]))
    if not particles:
        raise MissingDataError("summary.csv holds no measured runs to plot")
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    markers = {"electron": "o", "muon": "D", "pion": "s", "proton": "."}
    for name, pts in sorted(particles.items()):
        pts.sort()
        ns, ps = zip(*pts)
        ax.semilogx(ns, ps, marker=markers.get(name, "x"), base=2,
                    fillstyle="none", label=name)
    ax.set_xlabel("number of measurements N")
    ax.set_ylabel(r"survival probability $P_N^{(S)}$")
    ax.set_ylim(0.0, 1.05)
    ax.legend()
    return _save(fig, job.out_path)


def render_animation(job: FigureJob) -> str:
    stack = read_snapshots(job.run_dir)
    fig, ax = plt.subplots(figsize=(6.0, 3.5))
    line, = ax.plot(stack.x, stack.density[0], lw=1.0)
    ax.set_xlabel("x (a.u.)")
    ax.set_ylabel(r"$|\psi(x,t)|^2$")
    ax.set_ylim(0.0, float(stack.density.max()) * 1.05)
    if job.x_range:
        ax.set_xlim(*job.x_range)
    title = ax.set_title("")
    fps = int(job.options.get("fps", 12))
    writer = PillowWriter(fps=fps)
    out = job.out_path if job.out_path.endswith(".gif") else job.out_path + ".gif"
    with writer.saving(fig, out, dpi=90):
        for k, t in enumerate(stack.times):
            line.set_ydata(stack.density[k])
            title.set_text(f"t = {t:.2f} a.u.")
            writer.grab_frame()
    plt.close(fig)
    return out


_RENDERERS = {
    "spacetime": render_spacetime,
    "snapshots": render_snapshots,
    "continuity": render_continuity,
    "mass_sweep": render_mass_sweep,
    "animation": render_animation,
}


def render(job: FigureJob) -> str:
    """Render one figure job; returns the written path."""
    return _RENDERERS[job.kind](job)
