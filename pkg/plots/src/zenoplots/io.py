"""Readers for the simulator's persisted run-directory schemas.

Everything here works from files alone: series.csv / snapshots.csv /
continuity.csv / meta.json inside a run directory, and index.json /
summary.csv at the experiment level.
"""

from __future__ import annotations

import csv
import json
import os
from dataclasses import dataclass

import numpy as np


class MissingDataError(FileNotFoundError):
    """A required file or column is absent from the run directory."""


def _require(path: str) -> str:
    if not os.path.exists(path):
        raise MissingDataError(f"missing required file: {path}")
    return path


def _read_table(path: str, required: tuple[str, ...]) -> dict[str, np.ndarray]:
    data = np.genfromtxt(_require(path), delimiter=",", names=True)
    if data.size == 0:
        raise MissingDataError(f"{path} holds no rows")
    names = data.dtype.names or ()
    for col in required:
        if col not in names:
            raise MissingDataError(f"{path} lacks column {col!r} (has {names})")
    return {name: np.atleast_1d(data[name]) for name in names}


def read_meta(run_dir: str) -> dict:
    with open(_require(os.path.join(run_dir, "meta.json"))) as fh:
        return json.load(fh)


def read_series(run_dir: str) -> dict[str, np.ndarray]:
    return _read_table(os.path.join(run_dir, "series.csv"),
                       ("t", "survival", "region_prob", "flux"))


def read_continuity(run_dir: str) -> dict[str, np.ndarray]:
    return _read_table(os.path.join(run_dir, "continuity.csv"),
                       ("t", "decrement", "flux_integral", "residual", "norm"))


@dataclass
class SnapshotStack:
    """Snapshot frames unpacked from the long-format snapshots.csv."""

    times: np.ndarray  # (n_frames,)
    x: np.ndarray  # (n_points,)
    p: np.ndarray  # (n_points,)
    density: np.ndarray  # (n_frames, n_points)
    current: np.ndarray
    momentum_density: np.ndarray


def read_snapshots(run_dir: str) -> SnapshotStack:
    cols = _read_table(os.path.join(run_dir, "snapshots.csv"),
                       ("t", "x", "density", "current", "p", "momentum_density"))
    t = cols["t"]
    times, first = np.unique(t, return_index=True)
    times = times[np.argsort(first)]
    n_frames = len(times)
    n_points = len(t) // n_frames
    if n_frames * n_points != len(t):
        raise MissingDataError("snapshots.csv rows do not tile into equal frames")

    def frames(name):
        return cols[name].reshape(n_frames, n_points)

    return SnapshotStack(
        times=times,
        x=frames("x")[0],
        p=frames("p")[0],
        density=frames("density"),
        current=frames("current"),
        momentum_density=frames("momentum_density"),
    )


def read_summary(experiment_dir: str) -> list[dict]:
    rows = []
    with open(_require(os.path.join(experiment_dir, "summary.csv"))) as fh:
        for row in csv.DictReader(fh):
            rows.append({
                "run": row["run"],
                "particle": row["particle"],
                "mass": float(row["mass"]),
                "n_measurements": int(row["n_measurements"]),
                "survival": float(row["survival"]),
            })
    if not rows:
        raise MissingDataError(f"{experiment_dir}/summary.csv holds no rows")
    return rows


def read_index(experiment_dir: str) -> dict:
    with open(_require(os.path.join(experiment_dir, "index.json"))) as fh:
        return json.load(fh)
