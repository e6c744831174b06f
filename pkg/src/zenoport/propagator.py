"""Unitary time evolution by symmetric (Strang) split-step spectral stepping.

One step of size dt applies

    exp(-i V dt/2) . IFFT . exp(-i p^2/(2m) dt) . FFT . exp(-i V dt/2)

which is norm-preserving and second-order accurate in dt. The transform
normalization and x_min phases cancel inside the step, so the raw FFT pair
is used in the hot loop.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .grid import Grid
from .state import Wavefunction


@dataclass(frozen=True)
class StepPlan:
    """Cached phase tables for one step size dt on one grid."""

    grid: Grid
    m: float
    dt: float
    half_potential: np.ndarray = field(repr=False)  # exp(-i V(x) dt/2)
    kinetic: np.ndarray = field(repr=False)  # exp(-i p^2/(2m) dt)


def make_step_plan(grid: Grid, V, m: float, dt: float) -> StepPlan:
    if m <= 0.0:
        raise ValueError("mass must be positive")
    vx = np.asarray(V.evaluate(grid.x_axis), dtype=float)
    half_potential = np.exp(-0.5j * vx * dt)
    kinetic = np.exp(-1j * grid.p_axis**2 / (2.0 * m) * dt)
    return StepPlan(grid, float(m), float(dt), half_potential, kinetic)


def step_amplitudes(a: np.ndarray, plan: StepPlan) -> np.ndarray:
    """One Strang step on a raw position-space amplitude array."""
    b = a * plan.half_potential
    b = np.fft.ifft(plan.kinetic * np.fft.fft(b))
    b *= plan.half_potential
    return b


def step(psi: Wavefunction, plan: StepPlan) -> Wavefunction:
    """One Strang step of a position-representation wavefunction."""
    if psi.representation != "position":
        raise ValueError("step expects a position-representation state")
    if psi.grid != plan.grid:
        raise ValueError("wavefunction grid does not match the step plan")
    return Wavefunction(psi.grid, step_amplitudes(psi.amplitudes, plan), "position")


def substep_count(duration: float, max_substep: float) -> int:
    if max_substep <= 0.0:
        raise ValueError("max_substep must be positive")
    return max(1, math.ceil(duration / max_substep - 1e-12))


def evolve(psi: Wavefunction, V, m: float, duration: float,
           max_substep: float, observer=None) -> Wavefunction:
    """Evolve for exactly `duration` in equal substeps capped at max_substep.

    observer(t, amplitudes), if given, is called after every substep with
    the current time and the raw position-space amplitudes (read-only).
    """
    if duration < 0.0:
        raise ValueError("duration must be nonnegative")
    if psi.representation != "position":
        raise ValueError("evolve expects a position-representation state")
    if duration == 0.0:
        return psi.copy()
    n_sub = substep_count(duration, max_substep)
    dt = duration / n_sub
    plan = make_step_plan(psi.grid, V, m, dt)
    a = psi.amplitudes.copy()
    for s in range(1, n_sub + 1):
        a = step_amplitudes(a, plan)
        if observer is not None:
            observer(s * dt, a)
    return Wavefunction(psi.grid, a, "position")
