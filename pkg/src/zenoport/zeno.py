"""Momentum-window projector and the selective Zeno measurement loop.

A run alternates unitary evolution over dt = T/N with projections onto the
momentum window |p| < m*delta_v. Only the all-positive measurement branch
is propagated, unnormalized, so the squared norm after n measurements is
the cumulative probability that every outcome so far was positive.

The pipeline is fully deterministic: selective projections involve no
sampling and no random source exists anywhere in it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from .grid import Grid
from .propagator import make_step_plan, step_amplitudes, substep_count
from .state import Wavefunction, norm2

_SQRT_2PI = np.sqrt(2.0 * np.pi)


class BoundaryLeakError(RuntimeError):
    """Probability reached the grid edge; the periodic box is too small."""


@dataclass(frozen=True, eq=False)
class MomentumWindow:
    """Boolean mask over p_axis keeping modes with |p| strictly below m*delta_v."""

    grid: Grid
    p_cut: float
    mask: np.ndarray = field(repr=False)

    @property
    def mode_count(self) -> int:
        return int(np.count_nonzero(self.mask))


def make_window(grid: Grid, m: float, delta_v: float) -> MomentumWindow:
    p_cut = m * delta_v
    if not p_cut > 2.0 * grid.dp:
        raise ValueError(
            f"momentum window m*delta_v={p_cut:g} unresolvable (need > 2 dp = {2*grid.dp:g})"
        )
    mask = np.abs(grid.p_axis) < p_cut
    if np.count_nonzero(mask) < 3:
        raise ValueError("momentum window holds fewer than 3 modes")
    return MomentumWindow(grid, float(p_cut), mask)


def project(psi: Wavefunction, window: MomentumWindow) -> tuple[Wavefunction, float]:
    """Zero all amplitude outside the window; return (unnormalized state, step probability).

    The result is returned in the representation of the input.
    """
    n2 = norm2(psi)
    if n2 <= 0.0:
        raise ValueError("cannot project a zero-norm state")
    phat = psi.in_momentum()
    kept = phat.amplitudes * window.mask
    projected = Wavefunction(psi.grid, kept, "momentum")
    p_step = norm2(projected) / norm2(phat)
    if psi.representation == "position":
        projected = projected.in_position()
    return projected, float(p_step)


@dataclass(frozen=True)
class QzdConfig:
    """Full description of one Zeno run.

    prepare_in_window conditions the initial packet on the velocity
    criterion it is about to be monitored for: the raw Gaussian is
    projected into the window and renormalized before the clock starts.
    This is state preparation, not a counted measurement, so the survival
    product can approach unity at large N.
    """

    m: float
    delta_v: float
    horizon: float
    n_measurements: int
    max_substep: float
    snapshot_stride: int = 0  # in measurements (substeps when N = 0); 0 = none
    record_flux_at: Optional[float] = 0.0  # None disables flux sampling
    prepare_in_window: bool = True

    def __post_init__(self):
        if self.m <= 0.0:
            raise ValueError("mass must be positive")
        if self.delta_v <= 0.0:
            raise ValueError("delta_v must be positive")
        if self.horizon <= 0.0:
            raise ValueError("horizon must be positive")
        if self.n_measurements < 0:
            raise ValueError("n_measurements must be >= 0")
        if self.max_substep <= 0.0:
            raise ValueError("max_substep must be positive")
        if self.snapshot_stride < 0:
            raise ValueError("snapshot_stride must be >= 0")


class Snapshot(NamedTuple):
    t: float
    density: np.ndarray  # |psi(x)|^2 over x_axis
    current: np.ndarray  # j(x) over x_axis
    momentum_density: np.ndarray  # |phat(p)|^2 over sorted p_axis


@dataclass(eq=False)
class RunRecord:
    """Time series produced by one qzd_run.

    Measurement-resolution arrays (times, survival, step_probabilities) have
    length N; substep-resolution arrays include t = 0 and every substep, with
    post-measurement values at measurement instants.
    """

    config: QzdConfig
    times: np.ndarray
    survival: np.ndarray
    step_probabilities: np.ndarray
    sample_times: np.ndarray
    norm_series: np.ndarray
    region_prob_series: np.ndarray
    flux_series: Optional[np.ndarray]
    snapshots: list[Snapshot]
    final_state: Wavefunction

    @property
    def survival_final(self) -> float:
        if len(self.survival):
            return float(self.survival[-1])
        return float(self.norm_series[-1])


class _Sampler:
    """Per-substep observables on raw position amplitudes (and spectrum when given)."""

    def __init__(self, grid: Grid, m: float, flux_at: Optional[float]):
        self.grid = grid
        self.m = m
        self.i0 = int(np.searchsorted(grid.x_axis, 0.0))
        self.norms: list[float] = []
        self.regions: list[float] = []
        self.fluxes: Optional[list[float]] = None
        if flux_at is not None:
            self.fluxes = []
            self.j_ref = grid.index_of(flux_at)
            x_ref = grid.x_axis[self.j_ref]
            # row vector turning a raw spectrum into d(psi)/dx at x_ref
            self.deriv_row = 1j * grid.p_axis * np.exp(
                1j * grid.p_axis * (x_ref - grid.x_min)
            ) / grid.n

    def __call__(self, t: float, a: np.ndarray, spectrum: Optional[np.ndarray]) -> None:
        g = self.grid
        density = np.abs(a) ** 2
        n2 = float(density.sum() * g.dx)
        # Sharp momentum truncation leaves band-limitation tails of order
        # 1e-5 across the whole periodic box; the abort threshold must sit
        # above that floor while still catching a packet that hits the wall.
        edge = float((density[:5].sum() + density[-5:].sum()) * g.dx)
        if edge > 1e-3 * n2:
            raise BoundaryLeakError(
                f"boundary probability {edge:.3e} exceeds 1e-3 of norm at t={t:g}"
            )
        region = float(
            (density[self.i0:].sum() - 0.5 * density[self.i0] - 0.5 * density[-1]) * g.dx
        )
        self.norms.append(n2)
        self.regions.append(region)
        if self.fluxes is not None:
            if spectrum is None:
                spectrum = np.fft.fft(a)
            dpsi_ref = self.deriv_row @ spectrum
            self.fluxes.append(float(np.imag(np.conj(a[self.j_ref]) * dpsi_ref) / self.m))


def _make_snapshot(t: float, a: np.ndarray, spectrum: np.ndarray,
                   grid: Grid, m: float) -> Snapshot:
    density = np.abs(a) ** 2
    dpsi = np.fft.ifft(1j * grid.p_axis * spectrum)
    current = np.imag(np.conj(a) * dpsi) / m
    mom_density = grid.sort_momentum(np.abs(spectrum) ** 2) * (grid.dx / _SQRT_2PI) ** 2
    return Snapshot(float(t), density, current, mom_density)


def qzd_run(psi0: Wavefunction, V, config: QzdConfig) -> RunRecord:
    """Run the selective measurement sequence and record its time series.

    No measurement is applied at t = 0; the N-th falls exactly at t = horizon.
    The evolving state is the unnormalized all-positive branch, so its squared
    norm at any time is the cumulative survival probability.
    """
    if abs(norm2(psi0) - 1.0) > 1e-6:
        raise ValueError("qzd_run expects a normalized initial state")
    grid = psi0.grid
    n_meas = config.n_measurements
    window = make_window(grid, config.m, config.delta_v) if n_meas > 0 else None

    intervals = n_meas if n_meas > 0 else 1
    dt_meas = config.horizon / intervals
    n_sub = substep_count(dt_meas, config.max_substep)
    dt = dt_meas / n_sub
    plan = make_step_plan(grid, V, config.m, dt)

    sampler = _Sampler(grid, config.m, config.record_flux_at)
    stride = config.snapshot_stride

    a = psi0.in_position().amplitudes.copy()
    if window is not None and config.prepare_in_window:
        spectrum = np.fft.fft(a)
        spectrum *= window.mask
        a = np.fft.ifft(spectrum)
        a /= np.sqrt(np.sum(np.abs(a) ** 2) * grid.dx)
    spectrum = np.fft.fft(a)
    sampler(0.0, a, spectrum)
    sample_times = [0.0]
    snapshots: list[Snapshot] = []
    if stride > 0:
        snapshots.append(_make_snapshot(0.0, a, spectrum, grid, config.m))

    meas_times: list[float] = []
    survival: list[float] = []
    step_probs: list[float] = []

    step_index = 0
    for n in range(1, intervals + 1):
        for s in range(n_sub):
            a = step_amplitudes(a, plan)
            step_index += 1
            t = step_index * dt
            last_of_interval = s == n_sub - 1
            if n_meas > 0 and last_of_interval:
                # sample after the projection below, not here
                continue
            sampler(t, a, None)
            sample_times.append(t)
            if n_meas == 0 and stride > 0 and step_index % stride == 0:
                spectrum = np.fft.fft(a)
                snapshots.append(_make_snapshot(t, a, spectrum, grid, config.m))
        if n_meas > 0:
            t = step_index * dt
            spectrum = np.fft.fft(a)
            total = float(np.sum(np.abs(spectrum) ** 2))
            if total <= 0.0:
                raise ValueError(f"state lost all norm at t={t:g}")
            spectrum *= window.mask
            p_step = float(np.sum(np.abs(spectrum) ** 2)) / total
            a = np.fft.ifft(spectrum)
            sampler(t, a, spectrum)
            sample_times.append(t)
            meas_times.append(t)
            survival.append(sampler.norms[-1])
            step_probs.append(p_step)
            if stride > 0 and n % stride == 0:
                snapshots.append(_make_snapshot(t, a, spectrum, grid, config.m))

    flux = np.asarray(sampler.fluxes) if sampler.fluxes is not None else None
    return RunRecord(
        config=config,
        times=np.asarray(meas_times),
        survival=np.asarray(survival),
        step_probabilities=np.asarray(step_probs),
        sample_times=np.asarray(sample_times),
        norm_series=np.asarray(sampler.norms),
        region_prob_series=np.asarray(sampler.regions),
        flux_series=flux,
        snapshots=snapshots,
        final_state=Wavefunction(grid, a, "position"),
    )


class SweepRow(NamedTuple):
    n_measurements: int
    survival: float
    t_telep_measured: float
    refined: bool
    teleported: bool


def sweep_measurements(psi0: Wavefunction, V, base_config: QzdConfig,
                       n_list: list[int]) -> list[SweepRow]:
    """One qzd_run per measurement count, same horizon; survival and measured times."""
    from .diagnostics import teleportation_time_measured
    from .potential import mirror_turning_point
    from .state import expectation_position

    if any(n < 1 for n in n_list):
        raise ValueError("sweep requires n_measurements >= 1")
    x_target = mirror_turning_point(V, expectation_position(psi0))
    rows = []
    for n in n_list:
        stride = base_config.snapshot_stride or max(1, n // 32)
        cfg = QzdConfig(
            m=base_config.m,
            delta_v=base_config.delta_v,
            horizon=base_config.horizon,
            n_measurements=int(n),
            max_substep=base_config.max_substep,
            snapshot_stride=stride,
            record_flux_at=base_config.record_flux_at,
        )
        record = qzd_run(psi0, V, cfg)
        measured = teleportation_time_measured(record, x_target)
        rows.append(
            SweepRow(int(n), record.survival_final, measured.time,
                     measured.refined, measured.teleported)
        )
    return rows
