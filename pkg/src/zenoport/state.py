"""Wavefunction container and quantum observables.

States are value-like: every operation returns new arrays, nothing is
shared. Unnormalized states are first-class; observables that need a
normalized density divide by norm2 explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, NamedTuple

import numpy as np

from .grid import Grid, to_momentum, to_position

Representation = Literal["position", "momentum"]


@dataclass(eq=False)
class Wavefunction:
    """Complex amplitude field over a Grid, in one representation."""

    grid: Grid
    amplitudes: np.ndarray
    representation: Representation = "position"

    def __post_init__(self):
        if len(self.amplitudes) != self.grid.n:
            raise ValueError(
                f"amplitude length {len(self.amplitudes)} != grid size {self.grid.n}"
            )
        self.amplitudes = np.asarray(self.amplitudes, dtype=np.complex128)

    def copy(self) -> "Wavefunction":
        return Wavefunction(self.grid, self.amplitudes.copy(), self.representation)

    def in_position(self) -> "Wavefunction":
        return self if self.representation == "position" else to_position(self)

    def in_momentum(self) -> "Wavefunction":
        return self if self.representation == "momentum" else to_momentum(self)


class HalfWidth(NamedTuple):
    width: float
    multimodal: bool


def gaussian_packet(grid: Grid, x0: float, delta_x: float, p0: float = 0.0) -> Wavefunction:
    """Minimal Gaussian packet (2/pi delta_x^2)^(1/4) exp[-((x-x0)/delta_x)^2] e^{i p0 x}.

    delta_x is the half-width at 1/e^2 decay of the probability density;
    the conjugate momentum half-width is then 2/delta_x.
    """
    if delta_x < 4.0 * grid.dx:
        raise ValueError(
            f"delta_x={delta_x:g} unresolvable on dx={grid.dx:g} (need >= 4 dx)"
        )
    margin = 0.1 * grid.L
    if not (grid.x_min + margin <= x0 <= grid.x_max - margin):
        raise ValueError(f"x0={x0:g} too near the grid boundary")
    x = grid.x_axis
    a = (2.0 / (np.pi * delta_x**2)) ** 0.25 * np.exp(-(((x - x0) / delta_x) ** 2))
    a = a.astype(np.complex128)
    if p0 != 0.0:
        a *= np.exp(1j * p0 * x)
    psi = Wavefunction(grid, a, "position")
    psi.amplitudes /= np.sqrt(norm2(psi))
    return psi


def _measure(psi: Wavefunction) -> float:
    return psi.grid.dx if psi.representation == "position" else psi.grid.dp


def norm2(psi: Wavefunction) -> float:
    """Squared norm sum |psi|^2 * (dx or dp); the survival probability datum."""
    return float(np.sum(np.abs(psi.amplitudes) ** 2) * _measure(psi))


def probability_density(psi: Wavefunction) -> np.ndarray:
    """|psi(x)|^2 over x_axis."""
    return np.abs(psi.in_position().amplitudes) ** 2


def momentum_density(psi: Wavefunction) -> np.ndarray:
    """|phat(p)|^2 over the sorted momentum axis."""
    phat = psi.in_momentum()
    return psi.grid.sort_momentum(np.abs(phat.amplitudes) ** 2)


def expectation_position(psi: Wavefunction) -> float:
    """<x> on the normalized density."""
    n2 = norm2(psi)
    if n2 <= 0.0:
        raise ValueError("expectation of a zero-norm state")
    rho = probability_density(psi)
    return float(np.sum(psi.grid.x_axis * rho) * psi.grid.dx / n2)


def expectation_momentum(psi: Wavefunction) -> float:
    """<p> on the normalized density."""
    n2 = norm2(psi)
    if n2 <= 0.0:
        raise ValueError("expectation of a zero-norm state")
    phat = psi.in_momentum()
    rho = np.abs(phat.amplitudes) ** 2
    return float(np.sum(psi.grid.p_axis * rho) * psi.grid.dp / n2)


def expectation_energy(psi: Wavefunction, V, m: float) -> float:
    """<p^2/2m> + <V(x)> on the normalized density."""
    n2 = norm2(psi)
    if n2 <= 0.0:
        raise ValueError("expectation of a zero-norm state")
    g = psi.grid
    rho_x = probability_density(psi)
    rho_p = np.abs(psi.in_momentum().amplitudes) ** 2
    kinetic = np.sum(g.p_axis**2 / (2.0 * m) * rho_p) * g.dp
    potential = np.sum(V.evaluate(g.x_axis) * rho_x) * g.dx
    return float((kinetic + potential) / n2)


def region_probability(psi: Wavefunction, a: float, b: float = np.inf) -> float:
    """Probability in [a, b] by the composite trapezoid rule on the grid.

    Interval ends snap inward to grid points; b = +inf means the grid end.
    """
    if not a < b:
        raise ValueError(f"need a < b, got [{a}, {b}]")
    g = psi.grid
    rho = probability_density(psi)
    x = g.x_axis
    inside = (x >= a) & (x <= b)
    idx = np.nonzero(inside)[0]
    if len(idx) == 0:
        return 0.0
    w = np.ones(len(idx))
    w[0] = 0.5
    w[-1] = 0.5
    return float(np.sum(w * rho[idx]) * g.dx)


def half_width_1e2(psi: Wavefunction, axis: Representation = "position") -> HalfWidth:
    """Half-width where the density drops to 1/e^2 of its peak.

    Crossings on each side of the peak are located by linear interpolation
    and the two sides are averaged. A density whose super-level set at the
    1/e^2 threshold is not contiguous is flagged multimodal.
    """
    if axis == "position":
        rho = probability_density(psi)
        coords = psi.grid.x_axis
    else:
        rho = momentum_density(psi)
        coords = psi.grid.p_axis_sorted()
    peak = int(np.argmax(rho))
    level = rho[peak] * np.exp(-2.0)
    above = rho >= level
    idx = np.nonzero(above)[0]
    multimodal = bool(np.any(np.diff(idx) > 1))

    def cross(i_in: int, i_out: int) -> float:
        # linear interpolation of the threshold crossing between two nodes
        r_in, r_out = rho[i_in], rho[i_out]
        t = (r_in - level) / (r_in - r_out)
        return coords[i_in] + t * (coords[i_out] - coords[i_in])

    lo, hi = idx[0], idx[-1]
    if lo == 0 or hi == len(rho) - 1:
        raise ValueError("density does not fall below the 1/e^2 level inside the grid")
    left = cross(lo, lo - 1)
    right = cross(hi, hi + 1)
    return HalfWidth(width=float(0.5 * (right - left)), multimodal=multimodal)
