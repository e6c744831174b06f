"""Uniform periodic position lattice and its conjugate momentum lattice.

The transform pair is fixed here once for the whole package:

    phat_k = dx/sqrt(2*pi) * exp(-i p_k x_min) * FFT(psi)_k
    psi_j  = sqrt(2*pi)/dx * IFFT(phat_k * exp(+i p_k x_min))_j

With these factors both representations carry the same norm under their
natural measures (sum |psi|^2 dx == sum |phat|^2 dp), and phat_k samples
the continuum Fourier transform at p_k, absolute-position phases included.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

_SQRT_2PI = np.sqrt(2.0 * np.pi)


@dataclass(frozen=True, eq=False)
class Grid:
    """Periodic spatial lattice of n points on [x_min, x_max).

    p_axis is kept in natural FFT ordering (0, dp, ..., -dp) so that
    momentum masks apply directly to transform output.
    """

    x_min: float
    x_max: float
    n: int
    dx: float
    L: float
    dp: float
    x_axis: np.ndarray = field(repr=False)
    p_axis: np.ndarray = field(repr=False)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Grid):
            return NotImplemented
        return (self.x_min, self.x_max, self.n) == (other.x_min, other.x_max, other.n)

    def __hash__(self) -> int:
        return hash((self.x_min, self.x_max, self.n))

    def p_axis_sorted(self) -> np.ndarray:
        """Momenta in ascending order (for export and plotting)."""
        return np.fft.fftshift(self.p_axis)

    def sort_momentum(self, values: np.ndarray) -> np.ndarray:
        """Reorder a field given on p_axis to ascending-momentum order."""
        return np.fft.fftshift(values)

    def index_of(self, x: float) -> int:
        """Index of the grid point nearest to x."""
        j = int(round((x - self.x_min) / self.dx))
        return min(max(j, 0), self.n - 1)


def make_grid(x_min: float, x_max: float, n: int) -> Grid:
    """Build a Grid. n must be a power of two, at least 16."""
    if x_max <= x_min:
        raise ValueError(f"x_max must exceed x_min, got [{x_min}, {x_max}]")
    if n < 16 or (n & (n - 1)) != 0:
        raise ValueError(f"n must be a power of two >= 16, got {n}")
    L = float(x_max - x_min)
    dx = L / n
    dp = 2.0 * np.pi / L
    x_axis = x_min + dx * np.arange(n)
    k = np.fft.fftfreq(n, d=1.0 / n)  # 0..n/2-1, -n/2..-1
    p_axis = k * dp
    return Grid(float(x_min), float(x_max), int(n), dx, L, dp, x_axis, p_axis)


def to_momentum(psi):
    """Unitary transform of a position-representation wavefunction.

    Returns a new momentum-representation Wavefunction on the same grid.
    """
    from .state import Wavefunction

    if psi.representation != "position":
        raise ValueError("to_momentum expects a position-representation state")
    g = psi.grid
    phat = np.fft.fft(psi.amplitudes)
    phat *= (g.dx / _SQRT_2PI) * np.exp(-1j * g.p_axis * g.x_min)
    return Wavefunction(g, phat, "momentum")


def to_position(psi):
    """Inverse of to_momentum."""
    from .state import Wavefunction

    if psi.representation != "momentum":
        raise ValueError("to_position expects a momentum-representation state")
    g = psi.grid
    a = np.fft.ifft(psi.amplitudes * np.exp(1j * g.p_axis * g.x_min))
    a *= _SQRT_2PI / g.dx
    return Wavefunction(g, a, "position")
