"""Analytic Gaussian well/barrier potentials with exact derivatives.

Closed-form derivatives are required by the teleportation-time estimate,
so no numerical differentiation is used in the physics path.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class GaussianPotential:
    """V(x) = -+ v0 exp(-x^2 / xp^2); sign 'well' is attractive."""

    v0: float
    xp: float
    kind: str = "well"  # "well" | "barrier"

    def __post_init__(self):
        if self.v0 <= 0.0:
            raise ValueError("v0 must be positive (sign is carried by kind)")
        if self.xp <= 0.0:
            raise ValueError("xp must be positive")
        if self.kind not in ("well", "barrier"):
            raise ValueError(f"kind must be 'well' or 'barrier', got {self.kind!r}")

    @property
    def sign(self) -> float:
        return -1.0 if self.kind == "well" else 1.0

    @property
    def center(self) -> float:
        # symmetry point; lets mirror_turning_point reflect exactly
        return 0.0

    def evaluate(self, x):
        return self.sign * self.v0 * np.exp(-(x**2) / self.xp**2)

    def derivative(self, x):
        return self.sign * self.v0 * (-2.0 * x / self.xp**2) * np.exp(-(x**2) / self.xp**2)

    def to_config(self) -> dict:
        return {"shape": "gaussian", "kind": self.kind, "v0": self.v0, "xp": self.xp}

    @classmethod
    def from_config(cls, cfg: dict) -> "GaussianPotential":
        if cfg.get("shape") != "gaussian":
            raise ValueError(f"unknown potential shape {cfg.get('shape')!r}")
        return cls(v0=float(cfg["v0"]), xp=float(cfg["xp"]), kind=cfg["kind"])


def mirror_turning_point(V, x0: float, step: float | None = None,
                         max_range: float | None = None) -> float:
    """Second classical turning point for a particle at rest at x0.

    Potentials exposing a symmetry `center` are reflected exactly. Otherwise
    the nearest extremum is bracketed by marching, and the root of
    V(x) = V(x0) on its far side is found by bisection to 1e-10.
    """
    g0 = float(V.derivative(x0))
    if g0 == 0.0:
        raise ValueError(f"x0={x0:g} is an equilibrium point, no turning-point pair")
    center = getattr(V, "center", None)
    if center is not None:
        return 2.0 * center - x0

    h = step if step is not None else max(abs(x0), 1.0) / 64.0
    limit = max_range if max_range is not None else 256.0 * h
    e0 = float(V.evaluate(x0))

    def _bisect(f, lo, hi, tol=1e-10):
        flo = f(lo)
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            fm = f(mid)
            if fm == 0.0 or hi - lo < tol:
                return mid
            if (flo < 0) == (fm < 0):
                lo, flo = mid, fm
            else:
                hi = mid
        return 0.5 * (lo + hi)

    # bracket the nearest extremum (sign change of V') on either side of x0
    xc = None
    steps = int(limit / h)
    for i in range(1, steps + 1):
        for s in (1.0, -1.0):
            x = x0 + s * i * h
            if (float(V.derivative(x)) < 0) != (g0 < 0):
                a, b = sorted((x0 + s * (i - 1) * h, x))
                xc = _bisect(lambda u: float(V.derivative(u)), a, b)
                break
        if xc is not None:
            break
    if xc is None:
        raise ValueError("no extremum found near x0; potential is monotone")

    # march past the extremum until V returns to V(x0), then bisect
    direction = np.sign(xc - x0)
    f = lambda u: float(V.evaluate(u)) - e0
    prev = xc
    for i in range(1, steps + 1):
        x = xc + direction * i * h
        if abs(x - x0) > limit + abs(xc - x0):
            break
        if (f(prev) < 0) != (f(x) < 0):
            a, b = sorted((prev, x))
            return float(_bisect(f, a, b))
        prev = x
    raise ValueError("no second turning point within the search range")
