"""1-D quantum Zeno dynamics simulator.

Split-step spectral Schrodinger evolution interleaved with selective
momentum-window measurements, plus the diagnostics that expose the
flux-free character of the resulting transfer.
"""

from .grid import Grid, make_grid, to_momentum, to_position
from .state import (
    HalfWidth,
    Wavefunction,
    expectation_energy,
    expectation_momentum,
    expectation_position,
    gaussian_packet,
    half_width_1e2,
    momentum_density,
    norm2,
    probability_density,
    region_probability,
)
from .potential import GaussianPotential, mirror_turning_point
from .propagator import StepPlan, evolve, make_step_plan, step
from .zeno import (
    BoundaryLeakError,
    MomentumWindow,
    QzdConfig,
    RunRecord,
    Snapshot,
    SweepRow,
    make_window,
    project,
    qzd_run,
    sweep_measurements,
)
from .diagnostics import (
    AU_LENGTH_M,
    AU_VELOCITY_MPS,
    ContinuityReport,
    MeasuredTime,
    NoTeleportationError,
    ThermalParams,
    continuity_report,
    overlap_coefficients,
    probability_current,
    teleportation_time_analytic,
    teleportation_time_measured,
    teleportation_time_thermal,
    thermal_params,
)

__version__ = "0.1.0"
