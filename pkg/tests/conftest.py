import math

import numpy as np
import pytest

from zenoport import (
    GaussianPotential,
    QzdConfig,
    gaussian_packet,
    make_grid,
    qzd_run,
    sweep_measurements,
    teleportation_time_analytic,
)

SQRT2 = math.sqrt(2.0)
T_FIG3 = 11.533  # transfer-time horizon used throughout the canonical runs


@pytest.fixture(scope="session")
def grid2048():
    return make_grid(-150.0, 150.0, 2048)


@pytest.fixture(scope="session")
def well():
    return GaussianPotential(v0=10.0, xp=30.0, kind="well")


@pytest.fixture(scope="session")
def barrier():
    return GaussianPotential(v0=10.0, xp=30.0, kind="barrier")


@pytest.fixture(scope="session")
def psi0(grid2048):
    return gaussian_packet(grid2048, 30.0, SQRT2, 0.0)


def _config(n, horizon, stride=32, flux=0.0):
    return QzdConfig(m=1.0, delta_v=SQRT2, horizon=horizon, n_measurements=n,
                     max_substep=0.05, snapshot_stride=stride, record_flux_at=flux)


@pytest.fixture(scope="session")
def fig3_record(psi0, well):
    """Canonical transfer run: N=2^10 over the analytic transfer time."""
    return qzd_run(psi0, well, _config(2**10, T_FIG3))


@pytest.fixture(scope="session")
def fig3_half_record(psi0, well):
    """Same measurement rate, half the horizon: the mid-transfer state."""
    return qzd_run(psi0, well, _config(2**9, T_FIG3 / 2))


@pytest.fixture(scope="session")
def fig3_timing_record(psi0, well):
    """Same rate, stretched horizon, so the arrival maximum is interior."""
    return qzd_run(psi0, well, _config(1331, 1.3 * T_FIG3, stride=20))


@pytest.fixture(scope="session")
def barrier_record(psi0, barrier):
    return qzd_run(psi0, barrier, _config(2**10, T_FIG3))


@pytest.fixture(scope="session")
def barrier_timing_record(psi0, barrier):
    return qzd_run(psi0, barrier, _config(1331, 1.3 * T_FIG3, stride=20))


@pytest.fixture(scope="session")
def fig4a_record(psi0, well):
    """No-measurement control over the half oscillation."""
    return qzd_run(psi0, well, _config(0, 30.0, stride=8))


@pytest.fixture(scope="session")
def fig4b_record(psi0, well):
    """Dense-measurement run showing the continuity violation."""
    return qzd_run(psi0, well, _config(2**11, T_FIG3))


@pytest.fixture(scope="session")
def fig2_sweep(psi0, well):
    """Survival versus measurement count at the fixed horizon T=30."""
    base = QzdConfig(m=1.0, delta_v=SQRT2, horizon=30.0, n_measurements=1,
                     max_substep=0.05, snapshot_stride=0, record_flux_at=None)
    return sweep_measurements(psi0, well, base, [2**k for k in range(4, 12)])


@pytest.fixture(scope="session")
def t_analytic(well):
    return teleportation_time_analytic(1.0, SQRT2, well, 30.0)
