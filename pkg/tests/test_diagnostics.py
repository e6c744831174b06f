import math

import numpy as np
import pytest

from zenoport import (
    AU_LENGTH_M,
    AU_VELOCITY_MPS,
    GaussianPotential,
    NoTeleportationError,
    Wavefunction,
    continuity_report,
    gaussian_packet,
    make_grid,
    make_window,
    norm2,
    overlap_coefficients,
    probability_current,
    teleportation_time_analytic,
    teleportation_time_measured,
    teleportation_time_thermal,
    thermal_params,
)

SQRT2 = math.sqrt(2.0)


class TestProbabilityCurrent:
    def test_real_packet_carries_no_current(self, psi0):
        j = probability_current(psi0, 1.0)
        assert np.max(np.abs(j)) <= 1e-14

    def test_plane_wave_current(self, grid2048):
        g = grid2048
        k = 29
        amps = np.exp(1j * g.p_axis[k] * g.x_axis) / math.sqrt(g.L)
        psi = Wavefunction(g, amps)
        j = probability_current(psi, 2.0)
        expected = g.p_axis[k] / 2.0 * np.abs(amps) ** 2
        assert np.max(np.abs(j - expected)) <= 1e-14

    def test_transfer_run_flux_stays_at_floor(self, fig3_record):
        assert np.max(np.abs(fig3_record.flux_series)) <= 1e-3


class TestContinuityReport:
    def test_pure_evolution_balances(self, fig4a_record):
        rep = continuity_report(fig4a_record)
        assert rep.max_abs_residual <= 0.01
        assert rep.decrement_series[-1] == pytest.approx(
            rep.flux_integral_series[-1], abs=0.01)
        assert rep.decrement_series[-1] > 0.9

    def test_zeno_run_violates_balance(self, fig4b_record):
        rep = continuity_report(fig4b_record)
        assert rep.decrement_series[-1] >= 0.9
        assert np.max(np.abs(rep.flux_integral_series)) <= 0.01
        assert rep.max_abs_residual >= 0.9

    def test_series_start_at_zero(self, fig4a_record):
        rep = continuity_report(fig4a_record)
        assert rep.residual_series[0] == 0.0
        assert rep.decrement_series[0] == 0.0
        assert rep.flux_integral_series[0] == 0.0
        assert rep.norm_series[0] == pytest.approx(1.0, abs=1e-12)

    def test_missing_flux_rejected(self, psi0, well):
        from zenoport import QzdConfig, qzd_run

        cfg = QzdConfig(m=1.0, delta_v=SQRT2, horizon=0.5, n_measurements=4,
                        max_substep=0.05, record_flux_at=None)
        rec = qzd_run(psi0, well, cfg)
        with pytest.raises(ValueError):
            continuity_report(rec)


class TestAnalyticTimes:
    def test_fig3_value(self, well):
        t = teleportation_time_analytic(1.0, SQRT2, well, 30.0)
        assert t == pytest.approx(11.532, abs=1e-3)

    def test_equilibrium_is_rejected(self, well):
        with pytest.raises(NoTeleportationError):
            teleportation_time_analytic(1.0, SQRT2, well, 0.0)

    def test_well_barrier_symmetry(self, well, barrier):
        tw = teleportation_time_analytic(1.0, SQRT2, well, 30.0)
        tb = teleportation_time_analytic(1.0, SQRT2, barrier, 30.0)
        assert tw == tb

    def test_even_in_starting_side(self, well):
        tp = teleportation_time_analytic(1.0, SQRT2, well, 30.0)
        tm = teleportation_time_analytic(1.0, SQRT2, well, -30.0)
        assert tp == pytest.approx(tm, rel=1e-12)

    def test_thermal_electron_station(self):
        V = GaussianPotential(v0=0.4396, xp=1000.0, kind="well")
        t = teleportation_time_thermal(1.856e-3, 1.0, V, 1414.2)
        assert t == pytest.approx(512.0, rel=2e-3)
        t2 = teleportation_time_analytic(1.0, math.sqrt(1.856e-3 / 1.0), V, 1414.2)
        assert t2 == pytest.approx(t, rel=1e-12)

    def test_depth_scaling_equalizes_masses(self):
        a = 1.856e-3
        times = []
        for m in (1.0, 206.767, 273.767, 1836.0):
            V = GaussianPotential(v0=0.4396 * math.sqrt(m), xp=1000.0, kind="well")
            times.append(teleportation_time_thermal(a, m, V, 1414.2))
        assert np.ptp(times) / times[0] <= 1e-10

    def test_fixed_depth_scales_with_sqrt_mass(self):
        a = 1.856e-3
        V = GaussianPotential(v0=0.4396, xp=1000.0, kind="well")
        te = teleportation_time_thermal(a, 1.0, V, 1414.2)
        tp = teleportation_time_thermal(a, 1836.0, V, 1414.2)
        assert tp / te == pytest.approx(math.sqrt(1836.0), rel=1e-10)
        assert tp / te == pytest.approx(42.85, abs=0.01)


class TestMeasuredTime:
    def test_fig3_timing_run(self, fig3_timing_record, t_analytic):
        m = teleportation_time_measured(fig3_timing_record, -30.0)
        assert m.refined and m.teleported
        assert abs(m.time - t_analytic) / t_analytic <= 0.05

    def test_horizon_limited_run_flags_edge(self, fig3_record):
        m = teleportation_time_measured(fig3_record, -30.0)
        assert not m.refined
        assert m.time == pytest.approx(11.533, abs=1e-9)

    def test_no_arrival_is_not_teleported(self, psi0, well):
        from zenoport import QzdConfig, qzd_run

        cfg = QzdConfig(m=1.0, delta_v=SQRT2, horizon=1.0, n_measurements=16,
                        max_substep=0.05, snapshot_stride=2, record_flux_at=None)
        rec = qzd_run(psi0, well, cfg)
        m = teleportation_time_measured(rec, -30.0)
        assert not m.teleported

    def test_too_few_snapshots_rejected(self, psi0, well):
        from zenoport import QzdConfig, qzd_run

        cfg = QzdConfig(m=1.0, delta_v=SQRT2, horizon=1.0, n_measurements=4,
                        max_substep=0.05, snapshot_stride=0, record_flux_at=None)
        rec = qzd_run(psi0, well, cfg)
        with pytest.raises(ValueError):
            teleportation_time_measured(rec, -30.0)


class TestOverlapCoefficients:
    def test_initial_packet_is_pure_alpha(self, psi0, grid2048):
        alpha, beta = overlap_coefficients(psi0, grid2048, 30.0, SQRT2)
        assert abs(alpha) == pytest.approx(1.0, abs=1e-9)
        assert abs(beta) < 1e-9

    def test_final_state_is_mostly_beta(self, fig3_record, grid2048):
        w = make_window(grid2048, 1.0, SQRT2)
        psi = fig3_record.final_state
        alpha, beta = overlap_coefficients(psi, grid2048, 30.0, SQRT2, window=w)
        assert abs(alpha) ** 2 <= 0.02
        assert abs(beta) ** 2 == pytest.approx(fig3_record.survival_final, abs=0.06)
        normalized = abs(beta) ** 2 / norm2(psi)
        assert normalized >= 0.9

    def test_mid_transfer_splits_evenly(self, fig3_half_record, grid2048):
        w = make_window(grid2048, 1.0, SQRT2)
        psi = fig3_half_record.final_state
        alpha, beta = overlap_coefficients(psi, grid2048, 30.0, SQRT2, window=w)
        assert abs(abs(alpha) ** 2 - abs(beta) ** 2) <= 0.15

    def test_bessel_inequality_random_states(self, grid2048):
        rng = np.random.default_rng(5)
        for _ in range(10):
            a = rng.standard_normal(grid2048.n) + 1j * rng.standard_normal(grid2048.n)
            psi = Wavefunction(grid2048, a)
            alpha, beta = overlap_coefficients(psi, grid2048, 30.0, SQRT2)
            assert abs(alpha) ** 2 + abs(beta) ** 2 <= norm2(psi) + 1e-10

    def test_overlapping_templates_rejected(self, grid2048):
        psi = gaussian_packet(grid2048, 0.0, SQRT2, 0.0)
        with pytest.raises(ValueError):
            overlap_coefficients(psi, grid2048, SQRT2, SQRT2)


class TestThermalParams:
    def test_electron_room_temperature_si(self):
        p = thermal_params(1.856e-3, 1.0)
        assert p.v_th * AU_VELOCITY_MPS == pytest.approx(9.4e4, rel=0.02)
        assert p.delta_x * AU_LENGTH_M == pytest.approx(2.46e-9, rel=0.02)
        assert p.v_th_si == pytest.approx(9.4e4, rel=0.02)
        assert p.delta_x_si == pytest.approx(2.46e-9, rel=0.02)

    def test_algebraic_identities(self):
        rng = np.random.default_rng(9)
        for a, m in rng.uniform(0.1, 10.0, size=(20, 2)):
            p = thermal_params(a, m)
            assert p.v_th * p.m == pytest.approx(math.sqrt(a * m), rel=1e-12)
            assert p.delta_x * p.delta_p == pytest.approx(2.0, rel=1e-14)

    def test_invalid_inputs(self):
        with pytest.raises(ValueError):
            thermal_params(-1.0, 1.0)
        with pytest.raises(ValueError):
            thermal_params(1.0, 0.0)
