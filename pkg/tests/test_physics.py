import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from windxai import (
    AmbientState,
    ConfigurationError,
    DomainError,
    NominalPowerCurve,
    QuadratureSettings,
    air_density,
    density_correct_wind_speed,
    generic_2mw_curve,
    phys_base_predict,
    ti_corrected_power,
    turbulence_intensity,
    yaw_power_factor,
)

from oracles import dense_gaussian_average

# Frozen from a 40-digit evaluation of the dry-air term B / (R0 * T).
DRY_DENSITY_15C = 1.2250122659906944
# Frozen from a 40-digit evaluation of 10 * (1.3 / 1.225) ** (1/3).
CORRECTED_SPEED_EXAMPLE = 10.20005283131651


class TestAirDensity:
    def test_dry_standard_conditions(self):
        assert air_density(288.15, 101325.0, 0.0) == pytest.approx(
            DRY_DENSITY_15C, rel=1e-12)

    def test_humidity_strictly_lowers_density(self):
        dry = air_density(288.15, 101325.0, 0.0)
        humid = air_density(288.15, 101325.0, 1.0)
        assert humid < dry

    def test_linear_in_pressure_when_dry(self):
        rho = air_density(283.0, 100000.0, 0.0)
        assert air_density(283.0, 200000.0, 0.0) == pytest.approx(2.0 * rho,
                                                                  rel=1e-14)

    @pytest.mark.parametrize("t, p, phi", [
        (0.0, 101325.0, 0.5),
        (-10.0, 101325.0, 0.5),
        (283.0, 0.0, 0.5),
        (283.0, 101325.0, 1.5),
        (283.0, 101325.0, -0.1),
    ])
    def test_domain_errors(self, t, p, phi):
        with pytest.raises(DomainError):
            air_density(t, p, phi)

    @given(t=st.floats(240.0, 320.0), p=st.floats(80000.0, 110000.0),
           phi=st.floats(0.0, 1.0))
    @settings(max_examples=50, deadline=None)
    def test_positive_and_monotone_in_humidity(self, t, p, phi):
        rho = air_density(t, p, phi)
        assert rho > 0.0
        assert rho <= air_density(t, p, 0.0) + 1e-12


class TestDensityCorrection:
    def test_unit_ratio_is_identity(self):
        state = AmbientState(air_density=1.225, mean_density=1.225)
        assert density_correct_wind_speed(7.3, state) == pytest.approx(7.3, rel=1e-15)

    def test_worked_example(self):
        state = AmbientState(air_density=1.3, mean_density=1.225)
        assert density_correct_wind_speed(10.0, state) == pytest.approx(
            CORRECTED_SPEED_EXAMPLE, rel=1e-12)

    def test_zero_speed(self):
        state = AmbientState(air_density=1.3)
        assert density_correct_wind_speed(0.0, state) == 0.0

    def test_negative_speed_rejected(self):
        with pytest.raises(DomainError):
            density_correct_wind_speed(-1.0, AmbientState(air_density=1.2))

    def test_non_positive_density_rejected(self):
        with pytest.raises(DomainError):
            AmbientState(air_density=-1.0)

    @given(v=st.floats(0.0, 30.0), rho=st.floats(0.9, 1.5), k=st.floats(0.5, 2.0))
    @settings(max_examples=50, deadline=None)
    def test_cube_root_scaling_law(self, v, rho, k):
        base = density_correct_wind_speed(v, AmbientState(air_density=rho))
        scaled = density_correct_wind_speed(v, AmbientState(air_density=k * rho))
        assert scaled == pytest.approx(k ** (1.0 / 3.0) * base, rel=1e-12)


class TestTurbulenceIntensity:
    @pytest.mark.parametrize("std, mean, expected", [
        (1.0, 10.0, 0.10),
        (0.0, 5.0, 0.0),
        (2.5, 8.0, 0.3125),
    ])
    def test_ratio(self, std, mean, expected):
        assert turbulence_intensity(std, mean) == pytest.approx(expected, abs=1e-15)

    def test_zero_mean_rejected(self):
        with pytest.raises(DomainError):
            turbulence_intensity(1.0, 0.0)


class TestNominalCurve:
    def test_operational_regions(self, curve):
        assert curve.power(3.9) == 0.0
        assert curve.power(0.0) == 0.0
        assert curve.power(12.0) == curve.rated_power
        assert curve.power(20.0) == curve.rated_power
        assert curve.power(25.0) == 0.0
        assert curve.power(30.0) == 0.0

    def test_monotone_on_ramp(self, curve):
        v = np.linspace(curve.cut_in, curve.rated_speed, 400)
        p = curve.power(v)
        assert np.all(np.diff(p) >= -1e-9)

    def test_knot_validation(self):
        with pytest.raises(ConfigurationError):
            NominalPowerCurve(knot_speeds=(4.0, 4.0), knot_powers=(0.0, 10.0),
                              cut_in=4.0, rated_speed=12.0, rated_power=2000.0,
                              cut_out=25.0)
        with pytest.raises(ConfigurationError):
            NominalPowerCurve(knot_speeds=(4.0, 5.0), knot_powers=(10.0, 5.0),
                              cut_in=4.0, rated_speed=12.0, rated_power=2000.0,
                              cut_out=25.0)

    def test_csv_round_trip(self, curve, tmp_path):
        path = tmp_path / "curve.csv"
        lines = ["wind_speed,power"]
        lines += [f"{s},{p}" for s, p in zip(curve.knot_speeds, curve.knot_powers)]
        path.write_text("\n".join(lines) + "\n")
        loaded = NominalPowerCurve.from_csv(path)
        v = np.linspace(0.0, 26.0, 200)
        assert np.allclose(loaded.power(v), curve.power(v))


class TestTiCorrectedPower:
    def test_zero_ti_returns_curve_exactly(self, curve):
        for v in (0.0, 3.0, 6.5, 12.0, 18.0):
            assert ti_corrected_power(curve, v, 0.0) == curve.power(v)

    def test_at_rated_below_rated_power(self, curve):
        value = ti_corrected_power(curve, curve.rated_speed, 0.15)
        assert value < curve.rated_power
        oracle = dense_gaussian_average(curve, curve.rated_speed, 0.15)
        assert value == pytest.approx(oracle, abs=0.05)

    def test_convex_region_above_curve(self, curve):
        v = 5.0  # low-speed convex part of the ramp
        value = ti_corrected_power(curve, v, 0.15)
        assert value > curve.power(v)
        assert value == pytest.approx(dense_gaussian_average(curve, v, 0.15),
                                      abs=0.05)

    def test_grid_doubling_self_consistency(self, curve):
        for v in (5.0, 8.0, 11.0, 12.0, 14.0):
            for ti in (0.05, 0.15, 0.3):
                coarse = ti_corrected_power(curve, v, ti,
                                            QuadratureSettings(points=128))
                fine = ti_corrected_power(curve, v, ti,
                                          QuadratureSettings(points=256))
                assert abs(coarse - fine) < 0.05

    def test_small_ti_limit(self, curve):
        for v in (5.0, 8.0, 11.5):
            assert abs(ti_corrected_power(curve, v, 1e-6)
                       - curve.power(v)) < 0.1

    def test_minimum_grid_size(self, curve):
        with pytest.raises(ConfigurationError):
            QuadratureSettings(points=8)


class TestPhysBasePredict:
    def test_standard_conditions_identity(self, curve):
        for v in (5.0, 8.0, 10.5):
            assert phys_base_predict(curve, v, 1.225, 0.0) == curve.power(v)

    def test_above_cut_out_is_zero(self, curve):
        assert phys_base_predict(curve, 26.0, 1.225, 0.0) == 0.0

    def test_monotone_in_wind_speed(self, curve):
        v = np.linspace(0.0, curve.rated_speed, 300)
        p = phys_base_predict(curve, v, np.full_like(v, 1.25),
                              np.full_like(v, 0.12))
        assert np.all(np.diff(p) >= -1e-6)

    def test_output_bounded(self, curve, rng):
        v = rng.uniform(0.0, 30.0, size=200)
        rho = rng.uniform(1.0, 1.4, size=200)
        ti = rng.uniform(0.0, 0.4, size=200)
        p = phys_base_predict(curve, v, rho, ti)
        assert np.all(p >= 0.0) and np.all(p <= curve.rated_power)


class TestYawPowerFactor:
    def test_zero_misalignment(self):
        assert yaw_power_factor(0.0, 8.0, 12.0) == 1.0

    def test_cos_cubed_below_rated(self):
        assert yaw_power_factor(15.0, 8.0, 12.0) == pytest.approx(
            math.cos(math.radians(15.0)) ** 3, rel=1e-15)

    def test_at_or_above_rated_is_one(self):
        assert yaw_power_factor(15.0, 12.0, 12.0) == 1.0
        assert yaw_power_factor(40.0, 14.0, 12.0) == 1.0
