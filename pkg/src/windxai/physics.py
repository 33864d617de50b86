"""Physics-informed power curve baseline.

The baseline maps ambient conditions to expected turbine output with no
data-driven calibration: a nominal power curve under standard conditions,
an air-density correction of the measured wind speed, and a turbulence
correction that averages the curve over a Gaussian wind speed distribution
within each 10-minute interval.  A cosine-cubed factor models the output
loss under yaw misalignment below rated speed.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.interpolate import PchipInterpolator
from scipy.special import ndtr

from .errors import ConfigurationError, DataError, DomainError

#: Specific gas constant of dry air [J/(kg K)].
GAS_CONSTANT_DRY_AIR = 287.05
#: Specific gas constant of water vapour [J/(kg K)].
GAS_CONSTANT_WATER_VAPOUR = 461.5
#: ISO standard atmosphere air density [kg/m^3].
STANDARD_AIR_DENSITY = 1.225


def vapour_pressure(temperature_k):
    """Empirical water vapour pressure [Pa] as a function of temperature [K]."""
    t = np.asarray(temperature_k, dtype=float)
    return 0.0000205 * np.exp(0.0631846 * t)


def air_density(temperature_k, pressure_pa, rel_humidity):
    """Air density [kg/m^3] from temperature [K], pressure [Pa] and relative humidity.

    Uses the standard moist-air formula

        rho = (1/T) * [B/R0 - phi * Pw(T) * (1/R0 - 1/Rw)]

    with ``R0`` and ``Rw`` the gas constants of dry air and water vapour and
    ``Pw`` the vapour pressure.  Accepts scalars or arrays.
    """
    t = np.asarray(temperature_k, dtype=float)
    b = np.asarray(pressure_pa, dtype=float)
    phi = np.asarray(rel_humidity, dtype=float)
    if np.any(t <= 0.0):
        raise DomainError("temperature must be positive (kelvin)")
    if np.any(b <= 0.0):
        raise DomainError("pressure must be positive (pascal)")
    if np.any((phi < 0.0) | (phi > 1.0)):
        raise DomainError("relative humidity must lie in [0, 1]")
    pw = vapour_pressure(t)
    rho = (b / GAS_CONSTANT_DRY_AIR
           - phi * pw * (1.0 / GAS_CONSTANT_DRY_AIR - 1.0 / GAS_CONSTANT_WATER_VAPOUR)) / t
    return float(rho) if np.isscalar(temperature_k) and rho.ndim == 0 else rho


@dataclass(frozen=True)
class AmbientState:
    """Ambient conditions entering the wind speed corrections.

    ``mean_density`` is the density assumed for the nominal curve; it
    defaults to the ISO standard atmosphere and can be overridden per site.
    """

    air_density: float
    mean_density: float = STANDARD_AIR_DENSITY
    turbulence_intensity: float = 0.0

    def __post_init__(self):
        if self.air_density <= 0.0 or self.mean_density <= 0.0:
            raise DomainError("air densities must be positive")
        if self.turbulence_intensity < 0.0:
            raise DomainError("turbulence intensity must be non-negative")


def density_correct_wind_speed(wind_speed, state: AmbientState):
    """Rescale a measured wind speed to standard-density conditions.

    Returns ``v * (rho_t / rho_mean) ** (1/3)``; the cube root follows from
    the cubic dependence of wind power on wind speed.
    """
    v = np.asarray(wind_speed, dtype=float)
    if np.any(v < 0.0):
        raise DomainError("wind speed must be non-negative")
    corrected = v * (state.air_density / state.mean_density) ** (1.0 / 3.0)
    return float(corrected) if np.isscalar(wind_speed) and corrected.ndim == 0 else corrected


def turbulence_intensity(std_10min, mean_10min):
    """Turbulence intensity: ratio of 10-minute wind speed std to its mean."""
    std = np.asarray(std_10min, dtype=float)
    mean = np.asarray(mean_10min, dtype=float)
    if np.any(mean <= 0.0):
        raise DomainError("mean wind speed must be positive to define TI")
    if np.any(std < 0.0):
        raise DomainError("wind speed std must be non-negative")
    ti = std / mean
    return float(ti) if np.isscalar(std_10min) and ti.ndim == 0 else ti


@dataclass(frozen=True)
class QuadratureSettings:
    """Fixed-grid settings for the Gaussian turbulence convolution."""

    points: int = 128
    span_sigmas: float = 5.0

    def __post_init__(self):
        if self.points < 16:
            raise ConfigurationError("quadrature grid needs at least 16 points")
        if self.span_sigmas <= 0.0:
            raise ConfigurationError("quadrature span must be positive")


DEFAULT_QUADRATURE = QuadratureSettings()


@dataclass(frozen=True)
class NominalPowerCurve:
    """Nominal power curve under standard conditions.

    The curve is zero below ``cut_in`` and at or above ``cut_out``, equal to
    ``rated_power`` between ``rated_speed`` and ``cut_out``, and follows a
    monotone piecewise-cubic interpolation of the knot table in between.
    """

    knot_speeds: tuple
    knot_powers: tuple
    cut_in: float
    rated_speed: float
    rated_power: float
    cut_out: float
    _interpolator: PchipInterpolator = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        speeds = np.asarray(self.knot_speeds, dtype=float)
        powers = np.asarray(self.knot_powers, dtype=float)
        if speeds.size != powers.size or speeds.size < 2:
            raise ConfigurationError("knot table needs at least two (speed, power) pairs")
        if np.any(np.diff(speeds) <= 0.0):
            raise ConfigurationError("knot speeds must be strictly increasing")
        if np.any(np.diff(powers) < 0.0):
            raise ConfigurationError("knot powers must be non-decreasing")
        if not (0.0 <= self.cut_in < self.rated_speed < self.cut_out):
            raise ConfigurationError("expected 0 <= cut_in < rated_speed < cut_out")
        if self.rated_power <= 0.0:
            raise ConfigurationError("rated power must be positive")
        object.__setattr__(
            self, "_interpolator", PchipInterpolator(speeds, powers, extrapolate=False)
        )

    def power(self, wind_speed):
        """Nominal power [kW] at the given wind speed(s) [m/s]."""
        v = np.asarray(wind_speed, dtype=float)
        scalar = v.ndim == 0
        v = np.atleast_1d(v)
        out = np.zeros_like(v)
        ramp = (v >= self.cut_in) & (v < self.rated_speed)
        if np.any(ramp):
            lo = float(np.min(np.asarray(self.knot_speeds)))
            hi = float(np.max(np.asarray(self.knot_speeds)))
            clipped = np.clip(v[ramp], lo, hi)
            out[ramp] = np.clip(self._interpolator(clipped), 0.0, self.rated_power)
        out[(v >= self.rated_speed) & (v < self.cut_out)] = self.rated_power
        return float(out[0]) if scalar else out

    @classmethod
    def from_csv(cls, path, *, cut_in=None, rated_speed=None,
                 rated_power=None, cut_out=25.0) -> "NominalPowerCurve":
        """Load a knot table from a two-column CSV (wind speed, power).

        Region boundaries default to the table itself: cut-in is the first
        knot speed, rated power the maximum tabulated power and rated speed
        the first speed at which it is reached.
        """
        speeds, powers = [], []
        with open(path, newline="") as handle:
            for row in csv.reader(handle):
                if not row or not row[0].strip():
                    continue
                try:
                    speeds.append(float(row[0]))
                    powers.append(float(row[1]))
                except (ValueError, IndexError):
                    if speeds:
                        raise DataError(f"unparseable knot row in {path}: {row}")
                    continue  # header line
        if len(speeds) < 2:
            raise DataError(f"power curve file {path} holds fewer than two knots")
        if rated_power is None:
            rated_power = max(powers)
        if rated_speed is None:
            rated_speed = speeds[int(np.argmax(np.asarray(powers) >= rated_power))]
        if cut_in is None:
            cut_in = speeds[0]
        keep = [i for i, s in enumerate(speeds) if s <= rated_speed]
        return cls(
            knot_speeds=tuple(speeds[i] for i in keep),
            knot_powers=tuple(powers[i] for i in keep),
            cut_in=cut_in,
            rated_speed=rated_speed,
            rated_power=rated_power,
            cut_out=cut_out,
        )


# Generic 2 MW reference turbine: cut-in 4 m/s, rated 2000 kW at 12 m/s,
# cut-out 25 m/s.  Knots every 0.5 m/s, convex at low speed and concave
# approaching rated, as for typical pitch-regulated machines.
_GENERIC_2MW_SPEEDS = tuple(np.arange(4.0, 12.0 + 1e-9, 0.5))
_GENERIC_2MW_POWERS = (
    35.0, 80.0, 140.0, 215.0, 310.0, 425.0, 555.0, 700.0, 860.0,
    1030.0, 1210.0, 1390.0, 1560.0, 1710.0, 1835.0, 1935.0, 2000.0,
)


def generic_2mw_curve() -> NominalPowerCurve:
    """Built-in generic 2 MW reference curve used when no table is supplied."""
    return NominalPowerCurve(
        knot_speeds=_GENERIC_2MW_SPEEDS,
        knot_powers=_GENERIC_2MW_POWERS,
        cut_in=4.0,
        rated_speed=12.0,
        rated_power=2000.0,
        cut_out=25.0,
    )


def ti_corrected_power(curve: NominalPowerCurve, wind_speed, ti,
                       quadrature: QuadratureSettings = DEFAULT_QUADRATURE):
    """Expected power under intra-interval wind speed fluctuations.

    Averages the nominal curve over a Gaussian with mean ``wind_speed`` and
    standard deviation ``ti * wind_speed``, truncated to
    ``[max(0, v - k*sigma), v + k*sigma]``.  The smooth ramp between cut-in
    and rated speed is integrated on a fixed trapezoid grid; the constant
    rated plateau contributes its exact Gaussian mass (the jump at cut-out
    would otherwise dominate the quadrature error).  ``ti = 0`` returns the
    curve value exactly.
    """
    v = np.asarray(wind_speed, dtype=float)
    t = np.asarray(ti, dtype=float)
    if np.any(v < 0.0):
        raise DomainError("wind speed must be non-negative")
    if np.any(t < 0.0):
        raise DomainError("turbulence intensity must be non-negative")
    scalar = v.ndim == 0 and t.ndim == 0
    v, t = np.atleast_1d(v * np.ones_like(t)), np.atleast_1d(t * np.ones_like(v))

    out = np.zeros_like(v)
    sigma = t * v
    degenerate = sigma <= 0.0
    if np.any(degenerate):
        out[degenerate] = curve.power(v[degenerate])
    active = ~degenerate
    if np.any(active):
        va, sa = v[active], sigma[active]
        lo = np.maximum(0.0, va - quadrature.span_sigmas * sa)
        hi = va + quadrature.span_sigmas * sa

        ramp_lo = np.maximum(lo, curve.cut_in)
        ramp_hi = np.minimum(hi, curve.rated_speed)
        width = np.maximum(ramp_hi - ramp_lo, 0.0)
        frac = np.linspace(0.0, 1.0, quadrature.points)
        grid = ramp_lo[:, None] + width[:, None] * frac[None, :]
        pdf = np.exp(-0.5 * ((grid - va[:, None]) / sa[:, None]) ** 2)
        pdf /= sa[:, None] * np.sqrt(2.0 * np.pi)
        powers = curve.power(grid.ravel()).reshape(grid.shape)
        ramp = np.trapezoid(powers * pdf, grid, axis=1)

        plateau_lo = np.maximum(lo, curve.rated_speed)
        plateau_hi = np.minimum(hi, curve.cut_out)
        mass = np.maximum(
            ndtr((plateau_hi - va) / sa) - ndtr((plateau_lo - va) / sa), 0.0)
        out[active] = ramp + curve.rated_power * mass
    return float(out[0]) if scalar else out


def phys_base_predict(curve: NominalPowerCurve, wind_speed, rho, ti, *,
                      rho_mean: float = STANDARD_AIR_DENSITY,
                      quadrature: QuadratureSettings = DEFAULT_QUADRATURE):
    """Physics baseline prediction [kW] from (wind speed, air density, TI).

    Composes the density correction of the wind speed with the turbulence
    convolution; the result is clipped to ``[0, rated_power]``.
    """
    v = np.asarray(wind_speed, dtype=float)
    r = np.asarray(rho, dtype=float)
    if np.any(r <= 0.0) or rho_mean <= 0.0:
        raise DomainError("air density must be positive")
    if np.any(v < 0.0):
        raise DomainError("wind speed must be non-negative")
    v_eff = v * (r / rho_mean) ** (1.0 / 3.0)
    power = ti_corrected_power(curve, v_eff, ti, quadrature)
    return np.clip(power, 0.0, curve.rated_power)


def yaw_power_factor(delta_yaw_deg, wind_speed, rated_speed):
    """Power retention factor under yaw misalignment.

    ``cos^3`` of the misalignment angle below rated speed; above rated the
    controller compensates and the factor is 1.
    """
    delta = np.asarray(delta_yaw_deg, dtype=float)
    v = np.asarray(wind_speed, dtype=float)
    factor = np.where(v < rated_speed, np.cos(np.radians(delta)) ** 3, 1.0)
    if np.isscalar(delta_yaw_deg) and np.isscalar(wind_speed):
        return float(factor)
    return factor
