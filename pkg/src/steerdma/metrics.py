"""
Performance measures for a designed filter: beampattern, white noise gain,
directivity factor, ideal Nth-order patterns, main-lobe location, and a
snapshot simulator for Monte-Carlo checks of the WNG.
"""

from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .errors import NonPositiveDenominator, ZeroFilterError
from .geometry import (ArrayGeometry, diffuse_coherence, steering_vector,
                       steering_vector_derivative)
from .solver import Filter

# documented in every Monte-Carlo artifact
RNG_ALGORITHM = "numpy.random.Generator(PCG64)"
PATTERN_DB_FLOOR = -60.0


class Gain(NamedTuple):
    linear: float

    @property
    def db(self) -> float:
        return power_db(self.linear)


def power_db(x):
    """``10 log10`` of a power ratio."""
    return 10.0 * np.log10(x)


def magnitude_db(mag, floor: float = PATTERN_DB_FLOOR):
    """``20 log10 |B|`` clipped from below at ``floor``."""
    mag = np.asarray(mag, dtype=float)
    with np.errstate(divide="ignore"):
        out = 20.0 * np.log10(mag)
    return np.maximum(out, floor)


def angle_grid(step_deg: float = 0.5) -> np.ndarray:
    """Uniform grid over ``[0, 2 pi)`` in radians with the given step in degrees."""
    n = int(round(360.0 / step_deg))
    if n < 1 or abs(n * step_deg - 360.0) > 1e-9:
        raise ValueError(f"grid step {step_deg} deg must divide 360")
    return 2.0 * np.pi * np.arange(n) / n


@dataclass(frozen=True)
class BeampatternSamples:
    angles: np.ndarray
    values: np.ndarray
    omega: float
    steering: float

    def __post_init__(self):
        if len(self.angles) != len(self.values):
            raise ValueError("angles and values must have equal length")

    @property
    def magnitude(self) -> np.ndarray:
        return np.abs(self.values)

    @property
    def angles_deg(self) -> np.ndarray:
        return np.degrees(self.angles)


@dataclass(frozen=True)
class IdealPattern:
    """``sum_n a_n cos^n(theta - steering)`` with ``sum_n a_n = 1``."""

    coefficients: tuple
    steering: float = 0.0

    def __post_init__(self):
        coeffs = tuple(float(a) for a in self.coefficients)
        if not coeffs:
            raise ValueError("need at least one coefficient")
        if abs(sum(coeffs) - 1.0) > 1e-12:
            raise ValueError(f"coefficients must sum to 1, got {sum(coeffs)!r}")
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    @classmethod
    def from_null_offsets(cls, null_offsets: Sequence[float], steering: float = 0.0) -> "IdealPattern":
        """Fit ``order = len(null_offsets)`` coefficients so the pattern is 1 ahead and 0 at the nulls."""
        n = len(null_offsets)
        x = np.cos(np.concatenate([[0.0], np.asarray(null_offsets, dtype=float)]))
        vander = np.vander(x, n + 1, increasing=True)
        rhs = np.zeros(n + 1)
        rhs[0] = 1.0
        a = np.linalg.solve(vander, rhs)
        # absorb rounding so the sum-to-one invariant holds to the last bit
        a[0] += 1.0 - a.sum()
        return cls(tuple(a), steering)


@dataclass(frozen=True)
class MetricCurve:
    frequencies: np.ndarray
    values: np.ndarray
    kind: str
    spec_digest: str = ""

    def __post_init__(self):
        if len(self.frequencies) != len(self.values):
            raise ValueError("frequencies and values must have equal length")
        if np.any(np.diff(self.frequencies) <= 0):
            raise ValueError("frequencies must be strictly increasing")


def _coeffs(h) -> np.ndarray:
    return np.asarray(h.coefficients if isinstance(h, Filter) else h, dtype=complex)


def _steering(h, steering):
    if steering is not None:
        return steering
    return h.steering


def beampattern(h: Filter, geom: ArrayGeometry, grid=None) -> BeampatternSamples:
    """``B(theta) = h^H d_theta`` sampled on ``grid`` (default 0.5 deg)."""
    grid = angle_grid() if grid is None else np.asarray(grid, dtype=float)
    if grid.size == 0:
        raise ValueError("angle grid is empty")
    varpi = geom.varpi(h.omega)
    steer = np.exp(1j * varpi * np.cos(grid[:, None] - geom.element_angles[None, :]))
    values = steer @ _coeffs(h).conj()
    theta_s = h.spec.steering if h.spec is not None else float("nan")
    return BeampatternSamples(grid, values, h.omega, theta_s)


def response(h: Filter, geom: ArrayGeometry, theta: float) -> complex:
    """Single beampattern value ``h^H d_theta``."""
    return complex(_coeffs(h).conj() @ steering_vector(geom, h.omega, theta).values)


def pattern_derivative_at(h: Filter, geom: ArrayGeometry, theta: float, q: int) -> complex:
    """``q``-th angular derivative of the beampattern at ``theta``."""
    d = steering_vector_derivative(geom, h.omega, theta, q).values
    return complex(_coeffs(h).conj() @ d)


def _gain_numerator(h, geom, steering):
    c = _coeffs(h)
    if not np.any(c):
        raise ZeroFilterError("filter coefficients are all zero")
    d = steering_vector(geom, h.omega, _steering(h, steering)).values
    return c, abs(c.conj() @ d) ** 2


def wng(h: Filter, geom: ArrayGeometry, steering: Optional[float] = None) -> Gain:
    """White noise gain ``|h^H d_s|^2 / h^H h``."""
    c, num = _gain_numerator(h, geom, steering)
    return Gain(float(num / np.vdot(c, c).real))


def df(h: Filter, geom: ArrayGeometry, steering: Optional[float] = None,
       tol: float = 1e-14) -> Gain:
    """Directivity factor ``|h^H d_s|^2 / h^H Gamma_d h`` against spherically diffuse noise."""
    c, num = _gain_numerator(h, geom, steering)
    gamma = diffuse_coherence(geom, h.omega)
    den = float((c.conj() @ gamma @ c).real)
    if den <= tol * np.vdot(c, c).real:
        raise NonPositiveDenominator(f"h^H Gamma_d h = {den:.3g} is not positive")
    return Gain(float(num / den))


def ideal_pattern_eval(p: IdealPattern, theta):
    """Evaluate ``sum_n a_n cos^n(theta - steering)``."""
    x = np.cos(np.asarray(theta, dtype=float) - p.steering)
    return np.polynomial.polynomial.polyval(x, p.coefficients)


def main_lobe_direction(bp: BeampatternSamples) -> float:
    """Grid angle with the largest ``|B|``; ties go to the smallest angle."""
    order = np.argsort(bp.angles, kind="stable")
    mag = np.abs(bp.values)[order]
    return float(bp.angles[order][int(np.argmax(mag))])


def simulate_snapshots(geom: ArrayGeometry, omega: float, steering: float,
                       signal_amplitude: complex, noise_power: float,
                       count: int, rng_seed=None) -> np.ndarray:
    """
    ``count`` observations ``y = d_s X + v``, shape (count, M).

    ``v`` is circularly symmetric complex Gaussian with per-sensor variance
    ``noise_power``. Deterministic for a fixed seed.
    """
    if noise_power < 0:
        raise ValueError("noise_power must be non-negative")
    d = steering_vector(geom, omega, steering).values
    y = np.broadcast_to(d * signal_amplitude, (count, geom.element_count)).astype(complex)
    if noise_power > 0:
        rng = np.random.default_rng(rng_seed)
        scale = np.sqrt(noise_power / 2.0)
        y = y + scale * (rng.standard_normal(y.shape) + 1j * rng.standard_normal(y.shape))
    return y


def simulate_snapshot(geom: ArrayGeometry, omega: float, steering: float,
                      signal_amplitude: complex, noise_power: float, rng_seed=None) -> np.ndarray:
    """One length-M observation ``y = d_s X + v``."""
    return simulate_snapshots(geom, omega, steering, signal_amplitude, noise_power, 1, rng_seed)[0]


def apply_filter(h: Filter, y: np.ndarray) -> np.ndarray:
    """Beamformer output ``Z = h^H y`` for one snapshot or a (count, M) batch."""
    return np.asarray(y) @ _coeffs(h).conj()


def monte_carlo_noise_power(h: Filter, geom: ArrayGeometry, snapshots: int = 100_000,
                            noise_power: float = 1.0, rng_seed=0,
                            steering: Optional[float] = None) -> float:
    """Mean output power ``|h^H v|^2`` with the desired signal switched off."""
    y = simulate_snapshots(geom, h.omega, _steering(h, steering), 0.0, noise_power,
                           snapshots, rng_seed)
    return float(np.mean(np.abs(apply_filter(h, y)) ** 2))
