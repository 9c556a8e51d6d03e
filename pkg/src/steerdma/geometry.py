"""
Uniform circular array (UCA) geometry.

Sensors are indexed from 0 internally; sensor ``m`` here is microphone
``m + 1`` in the usual 1-based notation, sitting at azimuth
``psi_m = 2*pi*m/M`` (microphone 1 on the x axis). All angles are radians.
"""

from dataclasses import dataclass
from math import comb

import numpy as np

SPEED_OF_SOUND = 340.0


@dataclass(frozen=True)
class ArrayGeometry:
    """M omnidirectional sensors equally spaced on a circle of radius ``radius``."""

    element_count: int
    radius: float
    speed_of_sound: float = SPEED_OF_SOUND

    def __post_init__(self):
        if int(self.element_count) != self.element_count or self.element_count < 1:
            raise ValueError(f"element_count must be a positive integer, got {self.element_count!r}")
        if not self.radius > 0:
            raise ValueError(f"radius must be positive, got {self.radius!r}")
        if not self.speed_of_sound > 0:
            raise ValueError(f"speed_of_sound must be positive, got {self.speed_of_sound!r}")
        object.__setattr__(self, "element_count", int(self.element_count))

    @property
    def M(self) -> int:
        return self.element_count

    @property
    def element_angles(self) -> np.ndarray:
        return 2.0 * np.pi * np.arange(self.element_count) / self.element_count

    @property
    def positions(self) -> np.ndarray:
        """Sensor coordinates, shape (M, 2)."""
        psi = self.element_angles
        return self.radius * np.stack([np.cos(psi), np.sin(psi)], axis=1)

    def varpi(self, omega: float) -> float:
        """Dimensionless aperture ``omega * r / c``."""
        return omega * self.radius / self.speed_of_sound

    def distances(self) -> np.ndarray:
        """Inter-sensor distance matrix ``2 r |sin((i - j) pi / M)|``."""
        idx = np.arange(self.element_count)
        diff = idx[:, None] - idx[None, :]
        return 2.0 * self.radius * np.abs(np.sin(diff * np.pi / self.element_count))

    def to_dict(self) -> dict:
        return {
            "element_count": self.element_count,
            "radius": self.radius,
            "speed_of_sound": self.speed_of_sound,
        }


@dataclass(frozen=True)
class SteeringVector:
    """Steering vector (``order == 0``) or its ``order``-th angular derivative."""

    values: np.ndarray
    omega: float
    theta: float
    order: int = 0

    def __array__(self, dtype=None, copy=None):
        return self.values if dtype is None else self.values.astype(dtype)

    def __len__(self):
        return len(self.values)


def _check_omega(omega):
    if omega < 0:
        raise ValueError(f"angular frequency must be non-negative, got {omega!r}")


def steering_vector(geom: ArrayGeometry, omega: float, theta: float) -> SteeringVector:
    """Far-field plane-wave response ``exp(j varpi cos(theta - psi_m))``."""
    _check_omega(omega)
    varpi = geom.varpi(omega)
    values = np.exp(1j * varpi * np.cos(theta - geom.element_angles))
    return SteeringVector(values, float(omega), float(theta), 0)


def steering_vector_derivative(geom: ArrayGeometry, omega: float, theta: float,
                               q: int) -> SteeringVector:
    """
    ``q``-th derivative of the steering vector with respect to ``theta``.

    With ``g(theta) = j varpi cos(theta - psi)`` each element is ``exp(g)`` and
    satisfies ``D' = g' D``. Leibniz on that product gives

        D^(q) = sum_{k=0}^{q-1} C(q-1, k) g^(q-k) D^(k),

    where ``g^(p) = j varpi cos(theta - psi + p pi / 2)``. The recurrence is
    exact at every order.
    """
    if int(q) != q or q < 1:
        raise ValueError(f"derivative order must be a positive integer, got {q!r}; "
                         "use steering_vector for q = 0")
    _check_omega(omega)
    q = int(q)
    varpi = geom.varpi(omega)
    phase = theta - geom.element_angles
    g = [1j * varpi * np.cos(phase + p * np.pi / 2) for p in range(q + 1)]
    derivs = [np.exp(g[0])]
    for n in range(1, q + 1):
        acc = np.zeros(geom.element_count, dtype=complex)
        for k in range(n):
            acc += comb(n - 1, k) * g[n - k] * derivs[k]
        derivs.append(acc)
    return SteeringVector(derivs[q], float(omega), float(theta), q)


def steering_derivatives(geom: ArrayGeometry, omega: float, theta: float,
                         max_order: int) -> np.ndarray:
    """Stack of derivatives of orders ``0..max_order``, shape (max_order + 1, M)."""
    rows = [steering_vector(geom, omega, theta).values]
    rows += [steering_vector_derivative(geom, omega, theta, q).values
             for q in range(1, max_order + 1)]
    return np.array(rows)


def _sinc(x: np.ndarray) -> np.ndarray:
    # unnormalized sin(x)/x; series branch near the removable singularity
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    small = np.abs(x) < 1e-8
    out[small] = 1.0 - x[small] ** 2 / 6.0
    xs = x[~small]
    out[~small] = np.sin(xs) / xs
    return out


def diffuse_coherence(geom: ArrayGeometry, omega: float) -> np.ndarray:
    """Spherically isotropic noise coherence, entries ``sinc(omega delta_ij / c)``."""
    _check_omega(omega)
    return _sinc(omega * geom.distances() / geom.speed_of_sound)
