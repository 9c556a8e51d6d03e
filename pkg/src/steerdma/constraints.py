"""
Constraint systems ``D_C h = i_beta`` for the three design methods.

* ``DerivCon``: unit gain at the look direction, prescribed angular
  derivatives of the beampattern there (first derivative zero), and nulls.
* ``Null``: unit gain plus nulls, nothing else. Known to mis-steer on a UCA.
* ``SymNull``: unit gain plus nulls that come in mirror pairs about the
  look direction.

Each null may carry a multiplicity ``Q``; the derivatives of orders
``0..Q-1`` of the beampattern vanish at that angle.

Every row is the conjugate of a steering vector (or one of its angular
derivatives), so ``row @ h`` is the conjugate of the matching beampattern
quantity ``h^H d``. All right-hand sides are real, so constraining the
conjugate is the same as constraining the quantity itself.
"""

import hashlib
import json
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np

from .errors import FeasibilityError, SpecError
from .geometry import ArrayGeometry, steering_vector, steering_vector_derivative

METHODS = ("DerivCon", "Null", "SymNull")

ANGLE_TOL = 1e-9
TWO_PI = 2.0 * np.pi


def wrap_angle(theta: float) -> float:
    """Map an angle to ``[0, 2 pi)``."""
    out = float(np.mod(theta, TWO_PI))
    return 0.0 if out >= TWO_PI else out


def angular_distance(a: float, b: float) -> float:
    d = abs(np.mod(a - b + np.pi, TWO_PI) - np.pi)
    return float(d)


def derived_null_angles(steering: float, offsets: Sequence[float]) -> list:
    """Absolute null angles ``steering + offset``, wrapped to ``[0, 2 pi)``."""
    return [wrap_angle(steering + off) for off in offsets]


def mirror_offsets(offsets: Sequence[float]) -> list:
    """
    Complete a list of null offsets with their mirror images ``-offset``.

    Offsets that are their own mirror (0 or pi) are kept once. Order is
    preserved: each offset is followed by its mirror if the mirror is new.
    """
    out = []
    for off in offsets:
        for cand in (off, -off):
            if all(angular_distance(cand, o) > ANGLE_TOL for o in out):
                out.append(cand)
    return out


def default_i_beta(order: int, null_rows: int) -> np.ndarray:
    """Unit gain, odd derivatives 0, even derivatives -2, nulls 0."""
    derivs = [0.0 if q % 2 else -2.0 for q in range(1, order + 1)]
    return np.array([1.0] + derivs + [0.0] * null_rows)


@dataclass(frozen=True)
class NullSpec:
    angle: float
    multiplicity: int = 1

    def __post_init__(self):
        if int(self.multiplicity) != self.multiplicity or self.multiplicity < 1:
            raise SpecError(f"null multiplicity must be a positive integer, got {self.multiplicity!r}")
        object.__setattr__(self, "angle", float(self.angle))
        object.__setattr__(self, "multiplicity", int(self.multiplicity))


@dataclass(frozen=True)
class DesignSpec:
    """
    What to design at every frequency.

    Parameters
    ----------
    method : {"DerivCon", "Null", "SymNull"}
    order : int
        Differential order N. Sets the number of derivative rows for DerivCon;
        informational for the other methods.
    steering : float
        Look direction in radians.
    nulls : sequence of NullSpec
        Absolute null angles in radians.
    i_beta : sequence of float, optional
        DerivCon right-hand side. Defaults to :func:`default_i_beta`.
    """

    method: str
    order: int
    steering: float
    nulls: Tuple[NullSpec, ...] = ()
    i_beta: Optional[Tuple[float, ...]] = None

    def __post_init__(self):
        if self.method not in METHODS:
            raise SpecError(f"unknown method {self.method!r}; expected one of {METHODS}")
        if int(self.order) != self.order or self.order < 1:
            raise SpecError(f"order must be a positive integer, got {self.order!r}")
        object.__setattr__(self, "order", int(self.order))
        object.__setattr__(self, "steering", float(self.steering))
        nulls = tuple(n if isinstance(n, NullSpec) else NullSpec(*n) for n in self.nulls)
        object.__setattr__(self, "nulls", nulls)

        for i, a in enumerate(nulls):
            if angular_distance(a.angle, self.steering) <= ANGLE_TOL:
                raise SpecError("a null coincides with the steering direction")
            for b in nulls[i + 1:]:
                if angular_distance(a.angle, b.angle) <= ANGLE_TOL:
                    raise SpecError(f"duplicate null angle {a.angle!r}")

        if self.i_beta is not None:
            if self.method != "DerivCon":
                raise SpecError("i_beta only applies to the DerivCon method")
            arr = np.asarray(self.i_beta)
            if np.iscomplexobj(arr):
                if np.any(arr.imag != 0):
                    raise SpecError("i_beta entries must be real")
                arr = arr.real
            object.__setattr__(self, "i_beta", tuple(float(v) for v in arr))

        if self.method == "SymNull":
            self._check_symmetric()

    @property
    def null_rows(self) -> int:
        return sum(n.multiplicity for n in self.nulls)

    @property
    def row_count(self) -> int:
        if self.method == "DerivCon":
            return 1 + self.order + self.null_rows
        return 1 + self.null_rows

    def rhs(self) -> np.ndarray:
        if self.method != "DerivCon":
            rhs = np.zeros(self.row_count)
            rhs[0] = 1.0
            return rhs
        if self.i_beta is None:
            return default_i_beta(self.order, self.null_rows)
        return np.array(self.i_beta, dtype=float)

    def _check_symmetric(self):
        for n in self.nulls:
            mirror = 2.0 * self.steering - n.angle
            partner = [m for m in self.nulls if angular_distance(m.angle, mirror) <= ANGLE_TOL]
            if not partner:
                raise SpecError(
                    f"null at {np.degrees(n.angle):.6g} deg has no mirror about the steering "
                    f"direction {np.degrees(self.steering):.6g} deg")
            if partner[0].multiplicity != n.multiplicity:
                raise SpecError("mirrored nulls must share the same multiplicity")

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "order": self.order,
            "steering_rad": self.steering,
            "nulls": [{"angle_rad": n.angle, "multiplicity": n.multiplicity} for n in self.nulls],
            "i_beta": [float(v) for v in self.rhs()],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "DesignSpec":
        nulls = tuple(NullSpec(n["angle_rad"], n.get("multiplicity", 1)) for n in d.get("nulls", ()))
        i_beta = d.get("i_beta") if d["method"] == "DerivCon" else None
        return cls(d["method"], d["order"], d["steering_rad"], nulls,
                   tuple(i_beta) if i_beta is not None else None)

    def digest(self, geom: Optional[ArrayGeometry] = None) -> str:
        """Short stable hash of the spec (and geometry, if given)."""
        payload = {"spec": self.to_dict()}
        if geom is not None:
            payload["geometry"] = geom.to_dict()
        blob = json.dumps(payload, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


@dataclass(frozen=True)
class RowLabel:
    """Provenance of one constraint row: the angle and derivative order it samples."""

    kind: str  # "distortionless" | "derivative" | "null"
    angle: float
    order: int = 0


@dataclass(frozen=True)
class ConstraintSystem:
    matrix: np.ndarray
    rhs: np.ndarray
    row_labels: Tuple[RowLabel, ...]
    geometry: ArrayGeometry
    omega: float
    spec: Optional[DesignSpec] = field(default=None, compare=False)

    def __post_init__(self):
        if self.matrix.shape[0] != len(self.row_labels) or self.matrix.shape[0] != len(self.rhs):
            raise ValueError("matrix rows, rhs and row_labels must have matching lengths")

    @property
    def shape(self):
        return self.matrix.shape


def constraint_row(geom: ArrayGeometry, omega: float, theta: float, q: int = 0) -> np.ndarray:
    """Conjugated steering vector (q = 0) or its q-th angular derivative."""
    if q == 0:
        return steering_vector(geom, omega, theta).values.conj()
    return steering_vector_derivative(geom, omega, theta, q).values.conj()


def _null_labels(spec: DesignSpec):
    return [RowLabel("null", n.angle, q) for n in spec.nulls for q in range(n.multiplicity)]


def _assemble(geom, omega, spec, labels, rhs) -> ConstraintSystem:
    if len(labels) > geom.element_count:
        raise FeasibilityError(
            f"{len(labels)} constraints need at least {len(labels)} sensors, "
            f"array has {geom.element_count}")
    matrix = np.array([constraint_row(geom, omega, lab.angle, lab.order) for lab in labels])
    matrix.flags.writeable = False
    rhs = np.asarray(rhs, dtype=float)
    rhs.flags.writeable = False
    return ConstraintSystem(matrix, rhs, tuple(labels), geom, float(omega), spec)


def _check_method(spec, method):
    if spec.method != method:
        raise SpecError(f"expected a {method} spec, got {spec.method}")


def build_derivcon(geom: ArrayGeometry, omega: float, spec: DesignSpec) -> ConstraintSystem:
    """Distortionless row, derivative rows of orders 1..N at the look direction, null rows."""
    _check_method(spec, "DerivCon")
    n = spec.order
    if geom.element_count < 2 * n + 1:
        raise FeasibilityError(
            f"a steerable order-{n} design needs at least {2 * n + 1} sensors, "
            f"array has {geom.element_count}")
    labels = [RowLabel("distortionless", spec.steering, 0)]
    labels += [RowLabel("derivative", spec.steering, q) for q in range(1, n + 1)]
    labels += _null_labels(spec)

    rhs = spec.rhs()
    if len(rhs) != len(labels):
        raise SpecError(f"i_beta has {len(rhs)} entries, system has {len(labels)} rows")
    if rhs[0] != 1.0:
        raise SpecError("first i_beta entry must be 1 (distortionless)")
    if rhs[1] != 0.0:
        raise SpecError("second i_beta entry must be 0 (stationary response at the look direction)")
    if np.any(rhs[1 + n:] != 0.0):
        raise SpecError("i_beta entries for null rows must be 0")
    return _assemble(geom, omega, spec, labels, rhs)


def build_null(geom: ArrayGeometry, omega: float, spec: DesignSpec) -> ConstraintSystem:
    """Distortionless row plus null rows."""
    _check_method(spec, "Null")
    labels = [RowLabel("distortionless", spec.steering, 0)] + _null_labels(spec)
    return _assemble(geom, omega, spec, labels, spec.rhs())


def build_symnull(geom: ArrayGeometry, omega: float, spec: DesignSpec) -> ConstraintSystem:
    """Distortionless row plus mirror-paired null rows."""
    _check_method(spec, "SymNull")
    spec._check_symmetric()
    labels = [RowLabel("distortionless", spec.steering, 0)] + _null_labels(spec)
    return _assemble(geom, omega, spec, labels, spec.rhs())


_BUILDERS = {"DerivCon": build_derivcon, "Null": build_null, "SymNull": build_symnull}


def build_system(geom: ArrayGeometry, omega: float, spec: DesignSpec) -> ConstraintSystem:
    """Dispatch on ``spec.method``."""
    return _BUILDERS[spec.method](geom, omega, spec)


def replay_labels(sys: ConstraintSystem) -> np.ndarray:
    """Rebuild the matrix from its row labels alone."""
    return np.array([constraint_row(sys.geometry, sys.omega, lab.angle, lab.order)
                     for lab in sys.row_labels])


def make_spec(method: str, order: int, steering: float, offsets: Sequence[float] = (),
              multiplicities: Optional[Sequence[int]] = None,
              i_beta: Optional[Sequence[float]] = None) -> DesignSpec:
    """
    Build a spec from null offsets relative to the look direction.

    For ``SymNull`` the offsets are completed with their mirror images
    before the absolute angles are derived.
    """
    offsets = list(offsets)
    mult = list(multiplicities) if multiplicities is not None else [1] * len(offsets)
    if len(mult) != len(offsets):
        raise SpecError("multiplicities must match null offsets one to one")
    if method == "SymNull":
        by_offset = dict(zip(offsets, mult))
        full = mirror_offsets(offsets)
        mult = [by_offset.get(o, by_offset.get(-o, 1)) for o in full]
        offsets = full
    angles = derived_null_angles(steering, offsets)
    nulls = tuple(NullSpec(a, q) for a, q in zip(angles, mult))
    return DesignSpec(method, order, steering, nulls,
                      tuple(i_beta) if i_beta is not None else None)
