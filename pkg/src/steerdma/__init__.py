"""Steerable differential beamformers for uniform circular arrays."""

from .constraints import (ConstraintSystem, DesignSpec, NullSpec, RowLabel, build_derivcon,
                          build_null, build_symnull, build_system, derived_null_angles,
                          make_spec)
from .errors import (DesignError, FeasibilityError, NonPositiveDenominator, RankError,
                     SpecError, ZeroFilterError)
from .geometry import (ArrayGeometry, SteeringVector, diffuse_coherence, steering_vector,
                       steering_vector_derivative)
from .metrics import (BeampatternSamples, Gain, IdealPattern, MetricCurve, beampattern, df,
                      ideal_pattern_eval, main_lobe_direction, monte_carlo_noise_power,
                      pattern_derivative_at, simulate_snapshot, wng)
from .solver import Filter, gram_condition, solve_max_wng

__version__ = "0.1.0"


def design(geom: ArrayGeometry, frequency_hz: float, spec: DesignSpec,
           loading: float = 0.0) -> Filter:
    """Build the constraint system for ``spec`` at ``frequency_hz`` and solve it."""
    import numpy as np
    return solve_max_wng(build_system(geom, 2 * np.pi * frequency_hz, spec), loading)
