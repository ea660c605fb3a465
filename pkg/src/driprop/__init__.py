"""Analytical LEO propagation through a quasi-Keplerian radial intermediary.

The package implements the second-order intermediary theory of the J2 main
problem (first-order variant selectable), the short-period contact
transformation connecting osculating and prime variables, a high-order
numerical reference integrator with an on-disk truth cache, and a benchmark
harness exposed both as an HTTP service and the `bench` CLI.
"""

__version__ = "0.1.0"

from .corrections import apply_direct, apply_inverse
from .errors import (
    ConfigError,
    KeplerConvergenceError,
    SurfaceImpactError,
    UnboundOrbitError,
)
from .gravity import GravityModel, j2_acceleration, legendre_p2, main_problem_energy
from .propagator import DriPropagator, Ephemeris, EnvelopeWarning, PropagatorConfig
from .quasikepler import QuasiKeplerianElements, build_elements, propagate_prime, solve_kepler
from .states import (
    CartesianState,
    ClassicalElements,
    ConicFunctions,
    PolarNodalState,
    cartesian_to_polar_nodal,
    classical_to_polar_nodal,
    conic_functions,
    polar_nodal_to_cartesian,
)
from .truth import IntegratorConfig, TruthCache, integrate

__all__ = [
    "CartesianState",
    "ClassicalElements",
    "ConfigError",
    "ConicFunctions",
    "DriPropagator",
    "Ephemeris",
    "EnvelopeWarning",
    "GravityModel",
    "IntegratorConfig",
    "KeplerConvergenceError",
    "PolarNodalState",
    "PropagatorConfig",
    "QuasiKeplerianElements",
    "SurfaceImpactError",
    "TruthCache",
    "UnboundOrbitError",
    "apply_direct",
    "apply_inverse",
    "build_elements",
    "cartesian_to_polar_nodal",
    "classical_to_polar_nodal",
    "conic_functions",
    "integrate",
    "j2_acceleration",
    "legendre_p2",
    "main_problem_energy",
    "polar_nodal_to_cartesian",
    "propagate_prime",
    "solve_kepler",
    "__version__",
]
