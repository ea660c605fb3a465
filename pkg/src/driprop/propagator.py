"""Analytical ephemeris generation: inverse map, prime flow, direct map.

The propagator is stateless after initialization: the frozen element set and
the configuration fully determine the state at any time, so evaluations at
different times (or of different orbits) can run concurrently without
synchronization and per-sample cost does not depend on the elapsed time.

Truncation order 1 and order 2 are offered; the inverse and direct maps
always use the same order (mixing breaks the round-trip guarantees).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

from .corrections import apply_direct, apply_inverse
from .gravity import GravityModel
from .quasikepler import QuasiKeplerianElements, build_elements, propagate_prime
from .states import (
    CartesianState,
    PolarNodalState,
    conic_functions,
    polar_nodal_to_cartesian,
)

# The second-order theory drops e^2-weighted second-order terms, so accuracy
# degrades (gracefully) above this osculating eccentricity.
ECC_ENVELOPE = 0.1


class EnvelopeWarning(UserWarning):
    """Initial conditions fall outside the theory's accuracy envelope."""


@dataclass(frozen=True)
class PropagatorConfig:
    """Truncation order (1 or 2) and earth model."""

    order: int = 2
    model: GravityModel = field(default_factory=GravityModel)

    def __post_init__(self) -> None:
        if self.order not in (1, 2):
            raise ValueError(f"order must be 1 or 2, got {self.order}")


@dataclass(frozen=True)
class Ephemeris:
    """Time-ordered (t, polar-nodal, Cartesian) samples from one epoch."""

    epoch: float
    samples: tuple[tuple[float, PolarNodalState, CartesianState], ...]


def initialize(
    initial: PolarNodalState, cfg: PropagatorConfig
) -> tuple[PolarNodalState, QuasiKeplerianElements]:
    """Epoch setup: map the osculating state to prime space, freeze elements.

    Emits a (machine-readable) EnvelopeWarning when the osculating
    eccentricity exceeds ECC_ENVELOPE; results are still produced.
    """
    ecc = conic_functions(initial, cfg.model).ecc
    if ecc > ECC_ENVELOPE:
        warnings.warn(
            f"osculating eccentricity {ecc:.4f} exceeds the accuracy envelope "
            f"{ECC_ENVELOPE}; error bounds degrade beyond it",
            EnvelopeWarning,
            stacklevel=2,
        )
    prime0 = apply_inverse(initial, cfg.model, cfg.order)
    return prime0, build_elements(prime0, cfg.model)


def state_at(
    elements: QuasiKeplerianElements, t: float, cfg: PropagatorConfig
) -> tuple[PolarNodalState, CartesianState]:
    """Osculating polar-nodal and Cartesian state at elapsed time t [s]."""
    prime = propagate_prime(elements, t)
    original = apply_direct(prime, cfg.model, cfg.order)
    return original, polar_nodal_to_cartesian(original)


def ephemeris(
    initial: PolarNodalState, times: "list[float]", cfg: PropagatorConfig
) -> Ephemeris:
    """Map state_at over a strictly increasing time grid (one initialization)."""
    times = list(times)
    if any(b <= a for a, b in zip(times, times[1:])):
        raise ValueError("time grid must be strictly increasing")
    _, elements = initialize(initial, cfg)
    samples = tuple((t, *state_at(elements, t, cfg)) for t in times)
    return Ephemeris(epoch=times[0] if times else 0.0, samples=samples)


class DriPropagator:
    """Convenience wrapper binding an epoch state to a configuration.

    >>> prop = DriPropagator(initial_state, PropagatorConfig(order=2))
    >>> pn, cart = prop.state_at(3600.0)
    """

    def __init__(self, initial: PolarNodalState, cfg: PropagatorConfig | None = None):
        self.cfg = cfg if cfg is not None else PropagatorConfig()
        self.initial = initial
        self.prime0, self.elements = initialize(initial, self.cfg)

    def state_at(self, t: float) -> tuple[PolarNodalState, CartesianState]:
        return state_at(self.elements, t, self.cfg)

    def ephemeris(self, times: "list[float]") -> Ephemeris:
        times = list(times)
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ValueError("time grid must be strictly increasing")
        samples = tuple((t, *state_at(self.elements, t, self.cfg)) for t in times)
        return Ephemeris(epoch=times[0] if times else 0.0, samples=samples)
