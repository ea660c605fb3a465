"""Exception types shared across the package."""


class ConfigError(ValueError):
    """A benchmark configuration is malformed or violates its invariants."""


class UnboundOrbitError(ValueError):
    """Orbit geometry is hyperbolic, parabolic, or sub-surface (a <= 0 or e >= 1)."""


class KeplerConvergenceError(RuntimeError):
    """The Kepler-equation solver failed to meet its residual contract.

    Must not occur for 0 <= e < 1; raised only to surface an internal defect.
    """


class SurfaceImpactError(RuntimeError):
    """A numerically integrated trajectory descended below the equatorial radius."""
