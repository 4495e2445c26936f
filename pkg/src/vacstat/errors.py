"""Exception types shared across the package."""


class VacstatError(Exception):
    """Base class for all package errors."""


class SingularMetric(VacstatError):
    """The metric is not positive definite at the requested point."""


class OutOfDomain(VacstatError):
    """A point lies outside a chart's domain or too close to a singular locus."""


class DomainError(VacstatError):
    """A radial quantity was requested where the warping function is not positive."""


class DimensionTooLow(VacstatError):
    """An object is undefined in the requested dimension."""


class NotStatic(VacstatError):
    """A check that presumes a static potential was run on a non-static pair."""

    def __init__(self, residual, tol):
        super().__init__(f"static residual {residual:.3e} exceeds tolerance {tol:.1e}")
        self.residual = residual
        self.tol = tol


class SNotConstant(VacstatError):
    """The squared norm of the traceless Ricci tensor varies along the space."""


class ConstantPotential(VacstatError):
    """A static potential must be non-constant."""


class UnknownSpace(VacstatError, KeyError):
    """No catalog entry with the requested name."""


class NoPositiveRoots(VacstatError):
    """The effective potential has no positive roots."""


class NotPeriodic(VacstatError):
    """The parameters do not produce a periodic warping function."""


class Blowup(VacstatError):
    """The warping function left the admissible range [1e-8, 1e8]."""


class ToleranceNotMet(VacstatError):
    """The adaptive integrator failed to reach the requested tolerance."""


class CandidatePotentialFails(VacstatError):
    """The candidate potential f = h' does not solve the static equation."""

    def __init__(self, residual, tol):
        super().__init__(f"candidate potential residual {residual:.3e} exceeds {tol:.1e}")
        self.residual = residual
        self.tol = tol


class InvalidParams(VacstatError, ValueError):
    """Configuration or parameters are out of range."""
