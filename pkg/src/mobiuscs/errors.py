"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class PrecisionError(RuntimeError):
    """The requested tolerance could not be certified.

    ``achieved`` carries the error bound that was actually reached.
    """

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


class DegeneracyError(ZeroDivisionError):
    """A quotient's denominator vanished (within tolerance)."""


class CoordinateSingularityError(DomainError):
    """Evaluation at a coordinate-chart singularity was requested."""


class EnergyDriftError(PrecisionError):
    """The integrator could not keep the energy drift under tolerance."""
