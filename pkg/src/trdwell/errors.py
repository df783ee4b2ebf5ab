"""Exception types shared across the package."""


class TrdwellError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(TrdwellError, ValueError):
    """An input lies outside the mathematical domain of the operation."""


class DegenerateMicrostate(TrdwellError, ValueError):
    """Coefficient triple with ab - c^2/4 <= 0, or a bilinear form that collapsed."""


class QuadratureFailure(TrdwellError, RuntimeError):
    """A quadrature did not reach the requested accuracy."""


class StepUnderflow(TrdwellError, ValueError):
    """A finite-difference energy step would leave the open interval (0, U)."""


class OptimizationFailure(TrdwellError, RuntimeError):
    """A bounded search over microstates failed to converge."""


class Infeasible(TrdwellError, ValueError):
    """No admissible solution exists for the requested connection."""
