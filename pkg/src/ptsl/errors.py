"""Exception types shared across the package."""


class GridSymmetryError(ValueError):
    """Sample grid is not symmetric about the origin."""


class TailError(ValueError):
    """Missing, malformed or non-integrable tail descriptor."""


class IntegrationOverflowError(RuntimeError):
    """Solution magnitude left the representable range during integration."""

    def __init__(self, x_reached: float):
        self.x_reached = float(x_reached)
        super().__init__(f"solution overflowed near x = {self.x_reached:.6g}")


class ConvergenceError(RuntimeError):
    """An iterative limit extraction did not meet its Cauchy criterion."""

    def __init__(self, message: str, residual: float = float("nan")):
        self.residual = float(residual)
        super().__init__(message)


class ClassificationError(RuntimeError):
    """Sign-type classification would be a guess, not a measurement."""


class DomainConditionError(ValueError):
    """Input function does not satisfy the boundary condition it claims."""
