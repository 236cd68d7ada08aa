"""Exception types shared across the package."""


class DomainError(ValueError):
    """A parameter lies outside the domain where the quantity is defined."""


class ConvergenceError(RuntimeError):
    """An iterative method hit its iteration cap before converging."""


class DivergenceError(ArithmeticError):
    """A series was asked to sum outside its disc of convergence."""


class SliceMismatchError(ValueError):
    """Quaternionic parameters from different slices were combined."""
