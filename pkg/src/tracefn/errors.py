"""Exception types shared across the package."""


class DomainError(ValueError):
    """An input violates a mathematical precondition (not PSD, wrong shape, ...)."""


class ImageConditionError(DomainError):
    """im(P) is not contained in im(A) where the operation requires it."""


class JacobiConvergenceError(RuntimeError):
    """The eigensolver did not reach its off-diagonal target within the sweep cap."""

    def __init__(self, message: str, offdiag_norm: float):
        super().__init__(message)
        self.offdiag_norm = offdiag_norm


class QuadratureConvergenceError(RuntimeError):
    """Adaptive quadrature exhausted its panel budget above the error target."""


class BranchAmbiguityError(RuntimeError):
    """Eigenvalue branch matching found two candidates with nearly equal overlap."""
