"""Exception hierarchy shared across the package."""


class ResonanceError(Exception):
    """Base class for all package errors."""


class DimensionError(ResonanceError, ValueError):
    pass


class SingularMatrixError(ResonanceError, ArithmeticError):
    pass


class RedundantBasisError(SingularMatrixError):
    """Overlap matrix of a generalized eigenproblem is singular."""


class QuasiNullVectorError(ResonanceError, ArithmeticError):
    """A c-norm vanished: the matrix is at (or near) an exceptional point."""


class EigenSolverError(ResonanceError, ArithmeticError):
    pass


class QuadratureError(ResonanceError, ArithmeticError):
    pass


class PhysicsPreconditionError(ResonanceError, ValueError):
    """A physical precondition does not hold (unbound state, bad angle, ...)."""


class UnboundTrainingPointError(PhysicsPreconditionError):
    pass


class UndefinedRotationError(PhysicsPreconditionError):
    pass


class ConvergenceError(ResonanceError, RuntimeError):
    pass


class DeflationError(ConvergenceError):
    pass


class PostSelectionError(ResonanceError, ArithmeticError):
    pass


class FixtureError(ResonanceError, OSError):
    pass
