"""Exception hierarchy shared by all modules.

Two families matter to callers (and to the CLI exit codes): precondition
failures, which mean the input is unsuitable, and numerical failures, which
mean an iteration did not settle.
"""

from __future__ import annotations


class SkewBraidError(Exception):
    """Base class for every error raised by this package."""


class PreconditionError(SkewBraidError, ValueError):
    """The input violates a documented precondition."""


class NumericalError(SkewBraidError, ArithmeticError):
    """An iterative numerical procedure failed."""


# cpoly
class DegreeZero(PreconditionError):
    pass


class LengthMismatch(PreconditionError):
    pass


class NonConvergence(NumericalError):
    def __init__(self, max_iter: int, best=None, message: str | None = None):
        self.max_iter = max_iter
        self.best = best
        super().__init__(message or f"no convergence after {max_iter} iterations")


# skewparam
class BadDegree(PreconditionError):
    pass


class ParameterFormatError(PreconditionError):
    pass


class Overflow(NumericalError):
    def __init__(self, step: int):
        self.step = step
        super().__init__(f"iterate magnitude exceeded the floating ceiling at step {step}")


class Degenerate(PreconditionError):
    """The critical-value product vanishes identically in z."""


class SizeGuard(PreconditionError):
    pass


# monodromy
class NotAdmissible(PreconditionError):
    pass


class StrandCollision(NumericalError):
    def __init__(self, t: float, distance: float):
        self.t = t
        self.distance = distance
        super().__init__(f"strands collide near t={t:.6g} (separation {distance:.3g})")


class BranchCollision(NumericalError):
    pass


class LetterOutOfRange(PreconditionError):
    pass


# braid
class DegenerateProjection(NumericalError):
    pass


class SeparationLoss(NumericalError):
    pass


# factory
class SpecInvalid(PreconditionError):
    pass


class NormalizationFailed(PreconditionError):
    pass


class BoundaryRoot(PreconditionError):
    pass


class AllZero(PreconditionError):
    pass


class UnknownPreset(PreconditionError, KeyError):
    def __str__(self) -> str:
        return Exception.__str__(self)


# escape
class InvalidConfig(PreconditionError):
    pass
