"""Exception hierarchy shared by the solver stack."""

from __future__ import annotations


class WahbaError(Exception):
    """Base class for every error raised by this package."""


class NonConvergence(WahbaError):
    """An iterative routine hit its iteration/sweep cap.

    ``best`` carries the last iterate (a float for Newton, the partially
    diagonalized state for Jacobi) so callers can still inspect it.
    """

    def __init__(self, message: str, best=None, iterations: int = 0):
        super().__init__(message)
        self.best = best
        self.iterations = iterations


class ZeroDerivative(WahbaError):
    pass


class EmptyObservationSet(WahbaError):
    pass


class InvalidObservation(WahbaError):
    pass


class NonOrthogonalAttitude(WahbaError):
    pass


class NegativeRadicand(WahbaError):
    pass


class ConstraintViolation(WahbaError):
    pass


class NoRealRoot(WahbaError):
    pass


class DegenerateEigenvector(WahbaError):
    """The optimal eigenvalue is (numerically) repeated.

    When raised from a solver, ``report`` holds a partial
    :class:`~wahba.solvers.SolverReport` with ``lambda_max`` and the
    ``ambiguous`` flag filled in but no quaternion/attitude.
    """

    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report
