"""Exception types raised by the solvers."""


class DimensionError(ValueError):
    """State, derivative, or matrix operands have incompatible lengths."""


class SolverError(RuntimeError):
    """Base class for numerical failures during stepping or solving."""


class StepSizeUnderflowError(SolverError):
    """Adaptive step size fell below the permitted minimum.

    Carries the time and step size at the point of failure.  When raised
    from an integration driver, ``partial_report`` holds the counters
    accumulated before the failure.
    """

    def __init__(self, dt, t=None, partial_report=None):
        self.dt = dt
        self.t = t
        self.partial_report = partial_report
        where = "" if t is None else f" at t={t!r}"
        super().__init__(f"step size underflow{where}: dt={dt!r}")


class SingularMatrixError(SolverError):
    """A pivot smaller than the singularity floor was encountered."""


class ConvergenceError(SolverError):
    """An iterative solve did not converge within the iteration budget."""

    def __init__(self, iterations, message=None):
        self.iterations = iterations
        super().__init__(message or f"no convergence after {iterations} iterations")
