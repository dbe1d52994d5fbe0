"""Exception hierarchy shared by the numerical modules."""


class NumericalError(RuntimeError):
    """Base class for failures of a numerical procedure (CLI exit code 3)."""


class EigenSolverError(NumericalError):
    """The dense eigensolver did not converge or received a bad matrix."""


class TransitionLineError(NumericalError):
    """Parameters sit on a phase boundary where the winding is undefined."""


class BandTouchingError(NumericalError):
    """The two Bloch bands touch on the sampled grid, so band labels are ill-defined."""
