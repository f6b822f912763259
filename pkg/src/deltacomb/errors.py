"""Exception types raised by the numerical routines."""


class DeltaCombError(Exception):
    """Base class for all package errors."""


class PreconditionError(DeltaCombError, ValueError):
    """An argument violates the documented precondition of an operation."""


class ResonanceError(PreconditionError):
    """The wavenumber lies within the resonance guard of a multiple of pi."""


class SingularSystemError(DeltaCombError, ArithmeticError):
    """A linear system is singular (k^2 is an eigenvalue)."""


class MFunctionPoleError(DeltaCombError, ArithmeticError):
    """u_0 vanishes, so the Weyl m-function has a pole at this k."""


class BranchError(DeltaCombError, ArithmeticError):
    """Continuation of a logarithm failed because the function nearly vanished."""


class BracketError(DeltaCombError, ValueError):
    """A root search interval does not contain all the roots it should."""


class PotentialFormatError(DeltaCombError, ValueError):
    """Malformed potential file; ``lineno`` points at the offending line."""

    def __init__(self, message, lineno=None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
