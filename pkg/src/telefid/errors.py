"""Exception hierarchy shared by all telefid modules."""


class TelefidError(Exception):
    """Base class for every error raised by telefid."""


class InvalidMatrix(TelefidError, ValueError):
    """Matrix input is non-finite, has the wrong shape, or lacks required symmetry."""


class NotARotation(TelefidError, ValueError):
    """Matrix is not a proper rotation (orthogonal with determinant +1)."""


class InvalidState(TelefidError, ValueError):
    """Matrix violates the density-matrix invariants."""


class NotAState(InvalidState):
    """A (R, S, T) triple or matrix is not positive semidefinite.

    The smallest eigenvalue is kept so callers can report it.
    """

    def __init__(self, message: str, min_eigenvalue: float):
        super().__init__(message)
        self.min_eigenvalue = min_eigenvalue


class InvalidParameter(TelefidError, ValueError):
    """A family or protocol parameter lies outside its domain."""


class NotCanonical(TelefidError, ValueError):
    """The resource state does not have a diagonal correlation matrix."""


class DerivationMismatch(TelefidError, ArithmeticError):
    """Explicit protocol algebra disagrees with the closed-form fidelity."""


class StateFileError(TelefidError, ValueError):
    """A state file or command-line state description could not be parsed."""
