"""Exception hierarchy shared by every module."""


class SetIdError(Exception):
    """Base class for all errors raised by :mod:`setid`."""


class InvalidInputError(SetIdError, ValueError):
    """Argument fails a documented precondition."""


class DimensionError(InvalidInputError):
    """Vector length does not match the dimension of a system."""


class InfeasibleError(SetIdError):
    """A linear system (or region) is empty."""


class UnboundedError(SetIdError):
    """A linear objective is unbounded over the feasible set."""


class TieError(SetIdError):
    """A decision rule faces an exact tie it is not allowed to break."""


class CoherenceError(SetIdError):
    """Model inputs are mutually inconsistent (e.g. pi_j above every feasible theta_j)."""


class DataError(SetIdError):
    """Malformed or invariant-violating input data (CSV rows, config files)."""

    def __init__(self, message, row=None):
        self.message, self.row = message, row
        super().__init__(f"row {row}: {message}" if row is not None else message)
