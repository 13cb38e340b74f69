"""Exception hierarchy shared by every vhdsim module."""

from __future__ import annotations


class VhdError(Exception):
    """Base class for all errors raised by vhdsim."""


class InputError(VhdError, ValueError):
    """Bad caller-supplied data (CLI maps these to exit code 2)."""


# --- MADM core ------------------------------------------------------------

class WeightSumViolation(InputError):
    def __init__(self, actual: float):
        self.actual = actual
        super().__init__(f"criterion weights must sum to 1, got {actual!r}")


class NonPositiveWeight(InputError):
    pass


class NonPositiveValue(InputError):
    pass


class EmptyColumn(InputError):
    pass


class DimensionMismatch(InputError):
    pass


class DegenerateAlternative(InputError):
    """Both TOPSIS separations are zero, so closeness is undefined."""


class MatrixFileError(InputError):
    def __init__(self, message: str, line: int | None = None, path: str | None = None):
        self.message = message
        self.line = line
        self.path = path
        where = ""
        if path is not None:
            where += f"{path}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)


# --- network model --------------------------------------------------------

class EmptyCandidateSet(InputError):
    pass


class InvalidFloor(InputError):
    pass


class EmptyList(InputError):
    pass


# --- trust ----------------------------------------------------------------

class UnknownNetwork(VhdError, KeyError):
    pass


# --- simulation -----------------------------------------------------------

class ConfigInvalid(InputError):
    """Scenario validation failure carrying one diagnostic per bad field."""

    def __init__(self, errors: list[str]):
        self.errors = list(errors)
        super().__init__("invalid scenario:\n  " + "\n  ".join(self.errors))
