"""Exceptions raised by chirpfit

All errors derive from `ValueError`, so code that already guards numerical
calls with `except ValueError` keeps working.  Errors with extra attributes
pickle with them, so they survive the trip back from worker processes.
"""
from typing import Optional, Tuple

__all__ = [
    'ChirpfitError',
    'ParameterDomainError',
    'DegenerateDesignError',
    'BadStartError',
    'ConfigError',
    'SignalFormatError',
]


class ChirpfitError(ValueError):
    """base class of all chirpfit errors"""


class ParameterDomainError(ChirpfitError):
    """a parameter lies outside its admissible domain"""


class DegenerateDesignError(ChirpfitError):
    """the design matrix is rank deficient

    `columns` holds the 0-based indices of the offending column pair.
    """

    def __init__(self, message: str, columns: Tuple[int, int]):
        super().__init__(message)
        self.columns = columns

    def __reduce__(self):
        return type(self), (self.args[0], self.columns)


class BadStartError(ChirpfitError):
    """objective is not finite at the optimizer start"""


class ConfigError(ChirpfitError):
    """invalid configuration document

    `path` is the dotted location of the offending field, e.g. `noise.sigma`.
    """

    def __init__(self, message: str, path: Optional[str] = None):
        self.reason = message
        self.path = path
        if path:
            message = f"{path}: {message}"
        super().__init__(message)

    def __reduce__(self):
        return type(self), (self.reason, self.path)


class SignalFormatError(ChirpfitError):
    """malformed signal file; `line` is the 1-based line number"""

    def __init__(self, message: str, line: int):
        self.reason = message
        self.line = line
        super().__init__(f"line {line}: {message}")

    def __reduce__(self):
        return type(self), (self.reason, self.line)
