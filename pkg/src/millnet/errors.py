"""Exception types shared across the package."""


class MillnetError(Exception):
    """Base class for all package errors."""


class DataError(MillnetError):
    """Malformed or inconsistent input data (bad rows, duplicate ids, ...)."""
