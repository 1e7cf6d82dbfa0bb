"""Exceptions shared across modules."""

from .qlaurent import NotInvertibleError, PrecisionError


class ConsistencyError(RuntimeError):
    """Two independent computations of the same quantity disagree."""


__all__ = ["ConsistencyError", "NotInvertibleError", "PrecisionError"]
