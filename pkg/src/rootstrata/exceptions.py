"""Exception types shared across the package."""


class RootStrataError(Exception):
    """Base class for all errors raised by rootstrata."""


class InconsistentClassError(RootStrataError, ValueError):
    """A residue class or degree fails a divisibility/consistency condition."""


class SizeGateError(RootStrataError):
    """An exponential enumeration was requested on a graph that is too large."""


class GenusError(RootStrataError, ValueError):
    """An operation that needs 2g - 2 > 0 was called on a curve of genus <= 1."""
