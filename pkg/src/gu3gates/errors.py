"""Shared exception types with dedicated CLI exit codes."""


class ResourceCapError(RuntimeError):
    """A breadth-first closure or enumeration hit its element cap."""


class NotInLatticeError(ValueError):
    """The input is not a member of the navigable arithmetic lattice."""


class PrecisionExceededError(ArithmeticError):
    """p-adic working precision was insufficient to resolve a pivot."""
