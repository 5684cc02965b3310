"""Counting and deciding commutators in free groups, free products and PSL2(Z)."""

from .errors import CapacityError, ConsistencyError, InvalidInputError

__version__ = "0.1.0"

__all__ = ["CapacityError", "ConsistencyError", "InvalidInputError", "__version__"]
