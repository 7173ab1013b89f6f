"""Twisted polar-space graphs over GF(q): construction and verification."""
__version__ = "0.1.0"

from .gf import FieldTables, NotAPrimePower, field_new
from .quadspace import QuadraticSpace, SizeBudgetExceeded

__all__ = ["FieldTables", "NotAPrimePower", "QuadraticSpace", "SizeBudgetExceeded", "field_new", "__version__"]
