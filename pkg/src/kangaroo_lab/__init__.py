"""Residual orders of ideals under blowups in positive characteristic."""

from .field import FieldSpec, Scalar
from .poly import INF, Poly
from .ideals import Ideal
from .contact import Divisor, weak_max_contact, residual_order, coefficient_ideal, coeff_order
from .blowup import BlowupChart, blowup, permissibility_check
from .kangaroo import detect_kangaroo, theorem_conditions
from .errors import InternalAssertion, KangarooLabError, ParseError, PrecisionError

__all__ = [
    "FieldSpec", "Scalar", "INF", "Poly", "Ideal", "Divisor", "weak_max_contact", "residual_order",
    "coefficient_ideal", "coeff_order", "BlowupChart", "blowup", "permissibility_check",
    "detect_kangaroo", "theorem_conditions", "InternalAssertion", "KangarooLabError", "ParseError",
    "PrecisionError",
]

__version__ = "0.1.0"
