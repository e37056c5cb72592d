"""Exact computation of Ratliff-Rush closures, reduction numbers and
Hilbert coefficients of fiber cones for homogeneous m-primary ideals."""

__version__ = "0.1.0"

from .dsl import InputDocument, parse, parse_polynomial
from .errors import DefectError, FiberconeError, HypothesisError, ParseError, ResourceCapError
from .field import QQ, PrimeField, field_from_name
from .ideals import Ideal, RingContext, colon, colength, intersect, quotient_length
from .polynomial import PolyRing, Polynomial
