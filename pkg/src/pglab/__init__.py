"""Weighted multisets and line codes of finite Desarguesian projective planes."""

from .field import Field, FieldError, create_field
from .plane import Collineation, Plane, PlaneError, build_plane
from .multiset import WeightedMultiset, secant_spectrum
from .stability import blocking_set, repair
from .code import Codeword, LineCode, line_code
from .classify import classify, dbv_base, dbv_general

__all__ = [
    "Field",
    "FieldError",
    "create_field",
    "Collineation",
    "Plane",
    "PlaneError",
    "build_plane",
    "WeightedMultiset",
    "secant_spectrum",
    "blocking_set",
    "repair",
    "Codeword",
    "LineCode",
    "line_code",
    "classify",
    "dbv_base",
    "dbv_general",
]
