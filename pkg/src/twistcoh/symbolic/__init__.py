"""Exact arithmetic: polynomials, the parameter field, Laurent polynomials, parsing."""

from .laurent import LaurentPoly
from .model import ModelSpec
from .mpoly import MPoly, PolyRing, gcd_mpoly
from .parser import ParseError, parse_laurent, parse_ratfun
from .ratfun import RatFun

__all__ = [
    "LaurentPoly",
    "MPoly",
    "ModelSpec",
    "ParseError",
    "PolyRing",
    "RatFun",
    "gcd_mpoly",
    "parse_laurent",
    "parse_ratfun",
]
