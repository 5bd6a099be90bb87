"""Twisted cohomology of very affine varieties: contiguity matrices and critical points."""

from .basis import CandidatePool, PoolExhausted, find_basis, select_basis
from .contiguity import (
    ContiguityError,
    ContiguitySet,
    contiguity_matrices,
    expand_class,
    expand_form,
    expand_function,
    verify_twisted_commutation,
)
from .degeneration import (
    characteristic_polynomial,
    commute_exactly,
    eigen_check,
    multiplication_matrices,
    residue_pairing,
)
from .diffring import DiffElement, DiffMonomial, j_generators
from .linalg import MatK, SingularPivotBlock, cokernel, rank
from .numeric import Specialization, critical_points, euler_characteristic
from .symbolic import LaurentPoly, ModelSpec, ParseError, RatFun, parse_laurent, parse_ratfun

__all__ = [
    "CandidatePool", "ContiguityError", "ContiguitySet", "DiffElement", "DiffMonomial",
    "LaurentPoly", "MatK", "ModelSpec", "ParseError", "PoolExhausted", "RatFun",
    "SingularPivotBlock", "Specialization", "characteristic_polynomial", "cokernel",
    "commute_exactly", "contiguity_matrices", "critical_points", "eigen_check",
    "euler_characteristic", "expand_class", "expand_form", "expand_function", "find_basis",
    "j_generators", "multiplication_matrices", "parse_laurent", "parse_ratfun", "rank",
    "residue_pairing", "select_basis", "verify_twisted_commutation",
]
