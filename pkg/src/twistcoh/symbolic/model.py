"""Problem description: torus coordinates and the Laurent polynomials f_1..f_l."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

from .laurent import LaurentPoly
from .mpoly import PolyRing
from .parser import parse_laurent
from .ratfun import RatFun


def _param_names(prefix: str, count: int) -> tuple[str, ...]:
    if count == 1:
        return (prefix,)
    return tuple(f"{prefix}{i + 1}" for i in range(count))


@dataclass(frozen=True)
class ModelSpec:
    """The data (x-names, f_1..f_l) defining X = (C*)^n minus V(f_1...f_l).

    Parameters are named ``s``/``nu`` when there is a single one of a kind,
    otherwise ``s1, s2, ...`` and ``nu1, nu2, ...``.  The parameter ring
    lists the nu before the s so that graded-lex leading terms favour nu,
    which keeps canonical denominators like ``nu - 3*s + 3`` readable.
    Directions (``param_names``) are always listed s first.
    """

    vars: tuple[str, ...]
    f: tuple[LaurentPoly, ...]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "vars", tuple(self.vars))
        object.__setattr__(self, "f", tuple(self.f))
        if not self.vars:
            raise ValueError("a model needs at least one variable")
        if not self.f:
            raise ValueError("a model needs at least one polynomial")
        for p in self.f:
            if p.vars != self.vars:
                raise ValueError(f"polynomial {p} uses variables {p.vars}, expected {self.vars}")
            if p.is_zero():
                raise ValueError("zero polynomial in model")

    @classmethod
    def from_strings(cls, polys: Sequence[str], vars: Sequence[str], name: str = "") -> "ModelSpec":
        vars = tuple(vars)
        return cls(vars, tuple(parse_laurent(p, vars) for p in polys), name)

    @property
    def n(self) -> int:
        return len(self.vars)

    @property
    def ell(self) -> int:
        return len(self.f)

    @cached_property
    def s_names(self) -> tuple[str, ...]:
        return _param_names("s", self.ell)

    @cached_property
    def nu_names(self) -> tuple[str, ...]:
        return _param_names("nu", self.n)

    @cached_property
    def param_names(self) -> tuple[str, ...]:
        return self.s_names + self.nu_names

    @cached_property
    def ring(self) -> PolyRing:
        return PolyRing(self.nu_names + self.s_names)

    @cached_property
    def direction_ring_index(self) -> tuple[int, ...]:
        """Ring variable index for each direction in ``param_names`` order."""
        return tuple(self.ring.index[p] for p in self.param_names)

    def s(self, i: int) -> RatFun:
        return RatFun.gen(self.ring, self.s_names[i])

    def nu(self, j: int) -> RatFun:
        return RatFun.gen(self.ring, self.nu_names[j])

    def param_values(self, s_vals: Sequence, nu_vals: Sequence) -> list:
        """Arrange s and nu values in ring variable order."""
        return list(nu_vals) + list(s_vals)

    @cached_property
    def df(self) -> tuple[tuple[LaurentPoly, ...], ...]:
        """``df[i][j]`` is the partial derivative of f_i with respect to x_j."""
        return tuple(tuple(p.derivative(j) for j in range(self.n)) for p in self.f)

    def to_dict(self) -> dict:
        return {"variables": list(self.vars), "polynomials": [str(p) for p in self.f]}

    def __str__(self) -> str:
        fs = ", ".join(str(p) for p in self.f)
        return f"ModelSpec(vars={list(self.vars)}, f=[{fs}])"
