"""Reference models and published reference values used by tests and ``check``."""

from __future__ import annotations

from dataclasses import dataclass

from .diffring import Mono
from .symbolic.model import ModelSpec


@dataclass(frozen=True)
class Fixture:
    name: str
    vars: tuple[str, ...]
    polys: tuple[str, ...]
    chi: int
    basis: tuple[tuple[int, ...], ...] | None = None  # nu-exponents only (a = 0)
    k: int | None = None
    q_star: int | None = None
    final_rank: int | None = None
    rank_k1: int | None = None

    def model(self) -> ModelSpec:
        return ModelSpec.from_strings(self.polys, self.vars, self.name)

    def basis_monomials(self) -> list[Mono] | None:
        if self.basis is None:
            return None
        ell = len(self.polys)
        return [(0,) * ell + tuple(b) for b in self.basis]


FIXTURES: dict[str, Fixture] = {
    f.name: f
    for f in [
        Fixture("line", ("x",), ("1 - x",), 1, basis=((0,),)),
        Fixture("cubic", ("x",), ("1 - x^3",), 3, basis=((0,), (1,), (2,)), k=1, q_star=2,
                final_rank=5),
        Fixture("m05", ("x", "y"), ("x - 1", "y - 1", "x - y"), 2, basis=((0, 0), (1, 0)), k=1,
                q_star=2),
        Fixture("product_surface", ("x", "y"), ("1 + x^2 + y^3 + x^2*y^3",), 6,
                basis=((0, 0), (1, 0), (0, 1), (1, 1), (0, 2), (1, 2)), k=2, q_star=2,
                final_rank=14, rank_k1=4),
        Fixture("bubble", ("x1", "x2"), ("7*x1^2 + 12*x1*x2 + 3*x2^2 + x1 + x2",), 3,
                basis=((0, 0), (1, 0), (0, 1)), k=1, q_star=2),
        Fixture("triangle", ("x1", "x2", "x3"),
                ("2*x1*x2 - 6*x1*x3 - 8*x2*x3 + x1 + x2 + x3",), 4,
                basis=((0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)), k=1, q_star=2),
        Fixture("quadric", ("x1", "x2", "x3", "x4"), ("x1^2 + x2^2 + x3^2 + x4^2 - 1",), 16),
    ]
    + [
        Fixture(f"fermat{d}", ("x", "y"), (f"x^{d} + y^{d} - 1",), d * d)
        for d in range(2, 7)
    ]
}

CHI_FIXTURES = ["cubic", "m05", "product_surface", "fermat2", "fermat3", "fermat4", "fermat5",
                "fermat6", "quadric", "bubble", "triangle"]
CONTIGUITY_FIXTURES = ["line", "cubic", "m05", "product_surface", "bubble", "triangle", "fermat2",
                       "fermat3"]


def get_fixture(name: str) -> Fixture:
    try:
        return FIXTURES[name]
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; known: {sorted(FIXTURES)}") from None


# ---------------------------------------------------------------------------
# published matrices (entries as text in the parameter field)

CUBIC_C = {
    "nu": [["0", "1", "0"], ["0", "0", "1"], ["nu/(nu-3*s+3)", "0", "0"]],
    "s": [["(-nu+3*s)/(3*s)", "0", "0"], ["0", "(-nu+3*s-1)/(3*s)", "0"],
          ["0", "0", "(-nu+3*s-2)/(3*s)"]],
}

# relations spanning J ∩ span(E) for the cubic, on columns in this order
CUBIC_RELATION_COLUMNS: list[Mono] = [(0, 3), (1, 2), (1, 1), (1, 0), (1, 3), (0, 0), (0, 1), (0, 2)]
CUBIC_RELATIONS = [
    ["(3*s-nu-3)/nu", "0", "0", "0", "0", "1", "0", "0"],
    ["0", "3*s", "0", "0", "0", "0", "0", "nu-3*s+2"],
    ["0", "0", "1", "0", "0", "0", "(nu-3*s+1)/(3*s)", "0"],
    ["0", "0", "0", "1", "(-nu+3*s)/nu", "0", "0", "0"],
    ["0", "0", "0", "1", "0", "(nu-3*s)/(3*s)", "0", "0"],
]

_M05_DEN1 = "(nu1 - s1 - s3 + 2)*(nu1 + nu2 - s1 - s2 - s3 + 2)"
_M05_DEN2 = "(nu2 - s2 - s3 + 1)*(nu1 + nu2 - s1 - s2 - s3 + 2)"
M05_R = {
    "r1": f"nu1*(-nu1 - nu2 + s3) / ({_M05_DEN1})",
    "r2": ("(nu1*(2*nu1 + 2*nu2 - 2*s1 - s2 - 3*s3 + 4) - nu2*(s1 + s3 - 2)"
           f" + s3*(s1 + s2 + s3 - 3) - s1 - s2 + 2) / ({_M05_DEN1})"),
    "r3": f"nu1*(nu1 + nu2 - s3) / ({_M05_DEN2})",
    "r4": f"(nu1*(-nu1 + s1 + s3 - 1) + nu2*(nu2 - s2 - s3 + 1)) / ({_M05_DEN2})",
}
M05_C = {
    "nu1": [["0", "1"], [M05_R["r1"], M05_R["r2"]]],
    "nu2": [["(nu1 + nu2 - s3)/(nu2 - s2 - s3 + 1)", "(-nu1 + s1 + s3 - 1)/(nu2 - s2 - s3 + 1)"],
            [M05_R["r3"], M05_R["r4"]]],
}

# class of the top form (x + 1)/x^2 dx for f = 1 - x with B = {1}
LINE_FORM = "(x + 1)/x^2"
LINE_FORM_COEFF = "(2*nu - s - 1)/(nu - 1)"
