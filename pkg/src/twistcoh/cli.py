"""Command-line interface: ``twistcoh <subcommand> ...`` or ``python3 -m twistcoh``.

Exit codes: 0 success, 1 mathematical failure, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Sequence

from .basis import PoolExhausted, find_basis, format_basis
from .contiguity import (
    ContiguityError,
    contiguity_matrices,
    expand_class,
    expand_form,
    expand_function,
    verify_twisted_commutation,
)
from .degeneration import (
    DegenerationPole,
    EigenMismatch,
    NumericAlgebra,
    generator_labels,
    multiplication_matrices,
    residue_pairing,
)
from .diffring import Mono, format_monomial
from .linalg import MatK, SingularPivotBlock
from .numeric.homotopy import TrackerOptions
from .numeric.solve import SolveOptions, SolverError, critical_points, euler_characteristic
from .symbolic import ParseError, parse_laurent
from .symbolic.model import ModelSpec

SCHEMA = 1

MATH_ERRORS = (PoolExhausted, ContiguityError, SingularPivotBlock, SolverError, DegenerationPole,
               EigenMismatch, ZeroDivisionError)


class UsageError(ValueError):
    """Bad model file or flag combination (exit code 2)."""


class MathFailure(RuntimeError):
    """A computed result contradicts an expectation (exit code 1)."""


@dataclass
class ModelOptions:
    degree: int = 3
    expect_chi: int | None = None
    seed: int = 0
    trials: int = 3
    tol_final: float = 1e-10
    tol_omega: float = 1e-8
    max_paths: int | None = None
    k_max: int = 4
    q_max: int = 12


@dataclass
class ModelFile:
    """A model as stored on disk: variables, polynomial strings and options."""

    variables: list[str]
    polynomials: list[str]
    options: ModelOptions = field(default_factory=ModelOptions)
    name: str = ""

    KEYS = ("variables", "polynomials", "options", "name")

    @classmethod
    def from_dict(cls, data: dict) -> "ModelFile":
        if not isinstance(data, dict):
            raise UsageError("model file must contain a JSON object")
        unknown = set(data) - set(cls.KEYS)
        if unknown:
            raise UsageError(f"unknown model keys: {sorted(unknown)}")
        for key in ("variables", "polynomials"):
            if key not in data:
                raise UsageError(f"model file is missing {key!r}")
            if not isinstance(data[key], list) or not all(isinstance(v, str) for v in data[key]):
                raise UsageError(f"{key!r} must be a list of strings")
        opts = data.get("options", {}) or {}
        known = {f.name for f in fields(ModelOptions)}
        unknown = set(opts) - known
        if unknown:
            raise UsageError(f"unknown model options: {sorted(unknown)}")
        mf = cls(list(data["variables"]), list(data["polynomials"]), ModelOptions(**opts),
                 str(data.get("name", "")))
        mf.model()  # validate
        return mf

    @classmethod
    def load(cls, path: str | Path) -> "ModelFile":
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read model file {path}: {exc}") from exc
        return cls.from_dict(data)

    def to_dict(self) -> dict:
        out = {"variables": self.variables, "polynomials": self.polynomials,
               "options": {f.name: getattr(self.options, f.name) for f in fields(ModelOptions)}}
        if self.name:
            out["name"] = self.name
        return out

    def model(self) -> ModelSpec:
        if not self.polynomials:
            raise UsageError("at least one polynomial is required")
        return ModelSpec.from_strings(self.polynomials, self.variables, self.name)


# ---------------------------------------------------------------------------
# helpers


def _model_file(args) -> ModelFile:
    if args.model and args.f:
        raise UsageError("give either --model or --f, not both")
    if args.model:
        mf = ModelFile.load(args.model)
    elif args.f:
        names = [v.strip() for v in (args.vars or "x").split(",") if v.strip()]
        mf = ModelFile(names, list(args.f))
        mf.model()
    else:
        raise UsageError("a model is required (--model FILE or --f EXPR --vars x,y)")
    o = mf.options
    for flag in ("seed", "trials", "tol_final", "max_paths", "k_max", "q_max", "degree",
                 "expect_chi"):
        val = getattr(args, flag, None)
        if val is not None:
            setattr(o, flag, val)
    return mf


def _solve_options(o: ModelOptions) -> SolveOptions:
    return SolveOptions(tol_final=o.tol_final, tol_omega=o.tol_omega, max_paths=o.max_paths,
                        tracker=TrackerOptions())


def _parse_monomial(text: str, model: ModelSpec) -> Mono:
    """A monomial in the parameter names, e.g. ``nu1^2*s``; returns flat exponents."""
    p = parse_laurent(text, model.param_names)
    if len(p.terms) != 1:
        raise UsageError(f"{text!r} is not a single monomial")
    (e, c), = p.terms.items()
    if c != 1:
        raise UsageError(f"{text!r} has coefficient {c}; expected 1")
    return tuple(e)


def _basis(args, mf: ModelFile, model: ModelSpec) -> list[Mono]:
    if getattr(args, "basis", None):
        return [_parse_monomial(t, model) for t in args.basis.split(",") if t.strip()]
    return find_basis(model, degree=mf.options.degree, seed=mf.options.seed,
                      options=_solve_options(mf.options))


def _fmt_complex(z: complex) -> str:
    return f"{z.real:.12g}{z.imag:+.12g}j"


def _dumps(payload: dict) -> str:
    return json.dumps({"schema": SCHEMA, **payload}, indent=2, sort_keys=True,
                      ensure_ascii=False) + "\n"


def _emit(args, payload: dict, text: str, out_name: str | None = None) -> None:
    body = _dumps(payload) if args.json else text
    if args.out and out_name:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / (out_name + (".json" if args.json else ".txt"))).write_text(body, encoding="utf-8")
    else:
        sys.stdout.write(body)


def _write_matrices(args, mats: dict[str, MatK], ell: int) -> None:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name, m in mats.items():
        (out / f"{name}.txt").write_text(m.to_text(ell), encoding="utf-8")


# ---------------------------------------------------------------------------
# subcommands


def cmd_chi(args) -> int:
    mf = _model_file(args)
    o = mf.options
    chi = euler_characteristic(mf.model(), trials=o.trials, seed=o.seed, options=_solve_options(o))
    _emit(args, {"chi": chi, "trials": o.trials, "seed": o.seed}, f"{chi}\n", "chi")
    if o.expect_chi is not None and chi != o.expect_chi:
        raise MathFailure(f"expected chi {o.expect_chi}, found {chi}")
    return 0


def cmd_critical_points(args) -> int:
    mf = _model_file(args)
    model = mf.model()
    pts, spec = critical_points(model, mf.options.seed, _solve_options(mf.options))
    payload = {
        "seed": spec.seed,
        "s": [[z.real, z.imag] for z in spec.s],
        "nu": [[z.real, z.imag] for z in spec.nu],
        "points": [p.to_json() for p in pts],
    }
    lines = [f"# seed {spec.seed}; {len(pts)} critical points"]
    lines += ["  ".join(_fmt_complex(z) for z in p.coordinates) + f"  eta={_fmt_complex(p.eta)}"
              for p in pts]
    _emit(args, payload, "\n".join(lines) + "\n", "critical_points")
    return 0


def cmd_basis(args) -> int:
    mf = _model_file(args)
    model = mf.model()
    B = _basis(args, mf, model)
    labels = format_basis(B, model.ell)
    _emit(args, {"basis": labels, "exponents": [list(b) for b in B]},
          "\n".join(labels) + "\n", "basis")
    return 0


def _contiguity(args, mf: ModelFile):
    model = mf.model()
    B = _basis(args, mf, model)
    return contiguity_matrices(model, B, k_max=mf.options.k_max, q_max=mf.options.q_max,
                               verbose=args.verbose)


def _file_stem(name: str) -> str:
    return name.replace("1/", "inv_")


def cmd_contiguity(args) -> int:
    mf = _model_file(args)
    cs = _contiguity(args, mf)
    ell = cs.model.ell
    mats = {f"C{d}": cs.to_matk(d) for d in cs.directions}
    summary = {
        "k": cs.k, "q_star": cs.q_star, "chi": cs.chi, "basis": cs.basis_labels(),
        "E": [format_monomial(m, ell) for m in cs.E],
        "trace": [{"k": st.k, "q": st.q, "rank": st.rank} for st in cs.trace],
    }
    if args.out:
        _write_matrices(args, mats, ell)
        out = Path(args.out)
        (out / "contiguity.json").write_text(_dumps(summary), encoding="utf-8")
        return 0
    if args.json:
        summary["matrices"] = {k: [[str(v) for v in r] for r in m.rows] for k, m in mats.items()}
        _emit(args, summary, "")
        return 0
    text = [f"# k = {cs.k}, q* = {cs.q_star}, basis = {', '.join(cs.basis_labels())}"]
    for name, m in mats.items():
        text += [f"## {name}", m.to_text(ell).rstrip("\n")]
    sys.stdout.write("\n".join(text) + "\n")
    return 0


def cmd_expand(args) -> int:
    mf = _model_file(args)
    cs = _contiguity(args, mf)
    model = cs.model
    given = [x is not None for x in (args.form, args.function, args.monomial)]
    if sum(given) != 1:
        raise UsageError("give exactly one of --form, --function, --monomial")
    if args.form is not None:
        coeffs = expand_form(parse_laurent(args.form, model.vars), cs)
    elif args.function is not None:
        coeffs = expand_function(parse_laurent(args.function, model.vars), cs)
    else:
        m = _parse_monomial(args.monomial, model)
        coeffs = expand_class(m[:model.ell], m[model.ell:], cs)
    labels = cs.basis_labels()
    _emit(args, {"basis": labels, "coefficients": [str(c) for c in coeffs]},
          "".join(f"{lab}\t{c}\n" for lab, c in zip(labels, coeffs)), "expansion")
    return 0


def cmd_mult_matrices(args) -> int:
    mf = _model_file(args)
    cs = _contiguity(args, mf)
    ms = multiplication_matrices(cs)
    labels = cs.basis_labels()
    mats = {f"M{_file_stem(g)}": MatK(cs.model.ring, [list(r) for r in ms.matrices[g]], labels,
                                      labels)
            for g in generator_labels(cs)}
    if args.out:
        _write_matrices(args, mats, cs.model.ell)
        return 0
    if args.json:
        _emit(args, {"basis": labels, "matrices": {
            k: [[str(v) for v in r] for r in m.rows] for k, m in mats.items()}}, "")
        return 0
    text = []
    for name, m in mats.items():
        text += [f"## {name}", m.to_text().rstrip("\n")]
    sys.stdout.write("\n".join(text) + "\n")
    return 0


def cmd_residue(args) -> int:
    mf = _model_file(args)
    cs = _contiguity(args, mf)
    model = cs.model
    ms = multiplication_matrices(cs)
    pts, spec = critical_points(model, mf.options.seed, _solve_options(mf.options))
    g = _parse_monomial(args.g, model)
    h = _parse_monomial(args.h, model)
    res = residue_pairing(g, h, ms, pts, spec, NumericAlgebra(ms, spec))
    payload = {"trace": [res.trace_value.real, res.trace_value.imag],
               "sum": [res.direct_value.real, res.direct_value.imag],
               "relative_error": res.relative_error, "seed": spec.seed}
    text = (f"trace\t{_fmt_complex(res.trace_value)}\nsum\t{_fmt_complex(res.direct_value)}\n"
            f"relative_error\t{res.relative_error:.3e}\n")
    _emit(args, payload, text, "residue")
    if res.relative_error > 1e-6:
        raise MathFailure(f"trace formula disagrees with the critical-point sum "
                          f"({res.relative_error:.3g})")
    return 0


SLOW_TARGETS = [
    ("fermat curve d=10", ["x^10 + y^10 - 1"], ["x", "y"], 100),
    ("fermat surface d=3", ["x^3 + y^3 + z^3 - 1"], ["x", "y", "z"], 27),
]


def _slow_pipeline(polys: list[str], names: list[str], want: int) -> tuple[bool, str]:
    """chi, basis, contiguity matrices and their compatibility for one model."""
    model = ModelSpec.from_strings(polys, names)
    chi = euler_characteristic(model, trials=1)
    if chi != want:
        return False, f"chi = {chi}, expected {want}"
    basis = find_basis(model, max_degree=20)
    cs = contiguity_matrices(model, basis)
    ok = verify_twisted_commutation(cs)
    return ok, f"chi = {chi}, (k, q*) = ({cs.k}, {cs.q_star}), commutation {'ok' if ok else 'broken'}"


def cmd_check(args) -> int:
    from .acceptance import Workspace, run_all

    results = run_all(Workspace(), echo=print)
    ok = all(r.passed for r in results)
    if args.slow:
        import time
        # stretch targets are reported but do not change the exit code
        for title, polys, names, want in SLOW_TARGETS:
            t0 = time.perf_counter()
            try:
                good, detail = _slow_pipeline(polys, names, want)
            except MATH_ERRORS as exc:
                good, detail = False, str(exc)
            status = "PASS" if good else "FAIL"
            print(f"{status} [slow] {title} ({time.perf_counter() - t0:.1f}s) {detail}")
    print(f"{sum(r.passed for r in results)}/{len(results)} criteria passed")
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# parser


def _add_model_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--model", help="model JSON file")
    p.add_argument("--f", action="append", metavar="EXPR",
                   help="polynomial (repeat for several); alternative to --model")
    p.add_argument("--vars", help="comma-separated variable names for --f (default x)")
    p.add_argument("--seed", type=int)
    p.add_argument("--tol-final", type=float, dest="tol_final")
    p.add_argument("--max-paths", type=int, dest="max_paths")
    p.add_argument("--json", action="store_true", help="JSON output")
    p.add_argument("--out", metavar="DIR", help="write results into DIR")


def _add_contiguity_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--basis", help="comma-separated basis monomials, e.g. '1,nu,nu^2'")
    p.add_argument("--degree", type=int, help="initial degree bound of the basis pool")
    p.add_argument("--k-max", type=int, dest="k_max")
    p.add_argument("--q-max", type=int, dest="q_max")
    p.add_argument("--verbose", action="store_true", help="print the rank trace")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="twistcoh",
                                 description="Twisted cohomology and contiguity matrices.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("chi", help="Euler characteristic by homotopy continuation")
    _add_model_args(p)
    p.add_argument("--trials", type=int)
    p.add_argument("--expect-chi", type=int, dest="expect_chi")
    p.set_defaults(func=cmd_chi)

    p = sub.add_parser("critical-points", help="critical points at a random parameter point")
    _add_model_args(p)
    p.set_defaults(func=cmd_critical_points)

    p = sub.add_parser("basis", help="monomial basis of the likelihood quotient")
    _add_model_args(p)
    _add_contiguity_args(p)
    p.set_defaults(func=cmd_basis)

    p = sub.add_parser("contiguity", help="exact contiguity matrices")
    _add_model_args(p)
    _add_contiguity_args(p)
    p.set_defaults(func=cmd_contiguity)

    p = sub.add_parser("expand", help="coordinates of a class in the basis")
    _add_model_args(p)
    _add_contiguity_args(p)
    p.add_argument("--form", help="coefficient of dx_1...dx_n, e.g. '(x+1)/x^2'")
    p.add_argument("--function", help="function multiplying dx/x")
    p.add_argument("--monomial", help="shift monomial, e.g. 's*nu^-2'")
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("mult-matrices", help="multiplication matrices of the delta -> 0 limit")
    _add_model_args(p)
    _add_contiguity_args(p)
    p.set_defaults(func=cmd_mult_matrices)

    p = sub.add_parser("residue", help="residue pairing by trace formula and by critical points")
    _add_model_args(p)
    _add_contiguity_args(p)
    p.add_argument("--g", required=True,
                   help="monomial in the parameter names; s_i stands for 1/f_i, nu_j for x_j")
    p.add_argument("--h", required=True, help="second monomial, same convention as --g")
    p.set_defaults(func=cmd_residue)

    p = sub.add_parser("check", help="run the acceptance fixtures")
    p.add_argument("--slow", action="store_true", help="also run the large stretch targets")
    p.set_defaults(func=cmd_check)
    return ap


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ParseError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except MathFailure as exc:
        print(f"failure: {exc}", file=sys.stderr)
        return 1
    except MATH_ERRORS as exc:
        print(f"failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())
