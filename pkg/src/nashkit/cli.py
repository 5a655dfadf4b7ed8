"""Command-line surface: stable JSON in, stable JSON out.

Exit codes: 0 success, 2 malformed input, 3 precondition violation,
4 numerical failure or broken internal postcondition.  Matrices travel as
{"mode": "exact"|"approx", "entries": [[...]]} with exact entries "p/q";
algebras as {"generators": [...]} or {"basis": [...]}.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import selftest as selftest_mod
from .cartan_iwasawa import cartan_split, iwasawa_kan, maximal_abelian, polar_kak, restricted_roots
from .errors import NashkitError
from .explog import (
    exp_hyperbolic,
    exp_nilpotent,
    log_exponential,
    log_hyperbolic,
    log_unipotent,
)
from .jordan import (
    ALGEBRA,
    GROUP,
    additive_jordan,
    classify,
    multiplicative_jordan,
    sn_split,
)
from .liealg import (
    ADJOINT,
    DERIVED,
    LOWER_CENTRAL,
    NATURAL,
    algebra_from_basis,
    is_reductive,
    levi_complement,
    lie_closure,
    radical,
    series,
    trace_form,
    unipotent_radical,
)
from .matrix_core import (
    DEFAULT_TOL,
    EXACT,
    Matrix,
    fraction_to_str,
    matrix_from_json,
    matrix_to_json,
)
from .replica import replica
from .triangularize import engel_flag, split_triangularize

EXIT_MALFORMED = 2


class MalformedInput(Exception):
    pass


def _scalar(x):
    if isinstance(x, Fraction):
        return fraction_to_str(x)
    return float(x)


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise MalformedInput(f"cannot read {path}: {exc}")


def _coerce_track(m: Matrix, args) -> Matrix:
    if args.numeric == "approx" and m.mode == EXACT:
        return m.to_approx(args.tol)
    if args.numeric == "exact" and m.mode != EXACT:
        return Matrix.exact([[Fraction(float(x)) for x in row] for row in m.data])
    return m


def _load_matrix(path: str, args) -> Matrix:
    try:
        m = matrix_from_json(_load_json(path), tol=args.tol)
    except (ValueError, TypeError) as exc:
        raise MalformedInput(str(exc))
    return _coerce_track(m, args)


def _load_algebra(path: str, args):
    obj = _load_json(path)
    if not isinstance(obj, dict) or not ({"generators", "basis"} & set(obj)):
        raise MalformedInput("algebra JSON needs 'generators' or 'basis'")
    key = "generators" if "generators" in obj else "basis"
    try:
        mats = [matrix_from_json(mj, tol=args.tol) for mj in obj[key]]
    except (ValueError, TypeError) as exc:
        raise MalformedInput(str(exc))
    mats = [_coerce_track(m, args) for m in mats]
    ambient = obj.get("ambient")
    try:
        if key == "generators":
            return lie_closure(mats, ambient=ambient)
        return algebra_from_basis(mats, ambient=ambient)
    except ValueError as exc:
        raise MalformedInput(str(exc))


def _emit(obj) -> int:
    json.dump(obj, sys.stdout, indent=None, separators=(",", ":"))
    sys.stdout.write("\n")
    return 0


# -- command handlers ----------------------------------------------------------


def _cmd_jordan(args) -> int:
    x = _load_matrix(args.input, args)
    triple = multiplicative_jordan(x) if args.mode == "mul" else additive_jordan(x)
    cls = classify(x, GROUP if args.setting == "group" else ALGEBRA)
    return _emit({
        "e": matrix_to_json(triple.e),
        "h": matrix_to_json(triple.h),
        "u": matrix_to_json(triple.u),
        "class": cls.as_dict(),
    })


def _cmd_snsplit(args) -> int:
    s, n = sn_split(_load_matrix(args.input, args))
    return _emit({"s": matrix_to_json(s), "n": matrix_to_json(n)})


def _cmd_classify(args) -> int:
    cls = classify(_load_matrix(args.input, args),
                   GROUP if args.setting == "group" else ALGEBRA)
    return _emit(cls.as_dict())


def _cmd_explog(args) -> int:
    x = _load_matrix(args.input, args)
    table = {
        ("exp", "nilpotent"): exp_nilpotent,
        ("log", "nilpotent"): log_unipotent,
        ("exp", "hyperbolic"): exp_hyperbolic,
        ("log", "hyperbolic"): log_hyperbolic,
        ("log", "exponential"): log_exponential,
    }
    if (args.direction, args.domain) == ("exp", "exponential"):
        raise MalformedInput("exp on the exponential locus is the plain matrix "
                             "exponential; use --domain nilpotent or hyperbolic")
    out = table[(args.direction, args.domain)](x)
    return _emit({"result": matrix_to_json(out)})


def _cmd_lie(args) -> int:
    g = _load_algebra(args.input, args)
    if args.op == "close":
        return _emit({"dim": g.dim, "basis": [matrix_to_json(b) for b in g.basis]})
    if args.op == "series":
        kind = DERIVED if args.kind == "derived" else LOWER_CENTRAL
        chain = series(g, kind)
        return _emit({"kind": args.kind,
                      "chain": [[matrix_to_json(m) for m in stage] for stage in chain]})
    if args.op == "radical":
        return _emit({"radical": [matrix_to_json(m) for m in radical(g)]})
    if args.op == "trace-form":
        rep = NATURAL if args.rep == "natural" else ADJOINT
        tf = trace_form(g, rep)
        return _emit({"rep": args.rep, "gram": matrix_to_json(tf.gram)})
    if args.op == "reductive":
        return _emit({"reductive": is_reductive(g)})
    if args.op == "unipotent-radical":
        return _emit({"unipotent_radical": [matrix_to_json(m) for m in unipotent_radical(g)]})
    decomp = levi_complement(g)
    return _emit({
        "levi": [matrix_to_json(m) for m in decomp.levi_basis],
        "unipotent_radical": [matrix_to_json(m) for m in decomp.unip_basis],
    })


def _flag_json(flag) -> dict:
    return {
        "complete": flag.complete,
        "stages": [[[_scalar(x) for x in v] for v in stage] for stage in flag.stages],
    }


def _cmd_flag(args) -> int:
    g = _load_algebra(args.input, args)
    if args.op == "engel":
        return _emit({"flag": _flag_json(engel_flag(g))})
    p, flag = split_triangularize(g)
    return _emit({"change_of_basis": matrix_to_json(p), "flag": _flag_json(flag)})


def _cmd_cartan(args) -> int:
    if args.op in ("split", "roots"):
        g = _load_algebra(args.input, args)
        split = cartan_split(g)
        if args.op == "split":
            return _emit({
                "k": [matrix_to_json(m) for m in split.k_basis],
                "p": [matrix_to_json(m) for m in split.p_basis],
            })
        a = maximal_abelian(split)
        rd = restricted_roots(g, a)
        return _emit({
            "a": [matrix_to_json(m) for m in rd.a_basis],
            "roots": [[_scalar(c) for c in alpha] for alpha in rd.roots],
            "positive": list(rd.positive),
            "root_space_dims": [len(s) for s in rd.root_spaces],
            "zero_space_dim": len(rd.zero_space),
        })
    x = _load_matrix(args.input, args)
    adapted = None
    if args.algebra:
        g = _load_algebra(args.algebra, args)
        adapted, _ = split_triangularize(g)
    if args.op == "kak":
        k, big_x = polar_kak(x)
        return _emit({"k": matrix_to_json(k), "X": matrix_to_json(big_x)})
    triple = iwasawa_kan(x, adapted_basis=adapted)
    return _emit({"k": matrix_to_json(triple.k), "a": matrix_to_json(triple.a),
                  "n": matrix_to_json(triple.n)})


def _cmd_replica(args) -> int:
    datum = replica(_load_matrix(args.input, args))
    out = {"kind": datum.kind, "dimension": datum.dimension}
    if datum.relation_lattice is not None:
        out["lattice"] = [list(v) for v in datum.relation_lattice]
        out["slots"] = [_scalar(v) for v in datum.slots]
    if datum.generator is not None:
        out["generator"] = matrix_to_json(datum.generator)
    return _emit(out)


def _cmd_selftest(args) -> int:
    results = selftest_mod.run_all(args.seed)
    report = {
        "seed": args.seed,
        "results": [{"name": r.name, "passed": r.passed, "detail": r.detail}
                    for r in results],
        "all_passed": all(r.passed for r in results),
    }
    _emit(report)
    return 0 if report["all_passed"] else 1


# -- parser ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nashkit",
        description="Structure decompositions of real matrix groups and Lie algebras",
    )
    parser.add_argument("--exact", dest="numeric", action="store_const", const="exact",
                        help="force inputs onto the exact rational track")
    parser.add_argument("--approx", dest="numeric", action="store_const", const="approx",
                        help="force inputs onto the float track")
    parser.add_argument("--tol", type=float, default=None,
                        help="relative tolerance for the float track")
    parser.add_argument("--seed", type=int, default=0, help="seed for randomized suites")
    parser.add_argument("--json", action="store_true", help="JSON output (the default)")
    parser.set_defaults(numeric=None)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("jordan", help="elliptic/hyperbolic/unipotent decomposition")
    p.add_argument("--mode", choices=("mul", "add"), default="mul")
    p.add_argument("--setting", choices=("group", "algebra"), default="group")
    p.add_argument("input")
    p.set_defaults(func=_cmd_jordan)

    p = sub.add_parser("snsplit", help="semisimple + nilpotent splitting")
    p.add_argument("input")
    p.set_defaults(func=_cmd_snsplit)

    p = sub.add_parser("classify", help="element classification predicates")
    p.add_argument("--setting", choices=("group", "algebra"), default="group")
    p.add_argument("input")
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("explog", help="exp/log on nilpotent, hyperbolic, exponential loci")
    p.add_argument("direction", choices=("exp", "log"))
    p.add_argument("--domain", choices=("nilpotent", "hyperbolic", "exponential"),
                   required=True)
    p.add_argument("input")
    p.set_defaults(func=_cmd_explog)

    p = sub.add_parser("lie", help="Lie algebra structure computations")
    p.add_argument("op", choices=("close", "series", "radical", "trace-form",
                                  "reductive", "unipotent-radical", "levi"))
    p.add_argument("--kind", choices=("derived", "lower-central"), default="derived")
    p.add_argument("--rep", choices=("natural", "adjoint"), default="natural")
    p.add_argument("input")
    p.set_defaults(func=_cmd_lie)

    p = sub.add_parser("flag", help="Engel flags and split triangularization")
    p.add_argument("op", choices=("engel", "split"))
    p.add_argument("input")
    p.set_defaults(func=_cmd_flag)

    p = sub.add_parser("cartan", help="involution split, roots, KAK, KAN")
    p.add_argument("op", choices=("split", "roots", "kak", "kan"))
    p.add_argument("--algebra", default=None,
                   help="algebra JSON for an adapted basis (kan only)")
    p.add_argument("input")
    p.set_defaults(func=_cmd_cartan)

    p = sub.add_parser("replica", help="smallest closed subgroup through an element")
    p.add_argument("input")
    p.set_defaults(func=_cmd_replica)

    p = sub.add_parser("selftest", help="run the acceptance battery")
    p.set_defaults(func=_cmd_selftest)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.tol is None:
        env = os.environ.get("NASHKIT_TOL")
        args.tol = float(env) if env else DEFAULT_TOL
    try:
        return args.func(args)
    except MalformedInput as exc:
        _emit({"error": "MalformedInput", "detail": str(exc)})
        return EXIT_MALFORMED
    except NashkitError as exc:
        _emit({"error": exc.code, "detail": str(exc)})
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
