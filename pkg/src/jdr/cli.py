"""Command line: ``jdr verify``, ``jdr reduce`` and ``jdr relations``."""

from __future__ import annotations

import argparse
import json
import sys

from .algebra import AnnihilatorSpec, parse_param
from .diagrams import ETA, format_combo, parse_combo
from .reduction import CASE_NAMES, BasisVector, Engine, UnmatchedTerm
from .scenarios import UnknownScenario, reports_json, run_suite


def _alpha(text):
    if text in (None, "sym"):
        return None
    return parse_param(text).constant_value()


def _engine(args, kind="cyclic"):
    if kind == "noncyclic":
        return Engine(AnnihilatorSpec.noncyclic(), mode=args.mode)
    return Engine(AnnihilatorSpec.cyclic(_alpha(args.alpha)), mode=args.mode)


def cmd_verify(args, out):
    try:
        reports, code = run_suite(args.filter, seed=args.seed)
    except UnknownScenario as exc:
        print("unknown scenario: %s" % exc, file=sys.stderr)
        return 2
    if args.format == "json":
        out.write(reports_json(reports) + "\n")
    else:
        for r in reports:
            out.write("%-4s %-40s %6d ms  %s\n" % (r.status.upper(), r.id, r.ms, r.computed))
            if r.status != "pass":
                out.write("     expected: %s\n" % r.expected)
        n = sum(r.status == "pass" for r in reports)
        out.write("%d/%d scenarios passed\n" % (n, len(reports)))
    return code


def _case_of(combo):
    legs = [l for d in combo.terms for l in d.legs]
    if any(l.basis == ETA for l in legs):
        return "noncyclic3"
    return "cyclic3" if any(l.copy == 3 for l in legs) else "cyclic2"


def cmd_reduce(args, out):
    combo = parse_combo(" ".join(args.expr))
    case = args.case or _case_of(combo)
    E = _engine(args, "noncyclic" if case == "noncyclic3" else "cyclic")
    if case == "cyclic2":
        res = E.reduce_combo2(combo)
    elif case == "cyclic3":
        res = E.reduce_combo3(combo)
    else:
        res = E.reduce_noncyclic(combo)
    vec = BasisVector.from_combo(res, case)
    if args.format == "json":
        out.write(json.dumps({"case": case, "value": str(vec),
                              "coords": {n: str(vec.coords[n]) for n in vec.names},
                              "lower": format_combo(vec.lower)}, sort_keys=True) + "\n")
    else:
        out.write(str(vec) + "\n")
    return 0


def cmd_relations(args, out):
    from . import relations as R
    case = args.case
    kind = "noncyclic" if case == "noncyclic3" else "cyclic"
    E = _engine(args, kind)
    rels = []
    if case == "noncyclic3":
        for rel in R.noncyclic_relations(E):
            if args.aut is None or rel.aut.kind == args.aut:
                rels.append(rel)
    elif args.aut == "lambda":
        if E.alpha != 1:
            print("the lambda family is computed at alpha = 1", file=sys.stderr)
            return 2
        for name in ("Gamma1", "Gamma2", "Gamma3"):
            rels.append(R.lambda_relation(name, engine=E))
    elif args.aut == "chi":
        if E.alpha != 1:
            print("the chi family is sampled at alpha = 1", file=sys.stderr)
            return 2
        from .scenarios import chi_points
        for a, b in chi_points(2):
            for name in ("Gamma1", "Gamma2"):
                rels.append(R.apply_aut(E, name, R.AutChi(a, b), case))
    elif args.aut in ("mu", "nu", "rho"):
        print("%s acts on the t+1 module only (use --case noncyclic3)" % args.aut, file=sys.stderr)
        return 2
    else:
        for rel in R.cyclic_relations(E, case):
            if args.aut is None or rel.aut.kind == args.aut:
                rels.append(rel)
    seen = set()
    uniq = []
    for rel in rels:
        v = R.normalize_sign(rel.vector)
        key = str(v)
        if key not in seen and not v.is_zero():
            seen.add(key)
            uniq.append((rel, v))
    if args.format == "json":
        out.write(json.dumps({"case": case, "relations": [
            {"source": rel.lhs, "aut": str(rel.aut), "relation": "%s = 0" % v} for rel, v in uniq]},
            indent=2, sort_keys=True) + "\n")
    else:
        for rel, v in uniq:
            out.write("%-24s %-18s %s = 0\n" % (rel.lhs, rel.aut, v))
    return 0


def build_parser():
    p = argparse.ArgumentParser(prog="jdr", description="Exact checks in degree-2 colored Jacobi diagram spaces.")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run the named reproduction scenarios")
    v.add_argument("--filter", default=None, help="run scenarios whose id starts with this prefix")
    v.add_argument("--format", choices=("text", "json"), default="text")
    v.add_argument("--seed", type=int, default=0)
    v.set_defaults(func=cmd_verify)

    r = sub.add_parser("reduce", help="reduce a diagram expression to named generators")
    r.add_argument("expr", nargs="+")
    r.add_argument("--mode", choices=("quotient", "full"), default="quotient")
    r.add_argument("--alpha", default="sym")
    r.add_argument("--case", choices=tuple(CASE_NAMES), default=None)
    r.add_argument("--format", choices=("text", "json"), default="text")
    r.set_defaults(func=cmd_reduce)

    q = sub.add_parser("relations", help="list relations from automorphisms and holonomy")
    q.add_argument("--case", choices=tuple(CASE_NAMES), default="cyclic3")
    q.add_argument("--alpha", default="sym")
    q.add_argument("--aut", choices=("t", "holbar", "lambda", "chi", "mu", "nu", "rho"), default=None)
    q.add_argument("--mode", choices=("quotient", "full"), default="quotient")
    q.add_argument("--format", choices=("text", "json"), default="text")
    q.set_defaults(func=cmd_relations)
    return p


def main(argv=None, out=None):
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except (ValueError, KeyError, UnmatchedTerm) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
