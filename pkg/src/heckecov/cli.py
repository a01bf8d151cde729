"""Command-line front end.

    heckecov enumerate s3-s2
    heckecov structure bc-one-prime --p 3 --format csv
    heckecov verify s3-s2 all --seed 42
    heckecov verify s3-s2 s1-covariance --inject-fault character-v
    heckecov export s4-s3 --out s4.json

Exit codes: 0 when every check passes, 1 when some check fails, 2 for usage
errors (unknown instance or parameter, inapplicable suite, export of an
infinite instance) and 3 when an orbit exceeds its enumeration cap.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from .fell import group_algebra
from .groups import ConfigurationError
from .hecke import structure_constants
from .instances import CATALOG, load_instance, pair_of
from .l2rep import lambda_op, m_indicator, rho_op
from .pair import OrbitCapExceeded
from .reports import _plain
from .semigroup import SemidirectHeckeInstance
from .suites import FAULTS, SUITES, applicable, run_suite

SCHEMA = 1
STRUCTURE_KEYS_LAZY = 5  # double cosets exported for an infinite instance


class UsageError(Exception):
    pass


# --- configuration ----------------------------------------------------------

def _params(args) -> dict:
    out = {}
    for kv in args.param or []:
        if "=" not in kv:
            raise UsageError(f"--param expects k=v, got {kv!r}")
        k, v = kv.split("=", 1)
        out[k.strip()] = v.strip()
    if args.p is not None:
        out["p"] = args.p
    if args.window is not None:
        out["window"] = args.window
    return out


def _load(args):
    name = args.instance_opt or args.instance
    if not name:
        raise UsageError("no instance given")
    if name not in CATALOG:
        raise UsageError(f"unknown instance {name!r}; known: {', '.join(sorted(CATALOG))}")
    params = _params(args)
    try:
        inst = load_instance(name, params)
    except (ConfigurationError, ValueError, TypeError) as exc:
        raise UsageError(str(exc)) from None
    return name, inst


def instance_spec(inst) -> dict:
    """What the instance is, in plain data (group, H generators, and S for semidirect pairs)."""
    pair = pair_of(inst)
    g = pair.group
    spec = {"kind": "finite" if pair.is_finite else "semidirect", "group": g.name,
            "h_generators": [g.format(h) for h in pair.h_generators]}
    if isinstance(inst, SemidirectHeckeInstance):
        spec["n_group"] = g.n_group.name
        spec["q_group"] = g.q_group.name
        spec["s_generators"] = [str(s) for s in inst.s_spec.generators]
        spec["term_budget"] = inst.term_budget
    return spec


def _header(command: str, name: str, inst) -> dict:
    params = dict(CATALOG[name].defaults)
    params.update(getattr(inst, "params", {}) or {})
    return {"schema": SCHEMA, "command": command, "instance": name, "params": _plain(params),
            "spec": instance_spec(inst)}


# --- output -------------------------------------------------------------------

def _emit(args, doc: dict, rows: list[list] | None) -> None:
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        for row in rows or []:
            w.writerow(row)
        text = buf.getvalue()
    else:
        text = json.dumps(doc, sort_keys=True, indent=2) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# --- verbs --------------------------------------------------------------------

def cmd_enumerate(args) -> int:
    name, inst = _load(args)
    pair = pair_of(inst)
    if pair.is_finite:
        cosets = pair.cosets()
    else:
        cosets = sorted({pair.coset_key(x) for x in inst.window})
    dcs = sorted({pair.double_coset_key(c.rep) for c in cosets})
    doc = _header("enumerate", name, inst)
    doc["exhaustive"] = pair.is_finite
    doc["cosets"] = [{"key": pair.fmt(c), "R": pair.R(c.rep),
                      "double_coset": pair.fmt(pair.double_coset_key(c.rep))} for c in cosets]
    doc["double_cosets"] = [{"key": pair.fmt(d), "R": pair.R(d.rep), "L": pair.L(d.rep)} for d in dcs]
    rows = [["kind", "key", "R", "L"]]
    rows += [["coset", e["key"], e["R"], ""] for e in doc["cosets"]]
    rows += [["double_coset", e["key"], e["R"], e["L"]] for e in doc["double_cosets"]]
    _emit(args, doc, rows)
    return 0


def _structure_keys(inst, pair) -> list:
    if pair.is_finite:
        return [d.rep for d in pair.double_cosets()]
    # one double coset per (R, L) class, smallest classes first
    by_class: dict = {}
    for d in sorted({pair.double_coset_key(x) for x in inst.window}):
        by_class.setdefault((pair.R(d.rep) * pair.L(d.rep), pair.R(d.rep)), d)
    return [by_class[k].rep for k in sorted(by_class)[:STRUCTURE_KEYS_LAZY]]


def cmd_structure(args) -> int:
    name, inst = _load(args)
    pair = pair_of(inst)
    table = structure_constants(pair, _structure_keys(inst, pair))
    doc = _header("structure", name, inst)
    doc["exhaustive"] = pair.is_finite
    doc["basis"] = [pair.fmt(k) for k in table.keys]
    doc["rows"] = [list(r) for r in table.rows()]
    _emit(args, doc, [["x", "y", "z", "coefficient"]] + doc["rows"])
    return 0


def _suites_for(inst, requested: str) -> list[str]:
    if requested == "all":
        return [s for s in SUITES if applicable(inst, s)]
    if requested not in SUITES:
        raise UsageError(f"unknown suite {requested!r}; known: {', '.join(SUITES)}, all")
    if not applicable(inst, requested):
        raise UsageError(f"suite {requested} does not apply to instance {pair_of(inst).name}")
    return [requested]


def cmd_verify(args) -> int:
    name, inst = _load(args)
    suites = _suites_for(inst, args.suite_opt or args.suite or "all")
    doc = _header("verify", name, inst)
    doc.update({"seed": args.seed, "fault": args.inject_fault, "suites": []})
    rows = [["suite", "check", "passed", "probes", "witness"]]
    failed = 0
    for s in suites:
        reports = run_suite(inst, s, seed=args.seed, fault=args.inject_fault)
        checks = [r.to_dict() for r in reports]
        bad = sum(not r.passed for r in reports)
        failed += bad
        doc["suites"].append({"suite": s, "passed": bad == 0, "checks": checks})
        for c in checks:
            w = json.dumps(c.get("witness"), sort_keys=True) if "witness" in c else ""
            rows.append([s, c["name"], c["passed"], c["probes"], w])
    doc["failed"] = failed
    doc["passed"] = failed == 0
    _emit(args, doc, rows)
    return 0 if failed == 0 else 1


def _matrix_doc(m) -> dict:
    return {"rows": [[str(x) for x in row] for row in m.entries()]}


def cmd_export(args) -> int:
    name, inst = _load(args)
    pair = pair_of(inst)
    if not pair.is_finite:
        raise UsageError(f"export needs a finite instance; {name} has infinitely many cosets")
    g = pair.group
    cosets = pair.cosets()
    ops = []
    for c in cosets:
        ops.append(("M", pair.fmt(c), m_indicator(pair, c.rep)))
    for d in pair.double_cosets():
        ops.append(("rho", pair.fmt(d), rho_op(pair, d.rep)))
    for x in sorted(g.elements(), key=g.sort_key):
        ops.append(("lambda", g.format(x), lambda_op(pair, x)))
    doc = _header("export", name, inst)
    doc["basis"] = [pair.fmt(c) for c in cosets]
    doc["matrices"] = [{"op": op, "label": lab, **_matrix_doc(m)} for op, lab, m in ops]
    doc["graded_algebra"] = group_algebra(g).to_spec()
    rows = [["op", "label", "row", "col", "value"]]
    for op, lab, m in ops:
        for i, row in enumerate(m.entries()):
            for j, x in enumerate(row):
                if x:
                    rows.append([op, lab, doc["basis"][i], doc["basis"][j], str(x)])
    _emit(args, doc, rows)
    return 0


# --- parser ---------------------------------------------------------------------

def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("instance", nargs="?", help="catalog name, e.g. s3-s2 or bc-one-prime")
    p.add_argument("--instance", dest="instance_opt", metavar="NAME")
    p.add_argument("--param", action="append", metavar="K=V", help="instance parameter (repeatable)")
    p.add_argument("--p", type=int, help="shorthand for --param p=P")
    p.add_argument("--window", type=int, help="shorthand for --param window=W")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", metavar="PATH", help="write here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="heckecov", description="Covariant representations of Hecke algebras.")
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("enumerate", help="list cosets and double cosets with R values")
    _common(p)
    p.set_defaults(fn=cmd_enumerate)

    p = sub.add_parser("structure", help="structure constants of the Hecke algebra")
    _common(p)
    p.set_defaults(fn=cmd_structure)

    p = sub.add_parser("verify", help="run verification suites")
    _common(p)
    p.add_argument("suite", nargs="?", help=f"one of {', '.join(SUITES)}, all (default)")
    p.add_argument("--suite", dest="suite_opt", metavar="SUITE")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--inject-fault", choices=FAULTS)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("export", help="exact matrices of M, rho and lambda (finite instances)")
    _common(p)
    p.set_defaults(fn=cmd_export)

    p = sub.add_parser("instances", help="list the instance catalog")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(fn=cmd_instances)
    return parser


def cmd_instances(args) -> int:
    doc = {"schema": SCHEMA, "command": "instances",
           "instances": [{"name": e.name, "kind": e.kind, "defaults": dict(e.defaults), "description": e.description}
                         for e in CATALOG.values()]}
    rows = [["name", "kind", "defaults", "description"]]
    rows += [[e["name"], e["kind"], json.dumps(e["defaults"], sort_keys=True), e["description"]]
             for e in doc["instances"]]
    _emit(args, doc, rows)
    return 0


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except UsageError as exc:
        print(f"heckecov: error: {exc}", file=sys.stderr)
        return 2
    except OrbitCapExceeded as exc:
        print(f"heckecov: orbit cap exceeded: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
