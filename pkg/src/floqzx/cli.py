"""Batch command-line front end.

Exit codes: 0 success, 1 verification refuted (witness written), 2 usage or
input error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .diagram import DiagramError, ZXDiagram
from .errors import distance_report
from .floquet import (FloquetResult, PeriodicSchedule, code_params,
                      floquetify, parse_code)
from .interpret import BudgetExceeded
from .rules import RULE_NAMES, catalogue_summary, rule
from .rewrite import verify_distance_preserving, verify_semantics
from .synth import measurement_circuit_for
from .webs import boundary_pauli, classify, web_basis


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--tol", type=float, default=1e-9, help="semantic tolerance")
    p.add_argument("--budget", type=int, default=16,
                   help="max boundary legs for dense interpretation")
    p.add_argument("--seed", type=int, default=0, help="seed for randomised checks")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="floqzx",
                                 description="distance-preserving ZX rewrites and "
                                             "Floquetification of stabiliser codes")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("floquetify", help="synthesise a Floquet code from a code file")
    p.add_argument("code_file")
    p.add_argument("--out", help="write the schedule to this file")
    p.add_argument("--audit", action="store_true", help="print the rewrite audit trail")
    _add_common(p)

    p = sub.add_parser("params", help="report n/k/d of a schedule file")
    p.add_argument("schedule_file")
    p.add_argument("--wmax", type=int, default=None)
    _add_common(p)

    p = sub.add_parser("distance", help="brute-force ZX distance of a diagram file")
    p.add_argument("--diagram", required=True)
    p.add_argument("--wmax", type=int, required=True)
    _add_common(p)

    p = sub.add_parser("check-rule", help="verify a library rewrite rule")
    p.add_argument("name", choices=RULE_NAMES)
    p.add_argument("--n", type=int, default=None, help="leg parameter")
    p.add_argument("--witness", help="file for the refutation witness")
    _add_common(p)

    p = sub.add_parser("webs", help="basis of Pauli webs of a diagram file")
    p.add_argument("diagram_file")
    _add_common(p)

    p = sub.add_parser("decompose", help="decompose one Pauli measurement")
    p.add_argument("--pauli", required=True)
    _add_common(p)

    p = sub.add_parser("rules", help="list the rule catalogue")
    _add_common(p)
    return ap


def _cmd_floquetify(args) -> int:
    code = parse_code(Path(args.code_file).read_text())
    res = floquetify(code)
    text = res.schedule.to_text()
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    p = res.params
    print(f"n={p.n} k={p.k} d={p.distance_text()} "
          f"established_at={p.establishment} ancillas={p.ancilla_overhead}")
    if args.audit:
        for kind, info in res.audit:
            print(f"audit: {kind} {info}")
    return 0


def _cmd_params(args) -> int:
    sched = PeriodicSchedule.from_text(Path(args.schedule_file).read_text())
    p = code_params(sched, w_max=args.wmax)
    print(f"n={p.n} k={p.k} d={p.distance_text()}")
    return 0


def _cmd_distance(args) -> int:
    d = ZXDiagram.from_text(Path(args.diagram).read_text())
    sys.stdout.write(distance_report(d, args.wmax, tol=args.tol,
                                     max_boundary=args.budget))
    return 0


def _cmd_check_rule(args) -> int:
    r = rule(args.name, args.n)
    if not verify_semantics(r, args.tol, max_boundary=args.budget):
        print(f"{r.name}: semantics REFUTED")
        return 1
    rep = verify_distance_preserving(r, tol=args.tol)
    print(f"{r.name}: semantics ok, distance {rep.verdict}")
    if rep.verdict == "refuted":
        witness = (f"# weight-{rep.witness.weight()} error on {rep.witness_side} "
                   f"internal edges with no boundary-equivalent of that weight\n"
                   + rep.witness.to_text(r.rhs if rep.witness_side == "rhs" else r.lhs))
        if rep.equivalent is not None:
            witness += (f"# cheapest equivalent error has weight "
                        f"{rep.equivalent.weight()}\n")
        if args.witness:
            Path(args.witness).write_text(witness)
        else:
            sys.stdout.write(witness)
        return 1
    return 0


def _cmd_webs(args) -> int:
    d = ZXDiagram.from_text(Path(args.diagram_file).read_text())
    basis = web_basis(d)
    print(f"# web space dimension {len(basis)}")
    for i, w in enumerate(basis):
        tag = classify(d, w, basis).tag
        print(f"web {i} class {tag} in {boundary_pauli(d, w, 'in')} "
              f"out {boundary_pauli(d, w, 'out')}")
        sys.stdout.write(w.to_text(d))
    return 0


def _cmd_decompose(args) -> int:
    circ, rep = measurement_circuit_for(args.pauli)
    sys.stdout.write(circ.to_text())
    print(f"qubits={rep['qubits']} paths={rep['paths']} "
          f"bound={rep['bound']:.2f} within_bound={rep['within_bound']}")
    return 0 if rep["within_bound"] else 1


def _cmd_rules(args) -> int:
    for row in catalogue_summary():
        print(f"{row['name']}: legs={row['boundary_legs']} "
              f"lhs_internal={row['lhs_internal_edges']} "
              f"rhs_internal={row['rhs_internal_edges']} params={row['params']}")
    return 0


_COMMANDS = {
    "floquetify": _cmd_floquetify,
    "params": _cmd_params,
    "distance": _cmd_distance,
    "check-rule": _cmd_check_rule,
    "webs": _cmd_webs,
    "decompose": _cmd_decompose,
    "rules": _cmd_rules,
}


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return _COMMANDS[args.command](args)
    except (DiagramError, BudgetExceeded, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
