"""Command-line front end.

Exit codes: 0 success, 1 a verification failed, 2 bad input.
"""

from __future__ import annotations

import argparse
import sys

from . import io
from .closure import SpecError, analyze, closure_apply, enumerate_stable, normalize
from .corpus import build_corpus
from .groups import GroupError
from .oracle import SampleBox, oracle_closure
from .spectrum import IdealError, ModelError, primes
from .verify import run_suites, suite_oracle_closure, suite_oracle_cuts, summary

OK, FAILED, BAD_INPUT = 0, 1, 2


def _out(obj):
    sys.stdout.write(io.dumps(obj) + "\n")


def _box(args) -> SampleBox:
    try:
        return SampleBox(args.radius, args.density)
    except ValueError as exc:
        raise io.InputError(str(exc)) from None


def cmd_validate(args) -> int:
    try:
        tree = io.load_model(args.model)
    except ModelError as exc:
        if args.json:
            _out({"ok": False, "diagnostics": exc.diagnostics})
        else:
            for d in exc.diagnostics:
                print(d, file=sys.stderr)
        return BAD_INPUT
    report = {
        "ok": True,
        "name": tree.name,
        "branches": {b: list(g.factors) for b, g in tree.branches},
        "nodes": sorted(tree.nodes),
    }
    if args.json:
        _out(report)
    else:
        print(f"model {tree.name or args.model}: ok ({len(tree.branches)} branches, {len(tree.nodes)} primes)")
    return OK


def cmd_primes(args) -> int:
    tree = io.load_model(args.model)
    rows = io.dump_primes(primes(tree))
    if args.json:
        _out(rows)
        return OK
    print(f"{'node':<8} {'maximal':<8} {'principal':<10} {'divisorial':<10}")
    for r in rows:
        print(
            f"{r['node']:<8} {str(r['maximal']).lower():<8} "
            f"{str(r['localized_max_principal']).lower():<10} {str(r['divisorial']).lower():<10}"
        )
    return OK


def cmd_close(args) -> int:
    tree = io.load_model(args.model)
    op = io.load_op(tree, args.op)
    I = io.load_ideal(tree, args.ideal)
    C = closure_apply(tree, op, I)
    _out({"closure": io.dump_ideal(C), "fixed": C == I})
    return OK


def cmd_analyze(args) -> int:
    tree = io.load_model(args.model)
    op = io.load_op(tree, args.op)
    _out(io.dump_spectra(analyze(tree, op, args.depth)))
    return OK


def cmd_normalize(args) -> int:
    tree = io.load_model(args.model)
    op = io.load_op(tree, args.op)
    _out(io.dump_op(normalize(tree, op, args.depth)))
    return OK


def cmd_enumerate(args) -> int:
    tree = io.load_model(args.model)
    _out([io.dump_op(op) for op in enumerate_stable(tree, args.mode or "semistar")])
    return OK


def cmd_count(args) -> int:
    tree = io.load_model(args.model)
    modes = [args.mode] if args.mode else ["smstar", "semistar"]
    _out({m: len(enumerate_stable(tree, m)) for m in modes})
    return OK


def cmd_verify(args) -> int:
    tree = io.load_model(args.model)
    extra = io.load_op(tree, args.op, strict=False) if args.op else None
    suites = run_suites(tree, seed=args.seed, cases=args.cases, box=_box(args), depth=args.depth, extra=extra)
    report = summary(suites)
    _out(report)
    return OK if report["ok"] else FAILED


def cmd_oracle(args) -> int:
    tree = io.load_model(args.model)
    box = _box(args)
    if args.ideal and not args.op:
        raise io.InputError("--ideal needs --op")
    if args.op and args.ideal:
        op = io.load_op(tree, args.op)
        verdict = oracle_closure(tree, op, io.load_ideal(tree, args.ideal), box)
        _out(verdict.as_dict())
        return OK if verdict.ok else FAILED
    ops = [io.load_op(tree, args.op)] if args.op else enumerate_stable(tree, "semistar")
    corpus = build_corpus(tree, seed=args.seed, cases=args.cases)
    suites = {r.name: r for r in (suite_oracle_cuts(tree, box), suite_oracle_closure(tree, ops, corpus.ideals, box))}
    report = summary(suites)
    _out(report)
    return OK if report["ok"] else FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="semistar", description="Stable semistar operations on tree models of semilocal Prüfer domains.")
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name, fn, help_text, op=False, ideal=False):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("model", help="model JSON file, or - for stdin")
        if op:
            p.add_argument("op", help="operation JSON file, or -")
        if ideal:
            p.add_argument("ideal", help="ideal JSON file, or -")
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.set_defaults(func=fn)
        return p

    command("validate", cmd_validate, "check a model file")
    command("primes", cmd_primes, "list the nonzero primes")
    command("close", cmd_close, "compute the closure of an ideal", op=True, ideal=True)
    for name, fn, text in (("analyze", cmd_analyze, "quasi- and pseudo-spectrum"), ("normalize", cmd_normalize, "normalized stable version")):
        p = command(name, fn, text, op=True)
        p.add_argument("--depth", type=int, default=2, help="primary samples per prime")
    for name, fn, text in (("enumerate", cmd_enumerate, "list all stable operations"), ("count", cmd_count, "count stable operations")):
        p = command(name, fn, text)
        p.add_argument("--mode", choices=["smstar", "semistar"])

    for name, fn, text in (("verify", cmd_verify, "run every invariant suite"), ("oracle", cmd_oracle, "brute-force membership checks")):
        p = command(name, fn, text)
        p.add_argument("--op", help="operation JSON file (taken as written for verify)")
        if name == "oracle":
            p.add_argument("--ideal", help="ideal JSON file; with --op checks a single closure")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--cases", type=int, default=200, help="ideal pairs in the corpus")
        p.add_argument("--radius", type=int, default=8)
        p.add_argument("--density", type=int, default=6)
        p.add_argument("--depth", type=int, default=2, help="primary samples per prime")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ModelError as exc:
        for d in exc.diagnostics:
            print(f"error: {d}", file=sys.stderr)
        return BAD_INPUT
    except (io.InputError, SpecError, IdealError, GroupError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
