"""Command line front end.

Exit codes: 0 ok, 1 an experiment verdict contradicts its expected class,
2 parse error, 3 fuel exhausted, 4 machine invariant violated,
5 the compiled machine and the direct simulator disagree.
"""
import argparse
import os
import sys

from .terms import ParseError, TermError, parse, render, label_text
from .machines import run, format_trace, InvariantViolation
from .readback import constructor_at
from .experiments import (ExperimentSpec, run_experiment, write_csv, CSV_COLUMNS,
                          KINDS, EXPECTED)
from . import tm as tmmod

EXIT_OK, EXIT_VERDICT, EXIT_PARSE, EXIT_FUEL, EXIT_INVARIANT, EXIT_DISAGREE = 0, 1, 2, 3, 4, 5


def _read_term(args):
    text = args.expr if args.expr is not None else open(args.file, encoding="utf-8").read()
    return parse(text)


def _report(prof, out):
    print(f"beta_steps: {prof.beta_steps}", file=out)
    print(f"transitions: {prof.transitions}", file=out)
    print(f"max_bit_space: {prof.max_bit_space}", file=out)
    ab = prof.max_abstract_space
    print(f"max_abstract_space: {'-' if ab is None else ab}", file=out)
    hc = prof.max_heap_cells
    print(f"heap_cells: {'-' if hc is None else hc}", file=out)


def cmd_eval(args, out=None):
    out = out or sys.stdout
    try:
        t = _read_term(args)
    except (ParseError, TermError) as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EXIT_PARSE
    if not t.closed:
        print("parse error: the term has free variables", file=sys.stderr)
        return EXIT_PARSE
    try:
        prof = run(args.machine, t, args.fuel, trace=args.trace, check=True)
    except InvariantViolation as e:
        print(f"invariant violation: {e}", file=sys.stderr)
        return EXIT_INVARIANT
    if prof.completed:
        print(f"result: {render(prof.machine_obj.decode(prof.final_state))}", file=out)
    else:
        print("result: normal form not reached (fuel exhausted)", file=out)
    _report(prof, out)
    if args.trace:
        print("trace: step kind bits closures heap", file=out)
        print(format_trace(prof), file=out)
    if args.csv:
        row = {
            "experiment": "eval", "machine": args.machine, "n": t.size,
            "beta_steps": prof.beta_steps, "transitions": prof.transitions,
            "max_bit_space": prof.max_bit_space,
            "max_abstract_space": "" if prof.max_abstract_space is None else prof.max_abstract_space,
            "heap_cells": "" if prof.max_heap_cells is None else prof.max_heap_cells,
            "completed": int(prof.completed),
        }
        write_csv([row], args.csv)
    return EXIT_OK if prof.completed else EXIT_FUEL


def cmd_experiment(args, out=None):
    out = out or sys.stdout
    machines = tuple(m for part in (args.machine or ["space"]) for m in part.split(",") if m)
    try:
        spec = ExperimentSpec(args.kind, args.min, args.max, args.step, machines, args.fuel,
                              args.csv, tm=args.tm)
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE
    try:
        res = run_experiment(spec)
    except InvariantViolation as e:
        print(f"invariant violation: {e}", file=sys.stderr)
        return EXIT_INVARIANT
    write_csv(res.rows, args.csv)
    bad = res.contradictions()
    for (machine, col), verdict in sorted(res.verdicts().items()):
        exp = EXPECTED.get((args.kind, machine, col))
        tag = "" if exp is None else (" (expected)" if exp == verdict else f" (expected {exp})")
        print(f"{args.kind} {machine} {col}: {verdict}{tag}", file=out)
    flagged = sum(1 for r in res.rows if not r["completed"])
    if flagged:
        print(f"{flagged} point(s) ran out of fuel", file=out)
    return EXIT_VERDICT if bad else EXIT_OK


def _load_desc(path):
    if not os.path.exists(path) and path in tmmod.fixture_names():
        return tmmod.load_fixture(path)
    with open(path, encoding="utf-8") as f:
        return tmmod.parse_tm(f.read(), os.path.basename(path))


def cmd_tm(args, out=None):
    out = out or sys.stdout
    try:
        m = _load_desc(args.desc)
    except (tmmod.TMError, OSError) as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EXIT_PARSE
    if any(c not in "01" for c in args.input):
        print("parse error: input must be a bit string", file=sys.stderr)
        return EXIT_PARSE
    direct = encoded = None
    code = EXIT_OK
    if args.via in ("direct", "both"):
        r = tmmod.simulate_tm(m, args.input, args.fuel)
        if isinstance(r, tmmod.TMResult):
            direct = "accept" if r.accept else "reject"
            print(f"direct: {direct} steps={r.steps} work_cells={r.space}", file=out)
        elif isinstance(r, tmmod.Stuck):
            direct = "stuck"
            print(f"direct: stuck in state {r.config.state} after {r.steps} steps", file=out)
        else:
            direct = "fuel"
            print(f"direct: fuel exhausted after {r.steps} steps", file=out)
            code = EXIT_FUEL
    if args.via in ("space-kam", "both"):
        from .machines.fast import fast_run
        from .terms import apps
        t0 = apps(tmmod.encode_tm(m), tmmod.encode_input(args.input))
        # the compiled machine needs far more transitions than TM steps
        prof = fast_run(t0, args.fuel)
        if not prof.completed:
            encoded = "fuel"
            print(f"space-kam: fuel exhausted after {prof.transitions} transitions", file=out)
            code = EXIT_FUEL
        else:
            res = prof.machine_obj.decode(prof.final_state)
            encoded = {tmmod.TRUE: "accept", tmmod.FALSE: "reject", tmmod.IDENT: "stuck"}.get(res, "?")
            print(f"space-kam: {encoded} beta_steps={prof.beta_steps} "
                  f"transitions={prof.transitions} max_bit_space={prof.max_bit_space} "
                  f"max_abstract_space={prof.max_abstract_space}", file=out)
    if args.via == "both" and "fuel" not in (direct, encoded):
        if direct != encoded:
            print(f"DISAGREEMENT: direct {direct}, space-kam {encoded}", file=out)
            return EXIT_DISAGREE
        print("agree", file=out)
    return code


def cmd_addr(args, out=None):
    out = out or sys.stdout
    try:
        t = _read_term(args)
        if not t.closed:
            raise TermError("the term has free variables")
        if any(c not in "01" for c in args.address):
            raise TermError("address must be a bit string")
    except (ParseError, TermError) as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EXIT_PARSE
    prof = run("space", t, args.fuel)
    if not prof.completed:
        print("normal form not reached (fuel exhausted)", file=sys.stderr)
        return EXIT_FUEL
    m = prof.machine_obj
    print(label_text(constructor_at(m.code, m.final_closure(prof.final_state), args.address)), file=out)
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="lamspace", description="Space-profiling abstract machines lab")
    sub = p.add_subparsers(dest="command", required=True)

    def term_source(sp):
        g = sp.add_mutually_exclusive_group(required=True)
        g.add_argument("--expr")
        g.add_argument("--file")

    e = sub.add_parser("eval", help="run one term on one machine")
    e.add_argument("--machine", choices=("naive", "space", "time", "lam"), default="space")
    term_source(e)
    e.add_argument("--fuel", type=int, default=10**6)
    e.add_argument("--trace", action="store_true")
    e.add_argument("--csv")
    e.set_defaults(func=cmd_eval)

    x = sub.add_parser("experiment", help="run an experiment family and classify growth")
    x.add_argument("kind", choices=KINDS)
    x.add_argument("--min", type=int, required=True)
    x.add_argument("--max", type=int, required=True)
    x.add_argument("--step", type=int, default=1)
    x.add_argument("--machine", action="append", help="machine name(s), repeatable or comma separated")
    x.add_argument("--fuel", type=int, default=10**7)
    x.add_argument("--csv", required=True)
    x.add_argument("--tm", default="parity", help="fixture name or TM file for the tm family")
    x.set_defaults(func=cmd_experiment)

    t = sub.add_parser("tm", help="run a Turing machine directly and/or compiled")
    t.add_argument("--desc", required=True, help="TM file, or the name of a bundled fixture")
    t.add_argument("--input", default="")
    t.add_argument("--via", choices=("direct", "space-kam", "both"), default="both")
    t.add_argument("--fuel", type=int, default=10**8)
    t.set_defaults(func=cmd_tm)

    a = sub.add_parser("addr", help="constructor at a tree address of the result")
    term_source(a)
    a.add_argument("--address", required=True)
    a.add_argument("--fuel", type=int, default=10**6)
    a.set_defaults(func=cmd_addr)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
