"""Command line front end: ``deligne <command> [options]``.

Exit status is 0 on success, 1 on bad input and 2 when a verification
finds a counterexample.  Progress and timings go to stderr so stdout stays
stable for golden files.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
import warnings
from fractions import Fraction

from . import diagrams as dg
from . import knots as kn
from . import modtrace as mt
from . import morphisms as mm
from . import oracle as orc
from .scalars import ScalarError, as_fraction, evaluate_scalar, format_scalar

EXIT_OK, EXIT_INPUT, EXIT_FAILED = 0, 1, 2


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _t_value(text: str):
    if text == "generic":
        return None
    try:
        return as_fraction(Fraction(text))
    except (ValueError, ZeroDivisionError, ScalarError):
        raise argparse.ArgumentTypeError(f"--t expects a rational number or 'generic', got {text!r}") from None


def _q_value(text: str):
    if text == "symbolic":
        return "symbolic"
    try:
        q = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"--q expects a rational number or 'symbolic', got {text!r}") from None
    if q == 0:
        raise argparse.ArgumentTypeError("--q must be invertible")
    return q


def _pair(text: str) -> tuple[int, int]:
    try:
        a, b = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'a,b', got {text!r}") from None
    if a < 0 or b < 0:
        raise argparse.ArgumentTypeError("label entries must be nonnegative")
    return a, b


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--t", type=_t_value, default=None, help="rational value of t, or 'generic' (default)")
    p.add_argument("--q", type=_q_value, default="symbolic", help="rational value of q, or 'symbolic' (default)")
    p.add_argument("--jobs", type=int, default=os.cpu_count() or 1, help="worker processes")
    p.add_argument("--cap", type=int, default=dg.DEFAULT_CAP, help="largest total arity to enumerate")
    p.add_argument("--format", choices=("text", "machine"), default="text")
    return p


def _read_morphism(text: str, source, target) -> mm.Morphism:
    if text.startswith("@"):
        with open(text[1:]) as fh:
            text = fh.read()
    return mm.parse_morphism(text, source, target)


def _show(value, t0) -> str:
    if t0 is not None and not isinstance(value, mm.Morphism):
        value = evaluate_scalar(value, {"t": t0})
    if isinstance(value, mm.Morphism):
        if t0 is not None:
            value = value.evaluate(t0)
        return mm.format_morphism(value)
    return format_scalar(value)


# -- commands -----------------------------------------------------------------


def cmd_compose(args) -> int:
    """Print ``f o g`` (``g`` applied first)."""
    g = _read_morphism(args.g, args.source, args.middle)
    f = _read_morphism(args.f, g.target, args.target)
    print(_show(f @ g, args.t))
    return EXIT_OK


def cmd_trace(args) -> int:
    f = _read_morphism(args.f, args.arity, args.arity)
    if args.side == "full":
        print(_show(mm.categorical_trace(f), args.t))
    else:
        width = 1 if args.width is None else args.width
        print(_show(mm.partial_trace(f, args.side, width), args.t))
    return EXIT_OK


def cmd_dims(args) -> int:
    if args.n < 1:
        raise InputError("--n must be positive")
    rows = [(m, mt.antisymmetric_dimension(m, args.t)) for m in range(1, args.n + 1)]
    if args.format == "machine":
        for m, d in rows:
            print(f"{m}\t{format_scalar(d)}")
    else:
        label = "generic t" if args.t is None else f"t = {args.t}"
        print(f"modified dimensions of ([n], s_n), trace normalized by t_1 ({label})")
        print(f"{'n':>3}  d")
        for m, d in rows:
            print(f"{m:>3}  {format_scalar(d)}")
    return EXIT_OK


def cmd_verify_amb(args) -> int:
    if args.n < 1:
        raise InputError("--n must be positive")
    t0 = None if args.generic else args.t
    started = time.perf_counter()

    def progress(done, total):
        print(f"\r{done}/{total} diagrams", end="", file=sys.stderr, flush=True)

    rep = mt.verify_ambidextrous(
        args.n, t0, jobs=args.jobs, cap=args.cap, debug=args.debug, chunk=args.chunk,
        progress=progress if args.progress else None,
    )
    if args.progress:
        print(file=sys.stderr)
    print(f"elapsed {time.perf_counter() - started:.1f}s ({rep.short_circuited} short-circuited)", file=sys.stderr)
    if args.format == "machine":
        print(f"n={rep.n}\tmode={rep.mode}\tchecked={rep.diagrams_checked}\texpected={rep.expected}\tfailures={len(rep.failures)}")
    else:
        status = "OK" if rep.verdict else "FAIL"
        print(f"{status}: {rep.diagrams_checked} diagrams, {len(rep.failures)} failures")
    for pi, a, b in rep.failures[: args.show]:
        print(f"  {dg.format_diagram(pi)}: t(Theta_1) = {format_scalar(a)}, t(Theta_2) = {format_scalar(b)}")
    return EXIT_OK if rep.verdict else EXIT_FAILED


def cmd_solve_amb(args) -> int:
    sol = mt.ambidextrous_solution_space(args.t)
    if args.format == "machine":
        print(f"dimension\t{sol.dimension}")
        for v in sol.basis:
            print("basis\t" + "\t".join(format_scalar(x) for x in v))
    else:
        print(f"solution space: dimension {sol.dimension} ({sol.constraints} constraints)")
        for v in sol.basis:
            print(f"  lambda(id_1) = {format_scalar(v[0])}, lambda(x_1) = {format_scalar(v[1])}")
    return EXIT_OK


def cmd_negligible(args) -> int:
    if args.t is None or args.t.denominator != 1:
        raise InputError("negligible needs an integer --t")
    if args.antisymmetrizer is not None:
        g = mt.antisymmetrizer(args.antisymmetrizer)
    elif args.f is not None:
        g = _read_morphism(args.f, args.source, args.target)
    else:
        raise InputError("give a morphism or --antisymmetrizer N")
    verdict = mm.is_negligible(g, int(args.t), cap=args.cap)
    print("negligible" if verdict else "not negligible")
    return EXIT_OK


def cmd_knot(args) -> int:
    with open(args.file) as fh:
        word = kn.parse_tangle(fh.read())
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        value = kn.evaluate_knot(word, args.label)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    if args.q != "symbolic":
        value = value.specialize_q(args.q)
    w = kn.writhe(word)
    if args.format == "machine":
        print(f"{format_scalar(value)}\t{w}")
    else:
        print(f"{format_scalar(value)} (writhe oracle: {w})")
    return EXIT_OK


def cmd_oracle_check(args) -> int:
    t0 = args.t
    if t0 is None or t0.denominator != 1 or t0 < 1:
        raise InputError("oracle-check needs a positive integer --t")
    t0 = int(t0)
    if args.samples:
        pairs = orc.random_pairs(args.n, args.samples, args.seed)
    else:
        pairs = orc.exhaustive_pairs(args.n)
    rep = orc.check_homomorphism(pairs, t0)
    bad = rep.first_mismatch()
    if rep.ok:
        print(f"OK: {rep.pairs} pairs at t0={t0} (compose, tensor, trace)")
        return EXIT_OK
    kind, item = bad
    shown = " , ".join(dg.format_diagram(d) for d in item) if isinstance(item, tuple) else dg.format_diagram(item)
    print(f"FAIL: {kind} mismatch, first at {shown}")
    return EXIT_FAILED


# -- wiring -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    p = _Parser(prog="deligne", description="Partition-diagram calculus, modified traces and the writhe invariant.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("compose", parents=[common], help="compose two morphisms, f o g")
    c.add_argument("f")
    c.add_argument("g")
    c.add_argument("--source", type=int, help="arity of g's source")
    c.add_argument("--middle", type=int, help="arity between g and f")
    c.add_argument("--target", type=int, help="arity of f's target")
    c.set_defaults(run=cmd_compose)

    c = sub.add_parser("trace", parents=[common], help="partial or full trace of an endomorphism")
    c.add_argument("f")
    c.add_argument("--arity", type=int)
    c.add_argument("--side", choices=("left", "right", "full"), default="full")
    c.add_argument("--width", type=int, help="number of strands closed (partial traces)")
    c.set_defaults(run=cmd_trace)

    c = sub.add_parser("dims", parents=[common], help="modified dimensions of ([n], s_n)")
    c.add_argument("--n", type=int, required=True)
    c.set_defaults(run=cmd_dims)

    c = sub.add_parser("verify-amb", parents=[common], help="exhaustively check ambidexterity of t_n")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--generic", action="store_true", help="check in Q[t] (same as --t generic)")
    c.add_argument("--debug", action="store_true", help="cross-check every diagram against the explicit sandwich")
    c.add_argument("--chunk", type=int, default=100_000)
    c.add_argument("--progress", action="store_true")
    c.add_argument("--show", type=int, default=5, help="failures to print")
    c.set_defaults(run=cmd_verify_amb)

    c = sub.add_parser("solve-amb", parents=[common], help="solve for ambidextrous traces on End(M_1)")
    c.set_defaults(run=cmd_solve_amb)

    c = sub.add_parser("negligible", parents=[common], help="test a morphism for negligibility at integer t")
    c.add_argument("f", nargs="?")
    c.add_argument("--antisymmetrizer", type=int, metavar="N")
    c.add_argument("--source", type=int)
    c.add_argument("--target", type=int)
    c.set_defaults(run=cmd_negligible)

    c = sub.add_parser("knot", parents=[common], help="evaluate a framed knot word")
    c.add_argument("--file", required=True)
    c.add_argument("--label", type=_pair, default=(1, 0))
    c.set_defaults(run=cmd_knot)

    c = sub.add_parser("oracle-check", parents=[common], help="compare diagram arithmetic with matrices")
    c.add_argument("--n", type=int, default=2)
    c.add_argument("--samples", type=int, default=0, help="random pairs instead of all pairs")
    c.add_argument("--seed", type=int, default=0)
    c.set_defaults(run=cmd_oracle_check)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.run(args)
    except (InputError, ValueError, OSError) as exc:
        print(f"deligne {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
