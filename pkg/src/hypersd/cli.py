"""Command-line interface: ``hypersd <command> [options]``.

Every command reads a hypergraph JSON document from ``--input`` (default
stdin) and writes to ``--output`` (default stdout).  Output is deterministic
for fixed input and seed.

Exit codes: 0 success, 1 a verification check failed, 2 bad input or
usage, 3 the edge cap was exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
import time
from typing import List, Optional, Sequence

from .chains import embedded_homology, homology_report
from .hypergraph import (
    Hypergraph,
    HypergraphError,
    dumps,
    loads,
    random_hypergraph,
    simplicial_closure,
)
from .invariance import verify_invariance
from .linalg import CoefficientRing, RingError
from .poset import marked_face_poset
from .subdivision import SubdivisionCapExceeded, SubdivisionError, iterate_subdivision, subdivide

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3
DEFAULT_CAP = 10 ** 6


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_USAGE):
        super().__init__(message)
        self.code = code


def _ring(text: str) -> CoefficientRing:
    try:
        return CoefficientRing.parse(text)
    except RingError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive(text: str) -> int:
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _nonnegative(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {text}")
    return v


def _read_input(path: Optional[str]) -> Hypergraph:
    if path is None or path == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise CliError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return loads(text)
    except HypergraphError as exc:
        where = path or "<stdin>"
        raise CliError(f"{where}: {exc}") from None


class _Output:
    def __init__(self, path: Optional[str]):
        self.path = path
        self.buf = io.StringIO()

    def write(self, text: str):
        self.buf.write(text)

    def flush(self):
        data = self.buf.getvalue()
        if self.path is None or self.path == "-":
            sys.stdout.write(data)
            sys.stdout.flush()
        else:
            with open(self.path, "w", encoding="utf-8", newline="") as fh:
                fh.write(data)


# ---------------------------------------------------------------------------
# commands


def cmd_closure(args, out: _Output) -> int:
    h = _read_input(args.input)
    out.write(dumps(simplicial_closure(h)))
    return EXIT_OK


def cmd_subdivide(args, out: _Output) -> int:
    h = _read_input(args.input)
    if args.dot:
        with open(args.dot, "w", encoding="utf-8") as fh:
            mp = marked_face_poset(h)
            fh.write(mp.poset.to_dot(mp.marked))
    if args.iterations == 0:
        out.write(dumps(h))
        return EXIT_OK
    try:
        res = iterate_subdivision(h, args.iterations, cap=args.cap)
    except SubdivisionCapExceeded as exc:
        raise CliError(f"edge cap exceeded: {exc}", EXIT_CAP) from None
    out.write(res.to_json())
    return EXIT_OK


def cmd_homology(args, out: _Output) -> int:
    h = _read_input(args.input)
    groups = embedded_homology(h, args.ring)
    out.write(json.dumps(homology_report(groups, args.ring)) + "\n")
    return EXIT_OK


def _instances(args) -> List[Hypergraph]:
    rng = random.Random(args.seed)
    try:
        return [random_hypergraph(args.vertices, args.edges, rng, allow_isolated=args.allow_isolated)
                for _ in range(args.random)]
    except HypergraphError as exc:
        raise CliError(str(exc)) from None


def cmd_verify(args, out: _Output) -> int:
    if args.random is None:
        rep = verify_invariance(_read_input(args.input), args.ring)
        out.write(json.dumps(rep.to_dict(), indent=2) + "\n")
        return EXIT_OK if rep.passed else EXIT_FAIL
    ok = 0
    lines = ["index\tvertices\tedges\tresult\tfailed"]
    for i, h in enumerate(_instances(args)):
        rep = verify_invariance(h, args.ring)
        ok += rep.passed
        failed = ",".join(c.name for c in rep.failures()) or "-"
        lines.append(f"{i}\t{len(h.vertices)}\t{len(h)}\t{'pass' if rep.passed else 'FAIL'}\t{failed}")
    lines.append(f"passed {ok}/{args.random} over {args.ring.name}")
    out.write("\n".join(lines) + "\n")
    return EXIT_OK if ok == args.random else EXIT_FAIL


def cmd_random(args, out: _Output) -> int:
    try:
        h = random_hypergraph(args.vertices, args.edges, args.seed, weighted=args.weighted,
                              allow_isolated=args.allow_isolated)
    except HypergraphError as exc:
        raise CliError(str(exc)) from None
    out.write(dumps(h))
    return EXIT_OK


def cmd_stats(args, out: _Output) -> int:
    h = _read_input(args.input)
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["iteration", "dim", "edge_count", "wall_ms", "status"])

    def ms(t0: float) -> str:
        return f"{(time.perf_counter() - t0) * 1000:.3f}" if args.timing else ""

    cur = h
    for d, c in enumerate(cur.counts()):
        w.writerow([0, d, c, "", "ok"])
    for i in range(1, args.iterations + 1):
        t0 = time.perf_counter()
        try:
            cur = subdivide(cur, cap=args.cap, _iteration=i).hypergraph
        except SubdivisionCapExceeded as exc:
            w.writerow([i, "", exc.count, ms(t0), "cap_exceeded"])
            return EXIT_CAP
        elapsed = ms(t0)
        for d, c in enumerate(cur.counts()):
            w.writerow([i, d, c, elapsed, "ok"])
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    io_opts = argparse.ArgumentParser(add_help=False)
    io_opts.add_argument("--input", "-i", help="hypergraph JSON file (default: stdin)")
    io_opts.add_argument("--output", "-o", help="output file (default: stdout)")

    p = argparse.ArgumentParser(prog="hypersd", description="Subdivision and embedded homology of hypergraphs.")
    sub = p.add_subparsers(dest="command", required=True, metavar="command")

    s = sub.add_parser("closure", parents=[io_opts], help="simplicial closure")
    s.set_defaults(func=cmd_closure)

    s = sub.add_parser("subdivide", parents=[io_opts], help="subdivision, optionally iterated")
    s.add_argument("--iterations", "-k", type=_nonnegative, default=1)
    s.add_argument("--cap", type=_positive, default=DEFAULT_CAP, help="abort once an iteration exceeds this many edges")
    s.add_argument("--dot", metavar="PATH", help="also write the marked face poset as Graphviz DOT")
    s.set_defaults(func=cmd_subdivide)

    s = sub.add_parser("homology", parents=[io_opts], help="embedded homology")
    s.add_argument("--ring", type=_ring, default=CoefficientRing("Z"), help="z, q or gf<p> (default z)")
    s.set_defaults(func=cmd_homology)

    s = sub.add_parser("verify", parents=[io_opts], help="check homology invariance under subdivision")
    s.add_argument("--ring", type=_ring, default=CoefficientRing("Z"))
    s.add_argument("--random", type=_positive, metavar="N", help="verify N random instances instead of the input")
    s.add_argument("--vertices", type=_positive, default=5)
    s.add_argument("--edges", type=_positive, default=8)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--allow-isolated", action="store_true")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("random", parents=[io_opts], help="seeded random hypergraph")
    s.add_argument("--vertices", type=_positive, required=True)
    s.add_argument("--edges", type=_positive, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--weighted", action="store_true", help="draw the edge size uniformly first")
    s.add_argument("--allow-isolated", action="store_true", help="keep vertices no edge uses")
    s.set_defaults(func=cmd_random)

    s = sub.add_parser("stats", parents=[io_opts], help="edge counts per dimension of sd^k as CSV")
    s.add_argument("--iterations", "-k", type=_nonnegative, default=1)
    s.add_argument("--cap", type=_positive, default=DEFAULT_CAP)
    s.add_argument("--timing", action="store_true", help="fill the wall_ms column (output is then not reproducible)")
    s.set_defaults(func=cmd_stats)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    out = _Output(args.output)
    try:
        code = args.func(args, out)
    except CliError as exc:
        out.flush()
        print(f"hypersd {args.command}: error: {exc}", file=sys.stderr)
        return exc.code
    except (SubdivisionError, HypergraphError) as exc:
        print(f"hypersd {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    out.flush()
    return code


if __name__ == "__main__":
    sys.exit(main())
