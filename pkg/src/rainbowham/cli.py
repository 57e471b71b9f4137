"""Command-line front end.

Machine output is canonical JSON on stdout; logs go to stderr. Exit status
is 0 for success or a true result, 1 for a negative result (no witness,
not connected, disagreement, failed sweep) and 2 for usage, format or
hypothesis errors.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
from typing import Sequence

from . import constructive, exact, harness
from .core import Vertex, X, Y, validate_witness
from .extremal import recognize_double_complete, recognize_F_family
from .formats import (
    FormatError,
    certificate_to_doc,
    collection_to_doc,
    dumps,
    parse_collection,
    parse_witness,
    vertex_name,
    witness_to_doc,
)

log = logging.getLogger("rainbowham")

OK, NEGATIVE, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _read(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    try:
        with open(path, "rb") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _emit(obj, out: str | None = None) -> None:
    text = dumps(obj)
    if out and out != "-":
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("RAINBOW_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"RAINBOW_SEED must be an integer, got {env!r}") from None


def _witness_result(w, engine: str) -> dict:
    return {"result": "path", "engine": engine, **witness_to_doc(w)}


# -- subcommands ------------------------------------------------------------------

def cmd_gen(args) -> int:
    seed = _seed(args)
    if args.family:
        c = harness.gen_perturbed_extremal(args.family, args.n, args.flips, seed, mix=args.mix)
    else:
        m = args.m if args.m is not None else 2 * args.n - 1
        delta = args.delta if args.delta is not None else (args.n + 1) // 2
        c = harness.gen_random_collection(args.n, m, delta, seed)
    _emit(collection_to_doc(c), args.out)
    return OK


def _endpoints(args, n: int) -> tuple[Vertex, Vertex] | None:
    if (args.source is None) != (args.target is None):
        raise UsageError("--from and --to must be given together")
    if args.source is None:
        return None
    if not (0 <= args.source < n and 0 <= args.target < n):
        raise UsageError(f"endpoint indices must lie in [0, {n - 1}]")
    return X(args.source), Y(args.target)


def _run_exact(c, ends):
    if ends is None:
        return exact.find_thp(c)
    return exact.find_thp_between(c, *ends)


def _run_constructive(c, ends):
    if ends is None:
        return constructive.solve_thm13(c)
    return constructive.solve_thm14(c, *ends)


def cmd_solve(args) -> int:
    c = parse_collection(_read(args.input))
    ends = _endpoints(args, c.n)
    if c.m < 2 * c.n - 1:
        raise UsageError(f"need at least 2n-1 = {2 * c.n - 1} graphs, got {c.m}")
    if args.engine == "exact":
        w = _run_exact(c, ends)
        _emit(_witness_result(w, "exact") if w else {"result": "none", "engine": "exact"})
        return OK if w else NEGATIVE
    out = _run_constructive(c, ends)
    if args.engine == "constructive":
        if isinstance(out, constructive.HamPath):
            _emit(_witness_result(out.witness, "constructive"))
            return OK
        _emit({"result": "none", "engine": "constructive", "certificate": certificate_to_doc(out.certificate)})
        return NEGATIVE
    ref = _run_exact(c, ends)
    found = isinstance(out, constructive.HamPath)
    if found != (ref is not None):
        _emit({"result": "disagreement", "exact": "path" if ref else "none",
               "constructive": "path" if found else "none"})
        return NEGATIVE
    if found:
        _emit(_witness_result(out.witness, "both"))
        return OK
    _emit({"result": "none", "engine": "both", "certificate": certificate_to_doc(out.certificate)})
    return NEGATIVE


def cmd_connect(args) -> int:
    c = parse_collection(_read(args.input))
    if c.m < 2 * c.n - 1:
        raise UsageError(f"need at least 2n-1 = {2 * c.n - 1} graphs, got {c.m}")
    ok, pair = exact.is_ham_connected(c)
    if ok:
        _emit({"connected": True})
        return OK
    _emit({"connected": False, "failing_pair": [vertex_name(v) for v in pair]})
    return NEGATIVE


def cmd_recognize(args) -> int:
    c = parse_collection(_read(args.input))
    dc = recognize_double_complete(c)
    if dc is not None:
        _emit({"family": "double_complete", "X1": sorted(dc[0]), "Y1": sorted(dc[1])})
        return OK
    ff = recognize_F_family(c)
    if ff is not None:
        frame, flags = ff
        _emit({"family": "f_family", "x_star": frame.x_star, "y_star": frame.y_star,
               "X1": sorted(frame.x1), "Y1": sorted(frame.y1),
               "variants": ["F'" if b else "F" for b in flags]})
        return OK
    _emit({"family": "none"})
    return NEGATIVE


def cmd_check(args) -> int:
    c = parse_collection(_read(args.input))
    w = parse_witness(_read(args.witness))
    rep = validate_witness(c, w)
    problems = [{"rule": v.rule, "position": v.position, "detail": v.detail} for v in rep.violations]
    hamiltonian = rep.ok and w.order == 2 * c.n and w.kind.value == "path"
    if rep.ok and not hamiltonian and not args.partial:
        problems.append({"rule": "hamiltonian", "position": None,
                         "detail": f"path covers {w.order} of {2 * c.n} vertices"})
    if args.source is not None or args.target is not None:
        ends = {v for v in (X(args.source) if args.source is not None else None,
                            Y(args.target) if args.target is not None else None) if v}
        if not ends <= set(w.endpoints):
            problems.append({"rule": "endpoints", "position": None,
                             "detail": "witness does not end at the requested vertices"})
    _emit({"valid": not problems, "violations": problems})
    return OK if not problems else NEGATIVE


def cmd_verify(args) -> int:
    if args.jobs < 1:
        raise UsageError("--jobs must be at least 1")
    if args.exhaustive:
        report = harness.verify_sweep(args.theorem, args.n, exhaustive=True, jobs=args.jobs)
    else:
        report = harness.verify_sweep(args.theorem, args.n, args.trials, _seed(args), jobs=args.jobs)
    _emit(report.to_json(), args.out)
    return OK if report.passed else NEGATIVE


def cmd_tightness(args) -> int:
    found = harness.tightness_search(args.theorem, args.n, args.trials, _seed(args))
    if found is None:
        _emit({"found": False, "theorem": args.theorem, "n": args.n, "trials": args.trials})
        return NEGATIVE
    doc = {"found": True, "theorem": args.theorem, "n": args.n, "trial": found.trial,
           "min_degree": harness.threshold(args.theorem, args.n) - 1,
           "collection": collection_to_doc(found.collection)}
    if found.failing_pair is not None:
        doc["failing_pair"] = [vertex_name(v) for v in found.failing_pair]
    _emit(doc)
    return OK


# -- parser -------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="rainbowham", description="Rainbow Hamiltonian paths in bipartite graph collections.")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", help="generate a collection")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--m", type=int)
    g.add_argument("--delta", type=int, help="minimum degree target (default ceil(n/2))")
    g.add_argument("--family", choices=["double_complete", "f_family"])
    g.add_argument("--flips", type=int, default=0)
    g.add_argument("--mix", action="store_true", help="mix F and F' graphs")
    g.add_argument("--seed", type=int)
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    s = sub.add_parser("solve", help="find a transversal Hamiltonian path")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--engine", choices=["exact", "constructive", "both"], default="exact")
    s.add_argument("--from", dest="source", type=int, metavar="X_IDX")
    s.add_argument("--to", dest="target", type=int, metavar="Y_IDX")
    s.set_defaults(func=cmd_solve)

    c = sub.add_parser("connect", help="test Hamiltonian connectivity")
    c.add_argument("--in", dest="input", required=True)
    c.set_defaults(func=cmd_connect)

    r = sub.add_parser("recognize", help="recognize an exceptional family")
    r.add_argument("--in", dest="input", required=True)
    r.set_defaults(func=cmd_recognize)

    k = sub.add_parser("check", help="validate a witness against a collection")
    k.add_argument("--in", dest="input", required=True)
    k.add_argument("--witness", default="-")
    k.add_argument("--partial", action="store_true", help="accept non-spanning witnesses")
    k.add_argument("--from", dest="source", type=int, metavar="X_IDX")
    k.add_argument("--to", dest="target", type=int, metavar="Y_IDX")
    k.set_defaults(func=cmd_check)

    v = sub.add_parser("verify", help="cross-check the constructive engine against exact search")
    v.add_argument("--theorem", choices=harness.THEOREMS, required=True)
    v.add_argument("--n", type=int, required=True)
    v.add_argument("--trials", type=int, default=100)
    v.add_argument("--seed", type=int)
    v.add_argument("--exhaustive", action="store_true")
    v.add_argument("--jobs", type=int, default=1)
    v.add_argument("--out")
    v.set_defaults(func=cmd_verify)

    t = sub.add_parser("tightness", help="search for negatives one below the degree bound")
    t.add_argument("--theorem", choices=harness.THEOREMS, required=True)
    t.add_argument("--n", type=int, required=True)
    t.add_argument("--trials", type=int, default=1000)
    t.add_argument("--seed", type=int)
    t.set_defaults(func=cmd_tightness)
    return p


def run(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
        return args.func(args)
    except FormatError as exc:
        _emit({"error": exc.code, "location": exc.location, "message": str(exc)})
        print(f"rainbowham: {exc}", file=sys.stderr)
        return USAGE
    except (UsageError, constructive.NotApplicable, ValueError) as exc:
        _emit({"error": type(exc).__name__, "message": str(exc)})
        print(f"rainbowham: {exc}", file=sys.stderr)
        return USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
