"""Command-line front end.

Exit codes: 0 success, 2 input or precondition error, 3 resource/budget error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import harness
from .asymptotics import k_ec
from .graph import (
    GenerationError,
    GraphFormatError,
    PreconditionError,
    format_graph,
    random_even_graph,
    read_graph,
    validate,
)
from .linalg import spectral_summary

EXIT_INPUT = 2
EXIT_RESOURCE = 3


def _int_list(text: str) -> list[int]:
    """``"3,5,7"`` or ``"4..8"`` (inclusive) or a mix of both."""
    out: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            lo, hi = part.split("..")
            out.extend(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    return out


def _methods(text: str) -> list[str]:
    ms = [m.strip() for m in text.split(",") if m.strip()]
    bad = [m for m in ms if m not in harness.METHODS]
    if bad:
        raise argparse.ArgumentTypeError(f"unknown method(s): {', '.join(bad)}")
    return ms


def _load(path):
    try:
        return read_graph(path)
    except OSError as exc:
        raise _Fail(EXIT_INPUT, f"cannot read {path}: {exc.strerror}")
    except GraphFormatError as exc:
        raise _Fail(EXIT_INPUT, f"parse error in {path}: {exc}")


class _Fail(Exception):
    def __init__(self, code: int, message: str):
        self.code = code
        super().__init__(message)


def cmd_analyze(args) -> int:
    g = _load(args.file)
    report = {"n": g.n, "m": g.m, "validation": validate(g).to_dict()}
    if g.n >= 2:
        report["spectral"] = spectral_summary(g).to_dict()
    report["k_ec"] = k_ec(g)
    print(json.dumps(report, indent=2))
    return 0


def cmd_compare(args) -> int:
    g = _load(args.file)
    try:
        rec = harness.compare(
            g,
            graph_id=args.file,
            methods=args.methods,
            epsilon=args.epsilon,
            seed=args.seed,
            samples=args.samples,
            node_budget=args.node_budget,
            grid_points=args.grid_points,
            workers=harness.thread_cap(),
        )
    except PreconditionError as exc:
        raise _Fail(EXIT_INPUT, f"precondition failed: {exc}")
    print(json.dumps(rec.to_dict(), indent=2))
    return 0


def cmd_sweep(args) -> int:
    rows = harness.sweep(
        args.family,
        args.n,
        p=args.p,
        seed=args.seed,
        methods=args.methods,
        epsilon=args.epsilon,
        samples=args.samples,
        node_budget=args.node_budget,
        grid_points=args.grid_points,
    )
    text = harness.rows_to_csv(rows)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_gen(args) -> int:
    try:
        g = random_even_graph(args.n, args.p, args.seed, max_attempts=args.max_attempts)
    except GenerationError as exc:
        raise _Fail(EXIT_RESOURCE, str(exc))
    except ValueError as exc:
        raise _Fail(EXIT_INPUT, str(exc))
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_graph(g))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="euler-census", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, default_methods):
        p.add_argument("--methods", type=_methods, default=default_methods)
        p.add_argument("--epsilon", type=float, default=0.05)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--samples", type=int, default=100_000)
        p.add_argument("--node-budget", type=int, default=harness.DEFAULT_NODE_BUDGET)
        p.add_argument("--grid-points", type=int, default=16)

    p = sub.add_parser("analyze", help="validation, spectrum and K_ec as JSON")
    p.add_argument("file")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("compare", help="run estimation methods on one graph")
    p.add_argument("file")
    common(p, ["formula", "exact"])
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("sweep", help="CSV table over a graph family")
    p.add_argument("--family", choices=harness.FAMILIES, required=True)
    p.add_argument("--n", type=_int_list, required=True)
    p.add_argument("--p", type=float, default=0.5)
    p.add_argument("--out")
    common(p, ["formula", "exact"])
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("gen", help="write a random connected even graph")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--max-attempts", type=int, default=1000)
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _Fail as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
