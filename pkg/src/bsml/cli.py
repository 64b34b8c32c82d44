"""Command-line harness.

Exit codes: 0 success, 1 contract violation or counterexample, 2 usage or
parse error.
"""

from __future__ import annotations

import argparse
import csv
import json
import random
import re
import sys
import time
from dataclasses import asdict, dataclass, field

from . import checks
from .core import Backend, Machine, mkpar
from .errors import BsmlError
from .mps import mps_par
from .skeletons import AlgebraSpec, Policy, distribute, reduce_par
from .stdlib import bcast_direct, list_of_par, procs, shift
from .testing import values

# Largest OCaml native integer; inputs whose absolute sum exceeds it are refused.
MAX_INT = 2**62 - 1

EXIT_OK, EXIT_CONTRACT, EXIT_USAGE = 0, 1, 2


class InputError(Exception):
    pass


@dataclass
class RunReport:
    program: str
    p: int
    backend: str
    result: object
    supersteps: int
    messages: list = field(default_factory=list)
    wall_time: float = 0.0

    def to_json(self) -> dict:
        return asdict(self)


def parse_lists(text: str) -> list[list[int]]:
    """One list per non-empty line (comma or whitespace separated), or a JSON array.

    A JSON array of integers is one list; an array of arrays is several.
    Blank input is a single empty list.
    """
    text = text.strip()
    if text.startswith("["):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"invalid JSON input: {exc}") from None
        if all(isinstance(x, list) for x in data) and data:
            lists = data
        else:
            lists = [data]
        for l in lists:
            if not all(isinstance(x, int) and not isinstance(x, bool) for x in l):
                raise InputError(f"expected a list of integers, got {l!r}")
        return [list(l) for l in lists]
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        return [[]]
    out = []
    for n, line in enumerate(lines, 1):
        try:
            out.append([int(tok) for tok in re.split(r"[,\s]+", line.strip()) if tok])
        except ValueError:
            raise InputError(f"line {n}: cannot parse {line.strip()!r} as integers") from None
    return out


def _positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"number of processors must be positive, got {value}")
    return value


def _int_list(text):
    try:
        return [int(tok) for tok in re.split(r"[,\s]+", text.strip()) if tok]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a list of integers: {text!r}") from None


def _run(machine, program, thunk) -> RunReport:
    with machine.recording() as recs:
        start = time.perf_counter()
        result = thunk()
        elapsed = time.perf_counter() - start
    return RunReport(
        program=program,
        p=machine.p,
        backend=machine.backend.value,
        result=result,
        supersteps=len(recs),
        messages=[r.as_dict() for r in recs],
        wall_time=elapsed,
    )


def _emit(reports, args, out):
    if args.json:
        json.dump([r.to_json() for r in reports], out, indent=2)
        out.write("\n")
        return
    for r in reports:
        out.write(f"{r.program}: {r.result}  (p={r.p}, backend={r.backend}, supersteps={r.supersteps}, {r.wall_time * 1e3:.3f} ms)\n")
        if args.trace:
            for rec in r.messages:
                out.write(f"  superstep {rec['index']} [{rec['kind']}]\n")
                for src, row in enumerate(rec["messages"]):
                    out.write(f"    {src} -> {' '.join(map(str, row))}\n")


def cmd_mps(args, out) -> int:
    if args.values is not None:
        text = args.values
    elif args.source in (None, "-"):
        text = sys.stdin.read()
    else:
        with open(args.source) as fh:
            text = fh.read()
    lists = parse_lists(text)
    for l in lists:
        if sum(map(abs, l)) > MAX_INT:
            print(f"error: absolute sum of input exceeds {MAX_INT}", file=sys.stderr)
            return EXIT_CONTRACT
    reports = []
    with Machine(args.procs, args.backend) as m:
        for l in lists:
            dl = distribute(m, l, args.policy)
            reports.append(_run(m, "mps", lambda: mps_par(dl)))
    _emit(reports, args, out)
    return EXIT_OK


DEMOS = {
    "procs": lambda m, a: procs(m),
    "list_of_par": lambda m, a: list_of_par(mkpar(m, lambda i: i * i)),
    "bcast": lambda m, a: values(bcast_direct(a.root, mkpar(m, lambda i: 10 * i))),
    "shift": lambda m, a: values(shift(a.offset, mkpar(m, lambda i: i))),
    "sum": lambda m, a: reduce_par(AlgebraSpec(lambda x, y: x + y, 0), distribute(m, range(1, 101))),
}


def cmd_demo(args, out) -> int:
    with Machine(args.procs, args.backend) as m:
        report = _run(m, args.name, lambda: DEMOS[args.name](m, args))
    _emit([report], args, out)
    return EXIT_OK


def cmd_check(args, out) -> int:
    outcomes = checks.run_suite(args.suite, seed=args.seed, cases=args.cases, backend=args.backend, mutate=args.mutate, out=out)
    failed = [o for o in outcomes if not o.ok]
    out.write(f"{len(outcomes) - len(failed)}/{len(outcomes)} properties passed\n")
    return EXIT_CONTRACT if failed else EXIT_OK


BENCH_COLUMNS = ("program", "p", "size", "backend", "result", "supersteps", "seconds")


def cmd_bench(args, out) -> int:
    rows = []
    for size in args.sizes:
        rng = random.Random(args.seed)
        data = [rng.randint(-100, 100) for _ in range(size)]
        for p in args.procs:
            with Machine(p, args.backend) as m:
                dl = distribute(m, data, args.policy)
                if args.program == "mps":
                    report = _run(m, "mps", lambda: mps_par(dl))
                else:
                    report = _run(m, "sum", lambda: reduce_par(AlgebraSpec(lambda x, y: x + y, 0), dl))
            rows.append(dict(zip(BENCH_COLUMNS, (args.program, p, size, report.backend, report.result, report.supersteps, round(report.wall_time, 6)))))
    if args.json:
        json.dump(rows, out, indent=2)
        out.write("\n")
    else:
        writer = csv.DictWriter(out, fieldnames=BENCH_COLUMNS, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bsml", description="BSP parallel vectors: demos, property suites, benchmarks.")
    sub = parser.add_subparsers(dest="command", required=True)

    machine = argparse.ArgumentParser(add_help=False)
    machine.add_argument("-p", "--procs", type=_positive_int, default=4, help="number of processors (default 4)")
    machine.add_argument("--backend", choices=[b.value for b in Backend], default=Backend.SEQUENTIAL.value)

    output = argparse.ArgumentParser(add_help=False)
    output.add_argument("--json", action="store_true", help="machine-readable output")
    output.add_argument("--trace", action="store_true", help="print per-superstep message matrices")

    policy = argparse.ArgumentParser(add_help=False)
    policy.add_argument("--policy", choices=[x.value for x in Policy], default=Policy.BLOCK.value)

    p_mps = sub.add_parser("mps", parents=[machine, output, policy], help="maximum prefix sum of integer lists")
    p_mps.add_argument("source", nargs="?", help="input file, or '-' for stdin")
    p_mps.add_argument("--values", help="input given inline, e.g. '1,2,-1'")
    p_mps.set_defaults(func=cmd_mps)

    p_demo = sub.add_parser("demo", parents=[machine, output], help="run a standard-library demo")
    p_demo.add_argument("name", choices=sorted(DEMOS))
    p_demo.add_argument("--root", type=int, default=0)
    p_demo.add_argument("--offset", type=int, default=1)
    p_demo.set_defaults(func=cmd_demo)

    p_check = sub.add_parser("check", help="run a property suite")
    p_check.add_argument("suite", choices=sorted(checks.SUITES))
    p_check.add_argument("--seed", type=int, default=0)
    p_check.add_argument("--cases", type=_positive_int, default=100)
    p_check.add_argument("--backend", choices=[b.value for b in Backend], default=Backend.SEQUENTIAL.value)
    p_check.add_argument("--mutate", action="store_true", help="substitute a broken mps_op (mps suite only)")
    p_check.set_defaults(func=cmd_check)

    p_bench = sub.add_parser("bench", parents=[policy], help="time a program over a sweep of p and sizes")
    p_bench.add_argument("program", nargs="?", choices=["mps", "sum"], default="mps")
    p_bench.add_argument("--procs", type=_int_list, default=[1, 2, 4], help="comma-separated processor counts")
    p_bench.add_argument("--sizes", type=_int_list, default=[100_000], help="comma-separated input sizes")
    p_bench.add_argument("--backend", choices=[b.value for b in Backend], default=Backend.SEQUENTIAL.value)
    p_bench.add_argument("--seed", type=int, default=0)
    p_bench.add_argument("--json", action="store_true")
    p_bench.set_defaults(func=cmd_bench)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code
    if getattr(args, "procs", None) is not None and args.command == "bench":
        if any(p < 1 for p in args.procs):
            print("error: processor counts must be positive", file=sys.stderr)
            return EXIT_USAGE
    try:
        return args.func(args, out)
    except (InputError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BsmlError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONTRACT
