"""Command-line entry point: ``enumkern <subcommand> ...`` (or ``python -m enumkern``)."""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from .brute import brute_sol
from .flashlight import StepCapExceeded, StepCounter
from .framework import RuleLog, run_pd_kernel, solutions, verify_partition
from .harness import GenSpec, MODELS, disjoint_edges, generate, profile_delay
from .instance import EnumInstance, InstanceError, compact, format_solution, parse, parse_solution, serialize
from .kernels import PARAMS, make_kernel

MODEL_FOR = {"k": "plain", "fvs": "fvs", "td": "td", "bd": "bd"}


def _read(path: str) -> EnumInstance:
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    return parse(text)


def _write(path: str | None, text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _check_problem(inst: EnumInstance, param: str) -> None:
    want = "vc" if param == "k" else "is"
    if inst.problem != want:
        raise InstanceError(f"--param {param} expects a {want} instance, got {inst.problem}")


def _with_c(inst: EnumInstance, c: int | None) -> EnumInstance:
    return inst if c is None else inst.with_(c=c)


# -- subcommands ----------------------------------------------------------------------

def cmd_gen(a) -> int:
    spec = GenSpec(a.model, a.n, a.mod_size, a.density, a.c, a.target, a.seed, a.problem)
    _write(a.output, serialize(generate(spec)))
    return 0


def cmd_kernelize(a) -> int:
    inst = _with_c(_read(a.input), a.c)
    _check_problem(inst, a.param)
    comp = make_kernel(a.param, a.c).compress(inst)
    out, back = compact(comp.compressed)
    _write(a.output, serialize(out))
    header = {"header": {"param": a.param, "c": inst.c, "degenerate": comp.degenerate,
                         "labels": {str(k): v for k, v in back.items()}}}
    if a.log:
        Path(a.log).write_text(json.dumps(header, sort_keys=True) + "\n" + comp.log.to_jsonl())
    print(f"{inst.graph.n} -> {out.graph.n} vertices, {len(comp.log)} rule entries", file=sys.stderr)
    return 0


def cmd_enumerate(a) -> int:
    inst = _read(a.input)
    shown = 0
    for s in solutions(inst):
        if a.max is not None and shown >= a.max:
            break
        print(format_solution(s))
        shown += 1
    return 0


def cmd_lift(a) -> int:
    inst = _read(a.input)
    lines = Path(a.log).read_text().splitlines()
    head = json.loads(lines[0])["header"]
    inst = _with_c(inst, head["c"])
    param = head["param"]
    _check_problem(inst, param)
    kernel = make_kernel(param, head["c"])
    comp = kernel.compress(inst)
    saved = RuleLog.from_jsonl("\n".join(lines[1:]))
    if comp.log.to_jsonl() != saved.to_jsonl():
        print("error: the log does not match a fresh compression of this instance", file=sys.stderr)
        return 2
    back = {int(k): v for k, v in head["labels"].items()}
    try:
        s = frozenset(back[v] for v in parse_solution(a.solution))
    except KeyError as e:
        print(f"error: label {e.args[0]} is not a vertex of the compressed instance", file=sys.stderr)
        return 2
    if not comp.compressed.is_solution(s):
        print("error: not a solution of the compressed instance", file=sys.stderr)
        return 2
    for out in kernel.lift(comp, s):
        print(format_solution(out))
    return 0


def cmd_pdkernel_run(a) -> int:
    inst = _with_c(_read(a.input), a.c)
    _check_problem(inst, a.param)
    shown = 0
    for s in run_pd_kernel(make_kernel(a.param, a.c), inst):
        if a.max is not None and shown >= a.max:
            break
        print(format_solution(s))
        shown += 1
    return 0


def _trial_spec(param: str, i: int, a) -> GenSpec:
    n = 5 + i % max(1, a.nmax - 4)
    return GenSpec(MODEL_FOR[param], n=n, mod_size=1 + i % 4, density=a.density,
                   c=a.c if a.c is not None else 1 + i % 2, seed=a.seed + i,
                   problem="vc" if param == "k" else "is")


def cmd_verify(a) -> int:
    bad = 0
    for i in range(a.trials):
        spec = _trial_spec(a.param, i, a)
        inst = generate(spec)
        kernel = make_kernel(a.param, inst.c)
        rep = verify_partition(inst, kernel)
        got = sorted(run_pd_kernel(kernel, inst), key=sorted)
        want = sorted(brute_sol(inst), key=sorted)
        if got != want:
            rep.fail("output differs from brute force")
        if not rep.ok:
            bad += 1
            print(f"FAIL seed={spec.seed} n={spec.n}: {'; '.join(rep.failures[:3])}")
    print(f"{a.trials - bad}/{a.trials} trials passed")
    return 1 if bad else 0


def cmd_bench(a) -> int:
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["instance", "outputs", "max_delay_steps", "mean_delay_steps", "precalc_steps", "wall_ms"])
    jobs = []
    if a.disjoint:
        lo, _, hi = a.disjoint.partition(":")
        for m in range(int(lo), int(hi or lo) + 1):
            jobs.append((f"disjoint-{m}", None, disjoint_edges(m)))
    else:
        for i in range(a.trials):
            spec = _trial_spec(a.param, i, a)
            jobs.append((f"{spec.model}-n{spec.n}-s{spec.seed}", a.param, generate(spec)))
    for name, param, inst in jobs:
        counter = StepCounter()
        stream = run_pd_kernel(make_kernel(param, inst.c), inst, counter) if param else solutions(inst, counter)
        rep = profile_delay(stream)
        wall = 0.0 if a.no_wall else round(rep.wall_ms, 3)
        w.writerow([name, rep.outputs, rep.max_delay, round(rep.mean_delay, 3), rep.precalc_steps, wall])
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="enumkern", description="Polynomial-delay enumeration kernels.")
    sub = p.add_subparsers(dest="cmd", required=True)

    g = sub.add_parser("gen", help="generate a seeded instance")
    g.add_argument("--model", choices=MODELS, default="plain")
    g.add_argument("--n", type=int, default=10)
    g.add_argument("--mod-size", type=int, default=2)
    g.add_argument("--density", type=float, default=0.3)
    g.add_argument("--c", type=int, default=1)
    g.add_argument("--target", choices=("tight", "random"), default="tight")
    g.add_argument("--problem", choices=("is", "vc"), default="is")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_gen)

    k = sub.add_parser("kernelize", help="compress an instance and write the rule log")
    k.add_argument("--param", choices=PARAMS, required=True)
    k.add_argument("--c", type=int)
    k.add_argument("-i", "--input", required=True)
    k.add_argument("-o", "--output")
    k.add_argument("--log")
    k.set_defaults(func=cmd_kernelize)

    e = sub.add_parser("enumerate", help="enumerate all solutions directly")
    e.add_argument("--order", choices=("lex",), default="lex")
    e.add_argument("--max", type=int)
    e.add_argument("-i", "--input", required=True)
    e.set_defaults(func=cmd_enumerate)

    li = sub.add_parser("lift", help="lift one compressed solution back to the original instance")
    li.add_argument("-i", "--input", required=True)
    li.add_argument("--log", required=True)
    li.add_argument("--solution", required=True)
    li.set_defaults(func=cmd_lift)

    r = sub.add_parser("pdkernel-run", help="compress, enumerate and lift, streaming to stdout")
    r.add_argument("--param", choices=PARAMS, required=True)
    r.add_argument("--c", type=int)
    r.add_argument("--max", type=int)
    r.add_argument("-i", "--input", required=True)
    r.set_defaults(func=cmd_pdkernel_run)

    v = sub.add_parser("verify", help="check a kernel against brute force on random instances")
    v.add_argument("--param", choices=PARAMS, required=True)
    v.add_argument("--c", type=int)
    v.add_argument("--nmax", type=int, default=12)
    v.add_argument("--trials", type=int, default=50)
    v.add_argument("--density", type=float, default=0.3)
    v.add_argument("--seed", type=int, default=0)
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bench", help="benchmarks")
    bsub = b.add_subparsers(dest="bench", required=True)
    d = bsub.add_parser("delay", help="per-output step delays as CSV")
    d.add_argument("--param", choices=PARAMS)
    d.add_argument("--disjoint", help="m or lo:hi, stress on m disjoint edges with t = m")
    d.add_argument("--c", type=int)
    d.add_argument("--nmax", type=int, default=12)
    d.add_argument("--trials", type=int, default=10)
    d.add_argument("--density", type=float, default=0.3)
    d.add_argument("--seed", type=int, default=0)
    d.add_argument("--no-wall", action="store_true", help="print 0 for wall time (byte-stable output)")
    d.set_defaults(func=cmd_bench)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.cmd == "bench" and not args.disjoint and not args.param:
        print("error: bench delay needs --param or --disjoint", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except InstanceError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except StepCapExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    except BrokenPipeError:
        return 0


if __name__ == "__main__":
    sys.exit(main())
