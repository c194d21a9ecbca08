"""The PD-kernel abstraction: cores, traces, rule logs, lifting, ePPT
composition and the partition verifier."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Iterable, Iterator

from .brute import brute_sol
from .flashlight import SolutionStream, StepCounter, enum_is_lex
from .graph import Graph
from .instance import EnumInstance, parse, serialize, compact, relabel


# -- rule logs -------------------------------------------------------------

def apply_ops(inst: EnumInstance, ops: list[list]) -> EnumInstance:
    """Apply primitive edits (in label space) to an instance.

    Every reduction rule expresses itself through these ops, which is what
    makes a log replayable.
    """
    for op in ops:
        kind = op[0]
        g = inst.graph
        if kind == "del_v":
            gone = frozenset(op[1])
            inst = inst.with_(graph=g.without_labels(gone), modulator=inst.modulator - gone,
                              hyperedges=tuple(h for h in inst.hyperedges if not h & gone))
        elif kind == "del_e":
            inst = inst.with_(graph=g.without_label_edges(op[1]))
        elif kind == "add_e":
            inst = inst.with_(graph=g.with_label_edges(op[1]))
        elif kind == "ident":
            keep, merge = op[1], op[2]
            if merge in inst.modulator:
                raise ValueError("identification of a modulator vertex")
            inst = inst.with_(graph=g.identify(g.id_of(keep), g.id_of(merge)))
        elif kind == "hyp":
            inst = inst.with_(hyperedges=inst.hyperedges + tuple(frozenset(h) for h in op[1]))
        elif kind == "mod_add":
            inst = inst.with_(modulator=inst.modulator | frozenset(op[1]))
        elif kind == "mod_set":
            inst = inst.with_(modulator=frozenset(op[1]))
        elif kind == "t":
            inst = inst.with_(t=inst.t + op[1])
        elif kind == "set_t":
            inst = inst.with_(t=op[1])
        elif kind == "c":
            inst = inst.with_(c=op[1])
        elif kind == "replace":
            new, back = parse(op[1]), op[2]
            inst = relabel(new, {int(k): v for k, v in back.items()})
        else:
            raise ValueError(f"unknown op {kind!r}")
    return inst


def replace_op(inst: EnumInstance) -> list:
    text_inst, back = compact(inst)
    return ["replace", serialize(text_inst), {str(k): v for k, v in back.items()}]


@dataclass
class RuleEntry:
    rule: str
    ops: list = field(default_factory=list)
    info: dict = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps({"rule": self.rule, "ops": self.ops, "info": self.info}, sort_keys=True)


class RuleLog:
    """Ordered record of rule applications; replaying it reproduces the compression."""

    def __init__(self, entries: Iterable[RuleEntry] = ()):
        self.entries: list[RuleEntry] = list(entries)

    def __iter__(self):
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def apply(self, inst: EnumInstance, rule: str, ops: list, **info: Any) -> EnumInstance:
        out = apply_ops(inst, ops)
        self.entries.append(RuleEntry(rule, ops, info))
        return out

    def note(self, rule: str, **info: Any) -> None:
        self.entries.append(RuleEntry(rule, [], info))

    def by_rule(self, rule: str) -> list[RuleEntry]:
        return [e for e in self.entries if e.rule == rule]

    def replay(self, inst: EnumInstance) -> EnumInstance:
        for e in self.entries:
            inst = apply_ops(inst, e.ops)
        return inst

    def to_jsonl(self) -> str:
        return "".join(e.to_json() + "\n" for e in self.entries)

    @classmethod
    def from_jsonl(cls, text: str) -> "RuleLog":
        out = []
        for line in text.splitlines():
            if line.strip():
                d = json.loads(line)
                out.append(RuleEntry(d["rule"], d["ops"], d.get("info", {})))
        return cls(out)


# -- cores and compressions --------------------------------------------------

@dataclass(frozen=True)
class CoreMap:
    core_in_H: frozenset[int]
    lam: dict

    @classmethod
    def identity(cls, core: Iterable[int]) -> "CoreMap":
        core = frozenset(core)
        return cls(core, {v: v for v in core})

    @property
    def core_in_G(self) -> frozenset[int]:
        return frozenset(self.lam[v] for v in self.core_in_H)

    def trace(self, solution_of_H: Iterable[int]) -> frozenset[int]:
        return frozenset(self.lam[v] for v in solution_of_H if v in self.core_in_H)

    def validate(self) -> None:
        if set(self.lam) != set(self.core_in_H):
            raise AssertionError("lambda is not defined exactly on the core")
        if len(set(self.lam.values())) != len(self.lam):
            raise AssertionError("lambda is not injective")


@dataclass
class Compression:
    original: EnumInstance
    compressed: EnumInstance
    core: CoreMap
    log: RuleLog
    extra: dict = field(default_factory=dict)
    degenerate: bool = False


def solutions(inst: EnumInstance, counter: StepCounter | None = None) -> SolutionStream:
    """Sol(inst) by flashlight with the exact oracle (VC through complements)."""
    counter = counter or StepCounter()
    g = inst.graph
    if inst.problem == "vc":
        if inst.k >= g.n:
            t = 0
        else:
            t = g.n - inst.k
        every = frozenset(g.labels)
        inner = enum_is_lex(g, t, counter=counter)
        return SolutionStream((every - s for s in inner), counter)
    hyper = [g.ids(h) for h in inst.hyperedges]
    return enum_is_lex(g, inst.t, hyperedges=hyper, counter=counter)


class PDKernel:
    """Compression plus a lifting algorithm applied to each compressed solution."""

    name = "pd-kernel"

    def compress(self, inst: EnumInstance) -> Compression:
        raise NotImplementedError

    def lift(self, comp: Compression, solution: frozenset[int],
             counter: StepCounter | None = None) -> Iterator[frozenset[int]]:
        raise NotImplementedError

    def compressed_solutions(self, comp: Compression, counter: StepCounter | None = None):
        return solutions(comp.compressed, counter)


class TraceKernel(PDKernel):
    """A kernel built from a core, a good-trace test, canonical solutions and a
    per-trace lifting; ``lift`` ties them together."""

    def is_good_trace(self, comp: Compression, trace: frozenset[int]) -> bool:
        raise NotImplementedError

    def canonical_check(self, comp: Compression, solution: frozenset[int]) -> bool:
        raise NotImplementedError

    def lift_trace(self, comp: Compression, trace: frozenset[int],
                   counter: StepCounter | None = None) -> Iterator[frozenset[int]]:
        raise NotImplementedError

    def lift(self, comp, solution, counter=None):
        if self.canonical_check(comp, solution):
            yield from self.lift_trace(comp, comp.core.trace(solution), counter)


class IdentityKernel(TraceKernel):
    """compress = id, core = V, every solution canonical."""

    name = "identity"

    def compress(self, inst):
        return Compression(inst, inst, CoreMap.identity(inst.graph.labels), RuleLog())

    def is_good_trace(self, comp, trace):
        return comp.original.is_solution(trace)

    def canonical_check(self, comp, solution):
        return True

    def lift_trace(self, comp, trace, counter=None):
        yield trace


def run_pd_kernel(kernel: PDKernel, inst: EnumInstance,
                  counter: StepCounter | None = None) -> SolutionStream:
    counter = counter or StepCounter()

    def gen():
        comp = kernel.compress(inst)
        counter.tick(len(comp.log) + 1)
        for s in kernel.compressed_solutions(comp, counter):
            yield from kernel.lift(comp, s, counter)

    return SolutionStream(gen(), counter)


# -- ePPT composition --------------------------------------------------------

class EPPT:
    """Instance map plus per-solution lifting that yields at most a few
    solutions (possibly none, i.e. rejection)."""

    name = "eppt"

    def map(self, inst: EnumInstance) -> EnumInstance:
        raise NotImplementedError

    def lift(self, source: EnumInstance, target: EnumInstance,
             solution: frozenset[int]) -> Iterator[frozenset[int]]:
        raise NotImplementedError


class IdentityEPPT(EPPT):
    name = "identity"

    def map(self, inst):
        return inst

    def lift(self, source, target, solution):
        yield solution


class ComposedKernel(PDKernel):
    """backward.map . inner.compress . forward.map, with online lifting."""

    def __init__(self, forward: EPPT, inner: PDKernel, backward: EPPT, name: str = "composed"):
        self.forward, self.inner, self.backward = forward, inner, backward
        self.name = name

    def compress(self, inst):
        mid = self.forward.map(inst)
        inner = self.inner.compress(mid)
        out = self.backward.map(inner.compressed)
        return Compression(inst, out, CoreMap.identity(()), inner.log,
                           extra={"forward": mid, "inner": inner}, degenerate=inner.degenerate)

    def lift(self, comp, solution, counter=None):
        inner: Compression = comp.extra["inner"]
        mid = comp.extra["forward"]
        for s2 in self.backward.lift(inner.compressed, comp.compressed, solution):
            if counter is not None:
                counter.tick()
            for s1 in self.inner.lift(inner, s2, counter):
                yield from self.forward.lift(comp.original, mid, s1)


def eppt_compose(forward: EPPT, inner: PDKernel, backward: EPPT, name: str = "composed") -> PDKernel:
    return ComposedKernel(forward, inner, backward, name)


# -- partition verifier -------------------------------------------------------

@dataclass
class PartitionReport:
    failures: list[str] = field(default_factory=list)
    solutions: int = 0
    compressed_solutions: int = 0
    accepted: int = 0
    lifted: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def fail(self, msg: str) -> None:
        self.failures.append(msg)


def verify_partition(inst: EnumInstance, kernel: PDKernel, nmax: int = 20,
                     compressed_cap: int = 20) -> PartitionReport:
    """Check the PD-kernel partition property against brute force.

    (a) the lifted sets cover Sol(inst); (b) they are pairwise disjoint (and
    duplicate-free); (c) Sol(inst) is empty iff Sol(compressed) is; (d) for
    trace kernels, each good trace has exactly one canonical compressed
    solution and the per-trace lifting is exact.
    """
    rep = PartitionReport()
    truth = brute_sol(inst, cap=nmax)
    truth_set = set(truth)
    rep.solutions = len(truth)
    comp = kernel.compress(inst)
    if comp.compressed.graph.n <= compressed_cap:
        comp_sols = brute_sol(comp.compressed, cap=compressed_cap)
    else:
        comp_sols = list(kernel.compressed_solutions(comp))
    rep.compressed_solutions = len(comp_sols)
    seen: set[frozenset[int]] = set()
    for s in comp_sols:
        out = list(kernel.lift(comp, s))
        if out:
            rep.accepted += 1
        for x in out:
            if x in seen:
                rep.fail(f"(b) {sorted(x)} produced twice (last from {sorted(s)})")
            seen.add(x)
            rep.lifted.append(x)
    if seen != truth_set:
        missing = sorted(map(sorted, truth_set - seen))[:3]
        extra = sorted(map(sorted, seen - truth_set))[:3]
        rep.fail(f"(a) union differs from Sol: missing {missing}, extra {extra}")
    if bool(truth) != bool(comp_sols):
        rep.fail(f"(c) Sol(inst) nonempty={bool(truth)} but Sol(compressed) nonempty={bool(comp_sols)}")
    if isinstance(kernel, TraceKernel):
        core = comp.core
        core.validate()
        cg = core.core_in_G
        good = {s & cg for s in truth}
        comp_traces = {core.trace(s) for s in comp_sols}
        for y in good - comp_traces:
            rep.fail(f"(cond1) good trace {sorted(y)} missing among compressed traces")
        accepted: dict[frozenset[int], int] = {}
        for s in comp_sols:
            if kernel.canonical_check(comp, s):
                y = core.trace(s)
                accepted[y] = accepted.get(y, 0) + 1
        for y in good:
            if accepted.get(y, 0) != 1:
                rep.fail(f"(d) good trace {sorted(y)} has {accepted.get(y, 0)} canonical solutions")
        for y in accepted:
            if y not in good:
                rep.fail(f"(d) non-good trace {sorted(y)} accepted")
            else:
                got = list(kernel.lift_trace(comp, y))
                want = {s for s in truth if s & cg == y}
                if len(got) != len(set(got)) or set(got) != want:
                    rep.fail(f"(cond3) lift of trace {sorted(y)} is not exact")
    return rep
