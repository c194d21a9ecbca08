"""Enumeration instances, the text format, and VC/IS dualization.

Text grammar, one record per line (``#`` starts a comment)::

    p <vc|is|ais> <n> <m>
    e <u> <v>            (m times, labels 1..n)
    x <v1> ... <vr>      (optional modulator)
    h <v1> ... <vs>      (optional, repeatable; subsets of the modulator)
    c <int>              (optional structural constant)
    k <int> | t <int>    (exactly one)
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable

from .graph import Graph


PROBLEMS = ("vc", "is", "ais")


class InstanceError(ValueError):
    def __init__(self, msg: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {msg}" if line is not None else msg)


@dataclass(frozen=True)
class EnumInstance:
    """A VC, IS or annotated-IS instance. Vertex sets are given in labels."""

    graph: Graph
    problem: str
    k: int | None = None
    t: int | None = None
    modulator: frozenset[int] = field(default_factory=frozenset)
    hyperedges: tuple[frozenset[int], ...] = ()
    c: int | None = None

    def __post_init__(self):
        if self.problem not in PROBLEMS:
            raise InstanceError(f"unknown problem {self.problem!r}")
        if self.problem == "vc":
            if self.k is None or self.t is not None:
                raise InstanceError("a vc instance needs k and no t")
        elif self.t is None or self.k is not None:
            raise InstanceError(f"an {self.problem} instance needs t and no k")
        if (self.k if self.k is not None else self.t) < 0:
            raise InstanceError("parameter must be nonnegative")
        object.__setattr__(self, "modulator", frozenset(self.modulator))
        hs = tuple(sorted({frozenset(h) for h in self.hyperedges}, key=lambda h: sorted(h)))
        object.__setattr__(self, "hyperedges", hs)
        for v in self.modulator:
            if not self.graph.has_label(v):
                raise InstanceError(f"modulator vertex {v} is not in the graph")
        for h in hs:
            if not h <= self.modulator:
                raise InstanceError("hyperedge outside modulator")
        if hs and self.problem != "ais":
            raise InstanceError("hyperedges are only allowed in ais instances")

    @property
    def param(self) -> int:
        return self.k if self.problem == "vc" else self.t

    @property
    def rest(self) -> frozenset[int]:
        """Labels of V(G) minus the modulator."""
        return frozenset(self.graph.labels) - self.modulator

    def with_(self, **kw) -> "EnumInstance":
        return replace(self, **kw)

    def is_solution(self, s: Iterable[int]) -> bool:
        s = frozenset(s)
        g = self.graph
        if not all(g.has_label(v) for v in s):
            return False
        ids = g.ids(s)
        if self.problem == "vc":
            return len(s) <= self.k and all(i in ids or j in ids for i, j in g.edges())
        if len(s) < self.t or not g.is_independent(ids):
            return False
        return not any(h <= s for h in self.hyperedges)


# -- text format ---------------------------------------------------------

def parse(text: str) -> EnumInstance:
    header = None
    edges: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    modulator: list[int] | None = None
    hyper: list[tuple[int, list[int]]] = []
    c = None
    param: tuple[str, int] | None = None

    def ints(tok: list[str], lineno: int) -> list[int]:
        try:
            return [int(x) for x in tok]
        except ValueError:
            raise InstanceError("expected integers", lineno) from None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        kind, args = tok[0], tok[1:]
        if kind == "p":
            if header is not None or len(args) != 3 or args[0] not in PROBLEMS:
                raise InstanceError("malformed problem line", lineno)
            n, m = ints(args[1:], lineno)
            header = (args[0], n, m)
            continue
        if header is None:
            raise InstanceError("record before the problem line", lineno)
        n = header[1]
        vals = ints(args, lineno)
        if kind in ("e", "x", "h"):
            for v in vals:
                if not 1 <= v <= n:
                    raise InstanceError(f"vertex {v} out of range", lineno)
        if kind == "e":
            if len(vals) != 2:
                raise InstanceError("malformed edge", lineno)
            u, v = vals
            if u == v:
                raise InstanceError("self-loop", lineno)
            key = (min(u, v), max(u, v))
            if key in seen:
                raise InstanceError("duplicate edge", lineno)
            seen.add(key)
            edges.append(key)
        elif kind == "x":
            if modulator is not None:
                raise InstanceError("second modulator line", lineno)
            modulator = vals
        elif kind == "h":
            if not vals:
                raise InstanceError("empty hyperedge", lineno)
            hyper.append((lineno, vals))
        elif kind == "c":
            if len(vals) != 1 or c is not None:
                raise InstanceError("malformed c line", lineno)
            c = vals[0]
        elif kind in ("k", "t"):
            if len(vals) != 1 or param is not None:
                raise InstanceError("malformed or repeated parameter line", lineno)
            param = (kind, vals[0])
        else:
            raise InstanceError(f"unknown record {kind!r}", lineno)

    if header is None:
        raise InstanceError("missing problem line")
    if param is None:
        raise InstanceError("missing k or t line")
    problem, n, m = header
    if len(edges) != m:
        raise InstanceError(f"header promises {m} edges, found {len(edges)}")
    if (problem == "vc") != (param[0] == "k"):
        raise InstanceError(f"{problem} instances take {'k' if problem == 'vc' else 't'}")
    mod = frozenset(modulator or ())
    for lineno, h in hyper:
        if not set(h) <= mod:
            raise InstanceError("hyperedge outside modulator", lineno)
    kw = {param[0]: param[1]}
    return EnumInstance(Graph(range(1, n + 1), edges), problem, modulator=mod,
                        hyperedges=tuple(frozenset(h) for _, h in hyper), c=c, **kw)


def serialize(inst: EnumInstance) -> str:
    """Canonical text. Labels must be exactly 1..n (see :func:`compact`)."""
    g = inst.graph
    if g.labels != tuple(range(1, g.n + 1)):
        raise InstanceError("labels must be 1..n to serialize; call compact() first")
    lines = [f"p {inst.problem} {g.n} {g.m}"]
    lines += [f"e {u} {v}" for u, v in g.label_edges()]
    if inst.modulator:
        lines.append("x " + " ".join(map(str, sorted(inst.modulator))))
    for h in sorted(sorted(h) for h in inst.hyperedges):
        lines.append("h " + " ".join(map(str, h)))
    if inst.c is not None:
        lines.append(f"c {inst.c}")
    lines.append(f"k {inst.k}" if inst.problem == "vc" else f"t {inst.t}")
    return "\n".join(lines) + "\n"


def relabel(inst: EnumInstance, mapping: dict[int, int]) -> EnumInstance:
    g = inst.graph
    ng = Graph((mapping[x] for x in g.labels), ((mapping[a], mapping[b]) for a, b in g.label_edges()))
    return inst.with_(graph=ng, modulator=frozenset(mapping[x] for x in inst.modulator),
                      hyperedges=tuple(frozenset(mapping[x] for x in h) for h in inst.hyperedges))


def compact(inst: EnumInstance) -> tuple[EnumInstance, dict[int, int]]:
    """Relabel to 1..n in label order; also return the map new label -> old label."""
    old = inst.graph.labels
    fwd = {lab: i + 1 for i, lab in enumerate(old)}
    return relabel(inst, fwd), {i + 1: lab for i, lab in enumerate(old)}


def format_solution(s: Iterable[int]) -> str:
    s = sorted(s)
    return " ".join(map(str, s)) if s else "-"


def parse_solution(text: str) -> frozenset[int]:
    text = text.strip()
    if text in ("-", ""):
        return frozenset()
    return frozenset(int(x) for x in text.replace(",", " ").split())


def dualize(inst: EnumInstance) -> EnumInstance:
    """VC instance (H, k) to the IS instance (H, n - k)."""
    if inst.problem != "vc":
        raise InstanceError("dualize expects a vc instance")
    n = inst.graph.n
    if inst.k > n:
        raise InstanceError(f"k={inst.k} exceeds n={n}")
    return EnumInstance(inst.graph, "is", t=n - inst.k, modulator=inst.modulator, c=inst.c)
