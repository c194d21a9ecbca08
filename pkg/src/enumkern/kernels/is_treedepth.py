"""Treedepth-modulator pipeline: IS -> annotated IS (forward transformation),
the annotated kernel, and the gadget back to IS (backward transformation)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from ..decomp import treedepth
from ..flashlight import StepCounter, enum_is_lex, enum_maximal_is
from ..framework import (Compression, ComposedKernel, CoreMap, EPPT, PDKernel, RuleLog)
from ..graph import Graph
from ..instance import EnumInstance
from ..mis import alpha_mask, conflicts, enumerate_chunks


# -- forward: IS -> annotated IS ---------------------------------------------

def forward_eppt(inst: EnumInstance) -> EnumInstance:
    """Edges inside X become 2-element hyperedges; solution sets are identical."""
    if inst.problem != "is":
        raise ValueError("forward transformation expects an is instance")
    g = inst.graph
    inner = [(a, b) for a, b in g.label_edges() if a in inst.modulator and b in inst.modulator]
    return EnumInstance(g.without_label_edges(inner), "ais", t=inst.t, modulator=inst.modulator,
                        hyperedges=tuple(frozenset(e) for e in inner), c=inst.c)


class ForwardEPPT(EPPT):
    name = "is-to-ais"

    def map(self, inst):
        return forward_eppt(inst)

    def lift(self, source, target, solution):
        yield solution


# -- the annotated kernel -----------------------------------------------------

def _rest_ids(inst: EnumInstance) -> frozenset[int]:
    return inst.graph.ids(inst.rest)


def rule_easy_td(inst: EnumInstance, log: RuleLog) -> EnumInstance | None:
    g = inst.graph
    if alpha_mask(g, g.mask(_rest_ids(inst))) < inst.t:
        return None
    return log.apply(inst, "td1-easy", [["del_v", sorted(inst.rest)], ["set_t", 0]])


def _chunks(inst: EnumInstance, c: int) -> list[frozenset[int]]:
    g = inst.graph
    return enumerate_chunks(g, g.ids(inst.modulator), 2 ** c, [g.ids(h) for h in inst.hyperedges])


def rule_bad_chunk(inst: EnumInstance, c: int, log: RuleLog) -> EnumInstance | None:
    g = inst.graph
    R = _rest_ids(inst)
    for ch in _chunks(inst, c):
        if ch and conflicts(g, R, ch) > len(inst.modulator):
            return log.apply(inst, "td2-bad-chunk", [["hyp", [sorted(g.labels_of(ch))]]])
    return None


def rule_good_component(inst: EnumInstance, c: int, log: RuleLog) -> EnumInstance | None:
    g = inst.graph
    chunks = _chunks(inst, c)
    for comp in g.connected_components(_rest_ids(inst)):
        if all(conflicts(g, comp, ch) == 0 for ch in chunks):
            a = alpha_mask(g, g.mask(comp))
            return log.apply(inst, "td3-good-component", [["del_v", sorted(g.labels_of(comp))], ["t", -a]],
                             component=sorted(g.labels_of(comp)), t_before=inst.t, alpha=a)
    return None


def compress_ais_td(inst: EnumInstance, c: int | None = None) -> Compression:
    if inst.problem != "ais":
        raise ValueError("the annotated kernel expects an ais instance")
    c = inst.c if c is None else c
    if c is None:
        raise ValueError("treedepth bound c is required")
    g = inst.graph
    depth, _ = treedepth(g, _rest_ids(inst))
    if depth > c:
        raise ValueError(f"G - X has treedepth {depth} > c = {c}")
    log = RuleLog()
    core = CoreMap.identity(inst.modulator)
    steps: list[tuple[EnumInstance, frozenset[int]]] = []
    if c == 0:
        return Compression(inst, inst, core, log, {"removals": steps})
    cur = rule_easy_td(inst, log)
    if cur is not None:
        return Compression(inst, cur, core, log, {"removals": steps}, degenerate=True)
    cur = inst
    for level in range(c, 0, -1):
        g = cur.graph
        if alpha_mask(g, g.mask(_rest_ids(cur))) >= cur.t:
            raise AssertionError("easy rule became applicable after the first level")
        while (nxt := rule_bad_chunk(cur, level, log)) is not None:
            cur = nxt
        while True:
            before = cur
            nxt = rule_good_component(cur, level, log)
            if nxt is None:
                break
            steps.append((before, frozenset(log.entries[-1].info["component"])))
            cur = nxt
        g = cur.graph
        roots = []
        for comp in g.connected_components(_rest_ids(cur)):
            _, dec = treedepth(g, comp)
            roots.append(g.labels[dec.roots[0]])
        gamma = frozenset(roots)
        z = sorted([a, b] for a, b in g.label_edges()
                   if (a in cur.modulator and b in gamma) or (b in cur.modulator and a in gamma))
        cur = log.apply(cur, "td-roots", [["mod_add", sorted(gamma)], ["del_e", z], ["hyp", z], ["c", level - 1]],
                        level=level, roots=sorted(gamma))
    if cur.rest:
        raise AssertionError("vertices left outside the modulator after the last level")
    return Compression(inst, cur, core, log, {"removals": steps})


class AnnotatedTDKernel(PDKernel):
    """Annotated IS kernel; lifting replays the removed components backwards."""

    name = "ais-td"

    def __init__(self, c: int | None = None):
        self.c = c

    def compress(self, inst):
        return compress_ais_td(inst, self.c)

    def lift(self, comp: Compression, solution, counter=None):
        s = frozenset(solution)
        if comp.degenerate:
            orig = comp.original
            g = orig.graph
            if not orig.with_(t=0).is_solution(s):
                return
            near = g.labels_of(g.neighbors(g.ids(s)))
            sub = g.sub_labels(orig.rest - near)
            for w in enum_is_lex(sub, orig.t - len(s), counter=counter):
                yield s | w
            return
        yield from _replay(comp.extra["removals"], len(comp.extra["removals"]) - 1, s, counter)


def _replay(steps, idx: int, s: frozenset[int], counter) -> Iterator[frozenset[int]]:
    if idx < 0:
        yield s
        return
    before, comp = steps[idx]
    g = before.graph
    near = g.labels_of(g.neighbors(g.ids(s)))
    sub = g.sub_labels(comp - near)
    for w in enum_is_lex(sub, before.t - len(s), counter=counter):
        yield from _replay(steps, idx - 1, s | w, counter)


# -- backward: annotated IS (modulator only) -> IS ------------------------------

@dataclass
class Gadget:
    source: EnumInstance
    xs: tuple[int, ...]              # modulator labels, v_1..v_r
    hyper: tuple[tuple[int, ...], ...]
    a: dict
    z: dict
    b: dict
    parts: dict                      # (hyperedge index, i) -> tuple of labels
    instance: EnumInstance

    def sigma(self, s: frozenset[int]) -> frozenset[int]:
        out = set()
        for i, v in enumerate(self.xs):
            out |= {self.a[i], self.b[i]} if v in s else {self.z[i]}
        for j, h in enumerate(self.hyper):
            i = min(i for i in h if self.xs[i] not in s)
            out |= set(self.parts[j, i])
        return frozenset(out)

    def sigma_inverse(self, sp: frozenset[int]) -> frozenset[int] | None:
        g = self.instance.graph
        ids = g.ids(sp)
        if not g.is_independent(ids) or len(sp) < self.instance.t:
            return None
        if g.closed_neighbors(ids) != frozenset(range(g.n)):
            return None  # not maximal
        for j, h in enumerate(self.hyper):
            chosen = [i for i in h if set(self.parts[j, i]) <= sp]
            if len(chosen) != 1:
                return None
            free = [i for i in h if self.a[i] not in sp]
            if not free or chosen[0] != min(free):
                return None
        s = frozenset(v for i, v in enumerate(self.xs) if self.a[i] in sp and self.b[i] in sp)
        return s if self.source.is_solution(s) else None


def fold_modulator_edges(inst: EnumInstance) -> EnumInstance:
    g = inst.graph
    inner = [(a, b) for a, b in g.label_edges() if a in inst.modulator and b in inst.modulator]
    if not inner:
        return inst
    return inst.with_(graph=g.without_label_edges(inner),
                      hyperedges=inst.hyperedges + tuple(frozenset(e) for e in inner))


def build_gadget(inst: EnumInstance) -> Gadget:
    if inst.problem != "ais" or inst.rest:
        raise ValueError("gadget construction needs an ais instance with V = X")
    inst = fold_modulator_edges(inst)
    xs = tuple(sorted(inst.modulator))
    pos = {v: i for i, v in enumerate(xs)}
    r = len(xs)
    hyper = tuple(tuple(sorted(pos[v] for v in h)) for h in sorted(sorted(h) for h in inst.hyperedges))
    a = {i: 3 * i + 1 for i in range(r)}
    z = {i: 3 * i + 2 for i in range(r)}
    b = {i: 3 * i + 3 for i in range(r)}
    edges = [(a[i], z[i]) for i in range(r)] + [(z[i], b[i]) for i in range(r)]
    nxt = 3 * r + 1
    parts = {}
    for j, h in enumerate(hyper):
        for i in h:
            parts[j, i] = tuple(range(nxt, nxt + r))
            nxt += r
        for i in h:
            for w in parts[j, i]:
                edges += [(w, a[i]), (w, b[i])]
                for i2 in h:
                    if i2 > i:
                        edges += [(w, w2) for w2 in parts[j, i2]]
    g = Graph(range(1, nxt), edges)
    target = r + inst.t + r * len(hyper)
    out = EnumInstance(g, "is", t=target)
    return Gadget(inst, xs, hyper, a, z, b, parts, out)


class BackwardEPPT(EPPT):
    name = "ais-to-is"

    def __init__(self):
        self._cache: dict[int, Gadget] = {}

    def gadget(self, source: EnumInstance) -> Gadget:
        key = id(source)
        hit = self._cache.get(key)
        if hit is None or hit.source is not source and hit.source != fold_modulator_edges(source):
            hit = build_gadget(source)
            self._cache = {key: hit}
        return hit

    def map(self, inst):
        return self.gadget(inst).instance

    def lift(self, source, target, solution):
        s = self.gadget(source).sigma_inverse(frozenset(solution))
        if s is not None:
            yield s


class TDPipeline(ComposedKernel):
    """IS kernel for a treedepth modulator, composed from the three stages.

    Only maximal gadget solutions can be accepted by the backward lifting, so
    by default the compressed solutions are enumerated as maximal independent
    sets; ``exhaustive=True`` walks all of Sol(compressed) instead.
    """

    def __init__(self, c: int | None = None, exhaustive: bool = False):
        super().__init__(ForwardEPPT(), AnnotatedTDKernel(c), BackwardEPPT(), name="is-td")
        self.exhaustive = exhaustive

    def compressed_solutions(self, comp, counter=None):
        if self.exhaustive:
            return super().compressed_solutions(comp, counter)
        inst = comp.compressed
        return enum_maximal_is(inst.graph, inst.t, counter=counter)


def pipeline_is_td(c: int | None = None, exhaustive: bool = False) -> TDPipeline:
    return TDPipeline(c, exhaustive)
