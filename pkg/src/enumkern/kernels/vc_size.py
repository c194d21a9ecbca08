"""PD kernel with at most 3k vertices for vertex cover parameterised by k."""

from __future__ import annotations

from ..flashlight import enum_subsets_le
from ..framework import Compression, CoreMap, RuleLog, TraceKernel, replace_op
from ..graph import Graph
from ..instance import EnumInstance
from ..matching import HeavyCrown, heavy_crown_or_matching, matched_vertices


def rule_isolated(inst: EnumInstance, log: RuleLog | None = None) -> EnumInstance:
    g = inst.graph
    iso = sorted(g.labels[v] for v in range(g.n) if g.degree(v) == 0)
    if not iso:
        return inst
    return (RuleLog() if log is None else log).apply(inst, "vc1-isolated", [["del_v", iso]])


def rule_unmatched_crown(inst: EnumInstance, hc: HeavyCrown, log: RuleLog | None = None) -> EnumInstance:
    """Drop the crown vertices left unsaturated by the head matching."""
    g = inst.graph
    hc.validate(g)
    L = hc.base.crown - matched_vertices(hc.base.saturating)
    if not g.is_independent(L) or not g.neighbors(L) <= hc.base.head:
        raise AssertionError("removed crown part must be independent with N(L) inside H")
    if not L:
        return inst
    return (RuleLog() if log is None else log).apply(inst, "vc2-crown", [["del_v", sorted(g.labels_of(L))]],
                                    head=sorted(g.labels_of(hc.base.head)))


def trivial_no(inst: EnumInstance, edge: tuple[int, int]) -> EnumInstance:
    """Single edge, k = 0: the canonical NO-instance, built on an existing edge."""
    g = inst.graph
    a, b = g.labels[edge[0]], g.labels[edge[1]]
    return EnumInstance(Graph((a, b), [(a, b)]), "vc", k=0)


class VCSizeKernel(TraceKernel):
    name = "vc-k"

    def compress(self, inst: EnumInstance) -> Compression:
        if inst.problem != "vc":
            raise ValueError("the k-kernel expects a vertex cover instance")
        log = RuleLog()
        cur = rule_isolated(inst, log)
        k = cur.k
        if cur.graph.n > 3 * k:
            res = heavy_crown_or_matching(cur.graph, k)
            if isinstance(res, HeavyCrown):
                cur = rule_unmatched_crown(cur, res, log)
            else:
                no = trivial_no(cur, min(res))
                cur = log.apply(cur, "vc-matching-no", [replace_op(no)], matching=len(res))
        removed = frozenset(inst.graph.labels) - frozenset(cur.graph.labels)
        return Compression(inst, cur, CoreMap.identity(cur.graph.labels), log,
                           extra={"removed": removed})

    def closure(self, comp: Compression, y: frozenset[int]) -> frozenset[int]:
        """Y' plus every removed vertex with an edge Y' does not cover."""
        g = comp.original.graph
        extra = {r for r in comp.extra["removed"] if not g.nbr_labels(r) <= y}
        return y | extra

    def is_good_trace(self, comp, trace):
        return comp.original.is_solution(self.closure(comp, frozenset(trace)))

    def canonical_check(self, comp, solution):
        return len(self.closure(comp, frozenset(solution))) <= comp.original.k

    def lift_trace(self, comp, trace, counter=None):
        y = self.closure(comp, trace)
        free = comp.extra["removed"] - y
        for j in enum_subsets_le(free, comp.original.k - len(y), counter=counter):
            yield y | j
