"""IS kernel for a modulator to bounded bridgedepth.

Compression follows the recursive lowering-tree scheme: clean up components
of R = G - X, shrink one lowering tree per component with the structure
rules, move the trees into the modulator and recurse with c - 1. Lifting is
trace based on the original modulator.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

from ..decomp import TreeOfBridges, bridgedepth, longest_path, lowering_tree
from ..flashlight import enum_is_lex
from ..framework import Compression, CoreMap, RuleLog, TraceKernel
from ..graph import Graph
from ..instance import EnumInstance
from ..mis import alpha_mask, conflicts, enumerate_chunks, is_extension


class InvariantError(AssertionError):
    pass


@dataclass(frozen=True)
class PendingComponent:
    root: int                   # label
    vertices: frozenset[int]    # labels
    vtype: str                  # "A" or "B"


@dataclass(frozen=True)
class TConflictStructure:
    kind: int
    roots: dict                 # role name -> label
    vertices: frozenset[int]
    almost_free: bool = False

    def sort_key(self):
        return (self.kind, sorted(self.roots.items()))


# kind -> required almost-freeness margin above |X|
THRESHOLD = {1: 2, 2: 1, 3: 2, 4: 1}


# -- helpers on the current instance ------------------------------------------

def _chunk_size(c: int) -> int:
    return 2 ** c


def _chunks(inst: EnumInstance, X: frozenset[int], c: int) -> list[frozenset[int]]:
    g = inst.graph
    return enumerate_chunks(g, g.ids(X), _chunk_size(c))


def _rest(inst: EnumInstance, X: frozenset[int]) -> frozenset[int]:
    g = inst.graph
    return frozenset(range(g.n)) - g.ids(X)


def _alpha(g: Graph, ids) -> int:
    return alpha_mask(g, g.mask(ids))


def _tree_labels(g: Graph, t: TreeOfBridges) -> tuple[frozenset[int], list[tuple[int, int]]]:
    lab = g.labels
    return frozenset(lab[v] for v in t.vertices), [(lab[a], lab[b]) for a, b in t.edges]


def pending_components(g: Graph, component: frozenset[int], tree: TreeOfBridges) -> dict[int, PendingComponent]:
    """Pending component and A/B type of every tree vertex (ids in, labels out)."""
    tedges = {frozenset(e) for e in tree.edges}
    seen: set[int] = set()
    out = {}
    for root in sorted(tree.vertices):
        comp = {root}
        stack = [root]
        while stack:
            v = stack.pop()
            for w in g.adj[v]:
                if w in component and w not in comp and frozenset((v, w)) not in tedges:
                    comp.add(w)
                    stack.append(w)
        if comp & seen:
            raise InvariantError("tree edges are not bridges")
        seen |= comp
        a_all = _alpha(g, comp)
        a_wo = _alpha(g, comp - {root})
        out[root] = PendingComponent(g.labels[root], g.labels_of(comp), "A" if a_all == a_wo else "B")
    if seen != set(component):
        raise InvariantError("pending components do not cover the component")
    return out


def classify_pending(g: Graph, component, tree: TreeOfBridges) -> list[PendingComponent]:
    pend = pending_components(g, frozenset(component), tree)
    return [pend[v] for v in sorted(pend)]


def _almost_free(g: Graph, R: frozenset[int], chunks, Z: frozenset[int], y: int) -> bool:
    for Y in chunks:
        if conflicts(g, Z, Y) > 0 and conflicts(g, R, Y) < y:
            return False
    return True


def find_structures(inst: EnumInstance, X: frozenset[int], c: int, component, tree: TreeOfBridges,
                    kinds=(1, 2, 3, 4)) -> list[TConflictStructure]:
    """All T-conflict structures of the requested kinds, annotated with
    almost-freeness at the threshold of the rule that consumes them."""
    g = inst.graph
    component = frozenset(component)
    pend = pending_components(g, component, tree)
    adj = tree.adjacency()
    lab = g.labels
    typ = {v: pend[v].vtype for v in pend}
    found: list[tuple[int, dict, frozenset[int]]] = []
    if 1 in kinds:
        for a, b in sorted(tree.edges):
            if "A" in (typ[a], typ[b]):
                found.append((1, {"v1": lab[a], "v2": lab[b]}, pend[a].vertices | pend[b].vertices))
    if 2 in kinds:
        for a, b in sorted(tree.edges):
            if len(adj[a]) == 2 and len(adj[b]) == 2 and typ[a] == typ[b] == "B":
                u2 = next(w for w in adj[a] if w != b)
                u1 = next(w for w in adj[b] if w != a)
                found.append((2, {"v1": lab[a], "v2": lab[b], "u1": lab[u1], "u2": lab[u2]},
                              pend[a].vertices | pend[b].vertices))
    if 3 in kinds and len(tree.vertices) >= 3:
        for u in sorted(tree.vertices):
            if len(adj[u]) == 1 and typ[u] == "B":
                found.append((3, {"u": lab[u], "v": lab[adj[u][0]]}, pend[u].vertices))
    if 4 in kinds:
        for v1 in sorted(tree.vertices):
            if len(adj[v1]) != 1:
                continue
            v2 = adj[v1][0]
            if len(adj[v2]) == 2 and typ[v1] == typ[v2] == "B":
                u = next(w for w in adj[v2] if w != v1)
                found.append((4, {"v1": lab[v1], "v2": lab[v2], "u": lab[u]},
                              pend[v1].vertices | pend[v2].vertices))
    if not found:
        return []
    chunks = _chunks(inst, X, c)
    R = _rest(inst, X)
    out = []
    for kind, roots, verts in found:
        ok = _almost_free(g, R, chunks, g.ids(verts), len(X) + THRESHOLD[kind])
        out.append(TConflictStructure(kind, roots, verts, ok))
    return out


# -- rules ------------------------------------------------------------------------

def rule_easy_bd(inst: EnumInstance, log: RuleLog) -> EnumInstance | None:
    g = inst.graph
    if _alpha(g, _rest(inst, inst.modulator)) < inst.t:
        return None
    return log.apply(inst, "bd1-easy", [["del_v", sorted(inst.rest)], ["set_t", 0]])


def rule_comp_removal(inst: EnumInstance, X: frozenset[int], c: int, log: RuleLog,
                      name: str = "bd2-free-component") -> EnumInstance | None:
    g = inst.graph
    chunks = _chunks(inst, X, c)
    for comp in g.connected_components(_rest(inst, X)):
        if all(conflicts(g, comp, Y) == 0 for Y in chunks):
            a = _alpha(g, comp)
            return log.apply(inst, name, [["del_v", sorted(g.labels_of(comp))], ["t", -a]],
                             component=sorted(g.labels_of(comp)), alpha=a)
    return None


def rule_many_confs(inst: EnumInstance, X: frozenset[int], c: int, log: RuleLog,
                    name: str = "bd3-many-conflicts") -> EnumInstance | None:
    g = inst.graph
    chunks = _chunks(inst, X, c)
    comps = g.connected_components(_rest(inst, X))
    deg = {Y: sum(1 for cp in comps if conflicts(g, cp, Y) > 0) for Y in chunks}
    xids = g.ids(X)
    for comp in comps:
        if all(deg[Y] >= len(X) + 1 for Y in chunks if conflicts(g, comp, Y) > 0):
            cut = sorted((g.labels[a], g.labels[b]) for a, b in g.edges()
                         if (a in xids and b in comp) or (b in xids and a in comp))
            if cut:
                return log.apply(inst, name, [["del_e", [list(e) for e in cut]]],
                                 component=sorted(g.labels_of(comp)))
    return None


def rule_type1(inst: EnumInstance, s: TConflictStructure, log: RuleLog) -> EnumInstance:
    r = s.roots
    return log.apply(inst, "bd4-type1", [["del_e", [[r["v1"], r["v2"]]]]], roots=r)


def rule_type2(inst: EnumInstance, s: TConflictStructure, log: RuleLog) -> EnumInstance:
    r = s.roots
    return log.apply(inst, "bd5-type2", [["ident", r["u1"], r["v1"]], ["ident", r["u2"], r["v2"]], ["t", -1]],
                     roots=r)


def rule_type3(inst: EnumInstance, s: TConflictStructure, log: RuleLog) -> EnumInstance:
    r = s.roots
    return log.apply(inst, "bd7-type3", [["del_v", sorted([r["u"], r["v"]])], ["t", -1]], roots=r)


def rule_type4(inst: EnumInstance, s: TConflictStructure, log: RuleLog) -> EnumInstance:
    r = s.roots
    return log.apply(inst, "bd8-type4", [["del_v", [r["v2"]]], ["ident", r["u"], r["v1"]], ["t", -1]], roots=r)


def rule_degree(inst: EnumInstance, X: frozenset[int], c: int, tree: TreeOfBridges,
                log: RuleLog) -> EnumInstance | None:
    """A high-degree tree vertex joins the modulator temporarily; the cleanup
    rules are exhausted and the modulator is restored. Counts as applied only
    if the instance changed."""
    g = inst.graph
    bound = 3 * len(_chunks(inst, X, c)) * len(X)
    adj = tree.adjacency()
    for v in sorted(tree.vertices):
        if len(adj[v]) <= bound:
            continue
        xs = X | {g.labels[v]}
        cur, changed = inst, False
        while True:
            nxt = rule_comp_removal(cur, xs, c, log, "bd6-free-component")
            if nxt is None:
                nxt = rule_many_confs(cur, xs, c, log, "bd6-many-conflicts")
            if nxt is None:
                break
            cur, changed = nxt, True
        if changed:
            return cur
    return None


def _prune_leaves(g: Graph, component, tree: TreeOfBridges) -> TreeOfBridges:
    """Drop type-A leaves whose parent has type B."""
    if len(tree.vertices) < 2:
        return tree
    pend = pending_components(g, frozenset(component), tree)
    adj = tree.adjacency()
    drop = {v for v in tree.vertices
            if len(adj[v]) == 1 and pend[v].vtype == "A" and pend[adj[v][0]].vtype == "B"}
    keep = tree.vertices - drop
    return TreeOfBridges(keep, frozenset(e for e in tree.edges if e[0] in keep and e[1] in keep))


# -- Algorithm ----------------------------------------------------------------------

@dataclass
class Audit:
    rule: str
    level: int
    alpha_rest: int
    t: int
    bd_before: int
    bd_after: int


@dataclass
class LevelReport:
    level: int
    components: int
    chunk_count: int
    modulator: int
    trees: list = field(default_factory=list)


def _first_structure(structs, kind):
    for s in structs:
        if s.kind == kind and s.almost_free:
            return s
    return None


def _cascade_once(inst: EnumInstance, X: frozenset[int], c: int, log: RuleLog,
                  reports: list[LevelReport]) -> tuple[EnumInstance, frozenset[int] | None]:
    """One pass over the rule cascade. Returns (new instance, None) after a
    rule fired, or (inst, X1) when nothing applies."""
    nxt = rule_comp_removal(inst, X, c, log)
    if nxt is not None:
        return nxt, None
    nxt = rule_many_confs(inst, X, c, log)
    if nxt is not None:
        return nxt, None
    g = inst.graph
    comps = g.connected_components(_rest(inst, X))
    n_chunks = len(_chunks(inst, X, c))
    if len(comps) > n_chunks * len(X):
        raise InvariantError(f"{len(comps)} components exceed |chunks|*|X| = {n_chunks * len(X)}")
    rep = LevelReport(c, len(comps), n_chunks, len(X))
    x1: set[int] = set()
    for comp in comps:
        tree = lowering_tree(g, comp).tree
        path = longest_path(tree)
        structs = find_structures(inst, X, c, comp, path, kinds=(1, 2))
        for kind, rule in ((1, rule_type1), (2, rule_type2)):
            s = _first_structure(structs, kind)
            if s is not None:
                return rule(inst, s, log), None
        nxt = rule_degree(inst, X, c, tree, log)
        if nxt is not None:
            return nxt, None
        t1 = _prune_leaves(g, comp, tree)
        structs = find_structures(inst, X, c, comp, t1, kinds=(1, 3, 4))
        for kind, rule in ((1, rule_type1), (3, rule_type3), (4, rule_type4)):
            s = _first_structure(structs, kind)
            if s is not None:
                return rule(inst, s, log), None
        vs, _ = _tree_labels(g, tree)
        rep.trees.append(sorted(vs))
        x1 |= vs
    reports.append(rep)
    return inst, frozenset(x1)


def compress_is_bd(inst: EnumInstance, c: int | None = None) -> Compression:
    if inst.problem != "is":
        raise ValueError("the bridgedepth kernel expects an is instance")
    c = inst.c if c is None else c
    if c is None:
        raise ValueError("bridgedepth bound c is required")
    g = inst.graph
    X0 = inst.modulator
    depth = bridgedepth(g, _rest(inst, X0))
    if depth > c:
        raise ValueError(f"G - X has bridgedepth {depth} > c = {c}")
    log = RuleLog()
    core = CoreMap.identity(X0)
    audits: list[Audit] = []
    reports: list[LevelReport] = []
    extra = {"audits": audits, "levels": reports}
    easy = rule_easy_bd(inst, log)
    if easy is not None:
        return Compression(inst, easy, core, log, extra, degenerate=True)
    cur, X = inst, X0
    for level in range(c, 0, -1):
        cap = max(1, cur.graph.n) * max(1, cur.graph.m) * (c + 2)
        for _ in range(cap + 1):
            gb = cur.graph
            bd_before = bridgedepth(gb, _rest(cur, X))
            before = len(log.entries)
            nxt, x1 = _cascade_once(cur, X, level, log, reports)
            if x1 is not None:
                break
            ga = nxt.graph
            a = _alpha(ga, _rest(nxt, X))
            bd_after = bridgedepth(ga, _rest(nxt, X))
            audits.append(Audit(log.entries[before].rule, level, a, nxt.t, bd_before, bd_after))
            if a >= nxt.t:
                raise InvariantError(f"alpha(R) = {a} >= t = {nxt.t} after {log.entries[before].rule}")
            if bd_after > bd_before:
                raise InvariantError(f"bridgedepth grew from {bd_before} to {bd_after}")
            cur = nxt
        else:
            raise RuntimeError("rule cascade did not terminate within its iteration cap")
        cur = log.apply(cur, "bd-move-trees", [["mod_add", sorted(x1)], ["c", level - 1]],
                        level=level, trees=reports[-1].trees)
        X = cur.modulator
        if bridgedepth(cur.graph, cur.graph.ids(X - X0)) > c:
            raise InvariantError("moved vertices exceed the bridgedepth bound")
    if cur.rest:
        raise InvariantError("vertices left outside the modulator after the last level")
    return Compression(inst, cur, core, log, extra)


def choose_bd(comp: Compression, solution) -> bool:
    return BDKernel().canonical_check(comp, solution)


def lift_bd(orig: EnumInstance, trace, counter=None) -> Iterator[frozenset[int]]:
    g = orig.graph
    y = frozenset(trace)
    blocked = orig.modulator | g.labels_of(g.neighbors(g.ids(y)))
    sub = g.sub_labels(frozenset(g.labels) - blocked)
    for z in enum_is_lex(sub, orig.t - len(y), counter=counter):
        yield y | z


class BDKernel(TraceKernel):
    name = "is-bd"

    def __init__(self, c: int | None = None):
        self.c = c

    def compress(self, inst):
        return compress_is_bd(inst, self.c)

    def is_good_trace(self, comp, trace):
        orig = comp.original
        g = orig.graph
        if not trace <= orig.modulator:
            return False
        return is_extension(g, g.ids(trace), g.ids(orig.modulator - trace), orig.t)

    def canonical_check(self, comp, solution):
        s = frozenset(solution)
        y = s & comp.core.core_in_H
        if not self.is_good_trace(comp, y):
            return False
        h = comp.compressed
        g = h.graph
        blocked = comp.core.core_in_H | g.labels_of(g.neighbors(g.ids(y)))
        first = enum_is_lex(g.sub_labels(frozenset(g.labels) - blocked), h.t - len(y)).pull()
        return first is not None and s == y | first

    def lift_trace(self, comp, trace, counter=None):
        yield from lift_bd(comp.original, trace, counter)
