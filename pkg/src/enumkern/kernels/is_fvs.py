"""Cubic PD kernel for independent set parameterised by a feedback vertex set.

Stages: the input (G*, X*, t*); the post-crown instance (G, X, t) obtained by
the improvement step and the crown rule; and the compressed instance
(H, X', l). The core is X' with the identity map.
"""

from __future__ import annotations

from ..flashlight import enum_is_lex
from ..framework import Compression, CoreMap, RuleLog, TraceKernel
from ..instance import EnumInstance
from ..matching import forest_max_matching, improve_fvs, nt_crown
from ..mis import alpha_forest, alpha_mask, conflicts, enumerate_chunks, is_extension, is_forest


def _forest_ids(inst: EnumInstance) -> frozenset[int]:
    return inst.graph.ids(inst.rest)


def _chunks(inst: EnumInstance) -> list[frozenset[int]]:
    g = inst.graph
    return enumerate_chunks(g, g.ids(inst.modulator), 2)


def _n_x(inst: EnumInstance, v: int) -> list[int]:
    """Modulator neighbours of label v."""
    return sorted(inst.graph.nbr_labels(v) & inst.modulator)


def _n_f(inst: EnumInstance, v: int) -> list[int]:
    return sorted(inst.graph.nbr_labels(v) - inst.modulator)


def blockable(inst: EnumInstance, x: int, y: int, chunks=None) -> bool:
    """Is there a chunk Y with both x and y in N(Y)?"""
    g = inst.graph
    chunks = _chunks(inst) if chunks is None else chunks
    ix, iy = g.id_of(x), g.id_of(y)
    for ch in chunks:
        nb = g.neighbors(ch)
        if ix in nb and iy in nb:
            return True
    return False


def rule_easy_fvs(inst: EnumInstance, log: RuleLog) -> EnumInstance | None:
    g = inst.graph
    forest, _ = g.induced_subgraph(_forest_ids(inst))
    if alpha_forest(forest) < inst.t:
        return None
    return log.apply(inst, "fvs1-easy", [["del_v", sorted(inst.rest)], ["set_t", 0]])


def rule_crown_body(inst: EnumInstance, log: RuleLog) -> EnumInstance:
    g = inst.graph
    cd = nt_crown(g)
    if not cd.crown:
        return inst
    gone = sorted(g.labels_of(cd.crown | cd.head))
    return log.apply(inst, "fvs2-crown", [["del_v", gone], ["set_t", max(0, inst.t - len(cd.crown))]],
                     crown=sorted(g.labels_of(cd.crown)), head=sorted(g.labels_of(cd.head)))


def rule_chunk_removal(inst: EnumInstance, log: RuleLog) -> EnumInstance | None:
    g = inst.graph
    F = _forest_ids(inst)
    size = len(inst.modulator)
    for ch in _chunks(inst):
        if not ch or conflicts(g, F, ch) < size:
            continue
        labs = sorted(g.labels_of(ch))
        if len(labs) == 1:
            return log.apply(inst, "fvs3-chunk", [["del_v", labs]])
        return log.apply(inst, "fvs3-chunk", [["add_e", [labs]]])
    return None


def rule_tree_removal(inst: EnumInstance, log: RuleLog) -> EnumInstance | None:
    g = inst.graph
    chunks = _chunks(inst)
    for comp in g.connected_components(_forest_ids(inst)):
        if all(conflicts(g, comp, ch) == 0 for ch in chunks):
            a = alpha_mask(g, g.mask(comp))
            return log.apply(inst, "fvs4-tree", [["del_v", sorted(g.labels_of(comp))], ["t", -a]])
    return None


def rule_deg2_edge(inst: EnumInstance, log: RuleLog) -> EnumInstance | None:
    g = inst.graph
    chunks = _chunks(inst)
    F = _forest_ids(inst)
    for i, j in g.edges():
        if i not in F or j not in F:
            continue
        u, v = g.labels[i], g.labels[j]
        nu, nv = _n_f(inst, u), _n_f(inst, v)
        if len(nu) > 2 or len(nv) > 2 or blockable(inst, u, v, chunks):
            continue
        z = next((x for x in nu if x != v), None)
        w = next((x for x in nv if x != u), None)
        add = []
        if z is not None:
            add += [[z, x] for x in _n_x(inst, v)]
        if w is not None:
            add += [[w, x] for x in _n_x(inst, u)]
        if z is not None and w is not None:
            add.append([z, w])
        return log.apply(inst, "fvs5-deg2", [["add_e", add], ["del_v", [u, v]], ["t", -1]],
                         u=u, v=v, z=z, w=w)
    return None


def rule_deg3_gadget(inst: EnumInstance, log: RuleLog) -> EnumInstance | None:
    g = inst.graph
    chunks = _chunks(inst)
    F = _forest_ids(inst)
    for i, j in g.edges():
        if i not in F or j not in F:
            continue
        for a, b in ((g.labels[i], g.labels[j]), (g.labels[j], g.labels[i])):
            u, v = a, b
            nu, nv = _n_f(inst, u), _n_f(inst, v)
            if len(nu) != 3 or len(nv) != 3:
                continue
            for z in (x for x in nu if x != v and _n_f(inst, x) == [u]):
                p = next(x for x in nu if x not in (v, z))
                for w in (x for x in nv if x != u and _n_f(inst, x) == [v]):
                    q = next(x for x in nv if x not in (u, w))
                    if len({z, u, v, w}) < 4:
                        continue
                    if (blockable(inst, u, z, chunks) or blockable(inst, v, w, chunks)
                            or blockable(inst, z, w, chunks)):
                        continue
                    add = [[p, x] for x in _n_x(inst, z)] + [[q, x] for x in _n_x(inst, w)]
                    return log.apply(inst, "fvs6-deg3", [["add_e", add], ["del_v", [z, u, v, w]], ["t", -2]],
                                     z=z, u=u, v=v, w=w, p=p, q=q)
    return None


EXHAUSTIVE_RULES = (rule_chunk_removal, rule_tree_removal, rule_deg2_edge, rule_deg3_gadget)


def perfect_matching_audit(inst: EnumInstance) -> bool:
    g = inst.graph
    F = _forest_ids(inst)
    return 2 * len(forest_max_matching(g, F)) == len(F)


def compress_is_fvs(inst: EnumInstance) -> Compression:
    if inst.problem != "is":
        raise ValueError("the fvs kernel expects an independent set instance")
    g0 = inst.graph
    forest0, _ = g0.induced_subgraph(g0.ids(inst.rest))
    if not is_forest(forest0):
        raise ValueError("modulator is not a feedback vertex set")
    log = RuleLog()
    log.note("fvs-stage2", detail="crown extension enumerated in-repo by flashlight with the exact oracle")
    gb, xnew, crown, _ = improve_fvs(g0, g0.ids(inst.modulator))
    gone = sorted(g0.labels_of(crown.crown | crown.head))
    post = log.apply(inst, "fvs2-crown",
                     [["del_v", gone], ["mod_set", sorted(gb.labels_of(xnew))],
                      ["set_t", max(0, inst.t - len(crown.crown))]],
                     crown=sorted(g0.labels_of(crown.crown)), head=sorted(g0.labels_of(crown.head)))
    post = rule_crown_body(post, log)
    if not perfect_matching_audit(post):
        raise AssertionError("post-crown forest lacks a perfect matching")
    region = frozenset(g0.labels) - frozenset(post.graph.labels)
    extra = {"post": post, "region": region}
    cur = rule_easy_fvs(post, log)
    if cur is not None:
        return Compression(inst, cur, CoreMap.identity(cur.modulator), log, extra, degenerate=True)
    cur = post
    while True:
        cur2 = rule_chunk_removal(cur, log)
        if cur2 is None:
            break
        cur = cur2
    while True:
        for rule in EXHAUSTIVE_RULES:
            nxt = rule(cur, log)
            if nxt is not None:
                cur = nxt
                break
        else:
            break
    return Compression(inst, cur, CoreMap.identity(cur.modulator), log, extra)


class FVSKernel(TraceKernel):
    name = "is-fvs"

    def compress(self, inst):
        return compress_is_fvs(inst)

    def is_good_trace(self, comp, trace):
        post: EnumInstance = comp.extra["post"]
        g = post.graph
        if not trace <= comp.core.core_in_G:
            return False
        y = g.ids(trace)
        return is_extension(g, y, g.ids(post.modulator - trace), post.t)

    def canonical_check(self, comp, solution):
        y = frozenset(solution) & comp.core.core_in_H
        if not self.is_good_trace(comp, y):
            return False
        h = comp.compressed
        first = _first_extension(h, y)
        return first is not None and frozenset(solution) == y | first

    def lift_trace(self, comp, trace, counter=None):
        post: EnumInstance = comp.extra["post"]
        orig = comp.original
        g = post.graph
        y = frozenset(trace)
        blocked = post.modulator | g.labels_of(g.neighbors(g.ids(y)))
        sub = g.sub_labels(frozenset(g.labels) - blocked)
        region = comp.extra["region"]
        gs = orig.graph
        for z in enum_is_lex(sub, post.t - len(y), oracle="forest", counter=counter):
            s = y | z
            if not region:
                yield s
                continue
            near = gs.labels_of(gs.neighbors(gs.ids(s)))
            part = gs.sub_labels(region - near)
            for w in enum_is_lex(part, orig.t - len(s), counter=counter):
                yield s | w


def _first_extension(h: EnumInstance, y: frozenset[int]) -> frozenset[int] | None:
    """Lexicographically smallest Z with y | Z a solution of h and Z outside the modulator."""
    g = h.graph
    if not g.is_independent(g.ids(y)):
        return None
    blocked = h.modulator | g.labels_of(g.neighbors(g.ids(y)))
    sub = g.sub_labels(frozenset(g.labels) - blocked)
    return enum_is_lex(sub, h.t - len(y)).pull()
