import random
from itertools import combinations

import pytest

from enumkern.brute import brute_sol
from enumkern.decomp import bridgedepth, induced_tree, lowering_tree
from enumkern.framework import RuleLog, apply_ops, run_pd_kernel, verify_partition
from enumkern.graph import Graph, path_graph
from enumkern.harness import GenSpec, generate
from enumkern.instance import EnumInstance
from enumkern.kernels import BDKernel
from enumkern.kernels.is_bridgedepth import (THRESHOLD, InvariantError, choose_bd, classify_pending, compress_is_bd,
                                             find_structures, lift_bd, rule_comp_removal, rule_degree,
                                             rule_easy_bd, rule_many_confs, rule_type2)
from enumkern.mis import conflicts
from helpers import brute_alpha, independent, random_graph


def inst(g, t, X=(), c=None):
    return EnumInstance(g, "is", t=t, modulator=frozenset(X), c=c)


def yes(i):
    return bool(brute_sol(i))


def by_key(sols):
    return sorted(sols, key=sorted)


def planted(seed, n=None, mod=None, c=None, density=0.5):
    return generate(GenSpec("bd", n=n or 8 + seed % 5, mod_size=mod or 2 + seed % 3, c=c or 1 + seed % 2,
                            density=density, seed=seed))


def nondegenerate(count):
    out, seed = [], 0
    while len(out) < count:
        i = planted(seed)
        if not compress_is_bd(i).degenerate:
            out.append(i)
        seed += 1
    return out


# -- pending components and structures --------------------------------------------------

def pendant_graph():
    # tree path 1-2-3; triangle 2-4-5 hangs off 2, pendant edge 3-6 off 3
    return Graph(range(1, 7), [(1, 2), (2, 3), (2, 4), (2, 5), (4, 5), (3, 6)])


def test_classify_pending():
    g = pendant_graph()
    tree = induced_tree(g, g.ids([1, 2, 3]))
    pend = {p.root: p for p in classify_pending(g, range(g.n), tree)}
    assert pend[1].vertices == {1} and pend[1].vtype == "B"
    assert pend[2].vertices == {2, 4, 5} and pend[2].vtype == "A"
    # alpha({3, 6}) = alpha({6}) = 1, so the root does not matter
    assert pend[3].vertices == {3, 6} and pend[3].vtype == "A"


def test_classify_rejects_non_bridges():
    # edge 1-2 of a triangle is no bridge, so the pending parts of 1 and 2 collide
    g = Graph([1, 2, 3], [(1, 2), (2, 3), (1, 3)])
    with pytest.raises(InvariantError):
        classify_pending(g, range(3), induced_tree(g, range(2)))


def test_find_structures_kinds():
    g = pendant_graph()
    i = inst(g, 3)
    tree = induced_tree(g, g.ids([1, 2, 3]))
    structs = find_structures(i, frozenset(), 1, range(g.n), tree)
    kinds = [(s.kind, s.roots) for s in structs]
    assert (1, {"v1": 1, "v2": 2}) in kinds and (1, {"v1": 2, "v2": 3}) in kinds
    # leaf 1 is type B and the tree has three vertices
    assert (3, {"u": 1, "v": 2}) in kinds
    assert not any(k in (2, 4) for k, _ in kinds)
    # with no modulator every chunk is empty, so everything is almost free
    assert all(s.almost_free for s in structs)


def test_find_structures_small_tree_has_no_type3():
    g = Graph([1, 2], [(1, 2)])
    tree = induced_tree(g, range(2))
    structs = find_structures(inst(g, 1), frozenset(), 1, range(2), tree)
    assert all(s.kind != 3 for s in structs)


def test_find_structures_type2_and_type4_on_a_path():
    g = path_graph(4)
    tree = induced_tree(g, range(4))
    structs = find_structures(inst(g, 2), frozenset(), 1, range(4), tree)
    t2 = [s.roots for s in structs if s.kind == 2]
    assert t2 == [{"v1": 2, "v2": 3, "u1": 4, "u2": 1}]
    t4 = [s.roots for s in structs if s.kind == 4]
    assert {"v1": 1, "v2": 2, "u": 3} in t4 and {"v1": 4, "v2": 3, "u": 2} in t4


def test_almost_free_threshold():
    # x = 5 sees leaf 1 of the path 1-2-3-4: conf_R({x}) = 2 - 2 = 0 but conf_{1}({x}) = 1
    g = Graph(range(1, 6), [(1, 2), (2, 3), (3, 4), (5, 1)])
    i = inst(g, 3, {5})
    tree = induced_tree(g, g.ids([1, 2, 3, 4]))
    t3 = {s.roots["u"]: s.almost_free for s in find_structures(i, frozenset({5}), 1, g.ids([1, 2, 3, 4]), tree)
          if s.kind == 3}
    assert t3 == {1: False, 4: True}
    # x now sees 2 and 3: conf_R({x}) = 2 - 1 = 1 < |X| + threshold
    g2 = Graph(range(1, 6), [(1, 2), (2, 3), (3, 4), (5, 2), (5, 3)])
    i2 = inst(g2, 3, {5})
    structs = find_structures(i2, frozenset({5}), 1, g2.ids([1, 2, 3, 4]), induced_tree(g2, g2.ids([1, 2, 3, 4])))
    free = {(s.kind, s.vertices): s.almost_free for s in structs}
    assert free[2, frozenset({2, 3})] is False
    # conf_{3,4}({x}) = 1 - 1 = 0, so this one is free regardless
    assert free[4, frozenset({3, 4})] is True
    assert min(THRESHOLD.values()) >= 1


# -- individual rules ------------------------------------------------------------------

def test_rule_easy():
    g = Graph(range(1, 5), [(1, 2), (2, 3), (4, 1)])
    out = rule_easy_bd(inst(g, 2, {4}), RuleLog())
    assert out.graph.labels == (4,) and out.t == 0
    assert rule_easy_bd(inst(g, 3, {4}), RuleLog()) is None


def test_rule_comp_removal():
    # component 3-4 is untouched by X = {1}; component {2} is hit
    g = Graph(range(1, 5), [(1, 2), (3, 4)])
    log = RuleLog()
    out = rule_comp_removal(inst(g, 3, {1}), frozenset({1}), 1, log)
    assert out.graph.labels == (1, 2) and out.t == 2
    assert log.entries[0].info["alpha"] == 1
    assert rule_comp_removal(out, frozenset({1}), 1, RuleLog()) is None


def test_rule_many_confs():
    # x = 1 hits two isolated rest vertices: deg({x}) = 2 >= |X| + 1
    g = Graph([1, 2, 3], [(1, 2), (1, 3)])
    out = rule_many_confs(inst(g, 3, {1}), frozenset({1}), 1, RuleLog())
    assert out.graph.m == 1 and out.graph.n == 3
    lone = Graph([1, 2], [(1, 2)])
    assert rule_many_confs(inst(lone, 2, {1}), frozenset({1}), 1, RuleLog()) is None


def test_rule_type2_on_path():
    g = path_graph(4)
    tree = induced_tree(g, range(4))
    s = next(s for s in find_structures(inst(g, 2), frozenset(), 1, range(4), tree) if s.kind == 2)
    out = rule_type2(inst(g, 2), s, RuleLog())
    assert out.graph.n == 2 and out.graph.m == 1 and out.t == 1
    assert brute_alpha(g) - 1 == brute_alpha(out.graph)


def star_instance():
    # x = 10 sees the center 1 and leaf 2 of a star with eight leaves
    g = Graph(range(1, 11), [(1, v) for v in range(2, 10)] + [(10, 1), (10, 2)])
    return inst(g, 9, {10})


def test_rule_degree_cuts_the_star():
    i = star_instance()
    g = i.graph
    rest = g.ids(range(1, 10))
    tree = lowering_tree(g, rest).tree
    log = RuleLog()
    out = rule_degree(i, frozenset({10}), 1, tree, log)
    assert out is not None
    # the bound is 3 * |chunks| * |X| = 6; cutting stops once deg({center}) drops to 2 < |X| + 2
    assert set(out.graph.labels) == {1, 2, 9, 10} and out.t == 3
    assert {e.rule for e in log} <= {"bd6-free-component", "bd6-many-conflicts"}
    assert yes(i) == yes(out)


def test_rule_degree_idle_below_bound():
    g = Graph(range(1, 5), [(1, 2), (1, 3), (4, 1)])
    i = inst(g, 3, {4})
    assert rule_degree(i, frozenset({4}), 1, lowering_tree(g, g.ids([1, 2, 3])).tree, RuleLog()) is None


# -- the central lemma, by brute force ------------------------------------------------

def test_many_conflicts_force_a_large_rest():
    rng = random.Random(5)
    checked = 0
    for _ in range(300):
        g = random_graph(rng, rng.randint(3, 9), 0.35)
        X = frozenset(rng.sample(g.labels, rng.randint(1, 3)))
        R = [v for v in g.labels if v not in X]
        alpha_r = brute_alpha(g.sub_labels(frozenset(R))) if R else 0
        for t in range(g.n + 1):
            for s in brute_sol(inst(g, t, X)):
                sx = s & X
                if sx and R and conflicts(g, g.ids(R), g.ids(sx)) >= len(sx):
                    assert alpha_r >= t
                    checked += 1
    assert checked > 0


# -- compression ------------------------------------------------------------------------

def test_compress_rejects_bad_input():
    with pytest.raises(ValueError):
        compress_is_bd(EnumInstance(path_graph(3), "vc", k=1), 1)
    with pytest.raises(ValueError):
        compress_is_bd(inst(path_graph(3), 1))
    k4 = Graph(range(1, 5), [p for p in combinations(range(1, 5), 2)])
    with pytest.raises(ValueError):
        compress_is_bd(inst(k4, 1), 1)


def test_compress_degenerate():
    comp = compress_is_bd(inst(path_graph(5), 2, {1}), 1)
    assert comp.degenerate and comp.compressed.graph.labels == (1,)


def test_each_logged_step_preserves_solutions():
    for i in nondegenerate(40):
        comp = compress_is_bd(i)
        cur = i
        for e in comp.log:
            nxt = apply_ops(cur, e.ops)
            assert yes(cur) == yes(nxt), e.rule
            cur = nxt
        assert cur == comp.compressed
        assert not cur.rest and cur.c == 0


def test_audits_hold():
    for i in nondegenerate(40):
        comp = compress_is_bd(i)
        for a in comp.extra["audits"]:
            assert a.alpha_rest < a.t
            assert a.bd_after <= a.bd_before <= i.c
        for rep in comp.extra["levels"]:
            assert rep.components <= rep.chunk_count * rep.modulator
        moved = comp.compressed.modulator - i.modulator
        g = comp.compressed.graph
        assert bridgedepth(g, g.ids(moved)) <= i.c


def test_levels_count_down():
    for i in nondegenerate(20):
        comp = compress_is_bd(i)
        assert [e.info["level"] for e in comp.log.by_rule("bd-move-trees")] == list(range(i.c, 0, -1))


# -- choosing and lifting ---------------------------------------------------------------

def test_choose_is_unique_per_trace():
    k = BDKernel()
    for i in nondegenerate(25):
        comp = k.compress(i)
        groups = {}
        for s in brute_sol(comp.compressed):
            groups.setdefault(s & comp.core.core_in_H, []).append(s)
        for y, group in groups.items():
            chosen = [s for s in group if choose_bd(comp, s)]
            assert len(chosen) == (1 if k.is_good_trace(comp, y) else 0)
            if chosen:
                assert chosen[0] == min(group, key=lambda s: sorted(s - y))


def test_lift_bd_matches_trace_filter():
    for i in nondegenerate(10):
        traces = {s & i.modulator for s in brute_sol(i.with_(t=0))}
        for y in traces:
            want = [x for x in brute_sol(i) if x & i.modulator == y]
            assert by_key(lift_bd(i, y)) == by_key(want)


def test_bad_trace_rejected():
    g = Graph([1, 2, 3], [(1, 2)])
    i = inst(g, 2, {1, 2}, c=1)
    k = BDKernel()
    comp = k.compress(i)
    assert not k.is_good_trace(comp, frozenset({1, 2}))
    assert not k.is_good_trace(comp, frozenset({3}))


# -- end to end -------------------------------------------------------------------------

def test_pipeline_matches_brute_force():
    for seed in range(150):
        i = planted(seed)
        got = list(run_pd_kernel(BDKernel(), i))
        assert len(got) == len(set(got))
        for s in got:
            assert independent(i.graph, s)
        assert by_key(got) == by_key(brute_sol(i)), seed


def test_partition_report():
    for seed in range(60):
        rep = verify_partition(planted(seed, n=6 + seed % 5), BDKernel())
        assert rep.ok, (seed, rep.failures)
