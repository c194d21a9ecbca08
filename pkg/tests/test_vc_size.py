import random

import pytest

from enumkern.brute import brute_sol
from enumkern.framework import RuleLog, run_pd_kernel, verify_partition
from enumkern.graph import Graph, path_graph, star_graph
from enumkern.instance import EnumInstance
from enumkern.kernels import VCSizeKernel
from enumkern.kernels.vc_size import rule_isolated, rule_unmatched_crown
from enumkern.matching import CrownDecomposition, HeavyCrown, heavy_crown_or_matching
from helpers import random_graph

K = VCSizeKernel()


def vc(g, k):
    return EnumInstance(g, "vc", k=k)


def test_rule_isolated_examples():
    out = rule_isolated(vc(Graph([1, 2, 3], [(1, 2)]), 1))
    assert out.graph.labels == (1, 2) and out.k == 1
    p = vc(path_graph(3), 1)
    assert rule_isolated(p) is p
    empty = rule_isolated(vc(Graph([1, 2, 3]), 0))
    assert empty.graph.n == 0 and brute_sol(empty) == [frozenset()]


def test_rule_unmatched_crown_star():
    inst = vc(star_graph(4), 1)
    hc = heavy_crown_or_matching(inst.graph, 1)
    log = RuleLog()
    out = rule_unmatched_crown(inst, hc, log)
    assert out.graph.n == 2 and out.graph.m == 1 and 1 in out.graph.labels
    assert len(log) == 1


def test_rule_unmatched_crown_identity_when_saturated():
    inst = vc(Graph([1, 2, 3, 4], [(1, 2), (3, 4)]), 1)
    cd = CrownDecomposition(frozenset({1}), frozenset({0}), frozenset({2, 3}), frozenset({(0, 1)}))
    assert rule_unmatched_crown(inst, HeavyCrown(cd, 2)) is inst
    bad = CrownDecomposition(frozenset({1, 2}), frozenset({0}), frozenset({3}), frozenset({(0, 1)}))
    with pytest.raises(AssertionError):
        rule_unmatched_crown(inst, HeavyCrown(bad, 2))


def test_rule_unmatched_crown_preserves_sol_nonemptiness():
    rng = random.Random(1)
    done = 0
    while done < 30:
        g = random_graph(rng, rng.randint(4, 12), 0.2)
        g = g.delete_vertices([v for v in range(g.n) if g.degree(v) == 0])
        k = rng.randint(1, 4)
        if g.n < 3 * k + 1:
            continue
        hc = heavy_crown_or_matching(g, k)
        if not isinstance(hc, HeavyCrown):
            continue
        inst = vc(g, k)
        out = rule_unmatched_crown(inst, hc)
        assert bool(brute_sol(inst)) == bool(brute_sol(out))
        done += 1


def test_compress_examples():
    p3 = vc(path_graph(3), 1)
    assert K.compress(p3).compressed == p3
    four = vc(Graph(range(1, 9), [(1, 2), (3, 4), (5, 6), (7, 8)]), 2)
    comp = K.compress(four)
    assert comp.compressed.k == 0 and comp.compressed.graph.m == 1
    assert brute_sol(comp.compressed) == [] and brute_sol(four) == []
    star = K.compress(vc(star_graph(4), 1))
    assert star.compressed.graph.n == 2


def test_choose_and_lift_star():
    comp = K.compress(vc(star_graph(4), 1))
    assert comp.extra["removed"] == frozenset({3, 4, 5})
    assert K.canonical_check(comp, frozenset({1}))
    assert K.closure(comp, frozenset({2})) == frozenset({2, 3, 4, 5})
    assert not K.canonical_check(comp, frozenset({2}))
    assert list(K.lift_trace(comp, frozenset({1}))) == [frozenset({1})]


def test_lift_counts():
    # star with 4 leaves plus a far edge; k = 3 leaves slack for removed leaves
    g = Graph(range(1, 8), [(1, 2), (1, 3), (1, 4), (1, 5), (6, 7)])
    inst = vc(g, 3)
    out = sorted(run_pd_kernel(K, inst), key=sorted)
    assert out == sorted(brute_sol(inst), key=sorted)


def test_lift_when_y_is_full():
    comp = K.compress(vc(Graph([1, 2], [(1, 2)]), 1))
    assert list(K.lift_trace(comp, frozenset({1}))) == [frozenset({1})]


def test_rejects_is_instance():
    with pytest.raises(ValueError):
        K.compress(EnumInstance(path_graph(3), "is", t=1))


def test_size_bound_and_brute_force():
    rng = random.Random(2)
    for _ in range(300):
        g = random_graph(rng, rng.randint(1, 12), rng.choice([0.1, 0.2, 0.35]))
        k = rng.randint(0, 5)
        inst = vc(g, k)
        comp = K.compress(inst)
        if "vc-matching-no" not in {e.rule for e in comp.log}:
            assert comp.compressed.graph.n <= 3 * k
        assert comp.log.replay(inst) == comp.compressed
        got = list(run_pd_kernel(K, inst))
        assert len(got) == len(set(got))
        assert sorted(got, key=sorted) == sorted(brute_sol(inst), key=sorted)


def test_partition_report_random():
    rng = random.Random(3)
    for _ in range(50):
        inst = vc(random_graph(rng, rng.randint(1, 12), 0.2), rng.randint(0, 5))
        rep = verify_partition(inst, K)
        assert rep.ok, rep.failures
