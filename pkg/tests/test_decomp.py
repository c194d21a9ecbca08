import random

import pytest

from enumkern.decomp import (DepthCapError, TreeOfBridges, bridgedepth, induced_tree, longest_path,
                             lowering_tree, treedepth)
from enumkern.graph import Graph, cycle_graph, path_graph, star_graph
from helpers import brute_bridgedepth, brute_treedepth, random_forest, random_graph


def test_treedepth_examples():
    assert treedepth(Graph([1]))[0] == 1
    d, dec = treedepth(path_graph(3))
    assert d == 2 and dec.roots == [1]
    assert treedepth(Graph(range(1, 6)))[0] == 1
    assert treedepth(Graph([]))[0] == 0


def test_treedepth_decomposition_valid_and_matches_brute():
    rng = random.Random(1)
    for _ in range(80):
        g = random_graph(rng, rng.randint(1, 9), 0.35)
        d, dec = treedepth(g)
        dec.validate(g)
        assert d == dec.depth == brute_treedepth(g)


def test_depth_cap():
    with pytest.raises(DepthCapError):
        treedepth(path_graph(21))
    with pytest.raises(DepthCapError):
        bridgedepth(path_graph(5), cap=4)


def test_bridgedepth_examples():
    assert bridgedepth(Graph([])) == 0
    assert bridgedepth(cycle_graph(4)) == 2
    rng = random.Random(2)
    for _ in range(30):
        assert bridgedepth(random_forest(rng, rng.randint(1, 15))) == 1


def test_bridgedepth_matches_brute():
    rng = random.Random(3)
    for _ in range(80):
        g = random_graph(rng, rng.randint(1, 9), rng.choice([0.2, 0.35, 0.5]))
        assert bridgedepth(g) == brute_bridgedepth(g)


def test_bridgedepth_invariant_under_contraction():
    rng = random.Random(4)
    for _ in range(100):
        g = random_graph(rng, rng.randint(1, 10), 0.25)
        cb, _ = g.contract_bridges()
        assert bridgedepth(cb) == bridgedepth(g)


def test_bridgedepth_minor_monotone():
    rng = random.Random(5)
    for _ in range(60):
        g = random_graph(rng, rng.randint(2, 10), 0.3)
        bd = bridgedepth(g)
        assert bridgedepth(g.delete_vertices([rng.randrange(g.n)])) <= bd
        if g.m:
            assert bridgedepth(g.delete_edges([rng.choice(g.edges())])) <= bd


def test_bridgedepth_modulator_bound():
    rng = random.Random(6)
    for _ in range(60):
        g = random_graph(rng, rng.randint(2, 10), 0.35)
        X = rng.sample(range(g.n), rng.randint(0, g.n))
        assert bridgedepth(g) <= len(X) + bridgedepth(g.delete_vertices(X))


def test_lowering_tree_examples():
    tree = path_graph(4)
    lt = lowering_tree(tree, range(4))
    assert lt.tree.vertices == frozenset(range(4)) and lt.drop == 1
    lt = lowering_tree(cycle_graph(4), range(4))
    assert len(lt.tree.vertices) == 1 and lt.drop == 1
    two = Graph(range(1, 7), [(1, 2), (2, 3), (1, 3), (4, 5), (5, 6), (4, 6), (3, 4)])
    lt = lowering_tree(two, range(6))
    assert lt.drop == 1
    rest = two.delete_vertices(lt.tree.vertices)
    assert bridgedepth(rest) == bridgedepth(two) - 1


def test_lowering_tree_random():
    rng = random.Random(7)
    for _ in range(60):
        g = random_graph(rng, rng.randint(1, 10), 0.35)
        for comp in g.connected_components():
            lt = lowering_tree(g, comp)
            lt.tree.validate(g)
            sub, mp = g.induced_subgraph(comp)
            after = sub.delete_vertices([mp[v] for v in lt.tree.vertices])
            assert bridgedepth(sub) - bridgedepth(after) == lt.drop == 1


def test_lowering_tree_rejects_disconnected():
    with pytest.raises(ValueError):
        lowering_tree(Graph([1, 2]), [0, 1])


def test_longest_path_examples():
    p = path_graph(5)
    t = induced_tree(p, range(5))
    assert longest_path(t) == t
    s = star_graph(4)
    lp = longest_path(induced_tree(s, range(5)))
    assert len(lp.vertices) == 3 and 0 in lp.vertices
    single = TreeOfBridges(frozenset({0}), frozenset())
    assert longest_path(single) == single


def test_longest_path_is_diameter():
    rng = random.Random(8)
    for _ in range(50):
        f = random_forest(rng, rng.randint(2, 12))
        comp = max(f.connected_components(), key=len)
        t = induced_tree(f, comp)
        lp = longest_path(t)
        lp.validate(f)
        adj = t.adjacency()

        def ecc(v):
            dist, queue = {v: 0}, [v]
            for u in queue:
                for w in adj[u]:
                    if w not in dist:
                        dist[w] = dist[u] + 1
                        queue.append(w)
            return max(dist.values())

        assert len(lp.vertices) - 1 == max(ecc(v) for v in comp)
