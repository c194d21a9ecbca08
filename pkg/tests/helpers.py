"""Independent oracles and graph factories for the test-suite.

Nothing here imports the library's memoized solvers: the point is to check
them against plain, slow definitions.
"""

from __future__ import annotations

import random
from functools import lru_cache
from itertools import combinations

from enumkern.graph import Graph


def random_graph(rng: random.Random, n: int, p: float, start: int = 1) -> Graph:
    labels = range(start, start + n)
    return Graph(labels, [(a, b) for a, b in combinations(labels, 2) if rng.random() < p])


def random_forest(rng: random.Random, n: int, start: int = 1) -> Graph:
    labels = list(range(start, start + n))
    edges = [(labels[i], rng.choice(labels[:i])) for i in range(1, n) if rng.random() < 0.8]
    return Graph(labels, edges)


def subsets(xs):
    xs = list(xs)
    for r in range(len(xs) + 1):
        yield from combinations(xs, r)


def independent(g: Graph, labels) -> bool:
    return all(not g.has_edge(g.id_of(a), g.id_of(b)) for a, b in combinations(labels, 2))


def brute_alpha(g: Graph) -> int:
    return max(len(s) for s in subsets(g.labels) if independent(g, s))


# -- depth recursions, plain bitmask edition (no memo) -------------------------------

def _adj_masks(g: Graph) -> tuple[int, ...]:
    return tuple(g.masks)


def _components(adj, mask: int) -> list[int]:
    out = []
    while mask:
        seed = mask & -mask
        comp, frontier = seed, seed
        while frontier:
            b = frontier & -frontier
            frontier ^= b
            new = adj[b.bit_length() - 1] & mask & ~comp
            comp |= new
            frontier |= new
        out.append(comp)
        mask &= ~comp
    return out


def _bits(mask: int):
    while mask:
        b = mask & -mask
        yield b
        mask ^= b


def _td_le(adj, mask: int, k: int) -> bool:
    if not mask:
        return True
    if k == 0:
        return False
    for comp in _components(adj, mask):
        if not any(_td_le(adj, comp & ~b, k - 1) for b in _bits(comp)):
            return False
    return True


def brute_treedepth(g: Graph) -> int:
    adj, full = _adj_masks(g), g.full_mask
    k = 0
    while not _td_le(adj, full, k):
        k += 1
    return k


def _edge_is_bridge(adj, mask: int, u: int, v: int) -> bool:
    """Removal test straight from the definition."""
    cut = list(adj)
    cut[u] &= ~(1 << v)
    cut[v] &= ~(1 << u)
    return len(_components(cut, mask)) > len(_components(adj, mask))


def _bridge_classes(adj, mask: int) -> list[int]:
    """Vertex sets of the trees formed by bridges (singletons included)."""
    vs = [b.bit_length() - 1 for b in _bits(mask)]
    bridge_adj = {v: 0 for v in vs}
    for u in vs:
        for w in vs:
            if u < w and adj[u] >> w & 1 and _edge_is_bridge(adj, mask, u, w):
                bridge_adj[u] |= 1 << w
                bridge_adj[w] |= 1 << u
    full = [bridge_adj.get(i, 0) for i in range(len(adj))]
    return _components(full, mask)


def _bd_le(adj, mask: int, k: int) -> bool:
    if not mask:
        return True
    if k == 0:
        return False
    for comp in _components(adj, mask):
        if not any(_bd_le(adj, comp & ~p, k - 1) for p in _bridge_classes(adj, comp)):
            return False
    return True


def brute_bridgedepth(g: Graph) -> int:
    adj, full = _adj_masks(g), g.full_mask
    k = 0
    while not _bd_le(adj, full, k):
        k += 1
    return k


# -- all graphs up to isomorphism ---------------------------------------------------

@lru_cache(maxsize=None)
def graphs_up_to(nmax: int) -> tuple[Graph, ...]:
    """One representative per isomorphism class, 1 <= n <= nmax.

    Grown one vertex at a time; pynauty certificates remove duplicates."""
    import pynauty

    def cert(n, adj):
        d = {v: [w for w in range(n) if adj[v] >> w & 1] for v in range(n)}
        return pynauty.certificate(pynauty.Graph(n, adjacency_dict=d))

    level = [(0,)]
    out = [level[0]]
    for n in range(2, nmax + 1):
        seen = {}
        for adj in level:
            for nb in range(1 << (n - 1)):
                a = [adj[w] | ((nb >> w & 1) << (n - 1)) for w in range(n - 1)] + [nb]
                c = cert(n, a)
                if c not in seen:
                    seen[c] = tuple(a)
        level = list(seen.values())
        out.extend(level)

    def to_graph(adj):
        n = len(adj)
        return Graph(range(1, n + 1), [(u + 1, w + 1) for u in range(n) for w in range(u + 1, n) if adj[u] >> w & 1])

    return tuple(to_graph(a) for a in out)
