"""Exact treedepth and bridgedepth, trees-of-bridges and lowering trees.

Both depth measures are computed by their defining recursions, memoised on
the exact vertex mask inside a fixed host graph.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable

from .graph import Graph
from .mis import _component_of, bits

DEPTH_CAP = 20


class DepthCapError(RuntimeError):
    pass


def _check_cap(g: Graph, cap: int | None) -> None:
    if cap is not None and g.n > cap:
        raise DepthCapError(f"{g.n} vertices exceed the depth cap of {cap}")


def mask_components(g: Graph, mask: int) -> list[int]:
    out = []
    while mask:
        low = (mask & -mask).bit_length() - 1
        comp = _component_of(g.masks, mask, low)
        out.append(comp)
        mask &= ~comp
    return out


@dataclass(frozen=True)
class TreedepthDecomposition:
    parent: dict  # id -> parent id or None
    depth: int

    @property
    def roots(self) -> list[int]:
        return sorted(v for v, p in self.parent.items() if p is None)

    def ancestors(self, v: int) -> list[int]:
        out = []
        p = self.parent[v]
        while p is not None:
            out.append(p)
            p = self.parent[p]
        return out

    def validate(self, g: Graph, within: Iterable[int] | None = None) -> None:
        vs = set(range(g.n)) if within is None else set(within)
        if set(self.parent) != vs:
            raise AssertionError("decomposition does not cover the vertex set")
        for i, j in g.edges():
            if i in vs and j in vs and i not in self.ancestors(j) and j not in self.ancestors(i):
                raise AssertionError(f"edge {i}-{j} is not ancestor-descendant")
        height = max((len(self.ancestors(v)) + 1 for v in vs), default=0)
        if height != self.depth:
            raise AssertionError("depth field disagrees with the forest height")


def _td(g: Graph, mask: int) -> int:
    memo = g._cache.setdefault("td", {})
    hit = memo.get(mask)
    if hit is not None:
        return hit
    if mask == 0:
        res = 0
    else:
        comps = mask_components(g, mask)
        if len(comps) > 1:
            res = max(_td(g, c) for c in comps)
        else:
            res = 1 + min(_td(g, mask & ~(1 << v)) for v in bits(mask))
    memo[mask] = res
    return res


def treedepth_mask(g: Graph, mask: int) -> int:
    return _td(g, mask)


def treedepth(g: Graph, within: Iterable[int] | None = None,
              cap: int | None = DEPTH_CAP) -> tuple[int, TreedepthDecomposition]:
    """Exact treedepth with an optimal decomposition; roots are smallest-id optimal."""
    _check_cap(g, cap)
    mask = g.full_mask if within is None else g.mask(within)
    parent: dict[int, int | None] = {}

    def build(mask: int, par: int | None) -> None:
        for comp in mask_components(g, mask):
            want = _td(g, comp)
            root = next(v for v in bits(comp) if 1 + _td(g, comp & ~(1 << v)) == want)
            parent[root] = par
            build(comp & ~(1 << root), root)

    build(mask, None)
    depth = _td(g, mask)
    return depth, TreedepthDecomposition(parent, depth)


def bridge_classes_mask(g: Graph, mask: int) -> list[int]:
    """Bridge classes (preimages of cb-vertices) of g[mask], as masks."""
    vs = bits(mask)
    disc: dict[int, int] = {}
    low: dict[int, int] = {}
    bridges = []
    timer = 0
    for root in vs:
        if root in disc:
            continue
        disc[root] = low[root] = timer
        timer += 1
        stack = [(root, -1, iter(bits(g.masks[root] & mask)))]
        while stack:
            v, par, it = stack[-1]
            pushed = False
            for w in it:
                if w == par:
                    continue
                if w not in disc:
                    disc[w] = low[w] = timer
                    timer += 1
                    stack.append((w, v, iter(bits(g.masks[w] & mask))))
                    pushed = True
                    break
                low[v] = min(low[v], disc[w])
            if pushed:
                continue
            stack.pop()
            if stack:
                p = stack[-1][0]
                low[p] = min(low[p], low[v])
                if low[v] > disc[p]:
                    bridges.append((p, v))
    parent = {v: v for v in vs}

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in bridges:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    groups: dict[int, int] = {}
    for v in vs:
        r = find(v)
        groups[r] = groups.get(r, 0) | (1 << v)
    return [groups[r] for r in sorted(groups)]


def _bd(g: Graph, mask: int) -> int:
    memo = g._cache.setdefault("bd", {})
    hit = memo.get(mask)
    if hit is not None:
        return hit
    if mask == 0:
        res = 0
    else:
        comps = mask_components(g, mask)
        if len(comps) > 1:
            res = max(_bd(g, c) for c in comps)
        else:
            res = 1 + min(_bd(g, mask & ~p) for p in bridge_classes_mask(g, mask))
    memo[mask] = res
    return res


def bridgedepth_mask(g: Graph, mask: int) -> int:
    return _bd(g, mask)


def bridgedepth(g: Graph, within: Iterable[int] | None = None, cap: int | None = DEPTH_CAP) -> int:
    _check_cap(g, cap)
    return _bd(g, g.full_mask if within is None else g.mask(within))


@dataclass(frozen=True)
class TreeOfBridges:
    vertices: frozenset[int]
    edges: frozenset[tuple[int, int]]

    def adjacency(self) -> dict[int, list[int]]:
        adj = {v: [] for v in self.vertices}
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        for v in adj:
            adj[v].sort()
        return adj

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e)

    def validate(self, g: Graph) -> None:
        br = g.bridges()
        for a, b in self.edges:
            if (min(a, b), max(a, b)) not in br:
                raise AssertionError(f"tree edge {a}-{b} is not a bridge")
        if len(self.edges) != len(self.vertices) - 1:
            raise AssertionError("not a tree")
        if self.vertices and len(g.connected_components(self.vertices)) != 1:
            raise AssertionError("tree is not connected")
        sub = [(a, b) for a, b in g.edges() if a in self.vertices and b in self.vertices]
        if set(sub) != set(self.edges):
            raise AssertionError("tree is not induced")


def induced_tree(g: Graph, vertices: Iterable[int]) -> TreeOfBridges:
    vs = frozenset(vertices)
    return TreeOfBridges(vs, frozenset((a, b) for a, b in g.edges() if a in vs and b in vs))


@dataclass(frozen=True)
class LoweringTree:
    tree: TreeOfBridges
    drop: int


def lowering_tree(g: Graph, component: Iterable[int]) -> LoweringTree:
    """Bridge class whose removal lowers bd the most; smallest label on ties."""
    comp = g.mask(component)
    if comp == 0 or len(mask_components(g, comp)) != 1:
        raise ValueError("lowering_tree: need a nonempty connected vertex set")
    base = _bd(g, comp)
    best = min(bridge_classes_mask(g, comp), key=lambda p: (_bd(g, comp & ~p), p & -p))
    return LoweringTree(induced_tree(g, bits(best)), base - _bd(g, comp & ~best))


def _bfs_far(adj: dict[int, list[int]], src: int) -> tuple[int, dict[int, int]]:
    prev = {src: -1}
    order = [src]
    q = deque([src])
    while q:
        v = q.popleft()
        for w in adj[v]:
            if w not in prev:
                prev[w] = v
                order.append(w)
                q.append(w)
    dist = {src: 0}
    for v in order[1:]:
        dist[v] = dist[prev[v]] + 1
    far = min(order, key=lambda v: (-dist[v], v))
    return far, prev


def longest_path(t: TreeOfBridges) -> TreeOfBridges:
    """A diameter path of the tree (double BFS)."""
    if not t.vertices:
        raise ValueError("longest_path: empty tree")
    adj = t.adjacency()
    a, _ = _bfs_far(adj, min(t.vertices))
    b, prev = _bfs_far(adj, a)
    path = [b]
    while prev[path[-1]] != -1:
        path.append(prev[path[-1]])
    edges = frozenset((min(x, y), max(x, y)) for x, y in zip(path, path[1:]))
    return TreeOfBridges(frozenset(path), edges)
