"""Bipartite matching, crown decompositions and the FVS improvement step."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable

from .graph import Graph
from .mis import is_forest

Matching = frozenset  # of (u, v) id pairs with u < v


def _pair(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


def matched_vertices(m: Iterable[tuple[int, int]]) -> frozenset[int]:
    return frozenset(x for e in m for x in e)


def is_matching(m: Iterable[tuple[int, int]]) -> bool:
    seen: set[int] = set()
    for u, v in m:
        if u in seen or v in seen:
            return False
        seen.update((u, v))
    return True


def hopcroft_karp(g: Graph, left: Iterable[int], right: Iterable[int]) -> frozenset[tuple[int, int]]:
    """Maximum matching of the bipartite subgraph of g between ``left`` and ``right``."""
    left = sorted(set(left))
    rset = set(right)
    if rset & set(left):
        raise ValueError("hopcroft_karp: sides overlap")
    nbrs = {u: sorted(w for w in g.adj[u] if w in rset) for u in left}
    mate_l: dict[int, int | None] = {u: None for u in left}
    mate_r: dict[int, int | None] = {w: None for w in rset}
    INF = float("inf")

    def bfs() -> dict[int, float]:
        dist: dict[int, float] = {}
        q = deque()
        for u in left:
            if mate_l[u] is None:
                dist[u] = 0
                q.append(u)
            else:
                dist[u] = INF
        found = False
        while q:
            u = q.popleft()
            for w in nbrs[u]:
                nu = mate_r[w]
                if nu is None:
                    found = True
                elif dist[nu] == INF:
                    dist[nu] = dist[u] + 1
                    q.append(nu)
        return dist if found else {}

    def dfs(u: int, dist: dict[int, float]) -> bool:
        for w in nbrs[u]:
            nu = mate_r[w]
            if nu is None or (dist[nu] == dist[u] + 1 and dfs(nu, dist)):
                mate_l[u] = w
                mate_r[w] = u
                return True
        dist[u] = INF
        return False

    while True:
        dist = bfs()
        if not dist:
            break
        for u in left:
            if mate_l[u] is None:
                dfs(u, dist)
    return frozenset(_pair(u, w) for u, w in mate_l.items() if w is not None)


def konig_cover(g: Graph, left: Iterable[int], right: Iterable[int],
                m: frozenset[tuple[int, int]]) -> frozenset[int]:
    """Minimum vertex cover of the bipartite subgraph, from a maximum matching."""
    left, rset = set(left), set(right)
    mate = {}
    for a, b in m:
        mate[a], mate[b] = b, a
    reach: set[int] = set()
    q = deque(u for u in sorted(left) if u not in mate)
    reach.update(q)
    while q:
        u = q.popleft()
        for w in g.adj[u]:
            if w in rset and w not in reach and mate.get(u) != w:
                reach.add(w)
                nu = mate.get(w)
                if nu is not None and nu not in reach:
                    reach.add(nu)
                    q.append(nu)
    return frozenset((left - reach) | (rset & reach))


@dataclass(frozen=True)
class CrownDecomposition:
    crown: frozenset[int]
    head: frozenset[int]
    body: frozenset[int]
    saturating: frozenset[tuple[int, int]]

    @property
    def width(self) -> int:
        return len(self.head)

    def validate(self, g: Graph) -> None:
        C, H, B = self.crown, self.head, self.body
        if C & H or C & B or H & B or (C | H | B) != frozenset(range(g.n)):
            raise AssertionError("crown parts do not partition V")
        if not g.is_independent(C):
            raise AssertionError("crown is not independent")
        if g.neighbors(C) != H:
            raise AssertionError("N(C) differs from the head")
        m = self.saturating
        if not is_matching(m) or len(m) != len(H):
            raise AssertionError("matching does not saturate the head")
        for u, v in m:
            if not g.has_edge(u, v) or not ((u in H and v in C) or (v in H and u in C)):
                raise AssertionError("matching edge is not between head and crown")


@dataclass(frozen=True)
class HeavyCrown:
    base: CrownDecomposition
    t: int  # the bound the decomposition was computed for

    def validate(self, g: Graph) -> None:
        self.base.validate(g)
        if self.base.width > self.t or len(self.base.body) + 2 * len(self.base.head) > 3 * self.t:
            raise AssertionError("heavy crown size bound violated")


def maximal_matching(g: Graph) -> list[tuple[int, int]]:
    """Greedy maximal matching, scanning vertices and neighbours in id order."""
    used: set[int] = set()
    out = []
    for v in range(g.n):
        if v in used:
            continue
        for w in sorted(g.adj[v]):
            if w not in used:
                used.update((v, w))
                out.append(_pair(v, w))
                break
    return out


def heavy_crown_or_matching(g: Graph, t: int):
    """Either a matching of size t+1 or a heavy crown of width <= t.

    Classical two-matching construction; afterwards body vertices whose whole
    neighbourhood lies in the head are moved into the crown.
    """
    if any(g.degree(v) == 0 for v in range(g.n)):
        raise ValueError("heavy_crown_or_matching: graph has isolated vertices")
    if g.n < 3 * t + 1:
        raise ValueError("heavy_crown_or_matching: need at least 3t+1 vertices")
    m1 = maximal_matching(g)
    if len(m1) > t:
        return frozenset(m1[: t + 1])
    vm = matched_vertices(m1)
    rest = frozenset(range(g.n)) - vm
    m2 = hopcroft_karp(g, vm, rest)
    if len(m2) > t:
        return frozenset(sorted(m2)[: t + 1])
    cover = konig_cover(g, vm, rest, m2)
    head = cover & vm
    crown = set(rest - cover)
    body = set(range(g.n)) - crown - head
    for v in sorted(body):
        if g.adj[v] <= head:
            crown.add(v)
    body -= crown
    sat = hopcroft_karp(g, head, crown)
    hc = HeavyCrown(CrownDecomposition(frozenset(crown), head, frozenset(body), sat), t)
    hc.validate(g)
    return hc


def _nt_once(g: Graph) -> tuple[frozenset[int], frozenset[int]]:
    """LP-zero and LP-one vertices of a half-integral optimum (double-cover König)."""
    n = g.n
    cover_edges = []
    for i, j in g.edges():
        cover_edges += [(i, n + j), (j, n + i)]
    dc = Graph(range(2 * n), cover_edges)
    left, right = range(n), range(n, 2 * n)
    vc = konig_cover(dc, left, right, hopcroft_karp(dc, left, right))
    zero = frozenset(v for v in range(n) if v not in vc and n + v not in vc)
    one = frozenset(v for v in range(n) if v in vc and n + v in vc)
    return zero, one


def nt_crown(g: Graph) -> CrownDecomposition:
    """Nemhauser-Trotter crown, re-extracted from the body until nothing changes."""
    crown: set[int] = set()
    head: set[int] = set()
    body = frozenset(range(g.n))
    while body:
        sub, back = g.induced_subgraph(body)
        inv = {new: old for old, new in back.items()}
        zero, one = _nt_once(sub)
        if not zero:
            break
        crown |= {inv[v] for v in zero}
        head |= {inv[v] for v in one}
        body = body - {inv[v] for v in zero | one}
    crown_f, head_f = frozenset(crown), frozenset(head)
    sat = hopcroft_karp(g, head_f, crown_f)
    cd = CrownDecomposition(crown_f, head_f, body, sat)
    cd.validate(g)
    return cd


def forest_max_matching(g: Graph, within: Iterable[int]) -> frozenset[tuple[int, int]]:
    """Maximum matching of the forest g[within] by repeatedly matching a leaf."""
    alive = set(within)
    deg = {v: len(g.adj[v] & alive) for v in alive}
    out = []
    leaves = sorted(v for v in alive if deg[v] <= 1)
    while alive:
        if not leaves:
            leaves = sorted(v for v in alive if deg[v] <= 1)
            if not leaves:
                raise ValueError("forest_max_matching: not a forest")
        v = leaves.pop(0)
        if v not in alive:
            continue
        nb = [w for w in g.adj[v] if w in alive]
        gone = [v]
        if nb:
            w = nb[0]
            out.append(_pair(v, w))
            gone.append(w)
        for x in gone:
            alive.discard(x)
        for x in gone:
            for y in g.adj[x]:
                if y in alive:
                    deg[y] -= 1
                    if deg[y] <= 1:
                        leaves.append(y)
    return frozenset(out)


def improve_fvs(g: Graph, X: Iterable[int]):
    """Shrink g to the NT body and enlarge X so the rest has a perfect matching.

    Returns ``(g_body, X_new, crown, back)`` where ``X_new`` is in ids of
    ``g_body`` and ``back`` maps ids of ``g`` (body vertices) to ids of ``g_body``.
    """
    X = frozenset(X)
    rest_g, _ = g.induced_subgraph(frozenset(range(g.n)) - X)
    if not is_forest(rest_g):
        raise ValueError("improve_fvs: X is not a feedback vertex set")
    crown = nt_crown(g)
    gb, back = g.induced_subgraph(crown.body)
    xh = frozenset(back[v] for v in X & crown.body)
    forest = frozenset(range(gb.n)) - xh
    mm = forest_max_matching(gb, forest)
    unmatched = forest - matched_vertices(mm)
    return gb, xh | unmatched, crown, back
