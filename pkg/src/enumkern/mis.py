"""Exact maximum independent set computations and the derived quantities
the reduction rules query (conflicts, chunks, freeness).

Vertex sets here are internal ids of a fixed host graph; subsets are handled
as bitmasks. Results are memoised on the (immutable) host graph, keyed by the
exact vertex mask, so repeated conflict queries are cheap.
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterable, Sequence

from .graph import Graph

ALPHA_CAP = 40


class OracleCapError(RuntimeError):
    pass


def bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def _component_of(masks: Sequence[int], mask: int, start: int) -> int:
    comp = frontier = 1 << start
    while frontier:
        nxt = 0
        for v in bits(frontier):
            nxt |= masks[v]
        nxt &= mask & ~comp
        comp |= nxt
        frontier = nxt
    return comp


def alpha_mask(g: Graph, mask: int) -> int:
    """α of the subgraph of ``g`` induced by ``mask`` (branch and reduce)."""
    memo: dict[int, int] = g._cache.setdefault("alpha", {})
    masks = g.masks

    def rec(mask: int) -> int:
        if mask == 0:
            return 0
        hit = memo.get(mask)
        if hit is not None:
            return hit
        taken = 0
        cur = mask
        # greedy: vertices of degree 0 or 1 are always safe to take
        changed = True
        while changed and cur:
            changed = False
            for v in bits(cur):
                if not (cur >> v) & 1:
                    continue
                if (masks[v] & cur).bit_count() <= 1:
                    taken += 1
                    cur &= ~(masks[v] | (1 << v))
                    changed = True
        if cur == 0:
            res = taken
        else:
            low = (cur & -cur).bit_length() - 1
            comp = _component_of(masks, cur, low)
            if comp != cur:
                res = taken + rec(comp) + rec(cur & ~comp)
            else:
                best_v, best_d = -1, -1
                for v in bits(cur):
                    d = (masks[v] & cur).bit_count()
                    if d > best_d:
                        best_v, best_d = v, d
                without = rec(cur & ~(1 << best_v))
                with_v = 1 + rec(cur & ~(masks[best_v] | (1 << best_v)))
                res = taken + max(without, with_v)
        memo[mask] = res
        return res

    return rec(mask)


def alpha_exact(g: Graph, cap: int | None = ALPHA_CAP) -> int:
    if cap is not None and g.n > cap:
        raise OracleCapError(f"alpha_exact: {g.n} vertices exceed the cap of {cap}")
    return alpha_mask(g, g.full_mask)


def alpha_of(g: Graph, ids: Iterable[int]) -> int:
    return alpha_mask(g, g.mask(ids))


def is_forest(g: Graph) -> bool:
    return g.m == g.n - len(g.connected_components())


def alpha_forest(g: Graph) -> int:
    """α of a forest by the include/exclude tree DP."""
    if not is_forest(g):
        raise ValueError("alpha_forest: input is not a forest")
    total = 0
    seen = [False] * g.n
    for root in range(g.n):
        if seen[root]:
            continue
        order, parent = [], {root: -1}
        stack = [root]
        seen[root] = True
        while stack:
            v = stack.pop()
            order.append(v)
            for w in g.adj[v]:
                if not seen[w]:
                    seen[w] = True
                    parent[w] = v
                    stack.append(w)
        inc = {v: 1 for v in order}
        exc = {v: 0 for v in order}
        for v in reversed(order):
            p = parent[v]
            if p >= 0:
                inc[p] += exc[v]
                exc[p] += max(inc[v], exc[v])
        total += max(inc[root], exc[root])
    return total


def is_extension(g: Graph, M: Iterable[int], P: Iterable[int], t: int) -> bool:
    """Is there an independent set of size >= t containing M and avoiding P?"""
    M, P = frozenset(M), frozenset(P)
    if M & P:
        raise ValueError("is_extension: M and P overlap")
    if not g.is_independent(M):
        return False
    need = t - len(M)
    if need <= 0:
        return True
    rest = g.full_mask & ~(g.mask(g.closed_neighbors(M)) | g.mask(P))
    return alpha_mask(g, rest) >= need


def conflicts(g: Graph, region: Iterable[int], probe: Iterable[int]) -> int:
    """conf_region(probe) = α(region) - α(region minus N(probe))."""
    region, probe = frozenset(region), frozenset(probe)
    if region & probe:
        raise ValueError("conflicts: probe and region overlap")
    rmask = g.mask(region)
    hit = 0
    for v in probe:
        hit |= g.masks[v]
    hit &= rmask
    if not hit:
        return 0
    return alpha_mask(g, rmask) - alpha_mask(g, rmask & ~hit)


def enumerate_chunks(g: Graph, X: Iterable[int], max_size: int,
                     forbidden: Iterable[Iterable[int]] = ()) -> list[frozenset[int]]:
    """All independent subsets of X of size <= max_size containing no forbidden set.

    Ordered by size, then lexicographically. Always includes the empty set.
    """
    xs = sorted(X)
    forb = [frozenset(f) for f in forbidden]
    out: list[frozenset[int]] = [frozenset()]

    def grow(cur: list[int], start: int) -> None:
        if len(cur) == max_size:
            return
        for i in range(start, len(xs)):
            v = xs[i]
            if any(v in g.adj[u] for u in cur):
                continue
            nxt = frozenset(cur + [v])
            if any(f <= nxt for f in forb):
                continue
            out.append(nxt)
            grow(cur + [v], i + 1)

    grow([], 0)
    out.sort(key=lambda s: (len(s), sorted(s)))
    return out


def chunk_degree(g: Graph, components: Iterable[Iterable[int]], chunk: Iterable[int]) -> int:
    """Number of components with at least one conflict caused by ``chunk``."""
    chunk = frozenset(chunk)
    return sum(1 for comp in components if conflicts(g, comp, chunk) > 0)


def is_free(g: Graph, chunks: Iterable[frozenset[int]], Z: Iterable[int]) -> bool:
    Z = frozenset(Z)
    return all(conflicts(g, Z, Y) == 0 for Y in chunks)


def is_almost_free(g: Graph, X: Iterable[int], chunks: Iterable[frozenset[int]],
                   Z: Iterable[int], y: int) -> bool:
    """Every chunk conflicting with Z must have at least y conflicts on R = V minus X."""
    Z = frozenset(Z)
    R = frozenset(range(g.n)) - frozenset(X)
    for Y in chunks:
        if conflicts(g, Z, Y) > 0 and conflicts(g, R, Y) < y:
            return False
    return True


def alpha_ais_mask(g: Graph, mask: int, hyper: Sequence[int]) -> int:
    """Largest independent subset of ``mask`` containing no hyperedge.

    ``hyper`` lists hyperedges as bitmasks. Returns -1 when no set qualifies,
    which only happens if some hyperedge mask is empty.
    """
    masks = g.masks

    def rec(mask: int, hyps: tuple[int, ...]) -> int:
        if any(h == 0 for h in hyps):
            return -1
        live = tuple(h for h in hyps if h & mask == h)
        if not live:
            return alpha_mask(g, mask)
        h = min(live, key=lambda x: (x.bit_count(), x))
        v = (h & -h).bit_length() - 1
        best = rec(mask & ~(1 << v), live)
        taken = rec(mask & ~(masks[v] | (1 << v)), tuple(x & ~(1 << v) for x in live))
        if taken >= 0:
            best = max(best, taken + 1)
        return best

    return rec(mask, tuple(hyper))


def brute_alpha(g: Graph) -> int:
    """Exhaustive maximum over all subsets; for testing only."""
    best = 0
    for r in range(g.n, 0, -1):
        for s in combinations(range(g.n), r):
            if g.is_independent(s):
                return r
    return best
