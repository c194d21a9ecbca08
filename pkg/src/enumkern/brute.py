"""Exhaustive solution sets, used as the ground-truth oracle."""

from __future__ import annotations

from .flashlight import lex_key
from .instance import EnumInstance

BRUTE_CAP = 20


def all_independent_sets(g) -> list[int]:
    """Every independent set of g, as id bitmasks, by plain include/exclude backtracking."""
    out: list[int] = []
    masks = g.masks

    def rec(v: int, chosen: int, blocked: int) -> None:
        if v == g.n:
            out.append(chosen)
            return
        rec(v + 1, chosen, blocked)
        if not (blocked >> v) & 1:
            rec(v + 1, chosen | (1 << v), blocked | masks[v])

    rec(0, 0, 0)
    return out


def brute_sol(inst: EnumInstance, cap: int = BRUTE_CAP) -> list[frozenset[int]]:
    """Sol(inst) in external labels, sorted lexicographically."""
    g = inst.graph
    if g.n > cap:
        raise ValueError(f"brute_sol: {g.n} vertices exceed the cap of {cap}")
    lab = g.labels
    every = frozenset(lab)
    hyper = [g.mask(g.ids(h)) for h in inst.hyperedges]
    sols = []
    for s in all_independent_sets(g):
        size = s.bit_count()
        if inst.problem == "vc":
            if g.n - size <= inst.k:
                sols.append(every - frozenset(lab[i] for i in range(g.n) if (s >> i) & 1))
            continue
        if size < inst.t or any(h & s == h for h in hyper):
            continue
        sols.append(frozenset(lab[i] for i in range(g.n) if (s >> i) & 1))
    sols.sort(key=lex_key)
    return sols
