"""Flashlight search: lexicographic enumeration of independent sets of size >= t,
with a step counter so that delay can be measured independently of wall time."""

from __future__ import annotations

import os
from typing import Callable, Iterable, Iterator, Sequence

from .graph import Graph
from .mis import alpha_ais_mask, alpha_forest, alpha_mask, bits


class StepCapExceeded(RuntimeError):
    pass


def _env_cap() -> int | None:
    raw = os.environ.get("ENUMKERN_STEP_CAP")
    return int(raw) if raw else None


class StepCounter:
    """Machine-independent work counter shared by everything feeding one stream."""

    def __init__(self, cap: int | None = None):
        self.steps = 0
        self.cap = _env_cap() if cap is None else cap

    def tick(self, k: int = 1) -> None:
        self.steps += k
        if self.cap is not None and self.steps > self.cap:
            raise StepCapExceeded(f"step cap {self.cap} exceeded")


class SolutionStream:
    """Pull-based stream of frozensets with per-output step bookkeeping.

    ``delays[i]`` is the number of steps between output i-1 and output i
    (for i = 0: since the stream was created, i.e. the precalculation).
    """

    def __init__(self, source: Iterable[frozenset[int]], counter: StepCounter | None = None):
        self.counter = counter or StepCounter()
        self._it = iter(source)
        self._last = self.counter.steps
        self._start = self.counter.steps
        self.outputs = 0
        self.delays: list[int] = []
        self.done = False
        self._seen: set[frozenset[int]] | None = None

    def check_duplicates(self) -> "SolutionStream":
        self._seen = set()
        return self

    @property
    def steps_since_last(self) -> int:
        return self.counter.steps - self._last

    @property
    def total_steps(self) -> int:
        return self.counter.steps - self._start

    def __iter__(self) -> "SolutionStream":
        return self

    def __next__(self) -> frozenset[int]:
        if self.done:
            raise StopIteration
        try:
            s = next(self._it)
        except StopIteration:
            self.done = True
            raise
        if self._seen is not None:
            if s in self._seen:
                raise AssertionError(f"duplicate output {sorted(s)}")
            self._seen.add(s)
        now = self.counter.steps
        self.delays.append(now - self._last)
        self._last = now
        self.outputs += 1
        return s

    def pull(self) -> frozenset[int] | None:
        """Next solution, or None once exhausted."""
        try:
            return next(self)
        except StopIteration:
            return None


def lex_key(s: Iterable[int], rank: dict[int, int] | None = None) -> tuple[int, ...]:
    """Sort key realising the lexicographic order on vertex sets.

    Comparing ascending rank tuples, with a proper prefix counting as smaller,
    agrees with both cases of the set definition: a subset whose extra
    elements all come later is smaller, and otherwise the set owning the
    minimum of the symmetric difference is smaller.
    """
    if rank is None:
        return tuple(sorted(s))
    return tuple(sorted(rank[v] for v in s))


def lex_compare(a: Iterable[int], b: Iterable[int], rank: dict[int, int] | None = None) -> int:
    ka, kb = lex_key(a, rank), lex_key(b, rank)
    return (ka > kb) - (ka < kb)


Oracle = Callable[[Graph, int, int], bool]


def exact_oracle(g: Graph, rest: int, need: int) -> bool:
    return need <= 0 or alpha_mask(g, rest) >= need


def forest_oracle(g: Graph, rest: int, need: int) -> bool:
    if need <= 0:
        return True
    sub, _ = g.induced_subgraph(bits(rest))
    return alpha_forest(sub) >= need


ORACLES = {"exact": exact_oracle, "forest": forest_oracle}


def enum_is_lex(g: Graph, t: int, order: Sequence[int] | None = None,
                avoid: Iterable[int] = (), require: Iterable[int] = (),
                oracle: str | Oracle = "exact", hyperedges: Iterable[Iterable[int]] = (),
                counter: StepCounter | None = None) -> SolutionStream:
    """All independent sets S with require <= S, S disjoint from avoid, |S| >= t,
    and (annotated case) no hyperedge inside S, in lexicographic order.

    ``order`` is σ as a sequence of ids (default: ascending id = label order).
    Vertex arguments are ids of ``g``; outputs are frozensets of labels.
    """
    counter = counter or StepCounter()
    require = frozenset(require)
    avoid = frozenset(avoid)
    if require & avoid:
        raise ValueError("require and avoid overlap")
    if not g.is_independent(require):
        raise ValueError("require is not independent")
    check = ORACLES[oracle] if isinstance(oracle, str) else oracle
    hyper = [g.mask(h) for h in hyperedges]
    masks = g.masks
    full = g.full_mask
    seq = list(order) if order is not None else list(range(g.n))
    if sorted(seq) != list(range(g.n)):
        raise ValueError("order is not a permutation of the vertices")
    labels = g.labels

    def closed(mm: int) -> int:
        out = mm
        for v in bits(mm):
            out |= masks[v]
        return out

    def ext(mm: int, pp: int, size: int) -> bool:
        counter.tick()
        rest = full & ~(closed(mm) | pp)
        need = t - size
        if not hyper:
            return check(g, rest, need)
        resid = [h & ~mm for h in hyper]
        if any(r == 0 for r in resid):
            return False
        resid = [r for r in resid if r & rest == r]
        return alpha_ais_mask(g, rest, resid) >= max(need, 0)

    def out(mm: int) -> frozenset[int]:
        return frozenset(labels[v] for v in bits(mm))

    def node(mm: int, pp: int, size: int, nbhd: int) -> Iterator[frozenset[int]]:
        counter.tick()
        cand = full & ~(nbhd | pp)
        if not cand:
            return
        v = next(x for x in seq if (cand >> x) & 1)
        bit = 1 << v
        if ext(mm | bit, pp, size + 1):
            if size + 1 >= t:
                yield out(mm | bit)
            yield from node(mm | bit, pp, size + 1, nbhd | masks[v] | bit)
        if ext(mm, pp | bit, size):
            yield from node(mm, pp | bit, size, nbhd)

    def run() -> Iterator[frozenset[int]]:
        mm, pp = g.mask(require), g.mask(avoid)
        if not ext(mm, pp, len(require)):
            return
        if len(require) >= t:
            yield out(mm)
        yield from node(mm, pp, len(require), closed(mm))

    return SolutionStream(run(), counter)


def enum_subsets_le(ground: Iterable[int], r: int, order: Sequence[int] | None = None,
                    counter: StepCounter | None = None) -> SolutionStream:
    """All subsets of ``ground`` of size at most r, in lexicographic order."""
    counter = counter or StepCounter()
    items = list(order) if order is not None else sorted(ground)
    if set(items) != set(ground):
        raise ValueError("order must list exactly the ground set")

    def rec(cur: list[int], start: int) -> Iterator[frozenset[int]]:
        counter.tick()
        yield frozenset(cur)
        if len(cur) == r:
            return
        for i in range(start, len(items)):
            yield from rec(cur + [items[i]], i + 1)

    return SolutionStream(rec([], 0) if r >= 0 else iter(()), counter)


def enum_maximal_is(g: Graph, t: int, counter: StepCounter | None = None) -> SolutionStream:
    """Maximal independent sets of size >= t (Bron-Kerbosch on the complement,
    with pivoting and an α-based size cut). Output order is not lexicographic."""
    counter = counter or StepCounter()
    masks = g.masks
    labels = g.labels

    def closed(v: int) -> int:
        return masks[v] | (1 << v)

    def bk(r: int, size: int, p: int, x: int) -> Iterator[frozenset[int]]:
        counter.tick()
        if not p and not x:
            if size >= t:
                yield frozenset(labels[v] for v in bits(r))
            return
        if size + alpha_mask(g, p) < t:
            return
        pivot = min(bits(p | x), key=lambda u: ((p & closed(u)).bit_count(), u))
        for v in bits(p & closed(pivot)):
            cv = closed(v)
            yield from bk(r | (1 << v), size + 1, p & ~cv, x & ~cv)
            p &= ~(1 << v)
            x |= 1 << v

    return SolutionStream(bk(0, 0, g.full_mask, 0), counter)
