"""Seeded instance generators, delay profiling and verification sweeps."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field

from .brute import brute_sol
from .decomp import bridgedepth, treedepth
from .flashlight import SolutionStream
from .graph import Graph
from .instance import EnumInstance
from .mis import alpha_exact, is_forest

MODELS = ("plain", "fvs", "td", "bd")


@dataclass(frozen=True)
class GenSpec:
    model: str = "plain"
    n: int = 8
    mod_size: int = 0
    density: float = 0.3
    c: int = 1
    target: str = "tight"  # tight | random
    seed: int = 0
    problem: str = "is"  # is | vc


class GenerationError(RuntimeError):
    pass


def _rest_td(rng: random.Random, labels: list[int], c: int, density: float) -> list[tuple[int, int]]:
    """Random graph of treedepth <= c: edges only between ancestor/descendant
    pairs of a random rooted forest of height <= c."""
    depth: dict[int, int] = {}
    parent: dict[int, int | None] = {}
    for v in labels:
        options = [u for u in depth if depth[u] < c]
        if options and rng.random() < 0.8:
            p = rng.choice(options)
            parent[v], depth[v] = p, depth[p] + 1
        else:
            parent[v], depth[v] = None, 1
    edges = []
    for v in labels:
        p = parent[v]
        first = True
        while p is not None:
            if (first and rng.random() < 0.85) or rng.random() < density:
                edges.append((p, v))
            first = False
            p = parent[p]
    return edges


def _rest_forest(rng: random.Random, labels: list[int]) -> list[tuple[int, int]]:
    edges = []
    for i, v in enumerate(labels[1:], start=1):
        if rng.random() < 0.8:
            edges.append((rng.choice(labels[:i]), v))
    return edges


def _rest_bd(rng: random.Random, labels: list[int], density: float) -> list[tuple[int, int]]:
    edges = set(_rest_forest(rng, labels))
    extra = max(0, int(round(density * len(labels))))
    for _ in range(extra):
        a, b = rng.sample(labels, 2) if len(labels) > 1 else (None, None)
        if a is not None:
            edges.add((min(a, b), max(a, b)))
    return sorted(edges)


def generate(spec: GenSpec, retries: int = 200) -> EnumInstance:
    """A seeded random instance whose structural promise is checked."""
    if spec.model not in MODELS:
        raise ValueError(f"unknown model {spec.model!r}")
    rng = random.Random(f"{spec.model}/{spec.n}/{spec.mod_size}/{spec.density}/{spec.c}/{spec.seed}")
    n, r = spec.n, min(spec.mod_size, spec.n)
    labels = list(range(1, n + 1))
    for _ in range(retries):
        mod = sorted(rng.sample(labels, r)) if spec.model != "plain" else []
        rest = [v for v in labels if v not in mod]
        if spec.model == "plain":
            edges = [(a, b) for a in labels for b in labels if a < b and rng.random() < spec.density]
        else:
            if spec.model == "fvs":
                edges = _rest_forest(rng, rest)
            elif spec.model == "td":
                edges = _rest_td(rng, rest, spec.c, spec.density)
            else:
                edges = _rest_bd(rng, rest, spec.density) if spec.c >= 2 else _rest_forest(rng, rest)
            for x in mod:
                for v in labels:
                    if v != x and (v not in mod or v > x) and rng.random() < spec.density:
                        edges.append((min(x, v), max(x, v)))
        g = Graph(labels, sorted(set(edges)))
        rest_ids = g.ids(rest)
        if not _promise_ok(spec, g, rest_ids):
            continue
        return _with_target(spec, g, frozenset(mod), rng)
    raise GenerationError(f"could not meet the {spec.model} promise in {retries} tries")


def _promise_ok(spec: GenSpec, g: Graph, rest_ids) -> bool:
    if spec.model == "plain":
        return True
    sub, _ = g.induced_subgraph(rest_ids)
    if spec.model == "fvs":
        return is_forest(sub)
    if spec.model == "td":
        return treedepth(sub)[0] <= spec.c
    return bridgedepth(sub) <= spec.c


def _with_target(spec: GenSpec, g: Graph, mod: frozenset[int], rng: random.Random) -> EnumInstance:
    a = alpha_exact(g)
    c = spec.c if spec.model in ("td", "bd") else None
    if spec.problem == "vc":
        tau = g.n - a
        k = tau + rng.choice([0, 0, 1, 2]) if spec.target == "tight" else rng.randint(0, g.n)
        if spec.target == "tight" and rng.random() < 0.1:
            k = max(0, tau - 1)
        return EnumInstance(g, "vc", k=min(k, g.n), modulator=mod, c=c)
    if spec.target == "tight":
        t = max(0, a - rng.choice([0, 0, 1, 1, 2]))
        if rng.random() < 0.1:
            t = a + 1
    else:
        t = rng.randint(0, a + 1)
    return EnumInstance(g, "is", t=t, modulator=mod, c=c)


@dataclass
class DelayReport:
    delays: list[int] = field(default_factory=list)
    outputs: int = 0
    precalc_steps: int = 0
    post_steps: int = 0
    wall_ms: float = 0.0

    @property
    def max_delay(self) -> int:
        return max(self.delays[1:], default=0)

    @property
    def mean_delay(self) -> float:
        d = self.delays[1:]
        return sum(d) / len(d) if d else 0.0


def profile_delay(stream: SolutionStream) -> DelayReport:
    """Drain a stream; delays[0] is the precalculation, the rest inter-output gaps."""
    t0 = time.perf_counter()
    for _ in stream:
        pass
    wall = (time.perf_counter() - t0) * 1000
    rep = DelayReport(delays=list(stream.delays), outputs=stream.outputs, wall_ms=wall)
    rep.precalc_steps = stream.delays[0] if stream.delays else stream.total_steps
    rep.post_steps = stream.steps_since_last if stream.delays else 0
    return rep


def disjoint_edges(m: int) -> EnumInstance:
    g = Graph(range(1, 2 * m + 1), ((2 * i + 1, 2 * i + 2) for i in range(m)))
    return EnumInstance(g, "is", t=m)


__all__ = ["GenSpec", "generate", "profile_delay", "DelayReport", "brute_sol", "disjoint_edges"]
