"""Immutable simple undirected graphs with label-preserving edits.

Vertices carry external integer labels. Internal ids are dense and 0-based,
and the id order always agrees with the label order, so "smallest id" and
"smallest label" mean the same thing everywhere in the package.
"""

from __future__ import annotations

from typing import Iterable, Iterator


Edge = tuple[int, int]


def _norm(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


class GraphError(ValueError):
    pass


class Graph:
    """A simple undirected graph.

    Edits never mutate; they return new graphs. Most methods speak internal
    ids; the ``*_labels`` helpers translate from external labels.
    """

    __slots__ = ("labels", "adj", "masks", "m", "_index", "_cache")

    def __init__(self, labels: Iterable[int], edges: Iterable[tuple[int, int]] = ()):
        labs = sorted(labels)
        if len(set(labs)) != len(labs):
            raise GraphError("duplicate vertex labels")
        self.labels: tuple[int, ...] = tuple(labs)
        self._index = {lab: i for i, lab in enumerate(labs)}
        nb: list[set[int]] = [set() for _ in labs]
        for a, b in edges:
            if a == b:
                raise GraphError(f"self-loop at label {a}")
            try:
                i, j = self._index[a], self._index[b]
            except KeyError as exc:
                raise GraphError(f"edge endpoint {exc.args[0]} is not a vertex") from None
            nb[i].add(j)
            nb[j].add(i)
        self.adj: tuple[frozenset[int], ...] = tuple(frozenset(s) for s in nb)
        self.masks: tuple[int, ...] = tuple(sum(1 << j for j in s) for s in nb)
        self.m = sum(len(s) for s in nb) // 2
        self._cache: dict = {}

    # -- basic queries ---------------------------------------------------
    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.labels == other.labels and self.adj == other.adj

    def __hash__(self) -> int:
        return hash((self.labels, self.adj))

    def edges(self) -> list[Edge]:
        """Edges as sorted id pairs, in ascending order."""
        return [(i, j) for i in range(self.n) for j in sorted(self.adj[i]) if i < j]

    def label_edges(self) -> list[Edge]:
        lab = self.labels
        return sorted(_norm(lab[i], lab[j]) for i, j in self.edges())

    def has_edge(self, i: int, j: int) -> bool:
        return j in self.adj[i]

    def degree(self, i: int) -> int:
        return len(self.adj[i])

    def neighbors(self, s: Iterable[int]) -> frozenset[int]:
        """Open neighbourhood N(S) = union of N(v), minus S itself."""
        s = frozenset(s)
        out: set[int] = set()
        for v in s:
            out |= self.adj[v]
        return frozenset(out - s)

    def closed_neighbors(self, s: Iterable[int]) -> frozenset[int]:
        s = frozenset(s)
        return self.neighbors(s) | s

    def is_independent(self, s: Iterable[int]) -> bool:
        s = list(s)
        ss = set(s)
        return all(not (self.adj[v] & ss) for v in s)

    # -- label translation -----------------------------------------------
    def id_of(self, label: int) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise GraphError(f"unknown vertex label {label}") from None

    def ids(self, labels: Iterable[int]) -> frozenset[int]:
        return frozenset(self.id_of(x) for x in labels)

    def labels_of(self, ids: Iterable[int]) -> frozenset[int]:
        return frozenset(self.labels[i] for i in ids)

    def has_label(self, label: int) -> bool:
        return label in self._index

    def mask(self, ids: Iterable[int]) -> int:
        out = 0
        for i in ids:
            out |= 1 << i
        return out

    def nbr_labels(self, label: int) -> frozenset[int]:
        return self.labels_of(self.adj[self.id_of(label)])

    # -- edits (all return new graphs) -----------------------------------
    def _check(self, ids: Iterable[int]) -> None:
        for i in ids:
            if not 0 <= i < self.n:
                raise GraphError(f"vertex id {i} out of range")

    def induced_subgraph(self, s: Iterable[int]) -> tuple["Graph", dict[int, int]]:
        s = sorted(set(s))
        self._check(s)
        keep = set(s)
        lab = self.labels
        g = Graph((lab[i] for i in s),
                  ((lab[i], lab[j]) for i, j in self.edges() if i in keep and j in keep))
        return g, {old: new for new, old in enumerate(s)}

    def delete_vertices(self, s: Iterable[int]) -> "Graph":
        gone = set(s)
        self._check(gone)
        return self.induced_subgraph(i for i in range(self.n) if i not in gone)[0]

    def delete_edges(self, e: Iterable[tuple[int, int]]) -> "Graph":
        gone = {_norm(a, b) for a, b in e}
        lab = self.labels
        return Graph(lab, ((lab[i], lab[j]) for i, j in self.edges() if (i, j) not in gone))

    def add_edges(self, e: Iterable[tuple[int, int]]) -> "Graph":
        lab = self.labels
        new = []
        for a, b in e:
            self._check((a, b))
            if a == b:
                raise GraphError("cannot add a self-loop")
            new.append((lab[a], lab[b]))
        return Graph(lab, [(lab[i], lab[j]) for i, j in self.edges()] + new)

    def identify(self, keep: int, merge: int) -> "Graph":
        """Merge vertex ``merge`` into ``keep``; ``keep`` keeps its label."""
        if keep == merge:
            raise GraphError("cannot identify a vertex with itself")
        self._check((keep, merge))
        lab = self.labels
        edges = []
        for i, j in self.edges():
            a = keep if i == merge else i
            b = keep if j == merge else j
            if a != b:
                edges.append((lab[a], lab[b]))
        return Graph((lab[i] for i in range(self.n) if i != merge), edges)

    # label-level conveniences used by the reduction rules
    def sub_labels(self, labels: Iterable[int]) -> "Graph":
        return self.induced_subgraph(self.ids(labels))[0]

    def without_labels(self, labels: Iterable[int]) -> "Graph":
        return self.delete_vertices(self.ids(labels))

    def with_label_edges(self, e: Iterable[tuple[int, int]]) -> "Graph":
        return self.add_edges((self.id_of(a), self.id_of(b)) for a, b in e)

    def without_label_edges(self, e: Iterable[tuple[int, int]]) -> "Graph":
        return self.delete_edges((self.id_of(a), self.id_of(b)) for a, b in e)

    # -- structure -------------------------------------------------------
    def connected_components(self, within: Iterable[int] | None = None) -> list[frozenset[int]]:
        """Components (as id sets), ordered by smallest member."""
        alive = set(range(self.n)) if within is None else set(within)
        comps = []
        for s in sorted(alive):
            if s not in alive:
                continue
            comp = {s}
            stack = [s]
            alive.discard(s)
            while stack:
                v = stack.pop()
                for w in self.adj[v]:
                    if w in alive:
                        alive.discard(w)
                        comp.add(w)
                        stack.append(w)
            comps.append(frozenset(comp))
        return comps

    def bridges(self) -> frozenset[Edge]:
        """Bridges via iterative low-link DFS."""
        n = self.n
        disc = [-1] * n
        low = [0] * n
        out: set[Edge] = set()
        timer = 0
        for root in range(n):
            if disc[root] != -1:
                continue
            disc[root] = low[root] = timer
            timer += 1
            stack: list[tuple[int, int, Iterator[int]]] = [(root, -1, iter(sorted(self.adj[root])))]
            while stack:
                v, parent, it = stack[-1]
                advanced = False
                for w in it:
                    if w == parent:
                        continue
                    if disc[w] == -1:
                        disc[w] = low[w] = timer
                        timer += 1
                        stack.append((w, v, iter(sorted(self.adj[w]))))
                        advanced = True
                        break
                    low[v] = min(low[v], disc[w])
                if advanced:
                    continue
                stack.pop()
                if stack:
                    p = stack[-1][0]
                    low[p] = min(low[p], low[v])
                    if low[v] > disc[p]:
                        out.add(_norm(p, v))
        return frozenset(out)

    def bridge_classes(self) -> list[frozenset[int]]:
        """Components of the spanning subgraph formed by the bridges.

        These are exactly the preimages of the vertices of cb(G).
        """
        parent = list(range(self.n))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a, b in self.bridges():
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
        groups: dict[int, set[int]] = {}
        for v in range(self.n):
            groups.setdefault(find(v), set()).add(v)
        return sorted((frozenset(s) for s in groups.values()), key=min)

    def contract_bridges(self) -> tuple["Graph", dict[int, frozenset[int]]]:
        """Return cb(G) and the preimage (as id sets of ``self``) of each cb-vertex.

        A cb-vertex is labelled with the smallest label of its preimage.
        """
        classes = self.bridge_classes()
        rep = {}
        for cls in classes:
            r = min(cls)
            for v in cls:
                rep[v] = r
        lab = self.labels
        edges = {_norm(lab[rep[i]], lab[rep[j]]) for i, j in self.edges() if rep[i] != rep[j]}
        cb = Graph((lab[min(c)] for c in classes), edges)
        return cb, {cb.id_of(lab[min(c)]): c for c in classes}

    def audit(self) -> None:
        """Raise if the simple-graph invariants are broken."""
        for i, nb in enumerate(self.adj):
            if i in nb:
                raise GraphError(f"self-loop at {i}")
            for j in nb:
                if i not in self.adj[j]:
                    raise GraphError(f"asymmetric adjacency {i}-{j}")
        if len(set(self.labels)) != self.n:
            raise GraphError("duplicate labels")


def path_graph(n: int, start: int = 1) -> Graph:
    return Graph(range(start, start + n), ((i, i + 1) for i in range(start, start + n - 1)))


def cycle_graph(n: int, start: int = 1) -> Graph:
    edges = [(i, i + 1) for i in range(start, start + n - 1)] + [(start, start + n - 1)]
    return Graph(range(start, start + n), edges)


def complete_graph(n: int, start: int = 1) -> Graph:
    vs = range(start, start + n)
    return Graph(vs, ((a, b) for a in vs for b in vs if a < b))


def star_graph(leaves: int, start: int = 1) -> Graph:
    """Star with centre ``start`` and leaves start+1..start+leaves."""
    return Graph(range(start, start + leaves + 1), ((start, start + i) for i in range(1, leaves + 1)))
