"""Simple digraphs on vertices 0..n-1 and the transformations built on them.

A :class:`Digraph` is immutable: every operation returns a new value.  Arcs
are ordered pairs ``(u, v)`` with ``u != v``; a 2-cycle is the pair of arcs
``(u, v), (v, u)``.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

Arc = tuple[int, int]

ISOMORPHISM_LIMIT = 8

FAMILIES = (
    "complete_bidirected",
    "dicycle",
    "bidirected_cycle",
    "bidirected_path",
    "bidirected_tree_random",
)


class DigraphError(ValueError):
    pass


@dataclass(frozen=True)
class Digraph:
    n: int
    arcs: frozenset[Arc] = field(default_factory=frozenset)

    def __post_init__(self):
        if self.n < 0:
            raise DigraphError(f"negative vertex count {self.n}")
        if not isinstance(self.arcs, frozenset):
            object.__setattr__(self, "arcs", frozenset(self.arcs))
        for u, v in self.arcs:
            if u == v:
                raise DigraphError(f"loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise DigraphError(f"arc ({u}, {v}) has an endpoint outside 0..{self.n - 1}")

    def __repr__(self):
        return f"Digraph(n={self.n}, arcs={self.sorted_arcs()})"

    @property
    def m(self) -> int:
        return len(self.arcs)

    @property
    def vertices(self) -> range:
        return range(self.n)

    def sorted_arcs(self) -> list[Arc]:
        return sorted(self.arcs)

    def has_arc(self, u: int, v: int) -> bool:
        return (u, v) in self.arcs

    @cached_property
    def _out(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in sorted(self.arcs):
            out[u].append(v)
        return tuple(tuple(a) for a in out)

    @cached_property
    def _in(self) -> tuple[tuple[int, ...], ...]:
        inn: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in sorted(self.arcs):
            inn[v].append(u)
        return tuple(tuple(sorted(a)) for a in inn)

    def out_neighbors(self, v: int) -> tuple[int, ...]:
        return self._out[v]

    def in_neighbors(self, v: int) -> tuple[int, ...]:
        return self._in[v]

    def out_degree(self, v: int) -> int:
        return len(self._out[v])

    def in_degree(self, v: int) -> int:
        return len(self._in[v])

    def without_arcs(self, arcs: Iterable[Arc]) -> Digraph:
        return Digraph(self.n, self.arcs - frozenset(arcs))

    def with_arcs(self, arcs: Iterable[Arc]) -> Digraph:
        return Digraph(self.n, self.arcs | frozenset(arcs))


@dataclass(frozen=True)
class UndirectedGraph:
    n: int
    edges: frozenset[frozenset[int]] = field(default_factory=frozenset)

    def __post_init__(self):
        edges = frozenset(frozenset(e) for e in self.edges)
        for e in edges:
            if len(e) != 2:
                raise DigraphError(f"loop or malformed edge {sorted(e)}")
            if not all(0 <= v < self.n for v in e):
                raise DigraphError(f"edge {sorted(e)} has an endpoint outside 0..{self.n - 1}")
        object.__setattr__(self, "edges", edges)

    @classmethod
    def from_edge_list(cls, n: int, edges: Iterable[Sequence[int]]) -> UndirectedGraph:
        return cls(n, frozenset(frozenset(e) for e in edges))

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(tuple(sorted(e)) for e in self.edges)

    def neighbors(self, v: int) -> list[int]:
        return sorted(w for e in self.edges if v in e for w in e if w != v)


def as_vertex_set(members: Iterable[int], n: int) -> tuple[int, ...]:
    """Validate a terminal set and return it as a sorted tuple."""
    members = list(members)
    s = tuple(sorted(set(members)))
    if len(s) != len(members):
        raise DigraphError(f"terminal set {members} has repeated vertices")
    if len(s) < 2:
        raise DigraphError("a terminal set needs at least two vertices")
    if len(s) > n or s[0] < 0 or s[-1] >= n:
        raise DigraphError(f"terminal set {list(s)} is not a subset of 0..{n - 1}")
    return s


def from_arc_list(n: int, arcs: Iterable[Sequence[int]]) -> Digraph:
    return Digraph(n, frozenset((int(u), int(v)) for u, v in arcs))


def complete_digraph(n: int) -> Digraph:
    return Digraph(n, frozenset((u, v) for u in range(n) for v in range(n) if u != v))


def empty_digraph(n: int) -> Digraph:
    return Digraph(n)


def dicycle(n: int) -> Digraph:
    if n < 2:
        raise DigraphError("a dicycle needs at least 2 vertices")
    return Digraph(n, frozenset((i, (i + 1) % n) for i in range(n)))


def _random_tree_edges(n: int, rng: random.Random) -> list[tuple[int, int]]:
    # random recursive tree: vertex i attaches to a uniformly chosen earlier vertex
    return [(rng.randrange(i), i) for i in range(1, n)]


def standard_family(name: str, n: int, seed: int | None = None) -> Digraph:
    """Build one of the named families on ``n`` vertices."""
    minimum = {
        "complete_bidirected": 1,
        "dicycle": 3,
        "bidirected_cycle": 2,
        "bidirected_path": 1,
        "bidirected_tree_random": 1,
    }
    if name not in minimum:
        raise DigraphError(f"unknown family {name!r}; choose from {', '.join(FAMILIES)}")
    if n < minimum[name]:
        raise DigraphError(f"family {name} needs n >= {minimum[name]}, got {n}")
    if name == "complete_bidirected":
        return complete_digraph(n)
    if name == "dicycle":
        return dicycle(n)
    if name == "bidirected_cycle":
        return biorient(UndirectedGraph.from_edge_list(n, [(i, (i + 1) % n) for i in range(n)]))
    if name == "bidirected_path":
        return biorient(UndirectedGraph.from_edge_list(n, [(i, i + 1) for i in range(n - 1)]))
    rng = random.Random(seed)
    return biorient(UndirectedGraph.from_edge_list(n, _random_tree_edges(n, rng)))


def strong_components(D: Digraph) -> list[frozenset[int]]:
    """Strong components by Tarjan's algorithm (iterative), in order of completion."""
    index: dict[int, int] = {}
    low: dict[int, int] = {}
    on_stack: set[int] = set()
    stack: list[int] = []
    components = []
    counter = itertools.count()

    for root in D.vertices:
        if root in index:
            continue
        index[root] = low[root] = next(counter)
        stack.append(root)
        on_stack.add(root)
        work = [(root, iter(D.out_neighbors(root)))]
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = next(counter)
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(D.out_neighbors(w))))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = set()
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.add(w)
                    if w == v:
                        break
                components.append(frozenset(comp))
    return components


def is_strong(D: Digraph) -> bool:
    if D.n == 0:
        return False
    return len(strong_components(D)) == 1


def reverse(D: Digraph) -> Digraph:
    return Digraph(D.n, frozenset((v, u) for u, v in D.arcs))


def complement(D: Digraph) -> Digraph:
    return Digraph(D.n, complete_digraph(D.n).arcs - D.arcs)


def biorient(G: UndirectedGraph) -> Digraph:
    arcs = set()
    for u, v in G.sorted_edges():
        arcs.add((u, v))
        arcs.add((v, u))
    return Digraph(G.n, frozenset(arcs))


def underlying(D: Digraph) -> UndirectedGraph:
    return UndirectedGraph(D.n, frozenset(frozenset(a) for a in D.arcs))


def is_symmetric(D: Digraph) -> bool:
    return all((v, u) in D.arcs for u, v in D.arcs)


def is_semicomplete(D: Digraph) -> bool:
    return all(
        (u, v) in D.arcs or (v, u) in D.arcs for u, v in itertools.combinations(range(D.n), 2)
    )


def min_degrees(D: Digraph) -> tuple[int, int]:
    """Return ``(min out-degree, min in-degree)``; ``(0, 0)`` for the empty vertex set."""
    if D.n == 0:
        return 0, 0
    return (min(D.out_degree(v) for v in D.vertices), min(D.in_degree(v) for v in D.vertices))


def _undirected_bridges(n: int, adj: list[list[int]]) -> list[tuple[int, int]]:
    disc = [-1] * n
    low = [0] * n
    found = []
    t = 0
    for root in range(n):
        if disc[root] != -1:
            continue
        disc[root] = low[root] = t
        t += 1
        work = [(root, -1, iter(adj[root]))]
        while work:
            v, parent, it = work[-1]
            advanced = False
            for w in it:
                if disc[w] == -1:
                    disc[w] = low[w] = t
                    t += 1
                    work.append((w, v, iter(adj[w])))
                    advanced = True
                    break
                if w != parent:
                    low[v] = min(low[v], disc[w])
            if advanced:
                continue
            work.pop()
            if parent != -1:
                low[parent] = min(low[parent], low[v])
                if low[v] > disc[parent]:
                    found.append((min(v, parent), max(v, parent)))
    return sorted(found)


def bridges(D: Digraph) -> list[tuple[int, int]]:
    """Return the 2-cycles of a symmetric digraph whose removal disconnects it.

    Each bridge is reported once as ``(u, v)`` with ``u < v``.
    """
    if not is_symmetric(D):
        raise DigraphError("bridges are defined here for symmetric digraphs only")
    adj = [list(D.out_neighbors(v)) for v in D.vertices]
    return _undirected_bridges(D.n, adj)


def cartesian_product(G: Digraph, H: Digraph) -> Digraph:
    """G□H with vertex (i, j) encoded as ``i * H.n + j``."""
    m = H.n
    arcs = set()
    for u, v in G.arcs:
        for j in range(m):
            arcs.add((u * m + j, v * m + j))
    for u, v in H.arcs:
        for i in range(G.n):
            arcs.add((i * m + u, i * m + v))
    return Digraph(G.n * m, frozenset(arcs))


def product_vertex(i: int, j: int, h_order: int) -> int:
    return i * h_order + j


def subdivide(D: Digraph, arc: Arc) -> Digraph:
    """Replace ``arc = (u, v)`` by ``(u, w), (w, v)`` with the new vertex ``w = D.n``."""
    arc = tuple(arc)
    if arc not in D.arcs:
        raise DigraphError(f"arc {arc} is not in the digraph")
    u, v = arc
    w = D.n
    return Digraph(D.n + 1, (D.arcs - {arc}) | {(u, w), (w, v)})


@lru_cache(maxsize=None)
def _permutation_tables(n: int) -> tuple[tuple[int, ...], ...]:
    """For every permutation p of range(n), the image index of each K↔_n arc index."""
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    where = {a: i for i, a in enumerate(pairs)}
    return tuple(
        tuple(where[(p[u], p[v])] for u, v in pairs) for p in itertools.permutations(range(n))
    )


def arc_index(n: int, u: int, v: int) -> int:
    """Position of ``(u, v)`` among the lexicographically sorted arcs of K↔_n."""
    return u * (n - 1) + (v if v < u else v - 1)


def arc_mask(D: Digraph) -> int:
    mask = 0
    for u, v in D.arcs:
        mask |= 1 << arc_index(D.n, u, v)
    return mask


def from_arc_mask(n: int, mask: int) -> Digraph:
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    return Digraph(n, frozenset(a for i, a in enumerate(pairs) if mask >> i & 1))


@lru_cache(maxsize=200_000)
def _canonical_mask(n: int, mask: int) -> int:
    bits = [i for i in range(n * (n - 1)) if mask >> i & 1]
    best = None
    for table in _permutation_tables(n):
        image = 0
        for i in bits:
            image |= 1 << table[i]
        if best is None or image < best:
            best = image
    return best if best is not None else 0


def canonical_form(D: Digraph) -> tuple[int, int]:
    """Smallest arc mask over all relabelings; equal forms mean isomorphic digraphs."""
    if D.n > ISOMORPHISM_LIMIT:
        raise DigraphError(f"canonical forms are limited to n <= {ISOMORPHISM_LIMIT}")
    return D.n, _canonical_mask(D.n, arc_mask(D))


def _degree_signature(D: Digraph) -> list[tuple[int, int]]:
    return sorted((D.out_degree(v), D.in_degree(v)) for v in D.vertices)


def are_isomorphic(D1: Digraph, D2: Digraph) -> bool:
    if D1.n != D2.n or D1.m != D2.m:
        return False
    if max(D1.n, D2.n) > ISOMORPHISM_LIMIT:
        raise DigraphError(f"isomorphism testing is limited to n <= {ISOMORPHISM_LIMIT}")
    if _degree_signature(D1) != _degree_signature(D2):
        return False
    return canonical_form(D1) == canonical_form(D2)


def relabel(D: Digraph, perm: Sequence[int]) -> Digraph:
    """Map vertex v to ``perm[v]``."""
    return Digraph(D.n, frozenset((perm[u], perm[v]) for u, v in D.arcs))
