"""Explicit packings: complete digraphs, Cartesian products, and the digraphs
obtained from K↔_n by deleting a union of vertex-disjoint cycles.

Every constructor checks its output with :func:`verify_packing` before
returning it.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .digraph import (
    Arc,
    Digraph,
    DigraphError,
    as_vertex_set,
    cartesian_product,
    complete_digraph,
    is_strong,
)
from .solver import Packing, lambda_S_exact, verify_packing

EVEN_SEARCH_LIMIT = 8


class ConstructionError(ValueError):
    pass


def _cycle_arcs(seq: Sequence[int]) -> frozenset[Arc]:
    return frozenset((seq[i], seq[(i + 1) % len(seq)]) for i in range(len(seq)))


def _rev(arcs: Iterable[Arc]) -> frozenset[Arc]:
    return frozenset((v, u) for u, v in arcs)


def _checked(D: Digraph, S: Sequence[int], parts: Iterable[Iterable[Arc]]) -> Packing:
    packing = Packing(tuple(sorted(S)), tuple(frozenset(p) for p in parts))
    if not verify_packing(D, packing):
        raise RuntimeError(f"construction produced an invalid packing for S={list(S)}")
    return packing


# Hamiltonian decompositions of K↔_n


def _walecki(n: int) -> list[list[int]]:
    """(n-1)/2 edge-disjoint Hamiltonian cycles of K_n, n odd."""
    m = (n - 1) // 2
    hub = n - 1
    cycles = []
    for i in range(m):
        seq = [i]
        for step in range(1, m):
            seq.append((i + step) % (2 * m))
            seq.append((i - step) % (2 * m))
        seq.append((i + m) % (2 * m))
        cycles.append([hub] + seq)
    return cycles


def _hamiltonian_cycles(n: int) -> list[int]:
    """All directed Hamiltonian cycles of K↔_n through vertex 0, as arc masks."""
    index = {a: i for i, a in enumerate((u, v) for u in range(n) for v in range(n) if u != v)}
    masks = []
    for rest in itertools.permutations(range(1, n)):
        seq = (0,) + rest
        mask = 0
        for a in _cycle_arcs(seq):
            mask |= 1 << index[a]
        masks.append(mask)
    return masks


def search_hamiltonian_decomposition(n: int) -> list[frozenset[Arc]] | None:
    """Exhaustive search for a partition of A(K↔_n) into Hamiltonian cycles.

    Returns ``None`` when the search space is exhausted without success.
    """
    if n < 3:
        raise ValueError("n must be at least 3")
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    cycles = _hamiltonian_cycles(n)
    by_arc: dict[int, list[int]] = {}
    for c in cycles:
        m = c
        while m:
            low = m & -m
            by_arc.setdefault(low.bit_length() - 1, []).append(c)
            m ^= low
    full = (1 << len(pairs)) - 1
    chosen: list[int] = []

    def cover(free: int) -> bool:
        if not free:
            return True
        low = free & -free
        for c in by_arc[low.bit_length() - 1]:
            if c & free == c:
                chosen.append(c)
                if cover(free & ~c):
                    return True
                chosen.pop()
        return False

    if not cover(full):
        return None
    return [frozenset(pairs[i] for i in range(len(pairs)) if c >> i & 1) for c in chosen]


def hamiltonian_decomposition(n: int, search_limit: int = EVEN_SEARCH_LIMIT) -> list[frozenset[Arc]]:
    """n-1 arc-disjoint directed Hamiltonian cycles covering K↔_n."""
    if n < 3:
        raise ConstructionError("n must be at least 3")
    if n in (4, 6):
        raise ConstructionError(f"K↔_{n} has no Hamiltonian decomposition")
    if n % 2:
        cycles = []
        for seq in _walecki(n):
            arcs = _cycle_arcs(seq)
            cycles.extend([arcs, _rev(arcs)])
    else:
        if n > search_limit:
            raise ConstructionError(f"even n={n} exceeds the search limit {search_limit}")
        found = search_hamiltonian_decomposition(n)
        if found is None:
            raise RuntimeError(f"search failed to decompose K↔_{n}")
        cycles = found
    everything = set()
    for c in cycles:
        if len(c) != n or c & everything or not is_strong(Digraph(n, c)):
            raise RuntimeError("invalid Hamiltonian decomposition")
        everything |= c
    if len(everything) != n * (n - 1):
        raise RuntimeError("decomposition does not cover every arc")
    return cycles


def _decomposition_on(vertices: Sequence[int]) -> list[frozenset[Arc]]:
    k = len(vertices)
    if k == 2:
        a, b = vertices
        return [frozenset({(a, b), (b, a)})]
    return [
        frozenset((vertices[u], vertices[v]) for u, v in c) for c in hamiltonian_decomposition(k)
    ]


def complete_packing(n: int, S: Iterable[int]) -> Packing:
    """A maximum packing for S in K↔_n: n-1 parts, or n-2 when |S| = n in {4, 6}."""
    D = complete_digraph(n)
    try:
        S = as_vertex_set(S, n)
    except DigraphError as exc:
        raise ConstructionError(str(exc)) from None
    k = len(S)
    rest = [v for v in range(n) if v not in S]

    def stars(vertices: Iterable[int]) -> list[frozenset[Arc]]:
        return [frozenset({(x, u) for u in S} | {(u, x) for u in S}) for x in vertices]

    if k == n and k in (4, 6):
        if k == 4:
            cycles = [S]
        else:
            u = S
            cycles = [u, (u[0], u[2], u[4], u[1], u[5], u[3])]
        parts = []
        for seq in cycles:
            arcs = _cycle_arcs(seq)
            parts.extend([arcs, _rev(arcs)])
        return _checked(D, S, parts)

    if k == 6:
        u = (None,) + S  # 1-based, matching u_1..u_6
        v1 = rest[0]
        d1 = _cycle_arcs([u[1], u[2], u[3], u[4], u[5], u[6]])
        d3 = _cycle_arcs([u[1], u[3], u[6], u[4], u[2], u[5]])
        d5 = frozenset({
            (u[1], v1), (v1, u[2]), (u[2], u[6]), (u[6], v1), (v1, u[5]),
            (u[5], u[3]), (u[3], v1), (v1, u[4]), (u[4], u[1]),
        })
        parts = [d1, _rev(d1), d3, _rev(d3), d5, _rev(d5)] + stars(rest[1:])
        return _checked(D, S, parts)

    if k == 4:
        u = (None,) + S
        v1 = rest[0]
        d1 = _cycle_arcs([u[1], u[2], u[3], u[4]])
        # closed walk u1 u3 v1 u2 u4 v1 u1 uses both chords and v1
        d3 = frozenset({
            (u[1], u[3]), (u[3], v1), (v1, u[2]), (u[2], u[4]), (u[4], v1), (v1, u[1]),
        })
        parts = [d1, _rev(d1), d3, _rev(d3)] + stars(rest[1:])
        return _checked(D, S, parts)

    # k not in {4, 6}: decompose K↔ on S, then one star through each other vertex
    return _checked(D, S, _decomposition_on(S) + stars(rest))


# Cartesian products


def _embed_G(arcs: Iterable[Arc], j: int, m: int) -> set[Arc]:
    return {(u * m + j, v * m + j) for u, v in arcs}


def _embed_H(arcs: Iterable[Arc], i: int, m: int) -> set[Arc]:
    return {(i * m + u, i * m + v) for u, v in arcs}


def _first_out_neighbor(arcs: Iterable[Arc], x: int) -> int:
    return min(a for a in arcs if a[0] == x)[1]


def _factor_packing(F: Digraph, pair: tuple[int, int]) -> list[frozenset[Arc]]:
    parts = lambda_S_exact(F, pair).certificate.parts
    if not parts:
        raise ConstructionError(f"factor has no strong subgraph containing {pair}")
    return list(parts)


def product_packing(G: Digraph, H: Digraph, S: Iterable[int]) -> Packing:
    """At least λ_2(G) + λ_2(H) arc-disjoint strong subgraphs of G□H containing S."""
    if G.n < 2 or H.n < 2:
        raise ConstructionError("both factors need at least two vertices")
    if not (is_strong(G) and is_strong(H)):
        raise ConstructionError("both factors must be strong")
    m = H.n
    P = cartesian_product(G, H)
    try:
        S = as_vertex_set(S, P.n)
    except DigraphError as exc:
        raise ConstructionError(str(exc)) from None
    if len(S) != 2:
        raise ConstructionError("product packings are built for |S| = 2")
    (a1, b1), (a2, b2) = divmod(S[0], m), divmod(S[1], m)

    if a1 == a2 or b1 == b2:
        return _checked(P, S, _product_same_fiber(G, H, a1, b1, a2, b2))
    return _checked(P, S, _product_distinct_fibers(G, H, a1, b1, a2, b2))


def _product_same_fiber(G, H, a1, b1, a2, b2) -> list[set[Arc]]:
    m = H.n
    if a1 == a2:
        a = a1
        inner = _factor_packing(H, (b1, b2))
        parts = [_embed_H(R, a, m) for R in inner]
        other = min(v for v in G.vertices if v != a)
        outer = _factor_packing(G, tuple(sorted((a, other))))
        link = inner[0]
        for Pi in outer:
            t = _first_out_neighbor(Pi, a)
            parts.append(_embed_G(Pi, b1, m) | _embed_H(link, t, m) | _embed_G(Pi, b2, m))
        return parts
    # b1 == b2: the same construction with the factor roles exchanged
    b = b1
    inner = _factor_packing(G, (a1, a2))
    parts = [_embed_G(R, b, m) for R in inner]
    other = min(v for v in H.vertices if v != b)
    outer = _factor_packing(H, tuple(sorted((b, other))))
    link = inner[0]
    for Qj in outer:
        t = _first_out_neighbor(Qj, b)
        parts.append(_embed_H(Qj, a1, m) | _embed_G(link, t, m) | _embed_H(Qj, a2, m))
    return parts


def _product_distinct_fibers(G, H, a1, b1, a2, b2) -> list[set[Arc]]:
    m = H.n
    g_parts = _factor_packing(G, tuple(sorted((a1, a2))))
    h_parts = _factor_packing(H, tuple(sorted((b1, b2))))
    t = [_first_out_neighbor(Pi, a1) for Pi in g_parts]
    t_prime = [_first_out_neighbor(Rj, b1) for Rj in h_parts]
    clash_g = [i for i, ti in enumerate(t) if ti == a2]
    clash_h = [j for j, tj in enumerate(t_prime) if tj == b2]
    # the connector inside each H- or G-fiber is taken from the clashing part, if any
    i_star = clash_g[0] if clash_g else 0
    j_star = clash_h[0] if clash_h else 0
    link_g, link_h = g_parts[i_star], h_parts[j_star]

    def d_part(i):
        Pi = g_parts[i]
        return _embed_G(Pi, b1, m) | _embed_H(link_h, t[i], m) | _embed_G(Pi, b2, m)

    def d_prime_part(j):
        Rj = h_parts[j]
        return _embed_H(Rj, a1, m) | _embed_G(link_g, t_prime[j], m) | _embed_H(Rj, a2, m)

    if not clash_g and not clash_h:
        return [d_part(i) for i in range(len(g_parts))] + [
            d_prime_part(j) for j in range(len(h_parts))
        ]
    # replace the two clashing parts by shorter ones that avoid each other
    bar1 = _embed_G(link_g, b1, m) | _embed_H(link_h, a2, m)
    bar2 = _embed_H(link_h, a1, m) | _embed_G(link_g, b2, m)
    parts = [d_part(i) for i in range(len(g_parts)) if i != i_star]
    parts += [d_prime_part(j) for j in range(len(h_parts)) if j != j_star]
    return parts + [bar1, bar2]


# K↔_n minus a union of vertex-disjoint cycles


@dataclass(frozen=True)
class CycleCover:
    cycles: tuple[tuple[int, ...], ...]

    def arcs(self) -> frozenset[Arc]:
        return frozenset(a for c in self.cycles for a in _cycle_arcs(c))

    def covered(self) -> set[int]:
        return {v for c in self.cycles for v in c}


def validate_cover(n: int, cycles: Iterable[Sequence[int]]) -> CycleCover:
    cover = CycleCover(tuple(tuple(c) for c in cycles))
    seen: set[int] = set()
    for c in cover.cycles:
        if len(c) < 2:
            raise ConstructionError(f"cycle {list(c)} is shorter than 2")
        if len(set(c)) != len(c) or seen & set(c):
            raise ConstructionError(f"cycle {list(c)} repeats or overlaps vertices")
        if any(not 0 <= v < n for v in c):
            raise ConstructionError(f"cycle {list(c)} leaves 0..{n - 1}")
        seen |= set(c)
    if len(seen) < n - 1:
        raise ConstructionError(f"cover reaches {len(seen)} vertices, needs at least {n - 1}")
    return cover


def minimal_graph(n: int, cover: CycleCover | Iterable[Sequence[int]]) -> Digraph:
    cycles = cover.cycles if isinstance(cover, CycleCover) else cover
    cover = validate_cover(n, cycles)
    return Digraph(n, complete_digraph(n).arcs - cover.arcs())


def deleted_cycles(D: Digraph) -> list[tuple[int, ...]] | None:
    """Decompose A(K↔_n) minus A(D) into vertex-disjoint cycles, or return None."""
    missing = complete_digraph(D.n).arcs - D.arcs
    succ: dict[int, int] = {}
    pred: dict[int, int] = {}
    for u, v in missing:
        if u in succ or v in pred:
            return None
        succ[u], pred[v] = v, u
    if set(succ) != set(pred):
        return None
    cycles = []
    done: set[int] = set()
    for start in sorted(succ):
        if start in done:
            continue
        seq = [start]
        done.add(start)
        v = succ[start]
        while v != start:
            seq.append(v)
            done.add(v)
            v = succ[v]
        cycles.append(tuple(seq))
    return cycles


def recognize_minimal_2_nminus2(D: Digraph) -> bool:
    cycles = deleted_cycles(D)
    if not cycles:
        return False
    return sum(len(c) for c in cycles) >= D.n - 1


def minimal_packing(D: Digraph, S: Iterable[int]) -> Packing:
    """n-2 arc-disjoint strong subgraphs containing the pair S."""
    cycles = deleted_cycles(D)
    if not cycles or sum(len(c) for c in cycles) < D.n - 1:
        raise ConstructionError("digraph is not K↔_n minus a near-spanning union of disjoint cycles")
    try:
        S = as_vertex_set(S, D.n)
    except DigraphError as exc:
        raise ConstructionError(str(exc)) from None
    if len(S) != 2:
        raise ConstructionError("minimal packings are built for |S| = 2")
    succ: dict[int, int] = {}
    pred: dict[int, int] = {}
    cycle_of: dict[int, tuple[int, ...]] = {}
    for c in cycles:
        for i, v in enumerate(c):
            succ[v] = c[(i + 1) % len(c)]
            pred[v] = c[i - 1]
            cycle_of[v] = c
    x, y = S
    gadgets, special = _minimal_gadgets(x, y, succ, pred, cycle_of)
    stars = [
        {(u, x), (x, u), (u, y), (y, u)} for u in D.vertices if u not in special and u not in (x, y)
    ]
    return _checked(D, S, [set(g) for g in gadgets] + stars)


def _minimal_gadgets(x, y, succ, pred, cycle_of):
    """Parts that use the M-neighbours of x and y; every other vertex gets a star.

    Returns ``(parts, special_vertices)``.
    """
    cx, cy = cycle_of.get(x), cycle_of.get(y)

    if cx is None or cy is None:
        # one terminal is the uncovered vertex
        if cx is None:
            x, y, cx, cy = y, x, cy, cx
        if len(cx) == 2:
            return [{(x, y), (y, x)}], {succ[x]}
        u1, u2 = pred[x], succ[x]
        return [
            {(x, y), (y, x)},
            {(x, u1), (u1, u2), (u2, x), (y, u2), (u2, y)},
        ], {u1, u2}

    if cx is not cy:
        if len(cx) == 2 and len(cy) >= 3:
            x, y, cx, cy = y, x, cy, cx
        if len(cx) >= 3 and len(cy) >= 3:
            u1, u2, u3, u4 = pred[x], succ[x], pred[y], succ[y]
            return [
                {(x, y), (y, x)},
                {(x, u1), (u1, u2), (u2, x), (y, u2), (u2, y)},
                {(y, u3), (u3, u4), (u4, y), (x, u3), (u3, x)},
                {(x, u4), (u4, x), (y, u1), (u1, y), (u1, u4), (u4, u1)},
            ], {u1, u2, u3, u4}
        if len(cx) >= 3:
            # y sits on a 2-cycle with a
            a = succ[y]
            u1, u2 = pred[x], succ[x]
            return [
                {(x, y), (y, x)},
                {(x, u1), (u1, u2), (u2, x), (y, u2), (u2, y)},
                {(x, a), (a, x), (y, u1), (u1, y), (u1, a), (a, u1)},
            ], {u1, u2, a}
        a, b = succ[x], succ[y]
        return [
            {(x, y), (y, x)},
            {(x, b), (b, x), (y, a), (a, y), (a, b), (b, a)},
        ], {a, b}

    # x and y on the same deleted cycle
    t = len(cx)
    if t == 2:
        return [], set()
    if succ[y] == x:
        x, y = y, x
    if succ[x] == y:
        u3, ut = succ[y], pred[x]
        if t == 3:
            return [{(y, x), (x, u3), (u3, y)}], {u3}
        return [
            {(y, x), (x, u3), (u3, y)},
            {(u3, x), (x, ut), (ut, u3), (ut, y), (y, ut)},
        ], {u3, ut}
    if succ[succ[y]] == x:
        x, y = y, x
    if succ[succ[x]] == y:
        u2, ut, u4 = succ[x], pred[x], succ[y]
        if u4 == ut:
            return [
                {(x, y), (y, x)},
                {(y, u2), (u2, x), (x, ut), (ut, y)},
            ], {u2, ut}
        return [
            {(x, y), (y, x)},
            {(y, u2), (u2, x), (x, ut), (ut, y)},
            {(x, u4), (u4, x), (u4, y), (y, ut), (ut, u4)},
        ], {u2, ut, u4}
    # at least two cycle vertices between x and y in both directions
    a1, a2, a3, a4 = pred[x], succ[x], pred[y], succ[y]
    if succ[a4] == a1:
        link = {(a1, a4), (a4, a2), (a2, a1)}
    else:
        link = {(a1, a4), (a4, a1)}
    return [
        {(x, y), (y, x)},
        {(x, a1), (a1, a2), (a2, x), (y, a2), (a2, y)},
        {(y, a3), (a3, a4), (a4, y), (x, a3), (a3, x)},
        {(x, a4), (a4, x), (y, a1), (a1, y)} | link,
    ], {a1, a2, a3, a4}
