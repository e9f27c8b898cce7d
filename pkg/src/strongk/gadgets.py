"""The reduction from weak 2-linkage to deciding λ_S(D) >= ℓ.

Pipeline: ``build_dprime`` -> ``split_vertices`` -> ``add_xy_cycles`` ->
``extend_terminals``.  New vertices always take the next free ids, in the
order they are created, so certificates on gadgets are reproducible.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Sequence

from .digraph import Arc, Digraph
from .solver import CapExceeded

STAGES = ("Dprime", "Ddouble", "Dtriple", "Dquad")
LINKAGE_THRESHOLD = 24
TERMINAL_NAMES = ("s1", "t1", "s2", "t2")


class GadgetError(ValueError):
    pass


@dataclass(frozen=True)
class GadgetInstance:
    digraph: Digraph
    S: tuple[int, ...]
    terminal_map: dict = field(hash=False)
    stage: str
    x: int
    y: int
    base_order: int
    ell: int = 2


def build_dprime(D: Digraph, s1: int, t1: int, s2: int, t2: int) -> GadgetInstance:
    """Add x = n, y = n+1 and the arcs t1x, xs1, t2y, ys2, xs2, s2x, yt1, t1y."""
    terms = (s1, t1, s2, t2)
    if len(set(terms)) != 4:
        raise GadgetError(f"terminals must be distinct, got {list(terms)}")
    if any(not 0 <= v < D.n for v in terms):
        raise GadgetError(f"terminals {list(terms)} out of range 0..{D.n - 1}")
    x, y = D.n, D.n + 1
    extra = {(t1, x), (x, s1), (t2, y), (y, s2), (x, s2), (s2, x), (y, t1), (t1, y)}
    return GadgetInstance(
        digraph=Digraph(D.n + 2, D.arcs | frozenset(extra)),
        S=(x, y),
        terminal_map=dict(zip(TERMINAL_NAMES, terms)),
        stage="Dprime",
        x=x,
        y=y,
        base_order=D.n,
    )


def split_vertices(inst: GadgetInstance) -> GadgetInstance:
    """Replace every original vertex u by u⁻ -> u⁺.

    u⁻ keeps the id u; u⁺ gets id ``n + u`` where n is the order of D′.
    """
    if inst.stage != "Dprime":
        raise GadgetError(f"split_vertices expects stage Dprime, got {inst.stage}")
    n0, n = inst.base_order, inst.digraph.n

    def plus(u):
        return u if u >= n0 else n + u

    arcs = {(u, plus(u)) for u in range(n0)}
    for u, v in inst.digraph.arcs:
        arcs.add((plus(u), v))
    tm = inst.terminal_map
    return replace(
        inst,
        digraph=Digraph(n + n0, frozenset(arcs)),
        terminal_map={
            "s1": tm["s1"],
            "t1": plus(tm["t1"]),
            "s2": tm["s2"],
            "t2": plus(tm["t2"]),
        },
        stage="Ddouble",
    )


def _subdivided_digon(n: int, a: int, b: int) -> tuple[int, set[Arc]]:
    """a -> n -> b and b -> n+1 -> a; returns the new order and the arcs."""
    return n + 2, {(a, n), (n, b), (b, n + 1), (n + 1, a)}


def add_xy_cycles(inst: GadgetInstance, ell: int) -> GadgetInstance:
    """Add ℓ-2 subdivided copies of the 2-cycle xyx."""
    if inst.stage != "Ddouble":
        raise GadgetError(f"add_xy_cycles expects stage Ddouble, got {inst.stage}")
    if ell < 2:
        raise GadgetError(f"ell must be at least 2, got {ell}")
    if ell == 2:
        return inst
    n, arcs = inst.digraph.n, set(inst.digraph.arcs)
    for _ in range(ell - 2):
        n, new = _subdivided_digon(n, inst.x, inst.y)
        arcs |= new
    return replace(inst, digraph=Digraph(n, frozenset(arcs)), stage="Dtriple", ell=ell)


def extend_terminals(inst: GadgetInstance, k: int, ell: int) -> GadgetInstance:
    """Add k-2 satellites x_i, each tied to x by ℓ subdivided 2-cycles."""
    if k < 2:
        raise GadgetError(f"k must be at least 2, got {k}")
    if ell < 2:
        raise GadgetError(f"ell must be at least 2, got {ell}")
    ready = inst.stage == "Dtriple" or (inst.stage == "Ddouble" and ell == 2)
    if not ready or inst.ell != ell:
        raise GadgetError(f"extend_terminals with ell={ell} cannot follow stage {inst.stage}")
    if k == 2:
        return inst
    n, arcs = inst.digraph.n, set(inst.digraph.arcs)
    satellites = []
    for _ in range(k - 2):
        sat = n
        n += 1
        satellites.append(sat)
        for _ in range(ell):
            n, new = _subdivided_digon(n, inst.x, sat)
            arcs |= new
    return replace(
        inst,
        digraph=Digraph(n, frozenset(arcs)),
        S=inst.S + tuple(satellites),
        stage="Dquad",
    )


def build_gadget(D: Digraph, terminals: Sequence[int], k: int = 2, ell: int = 2) -> GadgetInstance:
    """Run the whole pipeline for terminals (s1, t1, s2, t2)."""
    inst = split_vertices(build_dprime(D, *terminals))
    inst = add_xy_cycles(inst, ell)
    return extend_terminals(inst, k, ell)


def split_linkage_instance(inst: GadgetInstance) -> tuple[Digraph, list[tuple[int, int]]]:
    """The split copy of D inside D″ with the pairs (s1⁻, t1⁺), (s2⁻, t2⁺).

    λ_S(D″) >= 2 exactly when this instance has a weak 2-linkage.  Because
    each vertex u became the single arc u⁻u⁺, that is the same as two
    vertex-disjoint paths in D, not merely arc-disjoint ones.
    """
    if inst.stage == "Dprime":
        raise GadgetError("split the vertices first")
    order = inst.base_order * 2 + 2
    # drop x, y and everything added after the split
    inner = frozenset(
        (u, v) for u, v in inst.digraph.arcs
        if u < order and v < order and not {u, v} & {inst.x, inst.y}
    )
    tm = inst.terminal_map
    pairs = [(tm["s1"], tm["t1"]), (tm["s2"], tm["t2"])]
    return Digraph(order, inner), pairs


def weak_linkage_bruteforce(
    D: Digraph, pairs: Sequence[tuple[int, int]], threshold: int = LINKAGE_THRESHOLD
) -> bool:
    """Are there pairwise arc-disjoint paths P_i from s_i to t_i?"""
    if D.m > threshold:
        raise CapExceeded(f"linkage oracle limited to {threshold} arcs, digraph has {D.m}")
    for s, t in pairs:
        if not (0 <= s < D.n and 0 <= t < D.n):
            raise GadgetError(f"pair ({s}, {t}) out of range")
    out = {v: sorted(D.out_neighbors(v)) for v in D.vertices}
    used: set[Arc] = set()

    def route(i: int) -> bool:
        if i == len(pairs):
            return True
        s, t = pairs[i]
        if s == t:
            return route(i + 1)
        visited = {s}

        def extend(v: int) -> bool:
            for w in out[v]:
                if w in visited or (v, w) in used:
                    continue
                used.add((v, w))
                if w == t:
                    if route(i + 1):
                        return True
                else:
                    visited.add(w)
                    if extend(w):
                        return True
                    visited.discard(w)
                used.discard((v, w))
            return False

        return extend(s)

    return route(0)
