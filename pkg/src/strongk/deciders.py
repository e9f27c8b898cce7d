"""Polynomial-time computations: arc connectivity, bounds, λ_k >= 2 deciders,
strong orientations, minimal strongness and Nordhaus-Gaddum reports."""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from functools import lru_cache

from .digraph import (
    Digraph,
    DigraphError,
    are_isomorphic,
    bridges,
    canonical_form,
    complement,
    from_arc_mask,
    is_semicomplete,
    is_strong,
    is_symmetric,
    min_degrees,
    reverse,
)
from .solver import Packing, decide_lambda_S, lambda_k_exact, verify_packing


@dataclass(frozen=True)
class BoundsReport:
    k: int
    lower: int
    upper: int
    lower_rule: str
    upper_rule: str


@dataclass(frozen=True)
class NGReport:
    k: int
    lambda_D: int
    lambda_Dc: int
    sum: int
    product: int
    sum_bound_holds: bool
    product_bound_holds: bool
    sum_zero_iff_both_nonstrong: bool
    product_zero_iff_one_nonstrong: bool


def max_flow(D: Digraph, source: int, sink: int) -> int:
    """Maximum number of arc-disjoint source-sink paths (unit capacities, BFS augmentation)."""
    if source == sink:
        raise ValueError("source and sink must differ")
    residual: dict[tuple[int, int], int] = {}
    adj: list[set[int]] = [set() for _ in D.vertices]
    for u, v in D.sorted_arcs():
        residual[(u, v)] = residual.get((u, v), 0) + 1
        residual.setdefault((v, u), 0)
        adj[u].add(v)
        adj[v].add(u)
    order = [sorted(a) for a in adj]
    flow = 0
    while True:
        parent = {source: source}
        queue = deque([source])
        while queue and sink not in parent:
            u = queue.popleft()
            for v in order[u]:
                if v not in parent and residual[(u, v)] > 0:
                    parent[v] = u
                    queue.append(v)
        if sink not in parent:
            return flow
        v = sink
        while v != source:
            u = parent[v]
            residual[(u, v)] -= 1
            residual[(v, u)] += 1
            v = u
        flow += 1


def arc_connectivity(D: Digraph) -> int:
    """λ(D): fewest arcs whose removal leaves D non-strong (0 if D is not strong)."""
    if D.n < 2:
        raise ValueError("arc connectivity needs at least two vertices")
    if not is_strong(D):
        return 0
    return min(min(max_flow(D, 0, u), max_flow(D, u, 0)) for u in range(1, D.n))


def bounds(D: Digraph, k: int) -> BoundsReport:
    if not 2 <= k <= D.n:
        raise ValueError(f"k must satisfy 2 <= k <= n = {D.n}, got {k}")
    lam = arc_connectivity(D)
    if lam == 0:
        return BoundsReport(k, 0, 0, "not strong", "not strong")
    lower, lower_rule = 1, "strong >= 1"
    if k <= lam and lam // k > lower:
        lower, lower_rule = lam // k, "floor(lambda/k)"
    dplus, dminus = min_degrees(D)
    options = [
        (lam, "arc connectivity"),
        (dplus, "min out-degree"),
        (dminus, "min in-degree"),
        (D.n - 1, "n-1"),
    ]
    upper, upper_rule = min(options, key=lambda t: t[0])
    return BoundsReport(k, lower, upper, lower_rule, upper_rule)


def _semicomplete_masks(n: int):
    pairs = list(itertools.combinations(range(n), 2))
    for choice in itertools.product((0, 1, 2), repeat=len(pairs)):
        arcs = set()
        for (u, v), c in zip(pairs, choice):
            if c in (0, 2):
                arcs.add((u, v))
            if c in (1, 2):
                arcs.add((v, u))
        yield Digraph(n, frozenset(arcs))


def find_spanning_exceptions(order: int, ell: int = 2) -> list[Digraph]:
    """ell-arc-strong semicomplete digraphs of the given order without ell
    arc-disjoint strong spanning subgraphs, one per isomorphism class."""
    seen: set[tuple[int, int]] = set()
    failing = []
    everything = tuple(range(order))
    for D in _semicomplete_masks(order):
        if min(min_degrees(D)) < ell:
            continue
        key = canonical_form(D)
        if key in seen:
            continue
        seen.add(key)
        if arc_connectivity(D) < ell:
            continue
        ok, _ = decide_lambda_S(D, everything, ell)
        if not ok:
            failing.append(key)
    return [from_arc_mask(order, key[1]) for key in sorted(failing)]


@lru_cache(maxsize=None)
def derive_S4() -> Digraph:
    """The 2-arc-strong semicomplete digraph of order 4 with no two arc-disjoint
    strong spanning subgraphs, found by exhaustive search."""
    found = find_spanning_exceptions(4, 2)
    if len(found) != 1:
        raise RuntimeError(f"expected exactly one exceptional class of order 4, found {len(found)}")
    return found[0]


def decide2_semicomplete(D: Digraph, k: int) -> bool:
    """λ_k(D) >= 2 for semicomplete D.

    True iff D is 2-arc-strong, except that S_4 fails at k = 4 only: for
    k = 2, 3 it still has two arc-disjoint strong subgraphs through every
    k-set (e.g. 0->1->2->0 and {0->2, 2->3, 3->0, 1<->3} for S = {0, 1}).
    """
    if not is_semicomplete(D):
        raise DigraphError("digraph is not semicomplete")
    if not 2 <= k <= D.n:
        raise ValueError(f"k must satisfy 2 <= k <= n = {D.n}, got {k}")
    if arc_connectivity(D) < 2:
        return False
    return not (k == 4 and D.n == 4 and are_isomorphic(D, derive_S4()))


def strong_orientation(D: Digraph) -> Digraph:
    """Keep one arc of every 2-cycle so the result is strong.

    DFS on the underlying graph: tree edges point away from the root, non-tree
    edges point back toward the ancestor.
    """
    if not is_symmetric(D):
        raise DigraphError("strong orientation is implemented for symmetric digraphs")
    if not is_strong(D):
        raise DigraphError("digraph is not strong")
    if bridges(D):
        raise DigraphError(f"digraph has bridges {bridges(D)}; no strong orientation exists")
    adj = [D.out_neighbors(v) for v in D.vertices]
    depth = [-1] * D.n
    arcs = set()
    depth[0] = 0
    stack = [(0, iter(adj[0]))]
    while stack:
        v, it = stack[-1]
        for w in it:
            if depth[w] == -1:
                depth[w] = depth[v] + 1
                arcs.add((v, w))
                stack.append((w, iter(adj[w])))
                break
            # the neighbour one level up is the tree parent
            if depth[w] < depth[v] - 1:
                arcs.add((v, w))
        else:
            stack.pop()
    H = Digraph(D.n, frozenset(arcs))
    if not is_strong(H) or len(arcs) * 2 != D.m:
        raise RuntimeError("orientation construction failed to produce a strong orientation")
    return H


def decide2_symmetric(D: Digraph, k: int) -> tuple[bool, Packing | None]:
    """λ_k(D) >= 2 for a strong symmetric D iff D has no bridge.

    On YES the certificate is ``(H, H^rev)`` for a strong orientation H, with
    S the first k vertices; both parts span D, so they serve every k-set.
    """
    if not is_symmetric(D):
        raise DigraphError("digraph is not symmetric")
    if not is_strong(D):
        raise DigraphError("digraph is not strong")
    if not 2 <= k <= D.n:
        raise ValueError(f"k must satisfy 2 <= k <= n = {D.n}, got {k}")
    if bridges(D):
        return False, None
    H = strong_orientation(D)
    cert = Packing(tuple(range(k)), (H.arcs, reverse(H).arcs))
    if not verify_packing(D, cert):
        raise RuntimeError("orientation certificate failed verification")
    return True, cert


def lambda2_symmetric(D: Digraph) -> int:
    if not is_symmetric(D):
        raise DigraphError("digraph is not symmetric")
    return arc_connectivity(D)


def is_minimally_strong(D: Digraph) -> bool:
    if not is_strong(D):
        return False
    return all(not is_strong(D.without_arcs([a])) for a in D.arcs)


def nordhaus_gaddum(D: Digraph, k: int) -> NGReport:
    n = D.n
    a = lambda_k_exact(D, k).value
    Dc = complement(D)
    b = lambda_k_exact(Dc, k).value
    lam, lam_c = arc_connectivity(D), arc_connectivity(Dc)
    total, product = a + b, a * b
    return NGReport(
        k=k,
        lambda_D=a,
        lambda_Dc=b,
        sum=total,
        product=product,
        sum_bound_holds=0 <= total <= n - 1,
        product_bound_holds=0 <= 4 * product <= (n - 1) ** 2,
        sum_zero_iff_both_nonstrong=(total == 0) == (lam == 0 and lam_c == 0),
        product_zero_iff_one_nonstrong=(product == 0) == (lam == 0 or lam_c == 0),
    )
