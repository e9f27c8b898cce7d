"""Exhaustive and randomized checks of the structural results over small digraphs.

Every check runs the exact solver, so a FAIL is either a bug or a
counterexample; nothing is suppressed.
"""
from __future__ import annotations

import itertools
import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .constructors import deleted_cycles, product_packing, recognize_minimal_2_nminus2
from .deciders import (
    _semicomplete_masks,
    arc_connectivity,
    decide2_semicomplete,
    decide2_symmetric,
    find_spanning_exceptions,
)
from .digraph import (
    Digraph,
    UndirectedGraph,
    arc_mask,
    biorient,
    canonical_form,
    cartesian_product,
    complement,
    complete_digraph,
    from_arc_mask,
    is_semicomplete,
    is_strong,
    is_symmetric,
    min_degrees,
    standard_family,
    underlying,
)
from .solver import CapExceeded, lambda_k_at_least, lambda_k_value, verify_packing

EXHAUSTIVE_LIMIT = 4
SEMICOMPLETE_LIMIT = 5
SYMMETRIC_LIMIT = 6
DEFAULT_SAMPLE = 1000
DEFAULT_SEED = 42
TREE_PACKING_EDGE_LIMIT = 10

CHECKS = (
    "monotone_in_k",
    "spanning_subgraph",
    "degree_cap",
    "range_and_extremes",
    "arc_connectivity_cap",
    "floor_lower_bound",
    "strong_iff_positive",
    "complement_sum_product",
    "complete_digraph_values",
    "semicomplete_decider",
    "symmetric_decider",
    "biorientation_bound",
)


# enumeration


def enumerate_digraphs(
    n: int, mode: str = "all_labeled", sample: int = DEFAULT_SAMPLE, seed: int = DEFAULT_SEED
) -> Iterator[Digraph]:
    """Stream digraphs of order n in a fixed order.

    Modes: ``all_labeled`` (every arc subset, n <= 4), ``semicomplete``,
    ``symmetric`` (every biorientation) and ``random`` (each arc kept with
    probability 1/2, reproducible from the seed).
    """
    if n < 1:
        raise ValueError("n must be positive")
    if mode == "all_labeled":
        if n > EXHAUSTIVE_LIMIT:
            raise ValueError(f"all_labeled enumeration is limited to n <= {EXHAUSTIVE_LIMIT}")
        return (from_arc_mask(n, mask) for mask in range(1 << (n * (n - 1))))
    if mode == "semicomplete":
        if n > SEMICOMPLETE_LIMIT:
            raise ValueError(f"semicomplete enumeration is limited to n <= {SEMICOMPLETE_LIMIT}")
        return _semicomplete_masks(n)
    if mode == "symmetric":
        if n > SYMMETRIC_LIMIT:
            raise ValueError(f"symmetric enumeration is limited to n <= {SYMMETRIC_LIMIT}")
        pairs = list(itertools.combinations(range(n), 2))
        return (
            biorient(UndirectedGraph.from_edge_list(n, [p for i, p in enumerate(pairs) if mask >> i & 1]))
            for mask in range(1 << len(pairs))
        )
    if mode == "random":
        return _random_digraphs(n, sample, seed)
    raise ValueError(f"unknown enumeration mode {mode!r}")


def _random_digraphs(n: int, sample: int, seed: int) -> Iterator[Digraph]:
    rng = random.Random(seed)
    width = n * (n - 1)
    for _ in range(sample):
        yield from_arc_mask(n, rng.getrandbits(width))


def digraph_id(D: Digraph) -> str:
    return f"n{D.n}:{arc_mask(D)}"


def connected_graphs(max_edges: int) -> list[UndirectedGraph]:
    """Connected simple graphs with 1..max_edges edges, one per isomorphism class."""
    import networkx as nx

    layer = [nx.Graph([(0, 1)])]
    found = list(layer)
    for _ in range(max_edges - 1):
        buckets: dict[str, list] = {}
        for g in layer:
            n = g.number_of_nodes()
            options = [(u, v) for u, v in itertools.combinations(range(n), 2) if not g.has_edge(u, v)]
            options += [(u, n) for u in range(n)]
            for u, v in options:
                h = g.copy()
                h.add_edge(u, v)
                bucket = buckets.setdefault(nx.weisfeiler_lehman_graph_hash(h), [])
                if not any(nx.is_isomorphic(h, other) for other in bucket):
                    bucket.append(h)
        layer = [g for key in sorted(buckets) for g in buckets[key]]
        found.extend(layer)
    return [
        UndirectedGraph.from_edge_list(g.number_of_nodes(), sorted(g.edges())) for g in found
    ]


# undirected tree packing, used as an independent reference for biorientations


def tree_packing_number(G: UndirectedGraph, S: Sequence[int]) -> int:
    """Maximum number of edge-disjoint connected subgraphs of G containing S."""
    edges = G.sorted_edges()
    if len(edges) > TREE_PACKING_EDGE_LIMIT:
        raise CapExceeded(f"tree packing limited to {TREE_PACKING_EDGE_LIMIT} edges")
    S = tuple(sorted(S))
    memo: dict[int, int] = {}

    def joined(mask: int) -> bool:
        parent = list(range(G.n))

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        for i, (u, v) in enumerate(edges):
            if mask >> i & 1:
                parent[find(u)] = find(v)
        return len({find(s) for s in S}) == 1

    def best(mask: int) -> int:
        if mask in memo:
            return memo[mask]
        low = mask & -mask
        rest = mask ^ low
        value = 1
        sub = rest
        while True:
            part = low | sub
            other = mask & ~part
            if other and joined(part) and joined(other):
                value = max(value, 1 + best(other))
            if sub == 0:
                break
            sub = (sub - 1) & rest
        memo[mask] = value
        return value

    full = (1 << len(edges)) - 1
    if not joined(full):
        return 0
    return best(full)


def generalized_edge_connectivity(G: UndirectedGraph, k: int) -> int:
    return min(tree_packing_number(G, S) for S in itertools.combinations(range(G.n), k))


# the suite


@dataclass
class SuiteReport:
    digraph_id: str
    checks: list = field(default_factory=list)

    def add(self, name: str, status: str, detail: str = "") -> None:
        self.checks.append((name, status, detail))

    @property
    def failures(self) -> list:
        return [c for c in self.checks if c[1] == "FAIL"]

    def lines(self) -> list[str]:
        return [f"{self.digraph_id}\t{name}\t{status}\t{detail}" for name, status, detail in self.checks]


def _verdict(problems: list[str], note: str = "") -> tuple[str, str]:
    if problems:
        return "FAIL", "; ".join(problems)
    return "PASS", note


def verify_theorems(D: Digraph, k_range: Iterable[int]) -> SuiteReport:
    report = SuiteReport(digraph_id(D))
    n = D.n
    ks = sorted(k for k in set(k_range) if 2 <= k <= n)
    try:
        lam = {k: lambda_k_value(D, k) for k in ks}
        lam_c = {k: lambda_k_value(complement(D), k) for k in ks}
    except CapExceeded as exc:
        for name in CHECKS:
            report.add(name, "SKIP", str(exc))
        return report
    conn = arc_connectivity(D) if n >= 2 else 0
    conn_c = arc_connectivity(complement(D)) if n >= 2 else 0
    dplus, dminus = min_degrees(D)
    strong = is_strong(D)
    complete = D.m == n * (n - 1)
    ran = f"k={','.join(map(str, ks))}"

    def run(name, body):
        try:
            status, detail = body()
        except CapExceeded as exc:
            status, detail = "SKIP", str(exc)
        report.add(name, status, detail)

    def monotone():
        bad = [f"k={k}: {lam[k + 1]} > {lam[k]}" for k in ks if k + 1 in lam and lam[k + 1] > lam[k]]
        return _verdict(bad, ran)

    def spanning():
        bad = []
        for a in D.sorted_arcs():
            sub = D.without_arcs([a])
            for k in ks:
                if lambda_k_value(sub, k) > lam[k]:
                    bad.append(f"removing {a} raises lambda_{k}")
        return _verdict(bad, ran)

    def degree_cap():
        cap = min(dplus, dminus)
        return _verdict([f"lambda_{k}={lam[k]} > {cap}" for k in ks if lam[k] > cap], ran)

    def range_and_extremes():
        if not strong:
            return "PASS", "not strong"
        bad = []
        for k in ks:
            if not 1 <= lam[k] <= n - 1:
                bad.append(f"lambda_{k}={lam[k]} outside [1, {n - 1}]")
            top = complete and not (k == n and k in (4, 6))
            if (lam[k] == n - 1) != top:
                bad.append(f"lambda_{k}={lam[k]} but complete={complete}")
        return _verdict(bad, ran)

    def conn_cap():
        return _verdict([f"lambda_{k}={lam[k]} > {conn}" for k in ks if lam[k] > conn], ran)

    def floor_bound():
        bad = [f"lambda_{k}={lam[k]} < {conn}//{k}" for k in ks if k <= conn and lam[k] < conn // k]
        return _verdict(bad, ran)

    def strong_iff():
        bad = [f"lambda_{k}={lam[k]} but strong={strong}" for k in ks if (lam[k] >= 1) != strong]
        return _verdict(bad, ran)

    def ng():
        bad = []
        for k in ks:
            total, product = lam[k] + lam_c[k], lam[k] * lam_c[k]
            if not 0 <= total <= n - 1:
                bad.append(f"k={k}: sum {total}")
            if not 0 <= 4 * product <= (n - 1) ** 2:
                bad.append(f"k={k}: product {product}")
            if (total == 0) != (conn == 0 and conn_c == 0):
                bad.append(f"k={k}: sum zero mismatch")
            if (product == 0) != (conn == 0 or conn_c == 0):
                bad.append(f"k={k}: product zero mismatch")
        return _verdict(bad, ran)

    def complete_values():
        if not complete:
            return "PASS", "not complete"
        bad = []
        for k in ks:
            want = n - 2 if k == n and k in (4, 6) else n - 1
            if lam[k] != want:
                bad.append(f"lambda_{k}={lam[k]}, expected {want}")
        return _verdict(bad, ran)

    def semicomplete():
        if not is_semicomplete(D):
            return "PASS", "not semicomplete"
        bad = [f"k={k}" for k in ks if decide2_semicomplete(D, k) != (lam[k] >= 2)]
        return _verdict(bad, ran)

    def symmetric():
        if not (is_symmetric(D) and strong):
            return "PASS", "not strong symmetric"
        bad = []
        for k in ks:
            ok, cert = decide2_symmetric(D, k)
            if ok != (lam[k] >= 2):
                bad.append(f"k={k}: decider {ok}, exact {lam[k]}")
            if ok and not verify_packing(D, cert):
                bad.append(f"k={k}: certificate rejected")
        return _verdict(bad, ran)

    def biorientation():
        if not is_symmetric(D):
            return "PASS", "not symmetric"
        G = underlying(D)
        bad = []
        for k in ks:
            ref = generalized_edge_connectivity(G, k)
            if lam[k] < ref:
                bad.append(f"lambda_{k}={lam[k]} < tree packing {ref}")
            if k == 2 and not lam[k] == ref == conn:
                bad.append(f"lambda_2={lam[k]}, tree packing {ref}, edge connectivity {conn}")
        return _verdict(bad, ran)

    for name, body in zip(
        CHECKS,
        (
            monotone, spanning, degree_cap, range_and_extremes, conn_cap, floor_bound,
            strong_iff, ng, complete_values, semicomplete, symmetric, biorientation,
        ),
    ):
        run(name, body)
    return report


def _suite_job(args):
    D, ks = args
    return verify_theorems(D, ks)


def worker_count() -> int:
    try:
        return max(1, int(os.environ.get("STRONGK_THREADS", "1")))
    except ValueError:
        return 1


def run_suite(
    digraphs: Iterable[Digraph], k_range: Sequence[int], workers: int | None = None
) -> Iterator[SuiteReport]:
    """Reports in input order; ``workers`` defaults to ``STRONGK_THREADS``."""
    workers = worker_count() if workers is None else workers
    ks = tuple(k_range)
    if workers <= 1:
        for D in digraphs:
            yield verify_theorems(D, ks)
        return
    with ProcessPoolExecutor(max_workers=workers) as pool:
        yield from pool.map(_suite_job, ((D, ks) for D in digraphs), chunksize=64)


# product table


TABLE_FAMILIES = ("dicycle", "bidirected_cycle", "bidirected_tree", "complete_bidirected")

# value of λ_2(row_n □ column_m) as (symbolic form, evaluator)
TABLE1 = {
    ("dicycle", "dicycle"): ("2", lambda n, m: 2),
    ("dicycle", "bidirected_cycle"): ("3", lambda n, m: 3),
    ("dicycle", "bidirected_tree"): ("2", lambda n, m: 2),
    ("dicycle", "complete_bidirected"): ("m", lambda n, m: m),
    ("bidirected_cycle", "dicycle"): ("3", lambda n, m: 3),
    ("bidirected_cycle", "bidirected_cycle"): ("4", lambda n, m: 4),
    ("bidirected_cycle", "bidirected_tree"): ("3", lambda n, m: 3),
    ("bidirected_cycle", "complete_bidirected"): ("m+1", lambda n, m: m + 1),
    ("bidirected_tree", "dicycle"): ("2", lambda n, m: 2),
    ("bidirected_tree", "bidirected_cycle"): ("3", lambda n, m: 3),
    ("bidirected_tree", "bidirected_tree"): ("2", lambda n, m: 2),
    ("bidirected_tree", "complete_bidirected"): ("m", lambda n, m: m),
    ("complete_bidirected", "dicycle"): ("n", lambda n, m: n),
    ("complete_bidirected", "bidirected_cycle"): ("n+1", lambda n, m: n + 1),
    ("complete_bidirected", "bidirected_tree"): ("n", lambda n, m: n),
    ("complete_bidirected", "complete_bidirected"): ("n+m-2", lambda n, m: n + m - 2),
}


@dataclass(frozen=True)
class TableEntry:
    row: str
    column: str
    n: int
    m: int
    lower: int
    upper: int
    symbolic: str
    expected: int

    @property
    def value(self) -> int | None:
        return self.lower if self.lower == self.upper else None

    @property
    def matches(self) -> bool:
        return self.value == self.expected


def table_factor(name: str, order: int, tree: str = "path") -> Digraph:
    if name != "bidirected_tree":
        return standard_family(name, order)
    if order < 2:
        raise ValueError("a bidirected tree needs at least two vertices")
    if tree == "path":
        return standard_family("bidirected_path", order)
    if tree == "star":
        return biorient(UndirectedGraph.from_edge_list(order, [(0, v) for v in range(1, order)]))
    raise ValueError(f"unknown tree shape {tree!r}")


def table_entry(row: str, column: str, n: int, m: int, tree: str = "path") -> TableEntry:
    G, H = table_factor(row, n, tree), table_factor(column, m, tree)
    P = cartesian_product(G, H)
    # certified lower bound: the smallest explicit packing over all pairs
    lower = min(len(product_packing(G, H, S)) for S in itertools.combinations(range(P.n), 2))
    upper = min(min_degrees(P))
    symbolic, formula = TABLE1[(row, column)]
    return TableEntry(row, column, n, m, lower, upper, symbolic, formula(n, m))


def reproduce_table1(n: int, m: int, tree: str = "path") -> list[TableEntry]:
    return [table_entry(r, c, n, m, tree) for r in TABLE_FAMILIES for c in TABLE_FAMILIES]


# exceptional semicomplete digraphs


def scan_conjecture(order: int, ell: int = 2) -> list[Digraph]:
    if order > SEMICOMPLETE_LIMIT:
        raise CapExceeded(f"semicomplete scan is limited to order {SEMICOMPLETE_LIMIT}")
    if ell < 1:
        raise ValueError("ell must be positive")
    return find_spanning_exceptions(order, ell)


# minimally (2, n-2) digraphs


def near_complete_classes(n: int) -> list[Digraph]:
    """K↔_n minus M for every M with in- and out-degree at most one, up to isomorphism.

    Any D with λ_2(D) >= n-2 has minimum degrees at least n-2, so it has this form.
    """
    full = complete_digraph(n).arcs
    seen: dict[tuple[int, int], Digraph] = {}

    def assign(v: int, used: set[int], missing: list):
        if v == n:
            D = Digraph(n, full - frozenset(missing))
            seen.setdefault(canonical_form(D), D)
            return
        assign(v + 1, used, missing)
        for w in range(n):
            if w != v and w not in used:
                used.add(w)
                missing.append((v, w))
                assign(v + 1, used, missing)
                missing.pop()
                used.discard(w)

    assign(0, set(), [])
    return [seen[key] for key in sorted(seen)]


def is_minimally_2_nminus2(D: Digraph) -> bool:
    """λ_2(D) >= n-2 and every single-arc deletion brings λ_2 to at most n-3."""
    target = D.n - 2
    if target < 1 or not lambda_k_at_least(D, 2, target)[0]:
        return False
    return all(not lambda_k_at_least(D.without_arcs([a]), 2, target)[0] for a in D.sorted_arcs())


def minimal_family_comparison(n: int) -> tuple[list[Digraph], list[Digraph]]:
    """(digraphs recognized structurally, digraphs meeting the definition), as class reps."""
    classes = near_complete_classes(n)
    recognized = [D for D in classes if recognize_minimal_2_nminus2(D)]
    defined = [D for D in classes if is_minimally_2_nminus2(D)]
    return recognized, defined


__all__ = [
    "CHECKS",
    "SuiteReport",
    "TableEntry",
    "connected_graphs",
    "deleted_cycles",
    "digraph_id",
    "enumerate_digraphs",
    "generalized_edge_connectivity",
    "is_minimally_2_nminus2",
    "minimal_family_comparison",
    "near_complete_classes",
    "reproduce_table1",
    "run_suite",
    "scan_conjecture",
    "table_entry",
    "tree_packing_number",
    "verify_theorems",
]
