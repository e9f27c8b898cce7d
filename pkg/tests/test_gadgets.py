import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from strongk.digraph import Digraph, complete_digraph, dicycle, empty_digraph, standard_family
from strongk.gadgets import (
    GadgetError,
    add_xy_cycles,
    build_dprime,
    build_gadget,
    extend_terminals,
    split_linkage_instance,
    split_vertices,
    weak_linkage_bruteforce,
)
from strongk.solver import CapExceeded, decide_lambda_S

from strategies import digraphs


def vertex_disjoint_linkage(D, pairs):
    """Independent check: two internally vertex-disjoint paths by enumeration."""
    (s1, t1), (s2, t2) = pairs

    def paths(s, t, banned):
        out = []

        def walk(path):
            v = path[-1]
            if v == t:
                out.append(path)
                return
            for w in sorted(D.out_neighbors(v)):
                if w not in path and w not in banned:
                    walk(path + [w])

        walk([s])
        return out

    for P in paths(s1, t1, {s2, t2}):
        if paths(s2, t2, set(P)):
            return True
    return False


def test_dprime_on_bare_terminals():
    inst = build_dprime(empty_digraph(4), 0, 1, 2, 3)
    D = inst.digraph
    assert (D.n, D.m) == (6, 8) and inst.S == (4, 5)
    assert set(D.out_neighbors(4)) == {0, 2} and set(D.in_neighbors(4)) == {1, 2}


def test_dprime_errors():
    with pytest.raises(GadgetError, match="distinct"):
        build_dprime(empty_digraph(4), 0, 1, 0, 3)
    with pytest.raises(GadgetError, match="range"):
        build_dprime(empty_digraph(4), 0, 1, 2, 9)


def test_split_sizes_and_terminal_images():
    D = dicycle(4)
    inst = split_vertices(build_dprime(D, 0, 1, 2, 3))
    n1 = D.n + 2
    assert inst.digraph.n == 2 * D.n + 2
    assert inst.digraph.m == D.n + D.m + 8
    assert inst.terminal_map == {"s1": 0, "t1": n1 + 1, "s2": 2, "t2": n1 + 3}
    for u in range(D.n):
        assert set(inst.digraph.out_neighbors(u)) == {n1 + u}
    with pytest.raises(GadgetError, match="stage"):
        split_vertices(inst)


def test_stage_arithmetic():
    base = split_vertices(build_dprime(dicycle(4), 0, 1, 2, 3))
    assert add_xy_cycles(base, 2) is base
    four = add_xy_cycles(base, 4)
    assert four.digraph.n == base.digraph.n + 4 and four.digraph.m == base.digraph.m + 8
    assert four.stage == "Dtriple"
    assert extend_terminals(base, 2, 2) is base
    sat = extend_terminals(base, 3, 2)
    # the satellite itself plus two subdivided digons
    assert sat.digraph.n == base.digraph.n + 5 and sat.digraph.m == base.digraph.m + 8
    assert sat.S == base.S + (base.digraph.n,) and sat.stage == "Dquad"
    big = build_gadget(dicycle(4), (0, 1, 2, 3), k=4, ell=3)
    assert big.digraph.n == base.digraph.n + 2 + 2 * (1 + 6)
    assert big.digraph.m == base.digraph.m + 4 + 2 * 12
    assert len(big.S) == 4


def test_stage_errors():
    base = split_vertices(build_dprime(dicycle(4), 0, 1, 2, 3))
    with pytest.raises(GadgetError):
        add_xy_cycles(base, 1)
    with pytest.raises(GadgetError):
        extend_terminals(base, 1, 2)
    with pytest.raises(GadgetError):
        extend_terminals(base, 3, 3)
    with pytest.raises(GadgetError):
        add_xy_cycles(add_xy_cycles(base, 3), 3)


@settings(max_examples=60, deadline=None)
@given(digraphs(min_n=4, max_n=5), st.integers(2, 4), st.integers(2, 4), st.data())
def test_gadgets_are_simple(D, k, ell, data):
    terms = data.draw(st.permutations(range(D.n)))[:4]
    inst = build_gadget(D, terms, k, ell)
    assert all(u != v for u, v in inst.digraph.arcs)
    assert all(0 <= v < inst.digraph.n for v in inst.S)
    assert all(0 <= v < inst.digraph.n for v in inst.terminal_map.values())


def test_linkage_examples():
    assert weak_linkage_bruteforce(standard_family("bidirected_cycle", 3), [(0, 1), (1, 0)])
    assert not weak_linkage_bruteforce(dicycle(3), [(0, 1), (0, 2)])
    assert weak_linkage_bruteforce(complete_digraph(3), [(0, 1), (1, 2), (2, 0)])
    with pytest.raises(CapExceeded):
        weak_linkage_bruteforce(complete_digraph(6), [(0, 1), (2, 3)])


def test_split_instance_is_vertex_disjoint_linkage_in_D():
    rng = random.Random(7)
    for _ in range(200):
        n = rng.choice([4, 5])
        pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
        D = Digraph(n, frozenset(a for a in pairs if rng.random() < 0.4))
        terms = rng.sample(range(n), 4)
        inst = split_vertices(build_dprime(D, *terms))
        H, linkage = split_linkage_instance(inst)
        expected = vertex_disjoint_linkage(D, [(terms[0], terms[1]), (terms[2], terms[3])])
        assert weak_linkage_bruteforce(H, linkage) == expected


def _equivalence_holds(D, terms, k=2, ell=2):
    inst = build_gadget(D, terms, k, ell)
    H, pairs = split_linkage_instance(inst)
    return decide_lambda_S(inst.digraph, inst.S, ell)[0] == weak_linkage_bruteforce(H, pairs)


def test_gadget_equivalence_on_sampled_order_four_digraphs():
    rng = random.Random(11)
    masks = rng.sample(range(1 << 12), 150)
    for mask in masks:
        D = Digraph(4, frozenset(a for i, a in enumerate(
            (u, v) for u in range(4) for v in range(4) if u != v) if mask >> i & 1))
        terms = rng.sample(range(4), 4)
        assert _equivalence_holds(D, terms)


@pytest.mark.parametrize("k,ell", [(2, 3), (3, 2)])
def test_gadget_equivalence_with_more_terminals_or_subgraphs(k, ell):
    rng = random.Random(k * 10 + ell)
    for _ in range(15):
        D = Digraph(4, frozenset(a for a in itertools.permutations(range(4), 2) if rng.random() < 0.4))
        assert _equivalence_holds(D, rng.sample(range(4), 4), k, ell)


def test_arc_disjoint_paths_in_D_are_not_enough():
    # two arc-disjoint paths exist, but every such pair shares a vertex
    D = Digraph(4, frozenset({(0, 2), (1, 2), (1, 3), (2, 3), (3, 0), (3, 2)}))
    terms = (1, 3, 2, 0)
    assert weak_linkage_bruteforce(D, [(1, 3), (2, 0)])
    inst = build_gadget(D, terms)
    assert not decide_lambda_S(inst.digraph, inst.S, 2)[0]
    assert not vertex_disjoint_linkage(D, [(1, 3), (2, 0)])


def test_linkage_through_x_and_y_changes_nothing():
    # keeping x and y in the host digraph opens no extra routes
    rng = random.Random(5)
    for _ in range(100):
        D = Digraph(4, frozenset(a for a in itertools.permutations(range(4), 2) if rng.random() < 0.4))
        inst = build_gadget(D, rng.sample(range(4), 4))
        H, pairs = split_linkage_instance(inst)
        assert weak_linkage_bruteforce(H, pairs) == weak_linkage_bruteforce(inst.digraph, pairs, threshold=40)
