import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from strongk.digraph import (
    Digraph,
    complete_digraph,
    dicycle,
    from_arc_mask,
    is_strong,
    relabel,
    reverse,
    standard_family,
)
from strongk.solver import (
    CapExceeded,
    Packing,
    decide_lambda_S,
    lambda_k_at_least,
    lambda_k_exact,
    lambda_S_exact,
    minimal_candidates,
    oracle_lambda_S,
    verify_packing,
)

from strategies import digraph_with_terminals, digraphs, permutations_of


# independent reference: plain reachability over explicit arc lists


def _reaches(arcs, s):
    seen, todo = {s}, [s]
    while todo:
        v = todo.pop()
        for a, b in arcs:
            if a == v and b not in seen:
                seen.add(b)
                todo.append(b)
    return seen


def _s_strong(arcs, S):
    back = [(b, a) for a, b in arcs]
    return set(S) <= _reaches(arcs, S[0]) and set(S) <= _reaches(back, S[0])


def brute_minimal(D, S):
    arcs = D.sorted_arcs()
    found = []
    for r in range(len(arcs) + 1):
        for combo in itertools.combinations(arcs, r):
            if _s_strong(combo, S) and not any(_s_strong([a for a in combo if a != x], S) for x in combo):
                found.append(frozenset(combo))
    return found


def test_candidates_of_dicycle_and_digon():
    assert minimal_candidates(dicycle(3), (0, 1)) == [dicycle(3).arcs]
    assert minimal_candidates(complete_digraph(2), (0, 1)) == [frozenset({(0, 1), (1, 0)})]


def test_candidates_of_complete_triangle():
    # the digon, both triangles, and the two digons through vertex 2
    found = minimal_candidates(complete_digraph(3), (0, 1))
    assert sorted(map(sorted, found)) == sorted(map(sorted, brute_minimal(complete_digraph(3), (0, 1))))
    assert len(found) == 4
    assert frozenset({(0, 2), (2, 0), (1, 2), (2, 1)}) in found


@pytest.mark.parametrize("S,count", [((0, 1), 25), ((0, 1, 2), 42), ((0, 1, 2, 3), 58)])
def test_candidate_counts_on_complete_four(S, count):
    found = minimal_candidates(complete_digraph(4), S)
    assert len(found) == count
    assert set(found) == set(brute_minimal(complete_digraph(4), S))


@pytest.mark.parametrize("S,count", [((0, 1), 232), ((0, 1, 2), 483), (tuple(range(5)), 1069)])
def test_candidate_counts_on_complete_five(S, count):
    # frozen after a one-off brute-force pass over all 2^20 arc subsets
    assert len(minimal_candidates(complete_digraph(5), S)) == count


@settings(max_examples=150, deadline=None)
@given(digraph_with_terminals(max_n=4, max_arcs=8))
def test_candidates_match_brute_force(case):
    D, S = case
    assert set(minimal_candidates(D, S)) == set(brute_minimal(D, S))


def test_candidate_cap():
    with pytest.raises(CapExceeded):
        minimal_candidates(complete_digraph(4), (0, 1), cap=10)


@pytest.mark.parametrize(
    "D,S,value",
    [
        (complete_digraph(4), (0, 1, 2, 3), 2),
        (complete_digraph(4), (0, 1), 3),
        (Digraph(2, {(0, 1)}), (0, 1), 0),
        (dicycle(5), (0, 1, 2), 1),
    ],
)
def test_lambda_S_examples(D, S, value):
    result = lambda_S_exact(D, S)
    assert result.value == value
    assert len(result.certificate.parts) == value
    assert verify_packing(D, result.certificate)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_lambda_k_of_cycles(n):
    for k in range(2, n + 1):
        assert lambda_k_exact(dicycle(n), k).value == 1
        assert lambda_k_exact(standard_family("bidirected_cycle", n), k).value == 2


def test_lambda_k_of_complete_digraphs():
    assert [lambda_k_exact(complete_digraph(4), k).value for k in (2, 3, 4)] == [3, 3, 2]
    assert [lambda_k_exact(complete_digraph(5), k).value for k in (2, 3)] == [4, 4]


def test_witness_is_lexicographically_first():
    # vertex 3 hangs off a digon, so only sets containing 3 reach the minimum
    D = Digraph(4, complete_digraph(3).arcs | {(2, 3), (3, 2)})
    result = lambda_k_exact(D, 2)
    assert result.value == 1 and result.witness_S == (0, 3)


def test_lambda_k_range_checked():
    with pytest.raises(ValueError):
        lambda_k_exact(dicycle(3), 4)


def test_decide_examples():
    ok, cert = decide_lambda_S(complete_digraph(4), range(4), 3)
    assert not ok and cert is None
    ok, cert = decide_lambda_S(standard_family("bidirected_cycle", 5), (0, 2), 2)
    assert ok and len(cert.parts) == 2 and verify_packing(standard_family("bidirected_cycle", 5), cert)


@given(digraph_with_terminals(max_n=4).filter(lambda c: is_strong(c[0])))
def test_strong_digraphs_decide_one(case):
    D, S = case
    assert decide_lambda_S(D, S, 1)[0]


def test_lambda_k_at_least_reports_failing_set():
    D = Digraph(4, complete_digraph(3).arcs | {(2, 3), (3, 2)})
    assert lambda_k_at_least(D, 2, 2) == (False, (0, 3))
    assert lambda_k_at_least(complete_digraph(4), 3, 3) == (True, None)


def test_oracle_examples():
    assert oracle_lambda_S(complete_digraph(3), (0, 1)) == 2
    assert oracle_lambda_S(dicycle(4), (0, 2)) == 1
    assert oracle_lambda_S(complete_digraph(4), range(4)) == 2


def test_oracle_threshold():
    with pytest.raises(CapExceeded):
        oracle_lambda_S(complete_digraph(5), (0, 1))


@settings(max_examples=300, deadline=None)
@given(digraph_with_terminals(max_n=5, max_arcs=12))
def test_solver_matches_oracle(case):
    D, S = case
    assert lambda_S_exact(D, S).value == oracle_lambda_S(D, S)


def test_verify_rejects_bad_packings():
    K = complete_digraph(3)
    good = lambda_S_exact(K, (0, 1)).certificate
    assert verify_packing(K, good)
    shared = Packing((0, 1), (frozenset({(0, 1), (1, 0)}), frozenset({(0, 1), (1, 2), (2, 0)})))
    assert not verify_packing(K, shared)
    missing = Packing((0, 1, 2), (frozenset({(0, 1), (1, 0)}),))
    assert not verify_packing(K, missing)
    foreign = Packing((0, 1), (frozenset({(0, 1), (1, 0)}),))
    assert not verify_packing(dicycle(3), foreign)
    weak = Packing((0, 1), (frozenset({(0, 1), (1, 2)}),))
    assert not verify_packing(K, weak)


@settings(max_examples=100, deadline=None)
@given(digraphs(min_n=2, max_n=4), st.data())
def test_values_invariant_under_reversal_and_relabeling(D, data):
    perm = data.draw(permutations_of(D.n))
    k = data.draw(st.integers(2, D.n))
    value = lambda_k_exact(D, k).value
    assert lambda_k_exact(reverse(D), k).value == value
    assert lambda_k_exact(relabel(D, perm), k).value == value


def test_order_four_properties_exhaustively():
    for mask in range(1 << 12):
        D = from_arc_mask(4, mask)
        values = [lambda_k_exact(D, k).value for k in (2, 3, 4)]
        assert values[0] >= values[1] >= values[2]
        assert (values[0] >= 1) == is_strong(D)
        cap = min(min(D.out_degree(v) for v in D.vertices), min(D.in_degree(v) for v in D.vertices))
        assert values[0] <= cap
