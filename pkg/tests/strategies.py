"""Hypothesis strategies shared by the test modules."""
from hypothesis import strategies as st

from strongk.digraph import Digraph, UndirectedGraph


@st.composite
def digraphs(draw, min_n=1, max_n=4, max_arcs=None):
    n = draw(st.integers(min_n, max_n))
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    arcs = draw(st.sets(st.sampled_from(pairs), max_size=max_arcs) if pairs else st.just(set()))
    return Digraph(n, frozenset(arcs))


@st.composite
def graphs(draw, min_n=1, max_n=6):
    n = draw(st.integers(min_n, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    edges = draw(st.sets(st.sampled_from(pairs)) if pairs else st.just(set()))
    return UndirectedGraph.from_edge_list(n, edges)


@st.composite
def digraph_with_terminals(draw, min_n=2, max_n=4, max_arcs=None):
    D = draw(digraphs(min_n=min_n, max_n=max_n, max_arcs=max_arcs))
    k = draw(st.integers(2, D.n))
    S = draw(st.permutations(range(D.n)))[:k]
    return D, tuple(sorted(S))


@st.composite
def permutations_of(draw, n):
    return tuple(draw(st.permutations(range(n))))
