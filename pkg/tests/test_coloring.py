import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hamcover.coloring import (
    Multigraph,
    directed_matchings,
    greedy_edge_color,
    is_proper,
    multigraph_from_pairs,
    proper_edge_color,
    underlying_multigraph,
)
from hamcover.graphs import Digraph

from oracles import max_degree_and_multiplicity, proper_coloring_ok


@st.composite
def multigraphs(draw, max_n=9):
    n = draw(st.integers(2, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    mults = draw(st.lists(st.integers(0, 3), min_size=len(pairs), max_size=len(pairs)))
    edges = [e for e, k in zip(pairs, mults) for _ in range(k)]
    order = draw(st.permutations(list(range(len(edges)))))
    return multigraph_from_pairs(n, [edges[i] for i in order])


def test_shannon_triangle_needs_max_degree_plus_multiplicity():
    # doubled triangle: every pair of edges meets, so six colours are needed
    G = multigraph_from_pairs(3, [(0, 1), (0, 1), (1, 2), (1, 2), (0, 2), (0, 2)])
    col = proper_edge_color(G)
    assert G.max_degree == 4 and G.multiplicity == 2
    assert col.palette_size == 6
    assert is_proper(G, col.color)


def test_even_cycle_uses_two_colours():
    G = multigraph_from_pairs(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    assert proper_edge_color(G).palette_size <= 3
    assert is_proper(G, proper_edge_color(G).color)


def test_empty_graph_and_loops():
    assert proper_edge_color(Multigraph(3, ())).palette_size == 0
    with pytest.raises(ValueError):
        Multigraph(2, ((1, 1),))


def test_antiparallel_digraph_edges_become_parallel():
    D = Digraph(3, [(0, 1), (1, 0), (1, 2)])
    G = underlying_multigraph(D)
    assert G.multiplicity == 2
    col = proper_edge_color(G)
    classes = directed_matchings(G, col)
    assert sorted(e for c in classes for e in c) == sorted(D.edges)
    for c in classes:
        ends = [v for e in c for v in e]
        assert len(ends) == len(set(ends))


@settings(max_examples=200, deadline=None)
@given(multigraphs())
def test_colouring_is_proper_within_bound(G):
    col = proper_edge_color(G)
    delta, mu = max_degree_and_multiplicity(G.n, G.edges)
    assert proper_coloring_ok(G.edges, col.color)
    assert col.palette_size <= delta + mu
    assert len(set(col.color)) == col.palette_size


@settings(max_examples=100, deadline=None)
@given(multigraphs())
def test_greedy_colouring_bound(G):
    col = greedy_edge_color(G)
    delta, _ = max_degree_and_multiplicity(G.n, G.edges)
    assert proper_coloring_ok(G.edges, col.color)
    assert col.palette_size <= max(1, 2 * delta - 1)
