"""Hypothesis strategies for small graphs and permutations."""

from hypothesis import strategies as st

from hamcover.graphs import BipartiteGraph, Digraph
from hamcover.models import Permutation


@st.composite
def digraphs(draw, min_n=1, max_n=8):
    n = draw(st.integers(min_n, max_n))
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Digraph(n, [e for e, keep in zip(pairs, mask) if keep])


@st.composite
def bipartite_graphs(draw, min_n=1, max_n=6):
    n = draw(st.integers(min_n, max_n))
    cells = [(x, y) for x in range(n) for y in range(n)]
    mask = draw(st.lists(st.booleans(), min_size=len(cells), max_size=len(cells)))
    return BipartiteGraph(n, [e for e, keep in zip(cells, mask) if keep])


@st.composite
def permutations(draw, n):
    return Permutation(draw(st.permutations(list(range(n)))))


@st.composite
def models(draw, min_n=2, max_n=7):
    B = draw(bipartite_graphs(min_n, max_n))
    return B, draw(permutations(B.n))
