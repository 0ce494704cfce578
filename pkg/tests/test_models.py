import itertools
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hamcover.graphs import BipartiteGraph, Digraph, reverse_orientation
from hamcover.models import (
    Permutation,
    flip_model,
    lift,
    project,
    sample,
    sample_bipartite,
    sample_digraph,
    sample_permutation,
)
from hamcover.rng import substream

from oracles import cycle_count
from strategies import digraphs, models, permutations


def test_projection_drops_loops():
    B = BipartiteGraph(2, [(0, 0), (0, 1), (1, 0)])
    pi = Permutation([1, 0])
    # (0,0) -> 0->1, (0,1) -> 0->0 dropped, (1,0) -> 1->1 dropped
    assert project(B, pi).edges == {(0, 1)}


def test_identity_projection_of_complete_bipartite_is_complete_digraph():
    assert project(BipartiteGraph.complete(5), Permutation.identity(5)) == Digraph.complete(5)


def test_size_mismatch_is_rejected():
    with pytest.raises(ValueError):
        project(BipartiteGraph(3), Permutation.identity(4))


def test_permutation_cycles_and_inverse():
    pi = Permutation([1, 2, 0, 4, 3, 5])
    assert pi.cycles == ((0, 1, 2), (3, 4), (5,))
    assert pi.num_cycles == 3
    assert pi.cycle_length_of(4) == 2
    assert pi.compose(pi.inverse()) == Permutation.identity(6)
    with pytest.raises(ValueError):
        Permutation([0, 0, 1])


def test_sampling_extremes():
    assert len(sample_digraph(6, 0.0, 1)) == 0
    assert sample_digraph(6, 1.0, 1) == Digraph.complete(6)
    assert len(sample_bipartite(5, 1.0, 1).edges) == 25
    with pytest.raises(ValueError):
        sample("nope", 3)


def test_sampling_replays_per_substream():
    a = sample_bipartite(30, 0.3, substream(9, "bipartite"))
    b = sample_bipartite(30, 0.3, substream(9, "bipartite"))
    c = sample_bipartite(30, 0.3, substream(9, "other"))
    assert a == b
    assert a != c


def test_uniform_permutation_frequencies():
    counts = Counter(sample_permutation(3, substream(0, "perm", i)).image for i in range(6000))
    assert set(counts) == set(itertools.permutations(range(3)))
    assert all(abs(c / 6000 - 1 / 6) < 0.03 for c in counts.values())


@given(models())
def test_lift_inverts_projection(model):
    B, pi = model
    D = project(B, pi)
    assert project(lift(D, pi), pi) == D


@given(models())
def test_flip_model_projects_to_reverse(model):
    B, pi = model
    B2, pi2 = flip_model(B, pi)
    assert project(B2, pi2) == reverse_orientation(project(B, pi))
    assert sorted(B2.x_degrees()) == sorted(B.y_degrees())


@given(digraphs(min_n=1, max_n=7), st.data())
def test_lift_has_no_loop_pairs(D, data):
    pi = data.draw(permutations(D.n))
    B = lift(D, pi)
    assert len(B.edges) == len(D)
    assert all(pi.image[y] != x for x, y in B.edges)


@settings(max_examples=50)
@given(st.integers(1, 9), st.integers(0, 2**32))
def test_cycle_decomposition_matches_oracle(n, seed):
    pi = sample_permutation(n, np.random.default_rng(seed))
    assert pi.num_cycles == cycle_count(pi.image)
    assert sorted(v for c in pi.cycles for v in c) == list(range(n))
