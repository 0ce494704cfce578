import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hamcover.factors import Matching
from hamcover.forests import (
    LinearForest,
    almost_forest_cover,
    choose_anchor,
    cycle_stats,
    is_linear_forest,
    one_factor,
    trivial_plan,
)
from hamcover.graphs import Digraph, ordered_degree_sequence
from hamcover.models import Permutation, project, sample_bipartite, sample_permutation
from hamcover.rng import substream

from strategies import digraphs, models


def linear_by_definition(n, edges):
    es = list(edges)
    if len(set(es)) != len(es) or any(u == v for u, v in es):
        return False
    outs = [u for u, _ in es]
    ins = [v for _, v in es]
    if len(set(outs)) != len(outs) or len(set(ins)) != len(ins):
        return False
    succ = dict(es)
    for s in succ:
        v, steps = s, 0
        while v in succ:
            v = succ[v]
            steps += 1
            if steps > n:
                return False
    return True


def test_linear_forest_from_edges_and_shape():
    F = LinearForest.from_edges(5, [(0, 1), (1, 2), (3, 4)])
    assert F.paths == ((0, 1, 2), (3, 4))
    assert F.sources() == [0, 3] and F.sinks() == [2, 4]
    assert F.components == 2


def test_linear_forest_rejects_cycles_and_branches():
    with pytest.raises(ValueError):
        LinearForest.from_edges(3, [(0, 1), (1, 2), (2, 0)])
    with pytest.raises(ValueError):
        LinearForest.from_edges(3, [(0, 1), (0, 2)])
    with pytest.raises(ValueError):
        LinearForest(3, [(0, 1)])


@given(digraphs(max_n=6), st.data())
def test_is_linear_forest_matches_definition(D, data):
    edges = data.draw(st.lists(st.sampled_from(sorted(D.edges)), unique=True) if D.edges else st.just([]))
    assert is_linear_forest(D.n, edges) == linear_by_definition(D.n, edges)


def test_one_factor_of_identity_matching_is_permutation_cycles():
    pi = Permutation([1, 2, 0, 3])
    M = Matching(4, frozenset((i, i) for i in range(4)))
    f = one_factor(M, pi)
    assert f.cycles == ((0, 1, 2),)
    assert f.isolated == {3}
    assert f.components == 2


def test_cycle_stats_exact_values():
    pi = Permutation([1, 0, 2])
    M = Matching(3, frozenset((i, i) for i in range(3)))
    st_ = cycle_stats(pi, [M], 0)
    assert st_.C == 2 and st_.two_pow_C == 4
    assert st_.c_lengths == (2,)
    assert st_.inv_c_sum == Fraction(1, 2)


def test_cycle_length_is_uniform_by_enumeration():
    """Over all permutations, v's cycle length in pi after a fixed matching takes each value equally often."""
    n = 5
    M = Matching(n, frozenset((i, (i + 2) % n) for i in range(n)))
    counts = [0] * (n + 1)
    for img in itertools.permutations(range(n)):
        counts[cycle_stats(Permutation(img), [M], 0).c_lengths[0]] += 1
    assert counts[1:] == [24] * n


@given(models())
def test_one_factor_edges_lie_in_projection(model):
    B, pi = model
    # any perfect matching contained in B
    for perm in itertools.permutations(range(B.n)):
        if all((x, perm[x]) in B.edges for x in range(B.n)):
            M = Matching(B.n, frozenset(zip(range(B.n), perm)))
            f = one_factor(M, pi)
            assert set(f.edges()) <= project(B, pi).edges
            covered = sorted(v for c in f.cycles for v in c) + sorted(f.isolated)
            assert sorted(covered) == list(range(B.n))
            break


@given(models())
def test_anchor_has_maximum_projected_degree(model):
    B, pi = model
    if not B.edges:
        return
    D = project(B, pi)
    side, v = choose_anchor(B, pi)
    top = ordered_degree_sequence(D)[0]
    if side == "x":
        assert D.out_degree(v) == top
    else:
        assert D.in_degree(pi.image[v]) == top


@pytest.mark.parametrize("seed", range(6))
def test_almost_forest_cover_partitions_the_digraph(seed):
    n, p = 60, 0.4
    B = sample_bipartite(n, p, substream(seed, "bipartite"))
    pi = sample_permutation(n, substream(seed, "permutation"))
    plan = almost_forest_cover(B, pi, seed=seed, p=p)
    checks = plan.check_partition()
    assert all(checks.values()), checks
    D0 = project(B, pi)
    delta1 = ordered_degree_sequence(D0)[0]
    assert plan.t + len(plan.reserved_edges) == delta1
    assert plan.digraph.out_degree(plan.anchor) == delta1
    for F in plan.forests:
        assert is_linear_forest(n, F.edges())


def test_forest_cover_is_deterministic():
    B = sample_bipartite(40, 0.5, substream(1, "bipartite"))
    pi = sample_permutation(40, substream(1, "permutation"))
    a = almost_forest_cover(B, pi, seed=1, p=0.5)
    b = almost_forest_cover(B, pi, seed=1, p=0.5)
    assert [F.paths for F in a.forests] == [F.paths for F in b.forests]
    assert a.residual == b.residual


def test_trivial_plan_reserves_every_out_edge():
    D = Digraph.complete(4)
    plan = trivial_plan(D, 2)
    assert plan.reserved_edges == [(2, 0), (2, 1), (2, 3)]
    assert plan.residual.out_degree(2) == 0
    assert plan.check_partition()["union_equals_digraph"]


def test_empty_bipartite_graph_is_rejected():
    from hamcover.graphs import BipartiteGraph

    with pytest.raises(ValueError):
        almost_forest_cover(BipartiteGraph(3), Permutation.identity(3))
