import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hamcover.forests import LinearForest, is_linear_forest
from hamcover.graphs import Digraph, HamiltonCycle, verify_hamilton_cycle
from hamcover.hamilton import (
    HamiltonNotFound,
    PseudorandomParams,
    ReservedStageError,
    contract,
    cover_forest,
    cover_matching_with_reserved,
    extend_linear_forest,
    find_hamilton,
    pseudorandom_audit,
    reroute_cycles,
    reserved_forests,
    sparsify,
)
from hamcover.models import sample_digraph
from hamcover.rng import substream

from oracles import hamilton_exists, is_hamilton_cycle
from strategies import digraphs


def forest_cycle_exists(n, edges, forced):
    es = set(edges) | set(forced)
    for rest in itertools.permutations(range(1, n)):
        order = (0, *rest)
        cyc = {(order[i], order[(i + 1) % n]) for i in range(n)}
        if cyc <= es and set(forced) <= cyc:
            return True
    return False


def test_contraction_of_two_paths():
    D = Digraph.complete(4)
    F = LinearForest.from_edges(4, [(0, 1), (2, 3)])
    C = contract(D, F)
    assert C.size == 2
    assert C.graph.edges == {(0, 1), (1, 0)}
    assert C.host_edge(0, 1) == (1, 2)
    assert C.expand([0, 1]).order == (0, 1, 2, 3)


def test_find_hamilton_on_a_cycle_and_non_hamiltonian_input():
    D = Digraph.cycle([0, 3, 1, 4, 2])
    assert find_hamilton(D).canonical().order == (0, 3, 1, 4, 2)
    with pytest.raises(HamiltonNotFound) as info:
        find_hamilton(Digraph(4, [(0, 1), (1, 2), (2, 0), (3, 0), (0, 3)]))
    assert info.value.proven


def test_find_hamilton_prefers_listed_edges():
    D = Digraph.complete(5)
    c = find_hamilton(D, seed=0, prefer=[(0, 2), (2, 4)])
    assert {(0, 2), (2, 4)} <= c.edge_set()


@settings(max_examples=120, deadline=None)
@given(digraphs(min_n=2, max_n=6))
def test_find_hamilton_agrees_with_enumeration(D):
    expect = hamilton_exists(D.n, D.edges)
    try:
        c = find_hamilton(D, budget=2000)
    except HamiltonNotFound as exc:
        assert exc.proven and not expect
        return
    assert expect and is_hamilton_cycle(D.n, D.edges, c.order)


@settings(max_examples=80, deadline=None)
@given(digraphs(min_n=2, max_n=6), st.data())
def test_cover_forest_contains_the_forest(D, data):
    if not D.edges:
        return
    cand = data.draw(st.lists(st.sampled_from(sorted(D.edges)), unique=True, max_size=4))
    forced = extend_linear_forest(D.n, [], cand)
    F = LinearForest.from_edges(D.n, forced)
    expect = forest_cycle_exists(D.n, D.edges, forced)
    try:
        c = cover_forest(D, F, budget=2000)
    except HamiltonNotFound as exc:
        assert exc.proven and not expect
        return
    assert expect
    assert set(forced) <= c.edge_set()
    assert verify_hamilton_cycle(D, c)


@given(digraphs(max_n=7), st.integers(0, 7))
def test_extend_linear_forest_stays_linear(D, cap):
    out = extend_linear_forest(D.n, [], sorted(D.edges), cap=cap)
    assert len(out) <= cap
    assert is_linear_forest(D.n, out)
    base = out[:1]
    again = extend_linear_forest(D.n, base, sorted(D.edges))
    assert again[: len(base)] == base and is_linear_forest(D.n, again)


def test_sparsify_keeps_the_protected_edge():
    F = LinearForest.from_edges(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)])
    kept, removed = sparsify(F, (2, 3), 1.0, np.random.default_rng(0))
    assert kept.edges() == [(2, 3)]
    assert len(removed) == 4
    kept, removed = sparsify(F, (2, 3), 0.0, np.random.default_rng(0))
    assert removed == []


def _matching_avoiding(n, x, rng):
    """A directed matching on range(n) with no loops and no edge out of x."""
    perm = rng.permutation(n)
    return sorted((int(u), int(perm[(i + 1) % n])) for i, u in enumerate(perm) if u != x)


def test_reserved_forests_strict_structure():
    n, x = 40, 0
    rng = np.random.default_rng(5)
    M = _matching_avoiding(n, x, rng)
    S = [(x, y) for y in range(1, 12)]
    forests, leftover = reserved_forests(n, M, x, S, seed=3, strict=True)
    assert len(forests) == len(S)
    for i, f in enumerate(forests):
        assert S[i] in f
        assert is_linear_forest(n, f)
    placed = {e for f in forests for e in f}
    assert set(M) <= placed | set(leftover)


def test_reserved_forests_strict_needs_ten_edges():
    with pytest.raises(ReservedStageError):
        reserved_forests(10, [], 0, [(0, 1)], strict=True)
    with pytest.raises(ValueError):
        reserved_forests(10, [], 0, [(1, 2)])


def test_cover_matching_with_reserved_uses_each_reserved_edge_once():
    n, x = 30, 0
    D = Digraph.complete(n)
    M = _matching_avoiding(n, x, np.random.default_rng(1))
    S = [(x, y) for y in range(1, 11)]
    rc = cover_matching_with_reserved(D, M, x, S, seed=2, strict=True)
    assert len(rc.cycles) == len(S)
    for c, r in zip(rc.cycles, S):
        assert r in c.edge_set()
        assert verify_hamilton_cycle(D, c)
    covered = set().union(*(c.edge_set() for c in rc.cycles))
    assert set(M) <= covered | set(rc.leftover)
    assert not rc.leftover


def test_reroute_never_uncovers_an_edge():
    D = sample_digraph(25, 0.5, substream(4, "reroute"))
    cycles = [find_hamilton(D, seed=s) for s in range(4)]
    before = set().union(*(c.edge_set() for c in cycles))
    pending = set(D.edges) - before
    start = set(pending)
    gained = reroute_cycles(D, cycles, pending, seed=1)
    after = set().union(*(c.edge_set() for c in cycles))
    assert before <= after
    assert gained == len(start - pending)
    assert all(verify_hamilton_cycle(D, c) for c in cycles)


def test_pseudorandom_audit_reports_named_records():
    D = sample_digraph(40, 0.5, substream(0, "pr"))
    recs = pseudorandom_audit(D, PseudorandomParams(40, 0.1, 0.5), samples=50, seed=0)
    names = {r["name"] for r in recs}
    assert {"P1", "P2", "P3"} <= names
    assert all(set(r) >= {"threshold", "observed", "pass", "method"} for r in recs)
