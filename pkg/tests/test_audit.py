import itertools
import math

import numpy as np
import pytest

from hamcover.audit import FIELDS, _singleton_shape, typicality_audit
from hamcover.graphs import BipartiteGraph, Digraph
from hamcover.models import sample_bipartite, sample_digraph
from hamcover.rng import substream


def singleton_shape_brute(A, p, L):
    n = A.shape[0]
    t_lo = max(1, math.ceil(n - math.sqrt(L)))
    worst = 0.0
    for x in range(n):
        for t in range(t_lo, n + 1):
            for T in itertools.combinations(range(n), t):
                e = int(A[x, list(T)].sum())
                worst = max(worst, abs(e / (t * p) - 1))
    return worst


@pytest.mark.parametrize("seed", range(5))
def test_singleton_shape_is_exact(seed):
    rng = np.random.default_rng(seed)
    A = (rng.random((7, 7)) < 0.6).astype(np.int32)
    L = 9.0
    assert _singleton_shape(A, 0.6, L) == pytest.approx(singleton_shape_brute(A, 0.6, L))


def test_bipartite_audit_records_have_all_fields():
    B = sample_bipartite(80, 0.4, substream(0, "audit"))
    rep = typicality_audit(B, 0.4, samples=200)
    names = {c.name for c in rep.checks}
    assert {"B1", "goodness", "B2", "B3"} <= names
    for rec in rep.records():
        assert tuple(rec) == FIELDS
    assert rep.to_lines()[0] == ",".join(FIELDS)
    assert {c.method for c in rep.by_name("B1")} == {"exact"}
    assert rep.by_name("goodness")[0].method == "sampled"


def test_digraph_audit_degree_checks():
    D = sample_digraph(80, 0.5, substream(0, "audit-d"))
    rep = typicality_audit(D, 0.5, samples=100)
    assert {"D1", "D2", "D3", "degree-gap"} <= {c.name for c in rep.checks}
    gap = rep.by_name("degree-gap")[0]
    assert gap.threshold == pytest.approx(math.sqrt(40) / (2 * math.log(80)))


def test_complete_digraph_has_no_degree_gap():
    rep = typicality_audit(Digraph.complete(10), 1.0, samples=10)
    gap = rep.by_name("degree-gap")[0]
    assert gap.observed == 0 and not gap.passed


def test_probability_must_be_positive():
    with pytest.raises(ValueError):
        typicality_audit(BipartiteGraph(3), 0.0)
