"""Projected 1-factors, linear forests and the almost-cover of a digraph by forests."""

from __future__ import annotations

import logging
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .factors import Matching, MatchingCover, matching_cover
from .graphs import BipartiteGraph, Digraph, Edge, max_degree_of_edges
from .models import Permutation, flip_model, project
from .rng import substream

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class OneFactor:
    """Directed cycles of i -> pi(m(i)); fixed points are dropped loops."""

    n: int
    cycles: tuple[tuple[int, ...], ...]
    isolated: frozenset[int]

    def edges(self) -> list[Edge]:
        out = []
        for c in self.cycles:
            k = len(c)
            out.extend((c[i], c[(i + 1) % k]) for i in range(k))
        return out

    def cycle_of(self, v: int) -> tuple[int, ...] | None:
        for c in self.cycles:
            if v in c:
                return c
        return None

    @property
    def components(self) -> int:
        return len(self.cycles) + len(self.isolated)


def one_factor(M: Matching, pi: Permutation) -> OneFactor:
    if M.n != pi.n:
        raise ValueError("matching and permutation sizes differ")
    if not M.is_perfect:
        raise ValueError(f"matching is not perfect ({len(M)} of {M.n} pairs)")
    m = M.as_map()
    sigma = Permutation(pi.image[m[i]] for i in range(M.n))
    cycles = tuple(c for c in sigma.cycles if len(c) > 1)
    isolated = frozenset(c[0] for c in sigma.cycles if len(c) == 1)
    return OneFactor(M.n, cycles, isolated)


@dataclass(frozen=True)
class CycleStats:
    C: int
    two_pow_C: int
    inv_c_sum: Fraction
    c_lengths: tuple[int, ...]


def cycle_stats(pi: Permutation, matchings: Sequence[Matching], v: int) -> CycleStats:
    """Cycle count of pi and the cycle lengths of v in each projected matching.

    A vertex isolated in D_pi(M_i) has cycle length 1.
    """
    C = pi.num_cycles
    lengths = []
    for M in matchings:
        m = M.as_map()
        k, w = 1, pi.image[m[v]]
        while w != v:
            w = pi.image[m[w]]
            k += 1
        lengths.append(k)
    inv = sum((Fraction(1, c) for c in lengths), Fraction(0))
    return CycleStats(C, 2**C, inv, tuple(lengths))


class LinearForest:
    """Vertex-disjoint directed paths covering ``range(n)``; isolated vertices are paths."""

    __slots__ = ("n", "paths")

    def __init__(self, n: int, paths: Iterable[Sequence[int]]):
        ps = tuple(tuple(int(v) for v in p) for p in paths)
        seen = [False] * n
        for p in ps:
            if not p:
                raise ValueError("empty path")
            for v in p:
                if not 0 <= v < n or seen[v]:
                    raise ValueError(f"vertex {v} repeated or out of range")
                seen[v] = True
        if not all(seen):
            raise ValueError("paths do not cover every vertex")
        self.n = n
        self.paths = ps

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Edge]) -> "LinearForest":
        succ = [-1] * n
        pred = [-1] * n
        for u, v in edges:
            if u == v or succ[u] != -1 or pred[v] != -1:
                raise ValueError(f"edge ({u}, {v}) breaks the linear-forest shape")
            succ[u] = v
            pred[v] = u
        paths = []
        covered = 0
        for s in range(n):
            if pred[s] != -1:
                continue
            p = [s]
            while succ[p[-1]] != -1:
                p.append(succ[p[-1]])
            covered += len(p)
            paths.append(p)
        if covered != n:
            raise ValueError("edge set contains a directed cycle")
        return cls(n, paths)

    def __len__(self) -> int:
        return len(self.paths)

    def __repr__(self) -> str:
        return f"LinearForest(n={self.n}, components={len(self.paths)})"

    @property
    def components(self) -> int:
        return len(self.paths)

    def edges(self) -> list[Edge]:
        return [(p[i], p[i + 1]) for p in self.paths for i in range(len(p) - 1)]

    def edge_set(self) -> frozenset[Edge]:
        return frozenset(self.edges())

    def sources(self) -> list[int]:
        return [p[0] for p in self.paths]

    def sinks(self) -> list[int]:
        return [p[-1] for p in self.paths]


def is_linear_forest(n: int, edges: Iterable[Edge]) -> bool:
    try:
        LinearForest.from_edges(n, edges)
    except ValueError:
        return False
    return True


@dataclass
class ForestCoverPlan:
    """Forests F_1..F_t, residual R_1 and reserved out-edges of the anchor vertex.

    Everything is expressed in the working orientation: if ``flipped`` is set,
    the plan covers the reverse of the sampled digraph.
    """

    digraph: Digraph
    forests: list[LinearForest]
    reserved_edges: list[Edge]
    residual: Digraph
    anchor: int
    anchors_per_forest: list[int]
    flipped: bool
    factors: list[OneFactor] = field(default_factory=list)
    dropped: list[int] = field(default_factory=list)
    deletions: list[Edge] = field(default_factory=list)
    cover: MatchingCover | None = None
    audits: dict[str, float] = field(default_factory=dict)

    @property
    def t(self) -> int:
        return len(self.forests)

    def anchor_edges(self) -> list[Edge]:
        return [(self.anchor, y) for y in self.anchors_per_forest]

    def check_partition(self) -> dict[str, bool]:
        forest_edges: set[Edge] = set()
        for F in self.forests:
            forest_edges |= F.edge_set()
        union = forest_edges | set(self.residual.edges) | set(self.reserved_edges)
        x = self.anchor
        factor_total: Counter = Counter()
        for f in self.factors:
            factor_total.update(f.edges())
        accounted: Counter = Counter()
        for F in self.forests:
            accounted.update(F.edges())
        accounted.update(self.deletions)
        return {
            "union_equals_digraph": union == set(self.digraph.edges),
            "multiset_conserved": accounted == factor_total,
            "reserved_disjoint": not (set(self.reserved_edges) & (forest_edges | set(self.residual.edges))),
            "anchors_in_forests": all(
                (x, y) in F.edge_set() for F, y in zip(self.forests, self.anchors_per_forest)
            ),
            "reserved_leave_anchor": all(u == x for u, _ in self.reserved_edges),
            "residual_no_anchor_out": self.residual.out_degree(x) == 0,
        }


def choose_anchor(B: BipartiteGraph, pi: Permutation) -> tuple[str, int]:
    """Maximum-degree vertex of B as (side, index).

    Ties prefer a vertex whose projection loses no loop, then the X side,
    then the smaller index. With that rule the anchor's projected degree equals
    the maximum degree of D_pi(B).
    """
    img = pi.image
    inv = pi.inverse_image
    best = None
    for x, d in enumerate(B.x_degrees()):
        loop = (x, inv[x]) in B.edges
        key = (-d, loop, 0, x)
        best = key if best is None or key < best else best
    for y, d in enumerate(B.y_degrees()):
        loop = (img[y], y) in B.edges
        key = (-d, loop, 1, y)
        best = key if best is None or key < best else best
    assert best is not None
    return ("x" if best[2] == 0 else "y"), best[3]


def _log(n: int) -> float:
    return math.log(n) if n > 1 else 1.0


def almost_forest_cover(
    B: BipartiteGraph,
    pi: Permutation,
    seed: int = 0,
    p: float | None = None,
    strict: bool = False,
) -> ForestCoverPlan:
    """Cover D_pi(B) by linear forests, a sparse residual and reserved anchor edges.

    Raises :class:`hamcover.factors.MatchingCoverError` when the matching cover
    cannot be built.
    """
    if len(B) == 0:
        raise ValueError("bipartite graph has no edges")
    n = B.n
    side, v = choose_anchor(B, pi)
    flipped = side == "y"
    if flipped:
        x_star = pi.image[v]
        B, pi = flip_model(B, pi)
    else:
        x_star = v
    D = project(B, pi)

    deg = B.x_adj[x_star]
    others = sorted(B.degrees(), reverse=True)
    others.remove(len(deg))
    d = max(0, len(deg) - (others[0] if others else 0))
    deletion = [(x_star, y) for y in deg[:d]]
    cover = matching_cover(B, deletion, p=p, strict=strict)

    factors = [one_factor(M, pi) for M in cover.matchings]
    img = pi.image
    reserved = sorted((x_star, img[y]) for _, y in deletion if img[y] != x_star)

    # at most one 1-factor per family isolates x_star; its edges go to the residual
    dropped = [i for i, f in enumerate(factors) if x_star in f.isolated]
    rng = substream(seed, "cycle-break")
    forests: list[LinearForest] = []
    anchors: list[int] = []
    deletions: list[Edge] = []
    for i, f in enumerate(factors):
        if i in dropped:
            deletions.extend(f.edges())
            continue
        y_i = img[cover.matchings[i].as_map()[x_star]]
        anchor = (x_star, y_i)
        removed = []
        for c in f.cycles:
            k = len(c)
            cedges = [(c[j], c[(j + 1) % k]) for j in range(k)]
            choices = [e for e in cedges if e != anchor]
            removed.append(choices[int(rng.integers(len(choices)))])
        deletions.extend(removed)
        rem = set(removed)
        forests.append(LinearForest.from_edges(n, (e for e in f.edges() if e not in rem)))
        anchors.append(y_i)

    residual = Digraph(n, deletions)
    plan = ForestCoverPlan(
        digraph=D,
        forests=forests,
        reserved_edges=reserved,
        residual=residual,
        anchor=x_star,
        anchors_per_forest=anchors,
        flipped=flipped,
        factors=factors,
        dropped=dropped,
        deletions=deletions,
        cover=cover,
    )
    plan.audits = forest_audits(plan, p if p is not None else len(B) / (n * n))
    return plan


def forest_audits(plan: ForestCoverPlan, p: float) -> dict[str, float]:
    n = plan.digraph.n
    L = _log(n)
    t = plan.t
    comps = [F.components for F in plan.forests]
    delta_r1 = plan.residual.max_degree
    r1_scale = (t * L**4) ** (1 / 3) if t else 0.0
    degs = sorted([plan.digraph.out_degree(v) for v in range(n)] + [plan.digraph.in_degree(v) for v in range(n)], reverse=True)
    delta1 = degs[0] if degs else 0
    delta2 = degs[1] if len(degs) > 1 else 0
    return {
        "t": t,
        "reserved": len(plan.reserved_edges),
        "delta1": delta1,
        "delta2": delta2,
        "count_identity": float(t + len(plan.reserved_edges) == delta1),
        "t_window_ok": float(delta2 - 3 <= t <= delta2),
        "max_components": max(comps, default=0),
        "components_bound": 4 * L,
        "components_ok": float(all(c <= 4 * L for c in comps)),
        "delta_R1": delta_r1,
        "delta_R1_bound": 3 * r1_scale,
        "delta_R1_ok": float(delta_r1 <= 3 * r1_scale),
        "dropped_factors": len(plan.dropped),
        "p": p,
    }


def trivial_plan(D: Digraph, x_star: int, flipped: bool = False) -> ForestCoverPlan:
    """Plan with no forests: every out-edge of x_star reserved, the rest residual."""
    reserved = sorted((x_star, y) for y in D.out_adj[x_star])
    rest = [e for e in D.edges if e[0] != x_star]
    plan = ForestCoverPlan(
        digraph=D,
        forests=[],
        reserved_edges=reserved,
        residual=Digraph(D.n, rest),
        anchor=x_star,
        anchors_per_forest=[],
        flipped=flipped,
        deletions=sorted(rest),
    )
    plan.audits = {"t": 0, "reserved": len(reserved), "trivial": 1.0}
    return plan


def component_counts(forests: Iterable[LinearForest]) -> list[int]:
    return [F.components for F in forests]


def residual_degree(n: int, edges: Iterable[Edge]) -> int:
    return max_degree_of_edges(n, edges)
