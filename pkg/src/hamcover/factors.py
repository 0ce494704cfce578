"""Regular subgraphs, f-factors and perfect-matching decompositions of bipartite graphs.

Feasibility is decided by an integral max-flow on the usual network
``source -> X -> Y -> sink`` (unit capacity on every edge of B). When the flow
falls short, the min cut gives sets S (X-side, reachable from the source) and
T (Y-side, not reachable) that violate

    e(S, T) + sum_{y in Y \\ T} f(y) >= sum_{x in S} f(x),

which for constant f = r reads e(S, T) >= r (|S| + |T| - n).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import breadth_first_order, maximum_bipartite_matching, maximum_flow

from .graphs import BipartiteGraph, Edge

log = logging.getLogger(__name__)


class FactorInfeasible(Exception):
    """No factor exists; ``S`` (X-side) and ``T`` (Y-side) violate the cut condition."""

    def __init__(self, message: str, S: frozenset[int], T: frozenset[int]):
        super().__init__(message)
        self.S = S
        self.T = T


class MatchingCoverError(Exception):
    def __init__(self, stage: str, cause: FactorInfeasible | None = None):
        super().__init__(f"matching cover failed at {stage}" + (f": {cause}" if cause else ""))
        self.stage = stage
        self.cause = cause


@dataclass(frozen=True)
class Matching:
    n: int
    pairs: frozenset[Edge]

    def __post_init__(self) -> None:
        xs = [x for x, _ in self.pairs]
        ys = [y for _, y in self.pairs]
        if len(set(xs)) != len(xs) or len(set(ys)) != len(ys):
            raise ValueError("pairs share an endpoint")

    def __len__(self) -> int:
        return len(self.pairs)

    @property
    def is_perfect(self) -> bool:
        return len(self.pairs) == self.n

    def as_map(self) -> list[int]:
        """m(x) = y for each pair; -1 for unmatched X-vertices."""
        m = [-1] * self.n
        for x, y in self.pairs:
            m[x] = y
        return m


@dataclass(frozen=True)
class DegreeDemand:
    x: tuple[int, ...]
    y: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.x) != len(self.y):
            raise ValueError("demand vectors must have equal length")
        if any(v < 0 for v in self.x) or any(v < 0 for v in self.y):
            raise ValueError("demands must be nonnegative")

    @property
    def n(self) -> int:
        return len(self.x)

    @property
    def balanced(self) -> bool:
        return sum(self.x) == sum(self.y)

    @classmethod
    def constant(cls, n: int, r: int) -> "DegreeDemand":
        return cls((r,) * n, (r,) * n)

    def ore_slack(self, B: BipartiteGraph, S: Iterable[int], T: Iterable[int]) -> int:
        """Left minus right side of the Ore inequality; negative means violated."""
        S, T = set(S), set(T)
        return B.e(S, T) + sum(self.y[y] for y in range(self.n) if y not in T) - sum(self.x[x] for x in S)


def _degree_flow(B: BipartiteGraph, fx: Sequence[int], fy: Sequence[int]) -> BipartiteGraph:
    return BipartiteGraph(B.n, _flow_multiplicities(B, fx, fy, 1))


def _flow_multiplicities(
    B: BipartiteGraph, fx: Sequence[int], fy: Sequence[int], edge_cap: int
) -> dict[Edge, int]:
    """Integral flow meeting demands fx / fy with at most ``edge_cap`` units per edge."""
    n = B.n
    total = sum(fx)
    if total == 0:
        return {}
    src, snk = 0, 2 * n + 1
    edges = B.sorted_edges()
    rows = [src] * n + [1 + x for x, _ in edges] + [1 + n + y for y in range(n)]
    cols = [1 + x for x in range(n)] + [1 + n + y for _, y in edges] + [snk] * n
    caps = list(fx) + [edge_cap] * len(edges) + list(fy)
    keep = [i for i, c in enumerate(caps) if c > 0]
    cap = csr_matrix(
        (np.asarray([caps[i] for i in keep], dtype=np.int32),
         (np.asarray([rows[i] for i in keep]), np.asarray([cols[i] for i in keep]))),
        shape=(2 * n + 2, 2 * n + 2),
    )
    res = maximum_flow(cap, src, snk, method="dinic")
    flow = res.flow.tocsr()
    if res.flow_value == total:
        chosen = {}
        for x, y in edges:
            k = int(flow[1 + x, 1 + n + y])
            if k > 0:
                chosen[(x, y)] = k
        return chosen
    residual = (cap - flow).tocsr()
    residual.data = np.where(residual.data > 0, 1, 0).astype(np.int32)
    residual.eliminate_zeros()
    reach = set(breadth_first_order(residual, src, directed=True, return_predecessors=False).tolist())
    S = frozenset(x for x in range(n) if 1 + x in reach)
    T = frozenset(y for y in range(n) if 1 + n + y not in reach)
    raise FactorInfeasible(f"max flow {res.flow_value} < demand {total}", S, T)


def f_factor(B: BipartiteGraph, f: DegreeDemand | Mapping[str, Sequence[int]]) -> BipartiteGraph:
    """Spanning subgraph H with deg_H(v) = f(v), or :class:`FactorInfeasible`."""
    if not isinstance(f, DegreeDemand):
        f = DegreeDemand(tuple(f["x"]), tuple(f["y"]))
    if f.n != B.n:
        raise ValueError("demand size does not match graph")
    if not f.balanced:
        raise ValueError(f"unbalanced demand: sum over X = {sum(f.x)}, sum over Y = {sum(f.y)}")
    return _degree_flow(B, f.x, f.y)


def regular_subgraph(B: BipartiteGraph, r: int, forbidden: Iterable[Edge] = ()) -> BipartiteGraph:
    """An r-regular spanning subgraph of B minus ``forbidden``."""
    n = B.n
    if not 0 <= r <= n:
        raise ValueError(f"r must lie in [0, {n}]")
    G = B.without(forbidden) if forbidden else B
    if r == 0:
        return BipartiteGraph(n)
    for x, d in enumerate(G.x_degrees()):
        if d < r:
            raise FactorInfeasible(f"X-vertex {x} has degree {d} < {r}", frozenset([x]), frozenset(range(n)))
    for y, d in enumerate(G.y_degrees()):
        if d < r:
            raise FactorInfeasible(f"Y-vertex {y} has degree {d} < {r}", frozenset(range(n)), frozenset([y]))
    return _degree_flow(G, [r] * n, [r] * n)


def gale_ryser_violation(B: BipartiteGraph, r: int, S: Iterable[int], T: Iterable[int]) -> bool:
    S, T = set(S), set(T)
    return B.e(S, T) < r * (len(S) + len(T) - B.n)


def _perfect_matching(G: BipartiteGraph) -> Matching:
    n = G.n
    edges = G.sorted_edges()
    if not edges:
        raise ValueError("empty graph has no perfect matching")
    A = csr_matrix(
        (np.ones(len(edges), dtype=np.int8), ([x for x, _ in edges], [y for _, y in edges])),
        shape=(n, n),
    )
    match = maximum_bipartite_matching(A, perm_type="column")
    if (match < 0).any():
        raise ValueError("graph has no perfect matching")
    return Matching(n, frozenset((x, int(match[x])) for x in range(n)))


def _euler_split(G: BipartiteGraph) -> tuple[BipartiteGraph, BipartiteGraph]:
    """Split an even-regular bipartite graph into two halves of half the degree.

    Edges of each Euler circuit are assigned alternately; bipartite circuits have
    even length, so every pass through a vertex contributes one edge to each half.
    """
    n = G.n
    # vertices 0..n-1 are X, n..2n-1 are Y
    adj: list[list[tuple[int, int]]] = [[] for _ in range(2 * n)]
    edges = G.sorted_edges()
    for i, (x, y) in enumerate(edges):
        adj[x].append((n + y, i))
        adj[n + y].append((x, i))
    used = [False] * len(edges)
    ptr = [0] * (2 * n)
    halves: tuple[list[Edge], list[Edge]] = ([], [])
    for s in range(2 * n):
        if ptr[s] >= len(adj[s]):
            continue
        # Hierholzer: stack of (vertex, edge used to reach it)
        stack = [(s, -1)]
        circuit: list[int] = []
        while stack:
            v, ein = stack[-1]
            while ptr[v] < len(adj[v]) and used[adj[v][ptr[v]][1]]:
                ptr[v] += 1
            if ptr[v] == len(adj[v]):
                stack.pop()
                if ein >= 0:
                    circuit.append(ein)
            else:
                w, ei = adj[v][ptr[v]]
                used[ei] = True
                stack.append((w, ei))
        for k, ei in enumerate(circuit):
            halves[k % 2].append(edges[ei])
    return BipartiteGraph(n, halves[0]), BipartiteGraph(n, halves[1])


def decompose_regular(W: BipartiteGraph) -> list[Matching]:
    """Split a d-regular bipartite graph into d disjoint perfect matchings."""
    n = W.n
    xd, yd = W.x_degrees(), W.y_degrees()
    d = xd[0] if n else 0
    for x, v in enumerate(xd):
        if v != d:
            raise ValueError(f"not regular: X-vertex {x} has degree {v}, expected {d}")
    for y, v in enumerate(yd):
        if v != d:
            raise ValueError(f"not regular: Y-vertex {y} has degree {v}, expected {d}")
    out: list[Matching] = []
    work = [(W, d)]
    while work:
        G, k = work.pop()
        if k == 0:
            continue
        if k == 1:
            out.append(Matching(n, G.edges))
        elif k % 2 == 0:
            a, b = _euler_split(G)
            work.append((b, k // 2))
            work.append((a, k // 2))
        else:
            M = _perfect_matching(G)
            out.append(M)
            work.append((G.without(M.pairs), k - 1))
    return sorted(out, key=lambda M: sorted(M.pairs))


def decompose_multigraph(n: int, multiplicity: Mapping[Edge, int]) -> list[Matching]:
    """Split a regular bipartite multigraph (edge -> copies) into perfect matchings."""
    mult = {e: k for e, k in multiplicity.items() if k > 0}
    xd = [0] * n
    yd = [0] * n
    for (x, y), k in mult.items():
        xd[x] += k
        yd[y] += k
    d = xd[0] if n else 0
    bad = [v for v in xd + yd if v != d]
    if bad:
        raise ValueError("multigraph is not regular")
    out = []
    for _ in range(d):
        M = _perfect_matching(BipartiteGraph(n, mult))
        for e in M.pairs:
            mult[e] -= 1
            if mult[e] == 0:
                del mult[e]
        out.append(M)
    return out


def group_disjoint(matchings: Sequence[Matching]) -> list[list[Matching]]:
    """First-fit grouping into families of pairwise edge-disjoint matchings."""
    families: list[list[Matching]] = []
    used: list[set[Edge]] = []
    for M in matchings:
        for fam, seen in zip(families, used):
            if not (seen & M.pairs):
                fam.append(M)
                seen |= M.pairs
                break
        else:
            families.append([M])
            used.append(set(M.pairs))
    return families


@dataclass
class MatchingCover:
    """Families of perfect matchings covering B' = B minus the deletion set.

    The regular-subgraph routes give exactly two families; the multigraph
    route, needed when the degree spread exceeds the minimum degree, may give
    more.
    """

    family1: list[Matching]
    family2: list[Matching]
    base: BipartiteGraph
    regular_degree: int
    target_degree: int
    route: str
    audits: dict[str, float] = field(default_factory=dict)
    extra_families: list[list[Matching]] = field(default_factory=list)

    @property
    def families(self) -> list[list[Matching]]:
        return [self.family1, self.family2, *self.extra_families]

    @property
    def matchings(self) -> list[Matching]:
        return [M for fam in self.families for M in fam]


def regular_target(n: int, p: float) -> int:
    if n < 2:
        return 0
    L = math.log(n) ** 2
    return max(0, math.floor((1 - 2 / L) * n * p))


def _largest_regular(Bp: BipartiteGraph, hi: int) -> tuple[int, BipartiteGraph]:
    # feasibility is monotone in r: an r-regular bipartite graph contains an (r-1)-regular one
    try:
        return hi, regular_subgraph(Bp, hi)
    except FactorInfeasible:
        pass
    best: tuple[int, BipartiteGraph] = (0, BipartiteGraph(Bp.n))
    lo, top = 1, hi - 1
    while lo <= top:
        mid = (lo + top) // 2
        try:
            best = (mid, regular_subgraph(Bp, mid))
            lo = mid + 1
        except FactorInfeasible:
            top = mid - 1
    return best


def matching_cover(
    B: BipartiteGraph,
    deletion: Iterable[Edge] = (),
    p: float | None = None,
    strict: bool = False,
) -> MatchingCover:
    """Cover B' = B minus ``deletion`` by two families of perfect matchings.

    The first family decomposes a large regular subgraph W'; the second
    decomposes W + H, where W = B' - W' and H is an f-factor of W' with
    f(v) = Delta(W) - deg_W(v). Together they use exactly Delta(B') matchings.

    In non-strict mode the regular degree drops to the largest feasible value
    when the target is infeasible, and if no f-factor fits inside W' the
    f-factor is taken in B' first and W' is completed around it.
    """
    Bp = B.without(deletion)
    n = Bp.n
    if n == 0:
        return MatchingCover([], [], Bp, 0, 0, "empty")
    if p is None:
        p = len(B) / (n * n)
    Delta = Bp.max_degree
    target = min(regular_target(n, p), Bp.min_degree)
    audits: dict[str, float] = {"delta_Bprime": Delta, "target_degree": target}

    if Bp.min_degree == 0 and Delta > 0:
        # a perfect matching must use every vertex
        raise MatchingCoverError(
            "regular_subgraph", FactorInfeasible("isolated vertex", *_isolated_witness(Bp))
        )
    if strict:
        try:
            r1, Wp = target, regular_subgraph(Bp, target)
        except FactorInfeasible as exc:
            raise MatchingCoverError("regular_subgraph", exc) from exc
    else:
        r1, Wp = _largest_regular(Bp, target)

    def _finish(r1: int, Wp: BipartiteGraph, H: BipartiteGraph, route: str) -> MatchingCover:
        W = Bp.without(Wp.edges)
        fam1 = decompose_regular(Wp)
        fam2 = decompose_regular(W.union(H.edges))
        audits["regular_degree"] = r1
        audits["delta_W"] = Delta - r1
        return MatchingCover(fam1, fam2, Bp, r1, target, route, audits)

    demand = DegreeDemand(
        tuple(Delta - d for d in Bp.x_degrees()), tuple(Delta - d for d in Bp.y_degrees())
    )
    _audit_demand(audits, demand, n, p)
    try:
        H = f_factor(Wp, demand)
        return _finish(r1, Wp, H, "regular-then-factor")
    except FactorInfeasible as exc:
        if strict:
            raise MatchingCoverError("f_factor", exc) from exc
        first_exc = exc

    # alternative order: H inside B', then W' = H + (r1 - f)-factor of B' - H
    try:
        H = f_factor(Bp, demand)
    except FactorInfeasible:
        return _multigraph_cover(Bp, demand, target, audits, first_exc)
    fmax = max(max(demand.x), max(demand.y))
    rest = Bp.without(H.edges)
    for r in range(Bp.min_degree, fmax - 1, -1):
        g = DegreeDemand(tuple(r - v for v in demand.x), tuple(r - v for v in demand.y))
        try:
            K = f_factor(rest, g)
        except FactorInfeasible:
            continue
        log.debug("matching cover used factor-first route at r=%d", r)
        return _finish(r, K.union(H.edges), H, "factor-then-regular")
    return _multigraph_cover(Bp, demand, target, audits, first_exc)


def _multigraph_cover(
    Bp: BipartiteGraph, demand: DegreeDemand, target: int, audits: dict, cause: FactorInfeasible
) -> MatchingCover:
    """Raise every degree to Delta by repeating edges, with as few copies per edge as possible."""
    n = Bp.n
    Delta = Bp.max_degree
    for cap in range(1, Delta + 1):
        try:
            extra = _flow_multiplicities(Bp, demand.x, demand.y, cap)
        except FactorInfeasible as exc:
            cause = exc
            continue
        mult = {e: 1 + extra.get(e, 0) for e in Bp.edges}
        fams = group_disjoint(decompose_multigraph(n, mult))
        fams += [[], []]
        audits["max_multiplicity"] = max(mult.values())
        audits["families"] = sum(1 for f in fams if f)
        return MatchingCover(fams[0], fams[1], Bp, 0, target, "multigraph", audits,
                             [f for f in fams[2:] if f])
    raise MatchingCoverError("f_factor", cause)


def _isolated_witness(G: BipartiteGraph) -> tuple[frozenset[int], frozenset[int]]:
    n = G.n
    for x, d in enumerate(G.x_degrees()):
        if d == 0:
            return frozenset([x]), frozenset(range(n))
    for y, d in enumerate(G.y_degrees()):
        if d == 0:
            return frozenset(range(n)), frozenset([y])
    return frozenset(), frozenset()


def _audit_demand(audits: dict[str, float], f: DegreeDemand, n: int, p: float) -> None:
    L = math.log(n) if n > 1 else 1.0
    M = 3 * n * p / (L * L) if n > 1 else 0.0
    vals = list(f.x) + list(f.y)
    audits["demand_max"] = max(vals)
    audits["demand_min"] = min(vals)
    audits["demand_bound_M"] = M
    audits["demand_upper_ok"] = float(max(vals) <= M)
    audits["demand_lower_ok"] = float(min(vals) >= M / math.sqrt(L))


def check_matching_cover(cover: MatchingCover) -> dict[str, bool]:
    """Mechanical check of the three covering properties."""
    def disjoint(fam: list[Matching]) -> bool:
        seen: set[Edge] = set()
        for M in fam:
            if seen & M.pairs:
                return False
            seen |= M.pairs
        return True

    union: set[Edge] = set()
    for M in cover.matchings:
        union |= M.pairs
    return {
        "perfect": all(M.is_perfect for M in cover.matchings),
        "disjoint_within_family": all(disjoint(f) for f in cover.families),
        "union_equals_base": union == set(cover.base.edges),
        "count_equals_max_degree": len(cover.matchings) == cover.base.max_degree,
    }
