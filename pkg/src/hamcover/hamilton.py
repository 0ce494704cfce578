"""Contraction digraphs, a verified Hamilton-cycle search, and forest covering."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .graphs import Digraph, Edge, HamiltonCycle, verify_hamilton_cycle
from .forests import LinearForest
from .rng import substream

log = logging.getLogger(__name__)

DEFAULT_BUDGET = 200_000
DEFAULT_RETRIES = 5
EXACT_LIMIT = 12


class HamiltonNotFound(Exception):
    """No Hamilton cycle was produced.

    ``proven`` is True only when an exhaustive search completed, so the
    graph is certainly non-Hamiltonian.
    """

    def __init__(self, message: str, proven: bool = False, expansions: int = 0):
        super().__init__(message)
        self.proven = proven
        self.expansions = expansions


@dataclass(frozen=True)
class ContractionDigraph:
    """One vertex per path of a forest; i -> j iff sink(P_i) -> source(P_j) is a host edge."""

    graph: Digraph
    paths: tuple[tuple[int, ...], ...]

    @property
    def size(self) -> int:
        return self.graph.n

    def endpoints(self, i: int) -> tuple[int, int]:
        return self.paths[i][0], self.paths[i][-1]

    def host_edge(self, i: int, j: int) -> Edge:
        return self.paths[i][-1], self.paths[j][0]

    def expand(self, order: Sequence[int]) -> HamiltonCycle:
        return HamiltonCycle(tuple(v for i in order for v in self.paths[i]))


def contract(D: Digraph, F: LinearForest) -> ContractionDigraph:
    if F.n != D.n:
        raise ValueError(f"forest spans {F.n} vertices, digraph has {D.n}")
    paths = F.paths
    where = [0] * D.n
    for i, p in enumerate(paths):
        where[p[0]] = i
    is_source = [False] * D.n
    for p in paths:
        is_source[p[0]] = True
    edges = []
    for i, p in enumerate(paths):
        for w in D.out_adj[p[-1]]:
            if is_source[w]:
                j = where[w]
                if j != i:
                    edges.append((i, j))
    return ContractionDigraph(Digraph(len(paths), edges), paths)


# ---------------------------------------------------------------- search


def _exact_search(H: Digraph, prefer: frozenset[Edge]) -> list[int] | None:
    """Held-Karp style bitmask search from vertex 0; maximises preferred edges used."""
    n = H.n
    full = (1 << n) - 1
    out = H.out_adj
    NEG = -1
    # best[mask][v] = max preferred count of a path 0 .. v visiting mask
    best = [[NEG] * n for _ in range(1 << n)]
    parent = [[-1] * n for _ in range(1 << n)]
    best[1][0] = 0
    for mask in range(1, 1 << n, 2):
        row = best[mask]
        for v in range(n):
            b = row[v]
            if b < 0:
                continue
            for w in out[v]:
                bit = 1 << w
                if mask & bit:
                    continue
                nb = b + ((v, w) in prefer)
                m2 = mask | bit
                if nb > best[m2][w]:
                    best[m2][w] = nb
                    parent[m2][w] = v
    final = best[full]
    end, score = -1, NEG
    for v in range(1, n):
        if final[v] >= 0 and 0 in out[v]:
            s = final[v] + ((v, 0) in prefer)
            if s > score:
                end, score = v, s
    if end < 0:
        return None
    order = []
    mask, v = full, end
    while v != -1:
        order.append(v)
        pv = parent[mask][v]
        mask ^= 1 << v
        v = pv
    order.reverse()
    return order


def _dfs(
    H: Digraph,
    start: int,
    rng: np.random.Generator,
    budget: int,
    prefer: frozenset[Edge],
    use_prefer: bool,
) -> tuple[list[int] | None, int, bool]:
    """Backtracking path extension from ``start``.

    Returns (order or None, expansions used, exhausted). ``exhausted`` means
    the whole search tree was explored without finding a cycle.
    """
    n = H.n
    out, inn = H.out_adj, H.in_adj
    visited = [False] * n
    # predecessors still able to enter w: unvisited in-neighbours plus the path end
    avail = [len(inn[w]) for w in range(n)]
    noise = rng.random(n)
    visited[start] = True
    path = [start]
    expansions = 0

    def candidates(u: int) -> list[int]:
        free = [w for w in out[u] if not visited[w]]
        if len(path) == n - 1 and free:
            free = [w for w in free if start in out[w]]
        forced = [w for w in free if avail[w] == 1]
        if len(forced) > 1:
            return []
        if forced:
            return forced

        def key(w: int) -> tuple:
            deg = sum(1 for z in out[w] if not visited[z])
            pref = 0 if (use_prefer and (u, w) in prefer) else 1
            return (pref, deg, noise[w])

        free.sort(key=key)
        return free

    def advance(u: int, v: int) -> bool:
        """Move the path end from u to v; False if this creates a dead vertex."""
        visited[v] = True
        path.append(v)
        ok = True
        for w in out[u]:
            avail[w] -= 1
            if avail[w] == 0 and ((not visited[w]) or (w == start and len(path) < n)):
                ok = False
        return ok

    def retreat(u: int, v: int) -> None:
        for w in out[u]:
            avail[w] += 1
        visited[v] = False
        path.pop()

    stack = [(start, candidates(start), 0)]
    while stack:
        u, cands, idx = stack[-1]
        if len(path) == n:
            if start in out[path[-1]]:
                return list(path), expansions, False
        if idx >= len(cands):
            stack.pop()
            if stack:
                retreat(stack[-1][0], u)
            continue
        stack[-1] = (u, cands, idx + 1)
        v = cands[idx]
        expansions += 1
        if expansions > budget:
            return None, expansions, False
        if advance(u, v):
            if len(path) == n:
                if start in out[v]:
                    return list(path), expansions, False
                retreat(u, v)
                continue
            stack.append((v, candidates(v), 0))
        else:
            retreat(u, v)
    return None, expansions, True


def find_hamilton(
    H: Digraph,
    budget: int = DEFAULT_BUDGET,
    seed: int = 0,
    prefer: Iterable[Edge] = (),
) -> HamiltonCycle:
    """Search for a directed Hamilton cycle of H; the result is always verified.

    ``prefer`` lists edges the search tries first (to pick up uncovered
    edges). Raises :class:`HamiltonNotFound` on failure.
    """
    n = H.n
    if n < 2:
        raise HamiltonNotFound("fewer than two vertices", proven=True)
    for v in range(n):
        if not H.out_adj[v] or not H.in_adj[v]:
            raise HamiltonNotFound(f"vertex {v} has no out- or in-neighbour", proven=True)
    pref = frozenset(prefer)
    if n == 2:
        return HamiltonCycle((0, 1))

    # start from a vertex of minimum in-degree: its closing edge is the tightest
    start = min(range(n), key=lambda v: (len(H.in_adj[v]), v))
    rng = substream(seed, "hamilton", n)
    used = 0
    attempt = 0
    chunk = max(4 * n, 256)
    while used < budget:
        use_prefer = bool(pref) and attempt % 3 != 2
        limit = min(chunk, budget - used)
        order, spent, exhausted = _dfs(H, start, rng, limit, pref, use_prefer)
        used += spent
        attempt += 1
        if order is not None:
            cycle = HamiltonCycle(tuple(order))
            if not verify_hamilton_cycle(H, cycle):
                raise AssertionError("search produced an invalid cycle")
            return cycle
        if exhausted:
            raise HamiltonNotFound("exhaustive search found no cycle", proven=True, expansions=used)
        chunk = int(chunk * 1.5)
    if n < EXACT_LIMIT:
        order = _exact_search(H, pref)
        if order is None:
            raise HamiltonNotFound("exact search found no cycle", proven=True, expansions=used)
        cycle = HamiltonCycle(tuple(order))
        assert verify_hamilton_cycle(H, cycle)
        return cycle
    raise HamiltonNotFound("budget exhausted", proven=False, expansions=used)


# ---------------------------------------------------------------- covering


def cover_forest(
    D: Digraph,
    F: LinearForest,
    budget: int = DEFAULT_BUDGET,
    seed: int = 0,
    prefer: Iterable[Edge] = (),
) -> HamiltonCycle:
    """A Hamilton cycle of D ∪ F traversing every edge of F."""
    if F.n != D.n:
        raise ValueError("forest and digraph sizes differ")
    if len(F.paths) == 1:
        p = F.paths[0]
        if D.n >= 2 and (p[-1], p[0]) in D.edges:
            return HamiltonCycle(p)
        raise HamiltonNotFound("spanning path has no closing edge", proven=True)
    C = contract(D, F)
    pref_set = set(prefer)
    pref = frozenset(
        (i, j) for i, j in C.graph.edges if C.host_edge(i, j) in pref_set
    )
    order = find_hamilton(C.graph, budget=budget, seed=seed, prefer=pref)
    cycle = C.expand(order.order)
    if not verify_hamilton_cycle(D, cycle, extra=F.edges()):
        raise AssertionError("expanded cycle failed verification")
    return cycle


def contraction_audit(D: Digraph, F: LinearForest, p: float) -> dict[str, float]:
    C = contract(D, F)
    ell = C.size
    n = D.n
    H = C.graph
    min_deg = H.min_degree if ell else 0
    need_ell = n ** (1 / 3) / (2 * p ** (2 / 3)) if p > 0 else math.inf
    return {
        "components": ell,
        "components_needed": need_ell,
        "components_ok": float(ell >= need_ell),
        "min_degree": min_deg,
        "min_degree_needed": 0.75 * p * ell,
        "min_degree_ok": float(min_deg >= 0.75 * p * ell),
    }


def sparsify(F: LinearForest, keep: Edge, q: float, rng: np.random.Generator) -> tuple[LinearForest, list[Edge]]:
    """Drop each edge except ``keep`` independently with probability q."""
    edges = F.edges()
    coins = rng.random(len(edges))
    kept, removed = [], []
    for e, c in zip(edges, coins):
        if e != keep and c < q:
            removed.append(e)
        else:
            kept.append(e)
    return LinearForest.from_edges(F.n, kept), removed


@dataclass
class ForestFamilyCover:
    cycles: list[HamiltonCycle]
    covered_index: list[int]
    residual: Digraph
    demoted: list[int]
    returned_anchors: list[Edge]
    audits: dict[str, float] = field(default_factory=dict)

    @property
    def partial(self) -> bool:
        return bool(self.demoted)


def cover_forest_family(
    D: Digraph,
    forests: Sequence[LinearForest],
    x: int,
    anchors: Sequence[int],
    seed: int = 0,
    budget: int = DEFAULT_BUDGET,
    retries: int = DEFAULT_RETRIES,
    covered: set[Edge] | None = None,
    pending: set[Edge] | None = None,
    drop_covered: bool = False,
) -> ForestFamilyCover:
    """Cover each forest, after random sparsification, by a Hamilton cycle through its anchor edge.

    ``covered`` (updated in place) records every edge already traversed by
    some cycle; ``pending`` holds uncovered edges that the search should try
    to pick up. With ``drop_covered`` a forest's already-covered edges are
    not forced into its cycle.
    """
    t = len(forests)
    if len(anchors) != t:
        raise ValueError("one anchor per forest is required")
    covered = covered if covered is not None else set()
    pending = pending if pending is not None else set()
    q = t ** (-2 / 3) if t else 0.0
    cycles: list[HamiltonCycle] = []
    index: list[int] = []
    demoted: list[int] = []
    returned: list[Edge] = []
    r2: list[Edge] = []
    for i, (F, y) in enumerate(zip(forests, anchors)):
        anchor = (x, y)
        if anchor not in F.edge_set():
            raise ValueError(f"forest {i} lacks its anchor edge {anchor}")
        cycle = None
        for attempt in range(retries):
            rng = substream(seed, "sparsify", i, attempt)
            U, removed = sparsify(F, anchor, q, rng)
            if drop_covered:
                U = LinearForest.from_edges(
                    F.n, (e for e in U.edges() if e == anchor or e not in covered)
                )
            try:
                cycle = cover_forest(
                    D, U, budget=budget, seed=_mix(seed, i, attempt), prefer=pending | set(removed)
                )
                break
            except HamiltonNotFound:
                continue
        if cycle is None:
            demoted.append(i)
            returned.append(anchor)
            missed = [e for e in F.edges() if e != anchor]
        else:
            es = cycle.edge_set()
            covered |= es
            pending -= es
            cycles.append(cycle)
            index.append(i)
            missed = [e for e in F.edges() if e not in es]
        r2.extend(missed)
        pending.update(e for e in missed if e not in covered)
    residual = Digraph(D.n, r2)
    dr = residual.max_degree
    bound = 7 * t ** (1 / 3) if t else 0.0
    audits = {
        "q": q,
        "delta_R2": dr,
        "delta_R2_bound": bound,
        "delta_R2_ok": float(dr <= bound),
        "demoted": len(demoted),
    }
    return ForestFamilyCover(cycles, index, residual, demoted, returned, audits)


def _mix(seed: int, *keys: int) -> int:
    return int(substream(seed, "solver", *keys).integers(0, 2**62))


# ------------------------------------------------------ reserved-edge stage


@dataclass
class ReservedCover:
    cycles: list[HamiltonCycle]
    reserved: list[Edge]
    leftover: list[Edge]
    classes: list[list[Edge]]
    strict: bool

    @property
    def partial(self) -> bool:
        return bool(self.leftover) or len(self.cycles) != len(self.reserved)


class ReservedStageError(Exception):
    """A strict-mode precondition of the reserved-edge stage failed."""


def extend_linear_forest(
    n: int, base: Iterable[Edge], candidates: Iterable[Edge], cap: int | None = None
) -> list[Edge]:
    """Greedily add candidate edges to ``base`` while it stays a linear forest.

    ``base`` must already be a linear forest. At most ``cap`` edges are added.
    """
    succ = [-1] * n
    pred = [-1] * n
    # union-find over path membership to reject cycle-closing edges
    root = list(range(n))

    def find(v: int) -> int:
        while root[v] != v:
            root[v] = root[root[v]]
            v = root[v]
        return v

    out = []
    for u, v in base:
        succ[u], pred[v] = v, u
        root[find(u)] = find(v)
        out.append((u, v))
    added = 0
    for u, v in candidates:
        if cap is not None and added >= cap:
            break
        if u == v or succ[u] != -1 or pred[v] != -1:
            continue
        ru, rv = find(u), find(v)
        if ru == rv:
            continue
        succ[u], pred[v] = v, u
        root[ru] = rv
        out.append((u, v))
        added += 1
    return out


def _split_by_label(
    n: int, M: Sequence[Edge], x: int, S: Sequence[Edge], labels: np.ndarray, classes: int
) -> tuple[list[list[Edge]], list[Edge | None], list[Edge], list[Edge]]:
    """Bucket M by the label of each sink and attach reserved edge ``S[s]`` to class s.

    Returns the class forests, the edge of each class displaced because it
    enters that class's reserved endpoint, edges of M entering x, and edges
    of M leaving x.
    """
    buckets: list[list[Edge]] = [[] for _ in range(classes)]
    into_x: list[Edge] = []
    out_of_x: list[Edge] = []
    for a, b in M:
        if a == x:
            out_of_x.append((a, b))
        elif b == x:
            into_x.append((a, b))
        else:
            buckets[int(labels[b])].append((a, b))
    forests: list[list[Edge]] = []
    displaced: list[Edge | None] = []
    for s in range(classes):
        y = S[s][1]
        forests.append([e for e in buckets[s] if e[1] != y] + [S[s]])
        hit = [e for e in buckets[s] if e[1] == y]
        displaced.append(hit[0] if hit else None)
    return forests, displaced, into_x, out_of_x


def _place(n: int, forests: list[list[Edge]], edges: Iterable[Edge]) -> list[Edge]:
    """Append each edge to the first forest that stays linear; return the rest."""
    rest = []
    for e in edges:
        for f in forests:
            if len(extend_linear_forest(n, f, [e])) == len(f) + 1:
                f.append(e)
                break
        else:
            rest.append(e)
    return rest


def reserved_forests(
    n: int, M: Sequence[Edge], x: int, S: Sequence[Edge], seed: int = 0, strict: bool = False
) -> tuple[list[list[Edge]], list[Edge]]:
    """The k linear forests of the reserved stage, forest i containing ``S[i]``.

    With k >= 10 vertices get labels in {0..floor(k/2)-1}; class s holds the
    edges of M whose sink has label s plus ``S[s]`` (minus the edge into the
    reserved endpoint, which is paired with ``S[s + floor(k/2)]``). For odd
    k the last reserved edge forms a forest alone. With fewer than ten
    reserved edges (only allowed when not strict) each reserved edge gets its
    own label class and displaced edges move to another class.
    Edges of M entering x are appended to a forest where they keep it linear.
    Returns the forests and the edges of M left uncovered.
    """
    k = len(S)
    if any(u != x for u, _ in S):
        raise ValueError("reserved edges must leave x")
    if strict and k < 10:
        raise ReservedStageError(f"{k} reserved edges, at least 10 are required")
    if k == 0:
        return [], list(M)
    rng = substream(seed, "labels")
    if k >= 10:
        half = k // 2
        labels = rng.integers(0, half, size=n)
        forests, displaced, into_x, out_of_x = _split_by_label(n, M, x, S, labels, half)
        for s in range(half):
            pair = [S[s + half]]
            if displaced[s] is not None:
                pair.append(displaced[s])
            forests.append(pair)
        if k % 2:
            forests.append([S[k - 1]])
        leftover = _place(n, forests, into_x)
    else:
        labels = rng.integers(0, k, size=n)
        forests, displaced, into_x, out_of_x = _split_by_label(n, M, x, S, labels, k)
        leftover = _place(n, forests, [e for e in displaced if e is not None] + into_x)
    return forests, leftover + out_of_x


def cover_matching_with_reserved(
    D: Digraph,
    M: Sequence[Edge],
    x: int,
    S: Sequence[Edge],
    seed: int = 0,
    budget: int = DEFAULT_BUDGET,
    retries: int = DEFAULT_RETRIES,
    strict: bool = False,
    pending: set[Edge] | None = None,
    extra: Sequence[Edge] = (),
    extra_cap: int | None = None,
) -> ReservedCover:
    """Exactly one Hamilton cycle per reserved edge, jointly covering the directed matching M.

    ``extra`` edges are appended greedily (up to ``extra_cap``) to each
    forest while it stays linear; ``pending`` edges are preferred by the
    search and are removed from the set once covered.
    """
    forests, leftover = reserved_forests(D.n, M, x, S, seed=seed, strict=strict)
    pending = pending if pending is not None else set()
    cycles: list[HamiltonCycle] = []
    for i, edges in enumerate(forests):
        r = S[i]
        base = extend_linear_forest(D.n, edges, (e for e in extra if e in pending), cap=extra_cap) if extra else edges
        cycle = _cover_with_retries(D, [base, edges, [r]], seed, i, budget, retries, pending)
        if cycle is None:
            raise HamiltonNotFound(f"no Hamilton cycle through reserved edge {r}")
        es = cycle.edge_set()
        if not es.issuperset(edges):
            if strict:
                raise HamiltonNotFound(f"class {i} could not be covered with its reserved edge")
            leftover.extend(e for e in edges if e not in es)
        pending -= es
        cycles.append(cycle)
    covered = set().union(*(c.edge_set() for c in cycles)) if cycles else set()
    leftover = [e for e in dict.fromkeys(leftover) if e not in covered]
    return ReservedCover(cycles, list(S), leftover, [list(f) for f in forests], strict)


def _cover_with_retries(
    D: Digraph,
    options: Sequence[Sequence[Edge]],
    seed: int,
    index: int,
    budget: int,
    retries: int,
    pending: set[Edge],
) -> HamiltonCycle | None:
    """Try each forcing edge set in turn, falling back to smaller ones."""
    seen = []
    for es in options:
        key = sorted(es)
        if key in seen:
            continue
        seen.append(key)
        F = LinearForest.from_edges(D.n, es)
        for attempt in range(retries):
            try:
                return cover_forest(D, F, budget=budget, seed=_mix(seed, index, attempt), prefer=pending)
            except HamiltonNotFound as exc:
                if exc.proven:
                    break
    return None


# ------------------------------------------------------------ audits


@dataclass(frozen=True)
class PseudorandomParams:
    n_eff: int
    alpha: float
    p: float

    @property
    def log(self) -> float:
        return math.log(self.n_eff) if self.n_eff > 1 else 1.0

    @property
    def p1_threshold(self) -> float:
        return (0.5 + 2 * self.alpha) * self.n_eff * self.p

    @property
    def p2_size(self) -> float:
        return self.log**2 / self.p

    def p2_bound(self, size: int) -> float:
        return size * self.log**2.1

    @property
    def p3_size(self) -> float:
        return self.log**1.1 / self.p

    def p3_bound(self, a: int, b: int) -> float:
        return (1 + self.alpha / 2) * self.p * a * b


def pseudorandom_audit(
    H: Digraph, params: PseudorandomParams, samples: int = 200, seed: int = 0
) -> list[dict]:
    """Check minimum degree exactly and the two sparsity conditions by sampling."""
    from .audit import CheckRecord

    n = H.n
    recs: list[CheckRecord] = []
    mins = [min(H.out_degree(v), H.in_degree(v)) for v in range(n)]
    worst = min(range(n), key=lambda v: (mins[v], v)) if n else -1
    thr = params.p1_threshold
    recs.append(CheckRecord("P1", thr, mins[worst] if n else 0, bool(n) and mins[worst] >= thr, "exact", 0,
                            note=f"vertex {worst}"))
    # same minimum degree against the 3p*ell/4 form
    alt = 0.75 * params.p * n
    recs.append(CheckRecord("P1-contraction", alt, mins[worst] if n else 0, bool(n) and mins[worst] >= alt, "exact", 0))

    rng = substream(seed, "pseudorandom-audit")
    adj = np.zeros((n, n), dtype=np.int8)
    for u, v in H.edges:
        adj[u, v] = 1
    deg_total = adj.sum(0) + adj.sum(1)

    size2 = int(min(n, math.floor(params.p2_size)))
    worst2 = -math.inf
    ok2 = True
    cand2 = []
    if size2 >= 1:
        cand2.append(np.argsort(-deg_total, kind="stable")[:size2])
        for _ in range(samples):
            s = int(rng.integers(1, size2 + 1))
            cand2.append(rng.choice(n, size=s, replace=False))
    for X in cand2:
        e = int(adj[np.ix_(X, X)].sum())
        slack = e - params.p2_bound(len(X))
        worst2 = max(worst2, slack)
        ok2 &= slack <= 0
    recs.append(CheckRecord("P2", 0.0, worst2 if cand2 else 0.0, ok2, "sampled", len(cand2),
                            vacuous=size2 >= n))

    size3 = int(math.ceil(params.p3_size))
    cand3 = []
    if 2 * size3 <= n and size3 >= 1:
        order = np.argsort(-deg_total, kind="stable")
        cand3.append((order[:size3], order[size3:2 * size3]))
        for _ in range(samples):
            a = int(rng.integers(size3, n - size3 + 1))
            b = int(rng.integers(size3, n - a + 1))
            perm = rng.permutation(n)
            cand3.append((perm[:a], perm[a:a + b]))
    worst3 = -math.inf
    ok3 = True
    for X, Y in cand3:
        e = int(adj[np.ix_(X, Y)].sum())
        slack = e - params.p3_bound(len(X), len(Y))
        worst3 = max(worst3, slack)
        ok3 &= slack <= 0
    recs.append(CheckRecord("P3", 0.0, worst3 if cand3 else 0.0, ok3, "sampled", len(cand3),
                            vacuous=not cand3))
    return [r.as_dict() for r in recs]


# ------------------------------------------------------------ repair


def reroute_cycles(
    D: Digraph,
    cycles: list[HamiltonCycle],
    pending: set[Edge],
    seed: int = 0,
    budget: int = DEFAULT_BUDGET,
    rounds: int = 3,
) -> int:
    """Pull uncovered edges into existing cycles without uncovering anything.

    Each cycle is re-solved with the edges that no other cycle covers held
    fixed, plus as many pending edges as keep the forced set a linear
    forest. ``cycles`` and ``pending`` are updated in place; the number of
    absorbed edges is returned.
    """
    n = D.n
    count: dict[Edge, int] = {}
    for c in cycles:
        for e in c.edges():
            count[e] = count.get(e, 0) + 1
    absorbed = 0
    for rnd in range(rounds):
        if not pending:
            break
        before = len(pending)
        for idx in range(len(cycles)):
            if not pending:
                break
            old = cycles[idx]
            private = [e for e in old.edges() if count[e] == 1]
            free_slots = n - len(private)
            if free_slots < 2:
                continue
            cap = max(1, free_slots // 2)
            forced = extend_linear_forest(n, private, sorted(pending), cap=cap)
            if len(forced) == len(private):
                continue
            new = None
            for attempt, es in enumerate((forced, forced[: len(private) + max(1, (len(forced) - len(private)) // 2)])):
                try:
                    new = cover_forest(
                        D, LinearForest.from_edges(n, es), budget=budget,
                        seed=_mix(seed, rnd, idx, attempt), prefer=pending,
                    )
                    break
                except HamiltonNotFound:
                    continue
            if new is None:
                continue
            for e in old.edges():
                count[e] -= 1
            for e in new.edges():
                count[e] = count.get(e, 0) + 1
            gained = pending & new.edge_set()
            absorbed += len(gained)
            pending -= gained
            cycles[idx] = new
        if len(pending) == before:
            break
    return absorbed
