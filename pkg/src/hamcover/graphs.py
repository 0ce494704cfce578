"""Core graph types and independent verification of cycles and covers.

Vertices are 0-based integers internally. File formats (see :mod:`hamcover.io`)
use 1-based labels.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

Edge = tuple[int, int]

OUT = "out"
IN = "in"


class Digraph:
    """Loopless directed graph on ``range(n)``.

    Instances are treated as immutable; adjacency tuples are sorted so that
    iteration order never depends on hashing.
    """

    __slots__ = ("n", "edges", "out_adj", "in_adj")

    def __init__(self, n: int, edges: Iterable[Edge] = ()):
        if n < 0:
            raise ValueError("vertex count must be nonnegative")
        es = frozenset((int(u), int(v)) for u, v in edges)
        out: list[list[int]] = [[] for _ in range(n)]
        inn: list[list[int]] = [[] for _ in range(n)]
        for u, v in es:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            out[u].append(v)
            inn[v].append(u)
        self.n = n
        self.edges = es
        self.out_adj = tuple(tuple(sorted(a)) for a in out)
        self.in_adj = tuple(tuple(sorted(a)) for a in inn)

    def __repr__(self) -> str:
        return f"Digraph(n={self.n}, m={len(self.edges)})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Digraph):
            return NotImplemented
        return self.n == other.n and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.n, self.edges))

    def __len__(self) -> int:
        return len(self.edges)

    def __contains__(self, edge: object) -> bool:
        return edge in self.edges

    def has_edge(self, u: int, v: int) -> bool:
        return (u, v) in self.edges

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)

    def out_degree(self, v: int) -> int:
        return len(self.out_adj[v])

    def in_degree(self, v: int) -> int:
        return len(self.in_adj[v])

    @property
    def max_out_degree(self) -> int:
        return max((len(a) for a in self.out_adj), default=0)

    @property
    def max_in_degree(self) -> int:
        return max((len(a) for a in self.in_adj), default=0)

    @property
    def min_out_degree(self) -> int:
        return min((len(a) for a in self.out_adj), default=0)

    @property
    def min_in_degree(self) -> int:
        return min((len(a) for a in self.in_adj), default=0)

    @property
    def max_degree(self) -> int:
        """Delta(D): the larger of the maximum out- and in-degree."""
        return max(self.max_out_degree, self.max_in_degree)

    @property
    def min_degree(self) -> int:
        """delta(D): the smaller of the minimum out- and in-degree."""
        return min(self.min_out_degree, self.min_in_degree)

    def union(self, other: Iterable[Edge]) -> "Digraph":
        return Digraph(self.n, self.edges | frozenset(other))

    def difference(self, other: Iterable[Edge]) -> "Digraph":
        return Digraph(self.n, self.edges - frozenset(other))

    @classmethod
    def complete(cls, n: int) -> "Digraph":
        return cls(n, ((u, v) for u in range(n) for v in range(n) if u != v))

    @classmethod
    def cycle(cls, order: Sequence[int]) -> "Digraph":
        k = len(order)
        return cls(k, ((order[i], order[(i + 1) % k]) for i in range(k)))


class BipartiteGraph:
    """Balanced bipartite graph with parts X and Y, both copies of ``range(n)``.

    An edge ``(x, y)`` joins X-vertex ``x`` to Y-vertex ``y``; ``(x, y)`` and
    ``(y, x)`` are different edges.
    """

    __slots__ = ("n", "edges", "x_adj", "y_adj")

    def __init__(self, n: int, edges: Iterable[Edge] = ()):
        if n < 0:
            raise ValueError("part size must be nonnegative")
        es = frozenset((int(x), int(y)) for x, y in edges)
        xa: list[list[int]] = [[] for _ in range(n)]
        ya: list[list[int]] = [[] for _ in range(n)]
        for x, y in es:
            if not (0 <= x < n and 0 <= y < n):
                raise ValueError(f"edge ({x}, {y}) out of range for n={n}")
            xa[x].append(y)
            ya[y].append(x)
        self.n = n
        self.edges = es
        self.x_adj = tuple(tuple(sorted(a)) for a in xa)
        self.y_adj = tuple(tuple(sorted(a)) for a in ya)

    def __repr__(self) -> str:
        return f"BipartiteGraph(n={self.n}, m={len(self.edges)})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BipartiteGraph):
            return NotImplemented
        return self.n == other.n and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.n, self.edges))

    def __len__(self) -> int:
        return len(self.edges)

    def __contains__(self, edge: object) -> bool:
        return edge in self.edges

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)

    def x_degrees(self) -> list[int]:
        return [len(a) for a in self.x_adj]

    def y_degrees(self) -> list[int]:
        return [len(a) for a in self.y_adj]

    def degrees(self) -> list[int]:
        """All 2n degrees, X-part first."""
        return self.x_degrees() + self.y_degrees()

    @property
    def max_degree(self) -> int:
        return max(self.degrees(), default=0)

    @property
    def min_degree(self) -> int:
        return min(self.degrees(), default=0)

    @property
    def second_max_degree(self) -> int:
        """Delta_2(B): second largest entry of the merged degree list."""
        ds = sorted(self.degrees(), reverse=True)
        return ds[1] if len(ds) > 1 else 0

    def regular_degree(self) -> int | None:
        ds = set(self.degrees())
        if len(ds) == 1:
            return ds.pop()
        if not ds:
            return 0
        return None

    def without(self, removed: Iterable[Edge]) -> "BipartiteGraph":
        return BipartiteGraph(self.n, self.edges - frozenset(removed))

    def union(self, other: Iterable[Edge]) -> "BipartiteGraph":
        return BipartiteGraph(self.n, self.edges | frozenset(other))

    def transposed(self) -> "BipartiteGraph":
        """Swap the roles of X and Y."""
        return BipartiteGraph(self.n, ((y, x) for x, y in self.edges))

    def e(self, S: Iterable[int], T: Iterable[int]) -> int:
        """Number of edges between X-subset S and Y-subset T."""
        Tset = set(T)
        return sum(1 for x in set(S) for y in self.x_adj[x] if y in Tset)

    @classmethod
    def complete(cls, n: int) -> "BipartiteGraph":
        return cls(n, ((x, y) for x in range(n) for y in range(n)))


@dataclass(frozen=True)
class DegreeSequence:
    """The 2n out- and in-degrees of a digraph, nonincreasing, with attribution."""

    ordered: tuple[int, ...]
    attribution: tuple[tuple[int, str], ...]

    def __len__(self) -> int:
        return len(self.ordered)

    def __getitem__(self, i: int) -> int:
        return self.ordered[i]

    @property
    def top(self) -> tuple[int, str]:
        return self.attribution[0]

    @property
    def gap(self) -> int:
        """Delta_1 - Delta_2."""
        if len(self.ordered) < 2:
            return 0
        return self.ordered[0] - self.ordered[1]


def ordered_degree_sequence(D: Digraph) -> DegreeSequence:
    # ties: smaller vertex first, then out before in
    entries = [(D.out_degree(v), v, 0) for v in range(D.n)]
    entries += [(D.in_degree(v), v, 1) for v in range(D.n)]
    entries.sort(key=lambda e: (-e[0], e[1], e[2]))
    return DegreeSequence(
        ordered=tuple(d for d, _, _ in entries),
        attribution=tuple((v, OUT if s == 0 else IN) for _, v, s in entries),
    )


def reverse_orientation(D: Digraph) -> Digraph:
    return Digraph(D.n, ((v, u) for u, v in D.edges))


@dataclass(frozen=True)
class HamiltonCycle:
    """Cyclic visit order of all vertices."""

    order: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "order", tuple(int(v) for v in self.order))

    def __len__(self) -> int:
        return len(self.order)

    def __iter__(self) -> Iterator[int]:
        return iter(self.order)

    def edges(self) -> list[Edge]:
        k = len(self.order)
        if k < 2:
            return []
        return [(self.order[i], self.order[(i + 1) % k]) for i in range(k)]

    def edge_set(self) -> frozenset[Edge]:
        return frozenset(self.edges())

    def reversed(self) -> "HamiltonCycle":
        return HamiltonCycle(tuple(reversed(self.order)))

    def canonical(self) -> "HamiltonCycle":
        """Rotate so the smallest vertex comes first."""
        if not self.order:
            return self
        i = self.order.index(min(self.order))
        return HamiltonCycle(self.order[i:] + self.order[:i])


def verify_hamilton_cycle(
    host: Digraph, cycle: HamiltonCycle | Sequence[int], extra: Iterable[Edge] = ()
) -> bool:
    """True iff ``cycle`` visits every vertex once along edges of host or extra."""
    order = tuple(cycle.order if isinstance(cycle, HamiltonCycle) else cycle)
    n = host.n
    if n < 2 or len(order) != n or sorted(order) != list(range(n)):
        return False
    extra_set = frozenset(extra)
    for i in range(n):
        e = (order[i], order[(i + 1) % n])
        if e not in host.edges and e not in extra_set:
            return False
    return True


@dataclass
class CoverCertificate:
    cycles: list[HamiltonCycle]
    witness: dict[Edge, int] = field(default_factory=dict)
    stage_tags: list[str] = field(default_factory=list)

    STAGES = ("forest-stage", "residual-stage", "reserved-stage", "fallback")

    def __len__(self) -> int:
        return len(self.cycles)

    def tag_counts(self) -> Counter:
        return Counter(self.stage_tags)


def build_witness(D: Digraph, cycles: Sequence[HamiltonCycle]) -> dict[Edge, int]:
    """Map each edge of D to the first cycle that traverses it."""
    witness: dict[Edge, int] = {}
    for idx, c in enumerate(cycles):
        for e in c.edges():
            if e in D.edges and e not in witness:
                witness[e] = idx
    return witness


@dataclass(frozen=True)
class CoverReport:
    valid: bool
    size: int
    uncovered: list[Edge]
    invalid_cycles: list[int]
    witness_errors: list[Edge]


def verify_cover(D: Digraph, cert: CoverCertificate) -> CoverReport:
    """Check a certificate from scratch; stage metadata is ignored."""
    bad = [i for i, c in enumerate(cert.cycles) if not verify_hamilton_cycle(D, c)]
    covered: set[Edge] = set()
    edge_sets = []
    for c in cert.cycles:
        es = c.edge_set()
        edge_sets.append(es)
        covered |= es
    uncovered = sorted(D.edges - covered)
    witness_errors = []
    if cert.witness:
        for e in sorted(D.edges):
            idx = cert.witness.get(e)
            if idx is None or not (0 <= idx < len(edge_sets)) or e not in edge_sets[idx]:
                witness_errors.append(e)
    valid = not bad and not uncovered and not witness_errors
    return CoverReport(valid, len(cert.cycles), uncovered, bad, witness_errors)


def edge_multiset(parts: Iterable[Iterable[Edge]]) -> Counter:
    total: Counter = Counter()
    for part in parts:
        total.update(part)
    return total


def max_degree_of_edges(n: int, edges: Iterable[Edge]) -> int:
    """Delta of the digraph spanned by ``edges`` (parallel copies counted)."""
    outd = [0] * n
    ind = [0] * n
    for u, v in edges:
        outd[u] += 1
        ind[v] += 1
    return max(max(outd, default=0), max(ind, default=0))


def relabel(D: Digraph, mapping: Mapping[int, int] | Sequence[int]) -> Digraph:
    return Digraph(D.n, ((mapping[u], mapping[v]) for u, v in D.edges))
