"""Proper edge colouring of loopless multigraphs with at most Δ + μ colours.

Edges are coloured one at a time. For an uncoloured edge xy0 a fan of edges
at x is grown: an edge joins the fan when its colour is missing at some
earlier fan vertex (its parent). If a fan vertex shares a free colour with x
the colours are shifted along the parent chain. Otherwise two distinct fan
vertices share a free colour beta (a counting argument guarantees this
with Δ + μ colours), and swapping one alpha/beta Kempe chain frees alpha at
one of them without disturbing the chain back to the root.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

from .graphs import Digraph, Edge


@dataclass(frozen=True)
class Multigraph:
    """Undirected multigraph; parallel edges are distinct by index."""

    n: int
    edges: tuple[tuple[int, int], ...]
    origin: tuple[Edge, ...] = ()

    def __post_init__(self) -> None:
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u}, {v}) out of range")
        if self.origin and len(self.origin) != len(self.edges):
            raise ValueError("origin must give one entry per edge")

    def degrees(self) -> list[int]:
        deg = [0] * self.n
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    @property
    def max_degree(self) -> int:
        return max(self.degrees(), default=0)

    @property
    def multiplicity(self) -> int:
        c = Counter((min(u, v), max(u, v)) for u, v in self.edges)
        return max(c.values(), default=0)


def underlying_multigraph(R: Digraph) -> Multigraph:
    es = R.sorted_edges()
    return Multigraph(R.n, tuple(es), tuple(es))


@dataclass(frozen=True)
class EdgeColoring:
    color: tuple[int, ...]
    palette_size: int

    def classes(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.palette_size)]
        for i, c in enumerate(self.color):
            out[c].append(i)
        return out


def is_proper(G: Multigraph, color: Sequence[int]) -> bool:
    seen: set[tuple[int, int]] = set()
    for (u, v), c in zip(G.edges, color):
        if c < 0 or (u, c) in seen or (v, c) in seen:
            return False
        seen.add((u, c))
        seen.add((v, c))
    return True


class _State:
    def __init__(self, G: Multigraph, k: int):
        self.G = G
        self.k = k
        self.color = [-1] * len(G.edges)
        # at[v][c] = index of the edge of colour c at v, or -1
        self.at = [[-1] * k for _ in range(G.n)]

    def other(self, e: int, v: int) -> int:
        a, b = self.G.edges[e]
        return b if a == v else a

    def free(self, v: int) -> list[int]:
        row = self.at[v]
        return [c for c in range(self.k) if row[c] < 0]

    def is_free(self, v: int, c: int) -> bool:
        return self.at[v][c] < 0

    def set(self, e: int, c: int) -> None:
        a, b = self.G.edges[e]
        old = self.color[e]
        if old >= 0:
            self.at[a][old] = -1
            self.at[b][old] = -1
        self.color[e] = c
        if c >= 0:
            self.at[a][c] = e
            self.at[b][c] = e

    def chain(self, v: int, first: int, second: int) -> tuple[list[int], int]:
        """Edges of the first/second alternating path leaving v, and its far end."""
        edges = []
        c, w = first, v
        while True:
            e = self.at[w][c]
            if e < 0:
                return edges, w
            edges.append(e)
            w = self.other(e, w)
            c = second if c == first else first

    def swap(self, edges: list[int], a: int, b: int) -> None:
        cols = [self.color[e] for e in edges]
        for e in edges:
            self.set(e, -1)
        for e, c in zip(edges, cols):
            self.set(e, b if c == a else a)


def _color_edge(st: _State, e0: int) -> None:
    x, y0 = st.G.edges[e0]
    fx = set(st.free(x))
    fan_edges = [e0]
    fan_vertex = [y0]
    parent = [-1]
    first_index: dict[int, int] = {y0: 0}
    in_fan = {e0}

    def shift(target: int, alpha: int) -> None:
        chain = []
        i = target
        while i != -1:
            chain.append(i)
            i = parent[i]
        chain.reverse()  # root .. target
        new = [st.color[fan_edges[chain[j + 1]]] for j in range(len(chain) - 1)] + [alpha]
        for j in chain:
            st.set(fan_edges[j], -1)
        for j, c in zip(chain, new):
            st.set(fan_edges[j], c)

    i = 0
    while i < len(fan_edges):
        v = fan_vertex[i]
        fv = st.free(v)
        common = [c for c in fv if c in fx]
        if common:
            shift(i, common[0])
            return
        if first_index[v] == i:
            # a colour free at two distinct fan vertices
            for c in fv:
                for j in range(i):
                    w = fan_vertex[j]
                    if w != v and first_index[w] == j and st.is_free(w, c):
                        _resolve(st, x, fx, j, i, c, fan_vertex, shift)
                        return
            for c in fv:
                e = st.at[x][c]
                if e >= 0 and e not in in_fan:
                    in_fan.add(e)
                    fan_edges.append(e)
                    w = st.other(e, x)
                    fan_vertex.append(w)
                    parent.append(i)
                    first_index.setdefault(w, len(fan_edges) - 1)
        i += 1
    raise AssertionError("fan closed without a free colour; palette too small")


def _resolve(st: _State, x: int, fx: set[int], i: int, j: int, beta: int, fan_vertex, shift) -> None:
    """Fan vertices i < j both miss beta and neither shares a free colour with x.

    x misses alpha, so x ends its own alpha/beta chain. If the chain at y_j
    avoids x, swapping it frees alpha at y_j (and at y_i too when the chain
    ends there, in which case shifting from i keeps every parent link valid).
    Otherwise the chain at y_i avoids x and is swapped instead.
    """
    alpha = min(fx)
    yi, yj = fan_vertex[i], fan_vertex[j]
    path_j, end_j = st.chain(yj, alpha, beta)
    if end_j != x:
        st.swap(path_j, alpha, beta)
        shift(i if end_j == yi else j, alpha)
        return
    path_i, _ = st.chain(yi, alpha, beta)
    st.swap(path_i, alpha, beta)
    shift(i, alpha)


def proper_edge_color(G: Multigraph, palette: int | None = None) -> EdgeColoring:
    """Colour G properly with ``palette`` colours (default Δ + μ)."""
    if not G.edges:
        return EdgeColoring((), 0)
    k = palette if palette is not None else G.max_degree + G.multiplicity
    st = _State(G, k)
    for e in range(len(G.edges)):
        _color_edge(st, e)
    if not is_proper(G, st.color):
        raise AssertionError("colouring is not proper")
    used = sorted(set(st.color))
    remap = {c: i for i, c in enumerate(used)}
    return EdgeColoring(tuple(remap[c] for c in st.color), len(used))


def directed_matchings(G: Multigraph, coloring: EdgeColoring) -> list[list[Edge]]:
    """Colour classes pulled back to the directed edges they came from."""
    src = G.origin or G.edges
    return [sorted(src[i] for i in cls) for cls in coloring.classes()]


def greedy_edge_color(G: Multigraph) -> EdgeColoring:
    """First-fit colouring with at most 2Δ - 1 colours."""
    k = max(1, 2 * G.max_degree - 1)
    st = _State(G, k)
    for e, (u, v) in enumerate(G.edges):
        for c in range(k):
            if st.is_free(u, c) and st.is_free(v, c):
                st.set(e, c)
                break
    used = sorted(set(st.color))
    remap = {c: i for i, c in enumerate(used)}
    return EdgeColoring(tuple(remap[c] for c in st.color), len(used))


def multigraph_from_pairs(n: int, pairs: Iterable[tuple[int, int]]) -> Multigraph:
    es = tuple((int(u), int(v)) for u, v in pairs)
    return Multigraph(n, es, tuple(es))
