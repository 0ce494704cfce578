"""Random digraphs, random bipartite graphs, permutations and the projection model."""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .graphs import BipartiteGraph, Digraph
from .rng import as_generator


class Permutation:
    """Bijection on ``range(n)`` with a cached cycle decomposition."""

    __slots__ = ("image", "_cycles", "_inverse")

    def __init__(self, image: Iterable[int]):
        img = tuple(int(i) for i in image)
        if sorted(img) != list(range(len(img))):
            raise ValueError("image is not a permutation of range(n)")
        self.image = img
        self._cycles: tuple[tuple[int, ...], ...] | None = None
        self._inverse: tuple[int, ...] | None = None

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(range(n))

    @classmethod
    def from_cycles(cls, n: int, cycles: Iterable[Sequence[int]]) -> "Permutation":
        img = list(range(n))
        for c in cycles:
            for i, v in enumerate(c):
                img[v] = c[(i + 1) % len(c)]
        return cls(img)

    def __len__(self) -> int:
        return len(self.image)

    def __call__(self, i: int) -> int:
        return self.image[i]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Permutation) and self.image == other.image

    def __hash__(self) -> int:
        return hash(self.image)

    def __repr__(self) -> str:
        return f"Permutation({list(self.image)})"

    @property
    def n(self) -> int:
        return len(self.image)

    @property
    def inverse_image(self) -> tuple[int, ...]:
        if self._inverse is None:
            inv = [0] * len(self.image)
            for i, j in enumerate(self.image):
                inv[j] = i
            self._inverse = tuple(inv)
        return self._inverse

    def inverse(self) -> "Permutation":
        return Permutation(self.inverse_image)

    def compose(self, inner: "Permutation | Sequence[int]") -> "Permutation":
        """``self ∘ inner``: i -> self(inner(i))."""
        m = inner.image if isinstance(inner, Permutation) else inner
        return Permutation(self.image[j] for j in m)

    @property
    def cycles(self) -> tuple[tuple[int, ...], ...]:
        """Cycles including fixed points, each starting at its smallest element."""
        if self._cycles is None:
            seen = [False] * len(self.image)
            out = []
            for s in range(len(self.image)):
                if seen[s]:
                    continue
                cyc = []
                v = s
                while not seen[v]:
                    seen[v] = True
                    cyc.append(v)
                    v = self.image[v]
                out.append(tuple(cyc))
            self._cycles = tuple(out)
        return self._cycles

    @property
    def num_cycles(self) -> int:
        return len(self.cycles)

    def cycle_length_of(self, v: int) -> int:
        k, w = 1, self.image[v]
        while w != v:
            w = self.image[w]
            k += 1
        return k


def _check_p(p: float) -> float:
    p = float(p)
    if not (0.0 <= p <= 1.0) or np.isnan(p):
        raise ValueError(f"edge probability must lie in [0, 1], got {p}")
    return p


def sample_digraph(n: int, p: float, rng: np.random.Generator | int | None = None) -> Digraph:
    """D_{n,p}: each ordered pair u != v independently with probability p."""
    if n < 1:
        raise ValueError("n must be positive")
    p = _check_p(p)
    gen = as_generator(rng)
    A = gen.random((n, n)) < p
    np.fill_diagonal(A, False)
    us, vs = np.nonzero(A)
    return Digraph(n, zip(us.tolist(), vs.tolist()))


def sample_bipartite(n: int, p: float, rng: np.random.Generator | int | None = None) -> BipartiteGraph:
    """B_{n,p}: each of the n^2 pairs xy independently with probability p."""
    if n < 1:
        raise ValueError("n must be positive")
    p = _check_p(p)
    gen = as_generator(rng)
    A = gen.random((n, n)) < p
    xs, ys = np.nonzero(A)
    return BipartiteGraph(n, zip(xs.tolist(), ys.tolist()))


def sample_permutation(n: int, rng: np.random.Generator | int | None = None) -> Permutation:
    """Uniform permutation by a Fisher-Yates shuffle."""
    if n < 1:
        raise ValueError("n must be positive")
    gen = as_generator(rng)
    img = list(range(n))
    for i in range(n - 1, 0, -1):
        j = int(gen.integers(0, i + 1))
        img[i], img[j] = img[j], img[i]
    return Permutation(img)


def sample(model: str, n: int, p: float | None = None, rng: np.random.Generator | int | None = None):
    if model == "digraph":
        return sample_digraph(n, 0.0 if p is None else p, rng)
    if model == "bipartite":
        return sample_bipartite(n, 0.0 if p is None else p, rng)
    if model in ("perm", "permutation"):
        return sample_permutation(n, rng)
    raise ValueError(f"unknown model {model!r}")


def project(B: BipartiteGraph, pi: Permutation) -> Digraph:
    """D_pi(B): edge i -> j iff i pi^{-1}(j) is in B and i != j."""
    if B.n != pi.n:
        raise ValueError(f"size mismatch: B has n={B.n}, permutation has n={pi.n}")
    img = pi.image
    return Digraph(B.n, ((x, img[y]) for x, y in B.edges if img[y] != x))


def lift(D: Digraph, pi: Permutation) -> BipartiteGraph:
    """A bipartite graph B with ``project(B, pi) == D`` and no projected loops."""
    if D.n != pi.n:
        raise ValueError("size mismatch")
    inv = pi.inverse_image
    return BipartiteGraph(D.n, ((u, inv[v]) for u, v in D.edges))


def flip_model(B: BipartiteGraph, pi: Permutation) -> tuple[BipartiteGraph, Permutation]:
    """Bipartite model of the reversed digraph.

    If ``D = project(B, pi)`` then ``reverse_orientation(D) ==
    project(B2, pi2)`` where ``B2 = {(pi(y), pi(x)) : xy in B}`` and
    ``pi2 = pi^{-1}``. The Y-vertex y of B becomes the X-vertex pi(y) of B2.
    """
    img = pi.image
    B2 = BipartiteGraph(B.n, ((img[y], img[x]) for x, y in B.edges))
    return B2, pi.inverse()
