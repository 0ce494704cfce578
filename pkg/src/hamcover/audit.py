"""Finite-n audits of the concentration properties that random inputs satisfy with high probability.

Exact checks use degree data only. Subset conditions quantify over
exponentially many sets, so they are tested on random subsets plus a few
extremal candidates; such records say ``method="sampled"`` and are a
statistical audit rather than a proof. The o(1) slack terms are instantiated
as 1/ln n.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .graphs import BipartiteGraph, Digraph, ordered_degree_sequence
from .rng import substream

FIELDS = ("name", "threshold", "observed", "pass", "method", "samples", "vacuous", "note")


@dataclass
class CheckRecord:
    name: str
    threshold: float
    observed: float
    passed: bool
    method: str
    samples: int = 0
    vacuous: bool = False
    note: str = ""

    def as_dict(self) -> dict:
        d = asdict(self)
        d["pass"] = d.pop("passed")
        return {k: d[k] for k in FIELDS}


@dataclass
class TypicalityReport:
    checks: list[CheckRecord] = field(default_factory=list)

    def by_name(self, name: str) -> list[CheckRecord]:
        return [c for c in self.checks if c.name == name]

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def records(self) -> list[dict]:
        return [c.as_dict() for c in self.checks]

    def to_lines(self) -> list[str]:
        lines = [",".join(FIELDS)]
        for r in self.records():
            lines.append(",".join(str(r[k]) for k in FIELDS))
        return lines


def _ln(n: int) -> float:
    return math.log(n) if n > 1 else 1.0


def typicality_audit(
    G: BipartiteGraph | Digraph, p: float, samples: int = 1000, seed: int = 0
) -> TypicalityReport:
    if not 0 < p <= 1:
        raise ValueError("p must lie in (0, 1]")
    if isinstance(G, BipartiteGraph):
        return _bipartite_audit(G, p, samples, seed)
    return _digraph_audit(G, p, samples, seed)


# ------------------------------------------------------------ bipartite


def _adjacency(B: BipartiteGraph) -> np.ndarray:
    A = np.zeros((B.n, B.n), dtype=np.int32)
    for x, y in B.edges:
        A[x, y] = 1
    return A


def _singleton_shape(A: np.ndarray, p: float, L: float) -> float:
    """|S| = 1 against every admissible |T|; min and max of e(S, T) are exact.

    For one row with d ones, the extremes over |T| = t are max(0, t-(n-d))
    and min(d, t).
    """
    n = A.shape[0]
    degs = A.sum(1)
    t_lo = max(1, math.ceil(n - math.sqrt(L)))
    worst = 0.0
    for t in range(t_lo, n + 1):
        lo = np.maximum(0, t - (n - degs))
        hi = np.minimum(degs, t)
        base = t * p
        worst = max(worst, float(np.max(np.abs(lo / base - 1))), float(np.max(np.abs(hi / base - 1))))
    return worst


def _bipartite_audit(B: BipartiteGraph, p: float, samples: int, seed: int) -> TypicalityReport:
    n = B.n
    L = _ln(n)
    eps = 1 / L**2
    rep = TypicalityReport()
    A = _adjacency(B)
    small = n / L ** (2 / 3)
    note_b = "with s*sqrt(ln n) + t >= n"

    obs_b = _singleton_shape(A, p, L)
    rep.checks.append(CheckRecord("B1", eps, obs_b, obs_b <= eps, "exact", 0, small >= n,
                                  note="case (b), |S|=1, every admissible T, " + note_b))
    obs_c = _singleton_shape(A.T, p, L)
    rep.checks.append(CheckRecord("B1", eps, obs_c, obs_c <= eps, "exact", 0, small >= n,
                                  note="case (c), |T|=1, every admissible S, " + note_b))

    # case (a): both sides at least n / ln^{2/3} n
    rng = substream(seed, "goodness")
    s0 = max(1, math.ceil(small))
    worst = 0.0
    count = 0
    if s0 <= n:
        xo = np.argsort(-A.sum(1), kind="stable")
        yo = np.argsort(-A.sum(0), kind="stable")
        cands = [(xo[:s0], yo[:s0]), (xo[-s0:], yo[-s0:]), (xo[:s0], yo[-s0:]), (xo[-s0:], yo[:s0])]
        for _ in range(samples):
            s = int(rng.integers(s0, n + 1))
            t = int(rng.integers(s0, n + 1))
            cands.append((rng.choice(n, s, replace=False), rng.choice(n, t, replace=False)))
        for S, T in cands:
            e = int(A[np.ix_(S, T)].sum())
            worst = max(worst, abs(e / (len(S) * len(T) * p) - 1))
            count += 1
    rep.checks.append(CheckRecord("goodness", eps, worst, worst <= eps, "sampled", count, s0 > n,
                                  note="case (a)"))

    degs = B.degrees()
    gap = max(degs) - min(degs)
    thr = 4 * math.sqrt(n * p * L)
    rep.checks.append(CheckRecord("B2", thr, gap, gap < thr, "exact", 0, note="max minus min degree"))
    rel = abs(max(degs) / (n * p) - 1)
    rep.checks.append(CheckRecord("B2", 1 / L, rel, rel <= 1 / L, "exact", 0, note="max degree relative to np"))

    ds = sorted(degs, reverse=True)
    third = ds[2] if len(ds) > 2 else 0
    obs = ds[1] - third
    thr = math.sqrt(n * p) / L
    rep.checks.append(CheckRecord("B3", thr, obs, obs >= thr, "exact", 0, note="second minus third largest degree"))
    return rep


# ------------------------------------------------------------ digraph


def _digraph_audit(D: Digraph, p: float, samples: int, seed: int) -> TypicalityReport:
    n = D.n
    L = _ln(n)
    rep = TypicalityReport()
    A = np.zeros((n, n), dtype=np.int32)
    for u, v in D.edges:
        A[u, v] = 1
    np_ = n * p

    outs = A.sum(1)
    ins = A.sum(0)
    rel = float(max(np.max(np.abs(outs / np_ - 1)), np.max(np.abs(ins / np_ - 1)))) if n else 0.0
    rep.checks.append(CheckRecord("D1", 1 / L, rel, rel <= 1 / L, "exact", 0,
                                  note="largest relative deviation of any degree from np"))

    rng = substream(seed, "digraph-audit")
    size2 = min(n, int(2 * L**2 / p))
    worst = -math.inf
    cnt = 0
    if size2 >= 1:
        top = np.argsort(-(outs + ins), kind="stable")
        cands = [top[:size2]]
        for _ in range(samples):
            s = int(rng.integers(1, size2 + 1))
            cands.append(rng.choice(n, s, replace=False))
        for X in cands:
            e = int(A[np.ix_(X, X)].sum())
            worst = max(worst, e - 12 * len(X) * L**2)
            cnt += 1
    vac = 12 * L**2 >= size2 - 1
    rep.checks.append(CheckRecord("D2", 0.0, worst if cnt else 0.0, worst <= 0 if cnt else True, "sampled", cnt, vac,
                                  note="observed is max of e(X) - 12|X|ln^2 n"))

    size3 = math.ceil(L**1.05 / p)
    worst = -math.inf
    cnt = 0
    if size3 <= n:
        top = np.argsort(-outs, kind="stable")
        topi = np.argsort(-ins, kind="stable")
        cands = [(top[:size3], topi[:size3])]
        for _ in range(samples):
            a = int(rng.integers(size3, n + 1))
            b = int(rng.integers(size3, n + 1))
            cands.append((rng.choice(n, a, replace=False), rng.choice(n, b, replace=False)))
        for X, Y in cands:
            e = int(A[np.ix_(X, Y)].sum())
            worst = max(worst, e / (len(X) * len(Y) * p) - 1)
            cnt += 1
    rep.checks.append(CheckRecord("D3", 1 / L, worst if cnt else 0.0, worst <= 1 / L if cnt else True, "sampled", cnt,
                                  size3 > n, note="observed is max of e(X,Y)/(|X||Y|p) - 1"))

    seq = ordered_degree_sequence(D)
    thr = math.sqrt(np_) / (2 * L)
    rep.checks.append(CheckRecord("degree-gap", thr, seq.gap, seq.gap >= thr, "exact", 0,
                                  note=f"top degree at vertex {seq.top[0]} ({seq.top[1]})"))
    return rep
