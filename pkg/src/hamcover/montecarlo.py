"""Vectorised Monte Carlo estimators for permutation cycle statistics and model equivalence."""

from __future__ import annotations

import csv
import math
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy import stats

from .rng import substream

TASKS = ("two_pow_C", "cycle_length_law", "inv_c_moment", "model_equivalence")
ALIASES = {"two-pow-c": "two_pow_C", "cycle-law": "cycle_length_law", "inv-c": "inv_c_moment", "model-eq": "model_equivalence"}
MIN_SAMPLES = 1000


def random_permutations(rng: np.random.Generator, samples: int, n: int) -> np.ndarray:
    """``samples`` independent uniform permutations of range(n), one per row."""
    return np.argsort(rng.random((samples, n)), axis=1)


def cycle_counts(perms: np.ndarray) -> np.ndarray:
    """Number of cycles of each row; a vertex is counted when it is the minimum of its cycle."""
    s, n = perms.shape
    rows = np.arange(s)[:, None]
    cur = np.broadcast_to(np.arange(n), (s, n)).copy()
    low = cur.copy()
    for _ in range(n):
        cur = perms[rows, cur]
        np.minimum(low, cur, out=low)
    return (low == np.arange(n)).sum(axis=1)


def cycle_length_at(perms: np.ndarray, v: int) -> np.ndarray:
    s, n = perms.shape
    rows = np.arange(s)
    cur = perms[rows, v]
    length = np.ones(s, dtype=np.int64)
    done = cur == v
    for _ in range(n):
        if done.all():
            break
        cur = np.where(done, cur, perms[rows, cur])
        length += ~done
        done = done | (cur == v)
    return length


def _check(samples: int) -> None:
    if samples < MIN_SAMPLES:
        raise ValueError(f"at least {MIN_SAMPLES} samples are required")


def two_pow_c(n: int, samples: int = 100_000, seed: int = 0) -> dict:
    """Mean of 2^C over uniform permutations, against the exact value n + 1."""
    _check(samples)
    rng = substream(seed, "two_pow_C", n)
    C = cycle_counts(random_permutations(rng, samples, n))
    vals = np.exp2(C.astype(np.float64))
    est = float(vals.mean())
    se = float(vals.std(ddof=1) / math.sqrt(samples))
    target = n + 1
    return {"task": "two_pow_C", "n": n, "samples": samples, "estimate": est, "se": se,
            "target": target, "rel_error": abs(est - target) / target}


def cycle_length_law(n: int, samples: int = 100_000, seed: int = 0, v: int = 0) -> dict:
    """Length of the cycle through v in pi composed with a fixed perfect matching.

    The composition is again uniform, so every length 1..n has probability 1/n.
    """
    _check(samples)
    rng = substream(seed, "cycle_length_law", n)
    match = (np.arange(n) + 1) % n  # a fixed perfect matching x -> x+1
    pis = random_permutations(rng, samples, n)
    sigma = pis[:, match]
    lengths = cycle_length_at(sigma, v)
    freq = np.bincount(lengths, minlength=n + 1)[1:]
    chi = stats.chisquare(freq)
    return {"task": "cycle_length_law", "n": n, "samples": samples,
            "frequencies": (freq / samples).tolist(), "target": 1 / n,
            "chi2": float(chi.statistic), "p_value": float(chi.pvalue)}


def inv_c_moment(grid: Sequence[int] = (50, 100, 200), r_fraction: float = 0.25,
                 samples: int = 1000, seed: int = 0, r: int | None = None) -> list[dict]:
    """Third moment of sum_i 1/c_i over r disjoint shift matchings, scaled by (r/n) ln^3 n."""
    _check(samples)
    rows = []
    for n in grid:
        rr = r if r is not None else max(1, int(n * r_fraction))
        rng = substream(seed, "inv_c_moment", n, rr)
        pis = random_permutations(rng, samples, n)
        total = np.zeros(samples)
        for i in range(rr):
            match = (np.arange(n) + i) % n
            total += 1.0 / cycle_length_at(pis[:, match], 0)
        m3 = float(np.mean(total**3))
        scale = rr / n * math.log(n) ** 3
        rows.append({"task": "inv_c_moment", "n": n, "r": rr, "samples": samples,
                     "third_moment": m3, "se": float(np.std(total**3, ddof=1) / math.sqrt(samples)),
                     "scale": scale, "ratio": m3 / scale})
    return rows


def projected_samples(n: int, p: float, samples: int, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Edge count and out-degree of vertex 0 for projections of B_{n,p} through uniform pi.

    Pair (x, y) of B becomes x -> pi(y) unless pi(y) = x, so the dropped pairs
    are exactly (x, pi^{-1}(x)).
    """
    edges = np.empty(samples, dtype=np.int64)
    deg0 = np.empty(samples, dtype=np.int64)
    chunk = 500
    for start in range(0, samples, chunk):
        k = min(chunk, samples - start)
        B = rng.random((k, n, n)) < p
        pis = random_permutations(rng, k, n)
        edges[start:start + k], deg0[start:start + k] = projected_counts(B, pis)
    return edges, deg0


def projected_counts(B: np.ndarray, pis: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Edge count and out-degree of vertex 0 of each projection, from stacked adjacency matrices."""
    k, n, _ = B.shape
    inv = np.argsort(pis, axis=1)
    loops = B[np.arange(k)[:, None], np.arange(n)[None, :], inv]
    return B.sum(axis=(1, 2)) - loops.sum(axis=1), B[:, 0, :].sum(axis=1) - loops[:, 0]


def direct_samples(n: int, p: float, samples: int, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    edges = np.empty(samples, dtype=np.int64)
    deg0 = np.empty(samples, dtype=np.int64)
    off = ~np.eye(n, dtype=bool)
    chunk = 500
    for start in range(0, samples, chunk):
        k = min(chunk, samples - start)
        A = (rng.random((k, n, n)) < p) & off
        edges[start:start + k] = A.sum(axis=(1, 2))
        deg0[start:start + k] = A[:, 0, :].sum(axis=1)
    return edges, deg0


def model_equivalence(n: int = 25, p: float = 0.4, samples: int = 5000, seed: int = 0) -> dict:
    """Two-sample tests between projected and directly sampled digraphs."""
    _check(samples)
    e1, d1 = projected_samples(n, p, samples, substream(seed, "model-eq", "projected"))
    e2, d2 = direct_samples(n, p, samples, substream(seed, "model-eq", "direct"))
    ks = stats.ks_2samp(e1, e2)
    support = np.arange(n)
    table = np.array([np.bincount(d1, minlength=n)[support], np.bincount(d2, minlength=n)[support]])
    table = table[:, table.sum(axis=0) > 0]
    chi = stats.chi2_contingency(table)
    return {"task": "model_equivalence", "n": n, "p": p, "samples": samples,
            "edge_mean_projected": float(e1.mean()), "edge_mean_direct": float(e2.mean()),
            "edge_target": p * n * (n - 1),
            "edge_ks_p": float(ks.pvalue), "degree_chi2_p": float(chi.pvalue),
            "degree_mean_projected": float(d1.mean()), "degree_mean_direct": float(d2.mean())}


def monte_carlo(task: str, seed: int = 0, **params) -> list[dict]:
    task = ALIASES.get(task, task)
    if task == "two_pow_C":
        return [two_pow_c(seed=seed, **params)]
    if task == "cycle_length_law":
        return [cycle_length_law(seed=seed, **params)]
    if task == "inv_c_moment":
        return inv_c_moment(seed=seed, **params)
    if task == "model_equivalence":
        return [model_equivalence(seed=seed, **params)]
    raise ValueError(f"unknown task {task!r}; choose from {', '.join(TASKS)}")


def write_csv(path: str | Path, rows: list[dict]) -> None:
    keys: list[str] = []
    for r in rows:
        keys += [k for k in r if k not in keys]
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=keys)
        w.writeheader()
        for r in rows:
            w.writerow({k: (";".join(f"{x:.6g}" for x in v) if isinstance(v, list) else v) for k, v in r.items()})
