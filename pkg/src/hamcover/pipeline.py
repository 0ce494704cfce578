"""End-to-end covering of a digraph by Hamilton cycles, with size accounting."""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from typing import Any

from .coloring import directed_matchings, greedy_edge_color, proper_edge_color, underlying_multigraph
from .factors import MatchingCoverError
from .forests import ForestCoverPlan, almost_forest_cover, choose_anchor, trivial_plan
from .graphs import (
    CoverCertificate,
    Digraph,
    Edge,
    HamiltonCycle,
    build_witness,
    ordered_degree_sequence,
    reverse_orientation,
    verify_cover,
)
from .hamilton import (
    DEFAULT_BUDGET,
    DEFAULT_RETRIES,
    HamiltonNotFound,
    ReservedStageError,
    cover_forest,
    cover_forest_family,
    cover_matching_with_reserved,
    extend_linear_forest,
    reroute_cycles,
)
from .forests import LinearForest
from .models import flip_model, lift, project, sample_bipartite, sample_permutation
from .rng import substream

log = logging.getLogger(__name__)

STRICT = "strict"
ADAPTIVE = "adaptive"


class StrictAbort(Exception):
    """A checkable precondition failed in strict mode."""

    def __init__(self, stage: str, message: str):
        super().__init__(f"{stage}: {message}")
        self.stage = stage


class CoverFailure(Exception):
    """The assembled certificate did not verify, or an edge could not be covered."""


@dataclass(frozen=True)
class RunConfig:
    n: int = 100
    p: float = 0.3
    seed: int = 0
    mode: str = ADAPTIVE
    solver_budget: int = DEFAULT_BUDGET
    retry_cap: int = DEFAULT_RETRIES
    trials: int = 1
    digraph: Digraph | None = None

    def __post_init__(self) -> None:
        if self.mode not in (STRICT, ADAPTIVE):
            raise ValueError(f"mode must be {STRICT!r} or {ADAPTIVE!r}")
        if self.digraph is None:
            if self.n < 1:
                raise ValueError("n must be positive")
            if not 0 <= self.p <= 1:
                raise ValueError("p must lie in [0, 1]")
        if self.solver_budget < 1 or self.retry_cap < 1:
            raise ValueError("budget and retry cap must be positive")

    @property
    def strict(self) -> bool:
        return self.mode == STRICT


@dataclass
class RunReport:
    cover_size: int
    delta1: int
    t: int
    reserved: int
    palette: int
    reserved_sizes: list[int]
    fallback_cycles: int
    stage_counts: dict[str, int]
    audits: dict[str, Any] = field(default_factory=dict)
    fallback_log: list[str] = field(default_factory=list)
    flipped: bool = False
    valid: bool = False
    wall_time: float = 0.0

    @property
    def excess(self) -> int:
        return self.cover_size - self.delta1

    @property
    def count_identity(self) -> bool:
        return self.t + self.reserved == self.delta1

    def manifest(self, config: RunConfig) -> dict[str, Any]:
        """Deterministic key-value record; wall time is left out so replays match byte for byte."""
        out: dict[str, Any] = {
            "n": config.n if config.digraph is None else config.digraph.n,
            "p": config.p,
            "seed": config.seed,
            "mode": config.mode,
            "budget": config.solver_budget,
            "retries": config.retry_cap,
            "valid": self.valid,
            "cover_size": self.cover_size,
            "delta1": self.delta1,
            "excess": self.excess,
            "t": self.t,
            "reserved": self.reserved,
            "palette": self.palette,
            "reserved_sizes": self.reserved_sizes,
            "fallback_cycles": self.fallback_cycles,
            "flipped": self.flipped,
        }
        for k, v in sorted(self.stage_counts.items()):
            out[f"stage.{k}"] = v
        for k, v in sorted(self.audits.items()):
            out[f"audit.{k}"] = v
        for i, msg in enumerate(self.fallback_log):
            out[f"log.{i}"] = msg
        return out

    def summary(self) -> dict[str, Any]:
        return {
            "valid": self.valid,
            "cover_size": self.cover_size,
            "delta1": self.delta1,
            "excess": self.excess,
            "t": self.t,
            "reserved": self.reserved,
            "palette": self.palette,
            "fallback_cycles": self.fallback_cycles,
            "wall_time": round(self.wall_time, 3),
        }


def run_inputs(config: RunConfig):
    """Bipartite model, permutation and digraph for the run."""
    if config.digraph is not None:
        D = config.digraph
        n = D.n
        pi = sample_permutation(n, substream(config.seed, "permutation"))
        B = lift(D, pi)
        p = len(D) / (n * (n - 1)) if n > 1 else 0.0
        return B, pi, D, p
    B = sample_bipartite(config.n, config.p, substream(config.seed, "bipartite"))
    pi = sample_permutation(config.n, substream(config.seed, "permutation"))
    return B, pi, project(B, pi), config.p


def _fallback_plan(B, pi) -> ForestCoverPlan:
    side, v = choose_anchor(B, pi)
    if side == "y":
        x = pi.image[v]
        B2, pi2 = flip_model(B, pi)
        return trivial_plan(project(B2, pi2), x, flipped=True)
    return trivial_plan(project(B, pi), v)


def _tag(forest_edges: list[Edge], x: int) -> str:
    return "residual-stage" if any(u != x for u, _ in forest_edges) else "reserved-stage"


def cover_digraph(config: RunConfig) -> tuple[CoverCertificate, RunReport]:
    """Cover the run's digraph by Hamilton cycles and verify the result.

    Raises :class:`StrictAbort` in strict mode when a precondition fails and
    :class:`CoverFailure` when no valid certificate could be assembled.
    """
    started = time.perf_counter()
    B, pi, D0, p = run_inputs(config)
    n = D0.n
    seq = ordered_degree_sequence(D0)
    delta1 = seq[0] if len(seq) else 0
    fallback_log: list[str] = []

    if delta1 == 0:
        cert = CoverCertificate([], {}, [])
        rep = RunReport(0, 0, 0, 0, 0, [], 0, {}, valid=verify_cover(D0, cert).valid)
        rep.wall_time = time.perf_counter() - started
        return cert, rep
    if n < 2:
        raise CoverFailure("a digraph with edges needs at least two vertices")

    try:
        plan = almost_forest_cover(B, pi, seed=config.seed, p=p, strict=config.strict)
    except MatchingCoverError as exc:
        if config.strict:
            raise StrictAbort("matching_cover", str(exc)) from exc
        fallback_log.append(f"matching cover failed at {exc.stage}; no forests used")
        plan = _fallback_plan(B, pi)

    D = plan.digraph
    x = plan.anchor
    audits: dict[str, Any] = {f"forest.{k}": v for k, v in plan.audits.items()}
    if config.strict and not plan.check_partition()["union_equals_digraph"]:
        raise StrictAbort("forest_cover", "forest partition does not reproduce the digraph")

    covered: set[Edge] = set()
    pending: set[Edge] = set(plan.residual.edges)
    fam = cover_forest_family(
        D,
        plan.forests,
        x,
        plan.anchors_per_forest,
        seed=config.seed,
        budget=config.solver_budget,
        retries=config.retry_cap,
        covered=covered,
        pending=pending,
        drop_covered=not config.strict,
    )
    audits.update({f"family.{k}": v for k, v in fam.audits.items()})
    if fam.demoted:
        if config.strict:
            raise StrictAbort("cover_forest_family", f"forests {fam.demoted} could not be covered")
        fallback_log.append(f"demoted forests {fam.demoted}")

    cycles: list[HamiltonCycle] = list(fam.cycles)
    tags = ["forest-stage"] * len(cycles)

    residual = plan.residual.union(fam.residual.edges)
    if not config.strict:
        residual = Digraph(n, pending)
    G = underlying_multigraph(residual)
    try:
        coloring = proper_edge_color(G)
    except AssertionError:
        coloring = greedy_edge_color(G)
        fallback_log.append("edge colouring fell back to first-fit")
    classes = directed_matchings(G, coloring)
    classes.sort(key=lambda c: (-len(c), c[:1]))
    audits["residual.max_degree"] = residual.max_degree
    audits["residual.edges"] = len(residual)
    audits["palette_bound"] = G.max_degree + G.multiplicity

    reserved = sorted(plan.reserved_edges) + list(fam.returned_anchors)
    r = max(1, len(classes))
    if not classes:
        classes = [[]]
    parts = [reserved[i::r] for i in range(r)]
    # with no residual and no reserved edges the reserved stage has nothing to do
    if config.strict and (reserved or len(residual)):
        small = [len(s) for s in parts if len(s) < 10]
        if small:
            raise StrictAbort("reserved_partition", f"reserved sets of sizes {small} are below 10")

    extra_cap = None if config.strict else max(1, n // 2)
    for i, (M, S) in enumerate(zip(classes, parts)):
        if not S:
            continue
        M_use = M if config.strict else [e for e in M if e in pending]
        try:
            rc = cover_matching_with_reserved(
                D,
                M_use,
                x,
                S,
                seed=int(substream(config.seed, "reserved", i).integers(0, 2**62)),
                budget=config.solver_budget,
                retries=config.retry_cap,
                strict=config.strict,
                pending=pending,
                extra=() if config.strict else sorted(pending),
                extra_cap=extra_cap,
            )
        except ReservedStageError as exc:
            raise StrictAbort("reserved_stage", str(exc)) from exc
        except HamiltonNotFound as exc:
            raise CoverFailure(f"reserved stage: {exc}") from exc
        if rc.leftover and config.strict:
            raise StrictAbort("reserved_stage", f"{len(rc.leftover)} matching edges left uncovered")
        for c, forest in zip(rc.cycles, rc.classes):
            covered |= c.edge_set()
            cycles.append(c)
            tags.append(_tag(forest, x))
    pending -= covered

    if pending and not config.strict:
        before = len(pending)
        gained = reroute_cycles(D, cycles, pending, seed=config.seed, budget=config.solver_budget)
        audits["repair.absorbed"] = gained
        audits["repair.pending_before"] = before

    fb = _fallback(D, pending, config, fallback_log)
    cycles.extend(fb)
    tags.extend(["fallback"] * len(fb))

    if plan.flipped:
        cycles = [c.reversed() for c in cycles]
    cert = CoverCertificate(cycles, build_witness(D0, cycles), tags)
    check = verify_cover(D0, cert)
    report = RunReport(
        cover_size=len(cycles),
        delta1=delta1,
        t=len(fam.cycles),
        reserved=len(reserved),
        palette=coloring.palette_size,
        reserved_sizes=[len(s) for s in parts],
        fallback_cycles=len(fb),
        stage_counts=dict(sorted(cert.tag_counts().items())),
        audits=audits,
        fallback_log=fallback_log,
        flipped=plan.flipped,
        valid=check.valid,
    )
    report.wall_time = time.perf_counter() - started
    if not check.valid:
        raise CoverFailure(
            f"certificate failed verification: {len(check.uncovered)} uncovered edges, "
            f"{len(check.invalid_cycles)} invalid cycles"
        )
    return cert, report


def _fallback(D: Digraph, pending: set[Edge], config: RunConfig, log_: list[str]) -> list[HamiltonCycle]:
    """Extra cycles, each forced through a greedy linear forest of uncovered edges."""
    out: list[HamiltonCycle] = []
    n = D.n
    cap = max(1, (3 * n) // 4)
    k = 0
    while pending:
        forest = extend_linear_forest(n, [], sorted(pending), cap=cap)
        seed = int(substream(config.seed, "fallback", k).integers(0, 2**62))
        k += 1
        try:
            cycle = cover_forest(
                D, LinearForest.from_edges(n, forest), budget=config.solver_budget, seed=seed, prefer=pending
            )
        except HamiltonNotFound as exc:
            if cap == 1 and (exc.proven or k > 4 * config.retry_cap + len(pending)):
                raise CoverFailure(f"edge {forest[0]} lies on no Hamilton cycle found") from exc
            cap = max(1, cap // 2)
            continue
        pending -= cycle.edge_set()
        out.append(cycle)
    if out:
        log_.append(f"{len(out)} fallback cycles")
    return out
