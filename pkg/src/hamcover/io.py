"""Edge-list files and certificate directories.

Edge lists start with a header ``digraph <n> <m>``, ``bipartite <n> <m>`` or
``matching <n> <k>`` followed by one ``u v`` line per edge, 1-based.
Blank lines and lines starting with ``#`` are ignored.
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterable, Mapping

from .graphs import BipartiteGraph, CoverCertificate, Digraph, Edge, HamiltonCycle

KINDS = ("digraph", "bipartite", "matching")


class FormatError(ValueError):
    pass


def format_edge_list(kind: str, n: int, edges: Iterable[Edge]) -> str:
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}")
    es = sorted(edges)
    lines = [f"{kind} {n} {len(es)}"]
    lines += [f"{u + 1} {v + 1}" for u, v in es]
    return "\n".join(lines) + "\n"


def parse_edge_list(text: str) -> tuple[str, int, list[Edge]]:
    rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not rows:
        raise FormatError("empty edge-list file")
    head = rows[0]
    if len(head) != 3 or head[0] not in KINDS:
        raise FormatError(f"bad header: {' '.join(head)!r}")
    try:
        n, m = int(head[1]), int(head[2])
    except ValueError as exc:
        raise FormatError(f"bad header counts: {' '.join(head)!r}") from exc
    body = rows[1:]
    if len(body) != m:
        raise FormatError(f"header announces {m} edges, found {len(body)}")
    edges = []
    for i, row in enumerate(body, start=2):
        if len(row) != 2:
            raise FormatError(f"line {i}: expected two vertex labels")
        try:
            u, v = int(row[0]) - 1, int(row[1]) - 1
        except ValueError as exc:
            raise FormatError(f"line {i}: labels must be integers") from exc
        if not (0 <= u < n and 0 <= v < n):
            raise FormatError(f"line {i}: label out of range 1..{n}")
        edges.append((u, v))
    return head[0], n, edges


def write_graph(path: str | Path, G: Digraph | BipartiteGraph) -> None:
    kind = "digraph" if isinstance(G, Digraph) else "bipartite"
    Path(path).write_text(format_edge_list(kind, G.n, G.edges))


def read_graph(path: str | Path) -> Digraph | BipartiteGraph:
    kind, n, edges = parse_edge_list(Path(path).read_text())
    if kind == "digraph":
        try:
            return Digraph(n, edges)
        except ValueError as exc:
            raise FormatError(str(exc)) from exc
    if kind == "bipartite":
        return BipartiteGraph(n, edges)
    raise FormatError("matching files hold a bipartite edge set, read them with parse_edge_list")


def read_digraph(path: str | Path) -> Digraph:
    G = read_graph(path)
    if not isinstance(G, Digraph):
        raise FormatError(f"{path} does not hold a digraph")
    return G


def format_manifest(values: Mapping[str, object]) -> str:
    return "".join(f"{k}={_fmt(v)}\n" for k, v in values.items())


def _fmt(v: object) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(round(v, 12))
    if isinstance(v, (list, tuple)):
        return ",".join(_fmt(x) for x in v)
    return str(v)


def parse_manifest(text: str) -> dict[str, str]:
    out = {}
    for ln in text.splitlines():
        if ln.strip() and "=" in ln:
            k, v = ln.split("=", 1)
            out[k.strip()] = v.strip()
    return out


def write_certificate(directory: str | Path, cert: CoverCertificate, manifest: Mapping[str, object]) -> None:
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    cyc_lines = [" ".join(str(v + 1) for v in c.order) for c in cert.cycles]
    (d / "cycles").write_text("".join(line + "\n" for line in cyc_lines))
    wit = "".join(f"{u + 1} {v + 1} {i}\n" for (u, v), i in sorted(cert.witness.items()))
    (d / "witness").write_text(wit)
    (d / "stages").write_text("".join(t + "\n" for t in cert.stage_tags))
    (d / "manifest").write_text(format_manifest(manifest))


def read_certificate(directory: str | Path) -> CoverCertificate:
    d = Path(directory)
    cycles = []
    for i, ln in enumerate((d / "cycles").read_text().splitlines(), start=1):
        if ln.strip():
            try:
                cycles.append(HamiltonCycle(tuple(int(t) - 1 for t in ln.split())))
            except ValueError as exc:
                raise FormatError(f"cycles line {i}: {exc}") from exc
    witness: dict[Edge, int] = {}
    wpath = d / "witness"
    if wpath.exists():
        for i, ln in enumerate(wpath.read_text().splitlines(), start=1):
            parts = ln.split()
            if not parts:
                continue
            if len(parts) != 3:
                raise FormatError(f"witness line {i}: expected 'u v index'")
            u, v, k = (int(t) for t in parts)
            witness[(u - 1, v - 1)] = k
    tags: list[str] = []
    spath = d / "stages"
    if spath.exists():
        tags = [t for t in spath.read_text().splitlines() if t]
    return CoverCertificate(cycles, witness, tags)


def write_plan(directory: str | Path, plan) -> None:
    """Serialise a forest-cover plan: one file per forest plus residual, reserved and manifest."""
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    n = plan.digraph.n
    for i, F in enumerate(plan.forests):
        (d / f"forest_{i:04d}").write_text(format_edge_list("digraph", n, F.edges()))
    (d / "residual").write_text(format_edge_list("digraph", n, plan.residual.edges))
    (d / "reserved").write_text(format_edge_list("digraph", n, plan.reserved_edges))
    manifest = {
        "t": plan.t,
        "anchor": plan.anchor + 1,
        "anchors": [y + 1 for y in plan.anchors_per_forest],
        "flipped": plan.flipped,
    }
    manifest.update({f"audit.{k}": v for k, v in sorted(plan.audits.items())})
    (d / "manifest").write_text(format_manifest(manifest))
