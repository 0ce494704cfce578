"""Covering random digraphs by Hamilton cycles, with verifiable certificates."""

from .coloring import Multigraph, proper_edge_color, underlying_multigraph
from .factors import MatchingCover, f_factor, matching_cover, regular_subgraph
from .forests import LinearForest, almost_forest_cover
from .graphs import BipartiteGraph, CoverCertificate, Digraph, HamiltonCycle, verify_cover, verify_hamilton_cycle
from .hamilton import HamiltonNotFound, cover_forest, cover_forest_family, cover_matching_with_reserved, find_hamilton
from .models import Permutation, project, sample_bipartite, sample_digraph, sample_permutation
from .montecarlo import monte_carlo
from .pipeline import CoverFailure, RunConfig, RunReport, StrictAbort, cover_digraph

__all__ = [
    "BipartiteGraph",
    "CoverCertificate",
    "CoverFailure",
    "Digraph",
    "HamiltonCycle",
    "HamiltonNotFound",
    "LinearForest",
    "MatchingCover",
    "Multigraph",
    "Permutation",
    "RunConfig",
    "RunReport",
    "StrictAbort",
    "almost_forest_cover",
    "cover_digraph",
    "cover_forest",
    "cover_forest_family",
    "cover_matching_with_reserved",
    "f_factor",
    "find_hamilton",
    "matching_cover",
    "monte_carlo",
    "project",
    "proper_edge_color",
    "regular_subgraph",
    "sample_bipartite",
    "sample_digraph",
    "sample_permutation",
    "underlying_multigraph",
    "verify_cover",
    "verify_hamilton_cycle",
]
