import pytest
from hypothesis import given

from hamcover.graphs import CoverCertificate, Digraph, HamiltonCycle, build_witness
from hamcover.io import (
    FormatError,
    format_edge_list,
    format_manifest,
    parse_edge_list,
    parse_manifest,
    read_certificate,
    read_digraph,
    read_graph,
    write_certificate,
    write_graph,
)

from strategies import bipartite_graphs, digraphs


@given(digraphs())
def test_digraph_edge_list_round_trip(D):
    kind, n, edges = parse_edge_list(format_edge_list("digraph", D.n, D.edges))
    assert kind == "digraph" and Digraph(n, edges) == D


@given(bipartite_graphs())
def test_bipartite_edge_list_round_trip(B):
    kind, n, edges = parse_edge_list(format_edge_list("bipartite", B.n, B.edges))
    assert kind == "bipartite" and set(edges) == B.edges


def test_edge_lists_are_one_based_and_allow_comments():
    text = "# a triangle\ndigraph 3 3\n1 2\n2 3\n\n3 1\n"
    assert parse_edge_list(text) == ("digraph", 3, [(0, 1), (1, 2), (2, 0)])


@pytest.mark.parametrize("text", [
    "",
    "graph 3 0\n",
    "digraph x 0\n",
    "digraph 3 2\n1 2\n",
    "digraph 3 1\n1 4\n",
    "digraph 3 1\n1\n",
    "digraph 3 1\na b\n",
])
def test_malformed_edge_lists(text):
    with pytest.raises(FormatError):
        parse_edge_list(text)


def test_self_loop_in_digraph_file(tmp_path):
    p = tmp_path / "g"
    p.write_text("digraph 2 1\n1 1\n")
    with pytest.raises(FormatError):
        read_graph(p)


def test_bipartite_file_is_not_a_digraph(tmp_path):
    p = tmp_path / "b"
    p.write_text("bipartite 2 1\n1 1\n")
    with pytest.raises(FormatError):
        read_digraph(p)


def test_certificate_round_trip(tmp_path):
    D = Digraph.complete(3)
    cycles = [HamiltonCycle((0, 1, 2)), HamiltonCycle((0, 2, 1))]
    cert = CoverCertificate(cycles, build_witness(D, cycles), ["forest-stage", "fallback"])
    write_certificate(tmp_path / "c", cert, {"n": 3, "valid": True, "sizes": [1, 2], "p": 0.25})
    write_graph(tmp_path / "c" / "graph", D)
    back = read_certificate(tmp_path / "c")
    assert back.cycles == cycles
    assert back.witness == cert.witness
    assert back.stage_tags == cert.stage_tags
    assert read_digraph(tmp_path / "c" / "graph") == D
    man = parse_manifest((tmp_path / "c" / "manifest").read_text())
    assert man == {"n": "3", "valid": "true", "sizes": "1,2", "p": "0.25"}


def test_manifest_formatting():
    assert format_manifest({"a": 1, "b": False, "c": [1, 2]}) == "a=1\nb=false\nc=1,2\n"
