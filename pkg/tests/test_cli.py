import json

from hamcover.cli import EXIT_INVALID, EXIT_OK, EXIT_STRICT_ABORT, main
from hamcover.io import parse_edge_list, read_digraph


def last_json(capsys):
    out = capsys.readouterr().out.strip().splitlines()
    return json.loads(out[-1])


def test_generate_writes_parseable_files(tmp_path, capsys):
    for model in ("digraph", "bipartite"):
        out = tmp_path / model
        assert main(["generate", "--model", model, "--n", "12", "--p", "0.3", "--seed", "4", "--out", str(out)]) == EXIT_OK
        kind, n, edges = parse_edge_list(out.read_text())
        assert kind == model and n == 12
        assert last_json(capsys)["size"] == len(edges)
    assert main(["generate", "--model", "perm", "--n", "6"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "permutation 6"
    assert sorted(int(t) for t in lines[1].split()) == list(range(1, 7))


def test_cover_then_verify(tmp_path, capsys):
    cert = tmp_path / "cert"
    assert main(["cover", "--n", "40", "--p", "0.4", "--seed", "3", "--out", str(cert)]) == EXIT_OK
    summary = last_json(capsys)
    assert summary["valid"] and summary["excess"] == summary["cover_size"] - summary["delta1"]
    assert {p.name for p in cert.iterdir()} >= {"manifest", "cycles", "witness", "graph"}
    assert main(["verify", "--graph", str(cert / "graph"), "--cert", str(cert)]) == EXIT_OK
    assert last_json(capsys)["valid"]


def test_tampered_certificate_fails_verification(tmp_path, capsys):
    cert = tmp_path / "cert"
    main(["cover", "--n", "30", "--p", "0.4", "--seed", "0", "--out", str(cert)])
    lines = (cert / "cycles").read_text().splitlines()
    (cert / "cycles").write_text("\n".join(lines[1:]) + "\n")
    capsys.readouterr()
    assert main(["verify", "--graph", str(cert / "graph"), "--cert", str(cert)]) == EXIT_INVALID
    assert not last_json(capsys)["valid"]


def test_strict_abort_exit_code(capsys):
    assert main(["cover", "--n", "100", "--p", "0.3", "--seed", "0", "--mode", "strict"]) == EXIT_STRICT_ABORT
    rec = last_json(capsys)
    assert rec["status"] == "strict-abort" and rec["stage"]


def test_cover_from_input_file(tmp_path, capsys):
    g = tmp_path / "cycle"
    g.write_text("digraph 4 4\n1 3\n3 2\n2 4\n4 1\n")
    out = tmp_path / "cert"
    assert main(["cover", "--input", str(g), "--out", str(out)]) == EXIT_OK
    rec = last_json(capsys)
    assert rec["cover_size"] == 1 and rec["excess"] == 0
    assert read_digraph(out / "graph") == read_digraph(g)


def test_stats_writes_csv(tmp_path, capsys):
    out = tmp_path / "s.csv"
    assert main(["stats", "--task", "two-pow-c", "--n", "10", "--samples", "2000", "--out", str(out)]) == EXIT_OK
    header, row = out.read_text().splitlines()[:2]
    assert header.startswith("task,n,samples,estimate,se,target")
    assert last_json(capsys)["target"] == 11


def test_bad_input_reports_error(tmp_path, capsys):
    g = tmp_path / "bad"
    g.write_text("digraph 2 1\n1 9\n")
    assert main(["cover", "--input", str(g)]) == 1
    assert "error" in capsys.readouterr().err
