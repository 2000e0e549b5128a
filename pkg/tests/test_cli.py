"""Document parsing, round-trips, and the command surface."""

import pytest

from rtmtools.cli import main
from rtmtools.textio import ParseError, format_document, parse_document

def test_parse_sink_document(sink_document):
    doc = parse_document(sink_document)
    assert doc.tree.orientation == "sink"
    assert doc.tree.tree.vertices == (1, 2, 3, 4, 5)
    assert doc.bound_quiver.relations == (("alpha", "alpha"),)


def test_round_trip_is_token_identical(sink_document):
    doc = parse_document(sink_document)
    printed = format_document(doc)
    again = format_document(parse_document(printed))
    assert printed.split() == again.split()
    assert printed == again


def test_short_relation_is_a_parse_error():
    bad = "QUIVER\nvertex 1\narrow alpha 1 1\nRELATIONS\nrel alpha\nTREE SINK\nnode 1 1\n"
    with pytest.raises(ParseError, match="two arrows"):
        parse_document(bad)


def test_unknown_name_is_a_parse_error():
    bad = "QUIVER\nvertex 1\nRELATIONS\nTREE SINK\nnode 1 2\n"
    with pytest.raises(ParseError):
        parse_document(bad)


def _write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


def test_cmd_validate_ok(tmp_path, capsys, sink_document):
    path = _write(tmp_path, "good.rtm", sink_document)
    assert main(["validate", path]) == 0
    out = capsys.readouterr().out
    assert "locally-bound check: ok" in out and "tree validation: ok" in out


def test_cmd_validate_parse_error(tmp_path, capsys):
    path = _write(tmp_path, "bad.rtm", "QUIVER\nvertex 1\nRELATIONS\nrel x\nTREE SINK\nnode 1 1\n")
    assert main(["validate", path]) == 2
    assert "parse error" in capsys.readouterr().err


def test_cmd_validate_bound_failure(tmp_path, capsys, sink_document):
    # relabel a5 to alpha (and node 5 accordingly): the path through 5,2,1 dies
    bad = sink_document.replace("node 5 1", "node 5 2").replace("arrow a5 5 2 beta", "arrow a5 5 2 alpha")
    path = _write(tmp_path, "bad.rtm", bad)
    assert main(["validate", path]) == 1
    assert "relation ideal" in capsys.readouterr().out


def test_cmd_validate_unbounded_quiver(tmp_path, capsys):
    text = "QUIVER\nvertex 1\narrow alpha 1 1\nRELATIONS\nTREE SINK\nnode 1 1\n"
    path = _write(tmp_path, "loop.rtm", text)
    assert main(["validate", path]) == 1
    assert "relation-free cycle alpha" in capsys.readouterr().out


def test_cmd_network_report(tmp_path, capsys, sink_document):
    path = _write(tmp_path, "m.rtm", sink_document)
    assert main(["network", path, path]) == 0
    out = capsys.readouterr().out
    assert "vertices: 13" in out
    assert "roots: (1,1) (1,2) (1,4) (2,1) (4,1)" in out
    assert "triangles: 2" in out
    assert "maximal R[1]-free traversals: 13" in out


def test_cmd_network_cover_doubles_counts(tmp_path, capsys, sink_document):
    path = _write(tmp_path, "m.rtm", sink_document)
    assert main(["network", path, path, "--cover"]) == 0
    out = capsys.readouterr().out
    assert "vertices: 26" in out and "arrows: 16" in out and "edges: 6" in out


def test_cmd_network_writes_dot(tmp_path, capsys, sink_document):
    path = _write(tmp_path, "m.rtm", sink_document)
    dot_path = tmp_path / "net.dot"
    assert main(["network", path, path, "--dot", str(dot_path)]) == 0
    text = dot_path.read_text(encoding="utf-8")
    assert text.startswith("digraph") and '"2,2" -> "1,1"' in text


def test_cmd_network_rejects_mixed_orientations(tmp_path, capsys, sink_document):
    p1 = _write(tmp_path, "sink.rtm", sink_document)
    # a single-vertex source document over the same quiver section
    src = sink_document.split("TREE SINK")[0] + "TREE SOURCE\nnode 1 2\n"
    p2 = _write(tmp_path, "source.rtm", src)
    assert main(["network", p1, p2]) == 1
    assert "mixed sink/source" in capsys.readouterr().err


def test_cmd_network_rejects_quiver_mismatch(tmp_path, capsys, sink_document):
    p1 = _write(tmp_path, "a.rtm", sink_document)
    p2 = _write(tmp_path, "b.rtm", sink_document.replace("rel alpha alpha", "rel alpha alpha # same"))
    assert main(["network", p1, p2]) == 0  # comments do not count as tokens
    p3 = _write(tmp_path, "c.rtm", sink_document.replace("vertex 1\n", "vertex 1\nvertex 3\n"))
    assert main(["network", p1, p3]) == 2
    assert "different QUIVER/RELATIONS" in capsys.readouterr().err


def test_cmd_ggms_listing(tmp_path, capsys, sink_document):
    path = _write(tmp_path, "m.rtm", sink_document)
    assert main(["ggms", path, path]) == 0
    out = capsys.readouterr().out
    assert "5 GGMs" in out
    assert "v4 -> v2 - v4" in out
    assert main(["ggms", path, path, "--signs"]) == 0
    assert "10 GGMs" in capsys.readouterr().out


def test_cmd_ggms_empty_pair(tmp_path, capsys):
    quiver = "QUIVER\nvertex 1\nvertex 2\narrow alpha 2 2\narrow beta 1 2\nRELATIONS\nrel alpha alpha\n"
    p1 = _write(tmp_path, "s1.rtm", quiver + "TREE SINK\nnode 1 1\n")
    p2 = _write(tmp_path, "s2.rtm", quiver + "TREE SINK\nnode 1 2\n")
    assert main(["ggms", p1, p2]) == 0
    assert "0 GGMs" in capsys.readouterr().out


def test_cmd_ggms_dot_dir(tmp_path, capsys, sink_document):
    path = _write(tmp_path, "m.rtm", sink_document)
    out_dir = tmp_path / "dots"
    assert main(["ggms", path, path, "--dot-dir", str(out_dir)]) == 0
    files = sorted(f.name for f in out_dir.iterdir())
    assert files == [f"ggm_{i:02d}.dot" for i in range(1, 6)]


def test_cmd_hom_agreement(tmp_path, capsys, sink_document):
    path = _write(tmp_path, "m.rtm", sink_document)
    assert main(["hom", path, path]) == 0
    assert "GGM span rank: 4; oracle dim: 4; AGREE" in capsys.readouterr().out


def test_cmd_indec_decomposable(tmp_path, capsys, sink_document):
    path = _write(tmp_path, "m.rtm", sink_document)
    assert main(["indec", path]) == 0
    out = capsys.readouterr().out
    assert "DECOMPOSABLE; certificate: siblings 4,2 under 1, label alpha" in out
    assert "oracle (p=3): DECOMPOSABLE" in out
    assert "verdict: AGREE" in out


def test_cmd_indec_indecomposable_source(tmp_path, capsys, source_document_factory):
    path = _write(tmp_path, "m.rtm", source_document_factory("alpha", "beta", "alpha", "beta"))
    assert main(["indec", path]) == 0
    out = capsys.readouterr().out
    assert "theorem: INDECOMPOSABLE" in out and "verdict: AGREE" in out


def test_cmd_indec_oracle_cap(tmp_path, capsys, sink_document):
    path = _write(tmp_path, "m.rtm", sink_document)
    assert main(["indec", path, "--cap", "10"]) == 3
    assert "oracle unavailable" in capsys.readouterr().out


def test_cmd_decompose(tmp_path, capsys, sink_document):
    path = _write(tmp_path, "m.rtm", sink_document)
    assert main(["decompose", path]) == 0
    out = capsys.readouterr().out
    assert "2 indecomposable summands" in out
    assert "SUMMAND 1 (dim 4)" in out and "SUMMAND 2 (dim 1)" in out
    assert "node 4 2" in out  # the simple summand sits at quiver vertex 2
    assert "witness: OK" in out


def test_cmd_decompose_indecomposable_input(tmp_path, capsys, source_document_factory):
    path = _write(tmp_path, "m.rtm", source_document_factory("alpha", "beta", "alpha", "beta"))
    assert main(["decompose", path]) == 0
    assert "INDECOMPOSABLE: nothing to split" in capsys.readouterr().out


def test_pair_commands_on_source_documents(tmp_path, capsys, source_document_factory):
    path = _write(tmp_path, "s.rtm", source_document_factory("alpha", "alpha", "beta", "beta"))
    assert main(["network", path, path]) == 0
    out = capsys.readouterr().out
    assert "vertices: 25" in out  # single quiver vertex pairs everything
    assert main(["hom", path, path]) == 0
    assert "AGREE" in capsys.readouterr().out
    assert main(["ggms", path, path]) == 0
    assert "GGMs" in capsys.readouterr().out
    assert main(["indec", path]) == 0
    assert "DECOMPOSABLE" in capsys.readouterr().out


def test_reports_are_deterministic(tmp_path, capsys, sink_document):
    path = _write(tmp_path, "m.rtm", sink_document)
    main(["network", path, path])
    first = capsys.readouterr().out
    main(["network", path, path])
    assert capsys.readouterr().out == first
