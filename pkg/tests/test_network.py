"""Pullback networks, double covers, triangles, and the traversal census."""

import re

import pytest

from rtmtools import (
    SINK,
    SOURCE,
    BoundQuiver,
    Quiver,
    RootedTree,
    Traversal,
    TreeOverQ,
    is_r_free,
    maximal_r_free_traversals,
    pullback_network,
    random_instance,
    to_dot,
    triangles,
    two_cover,
)
from rtmtools.network import _edge


def census_keys(net):
    """Vertex sequences up to reversal; they determine traversals uniquely."""
    out = set()
    for trav in maximal_r_free_traversals(net):
        vseq = trav.vertex_sequence()
        out.add(min(vseq, vseq[::-1]))
    return out


def test_network_of_sink_example(sink_tree):
    net = pullback_network(sink_tree, sink_tree)
    assert len(net.vertices) == 13
    assert (5, 5) in net.vertices and (2, 4) in net.vertices and (4, 1) in net.vertices
    assert len(net.arrows) == 8
    assert set(net.edges) == {
        _edge((2, 2), (2, 4)),
        _edge((4, 2), (4, 4)),
        _edge((1, 2), (1, 4)),
    }
    assert set(net.forest_roots) == {(1, 1), (1, 4), (1, 2), (4, 1), (2, 1)}


def test_single_vertex_pair(loop_tail_quiver):
    t = TreeOverQ(RootedTree([1], [], SINK), loop_tail_quiver, {1: "2"}, {})
    net = pullback_network(t, t)
    assert net.vertices == ((1, 1),)
    assert not net.arrows and not net.edges
    census = maximal_r_free_traversals(net)
    assert len(census) == 1 and len(census[0]) == 0


def test_orientation_mismatch_rejected(sink_tree, loop_tail_quiver):
    as_source = TreeOverQ(RootedTree([1], [], SOURCE), loop_tail_quiver, {1: "2"}, {})
    with pytest.raises(ValueError, match="orientation"):
        pullback_network(sink_tree, as_source)


def test_codomain_mismatch_rejected(sink_tree, loop_tail_quiver):
    other = BoundQuiver(loop_tail_quiver.quiver, [])
    t2 = TreeOverQ(RootedTree([1], [], SINK), other, {1: "2"}, {})
    with pytest.raises(ValueError, match="bound quiver"):
        pullback_network(sink_tree, t2)


def test_two_cover_doubles_everything(sink_tree):
    net = pullback_network(sink_tree, sink_tree)
    cover = two_cover(net)
    assert len(cover.vertices) == 2 * len(net.vertices)
    assert len(cover.arrows) == 2 * len(net.arrows)
    assert len(cover.edges) == 2 * len(net.edges)
    assert {_edge((2, 2, 1), (2, 4, -1)), _edge((2, 2, -1), (2, 4, 1))} <= set(cover.edges)
    # the projection is two-to-one on vertices
    fibers = {}
    for v in cover.vertices:
        fibers.setdefault(cover.project(v), []).append(v)
    assert all(len(f) == 2 for f in fibers.values())


def test_empty_cover(loop_tail_quiver):
    t1 = TreeOverQ(RootedTree([1], [], SINK), loop_tail_quiver, {1: "1"}, {})
    t2 = TreeOverQ(RootedTree([1], [], SINK), loop_tail_quiver, {1: "2"}, {})
    net = pullback_network(t1, t2)
    assert not net.vertices
    assert not two_cover(net).vertices


def test_triangles_of_sink_example(sink_tree):
    net = pullback_network(sink_tree, sink_tree)
    tris = triangles(net)
    assert len(tris) == 2
    assert all(t.kind == "1-edge" for t in tris)
    assert frozenset({(2, 2), (2, 4), (1, 1)}) in {t.vertices for t in tris}


def test_no_edges_means_no_triangles(loop_tail_quiver):
    tree = RootedTree([1, 2, 3], [("a2", 2, 1), ("a3", 3, 2)], SINK)
    t = TreeOverQ(
        tree, loop_tail_quiver, {1: "2", 2: "2", 3: "1"}, {"a2": "alpha", "a3": "beta"}
    )
    net = pullback_network(t, t)
    assert not net.edges
    assert not triangles(net)


def test_three_edge_triangle_in_source_case():
    q = Quiver(["1"], [("alpha", "1", "1")])
    bq = BoundQuiver(q, [("alpha", "alpha")])
    star = RootedTree([1, 2, 3, 4], [("a2", 1, 2), ("a3", 1, 3), ("a4", 1, 4)], SOURCE)
    t1 = TreeOverQ(star, bq, {n: "1" for n in range(1, 5)}, {a: "alpha" for a in star.arrows})
    t2 = TreeOverQ(RootedTree([1], [], SOURCE), bq, {1: "1"}, {})
    net = pullback_network(t1, t2)
    tris = triangles(net)
    assert len(tris) == 1
    assert tris[0].kind == "3-edge"
    assert tris[0].vertices == frozenset({(2, 1), (3, 1), (4, 1)})


def _find_arrow(net, source, target):
    hits = [a for a in net.arrows if a.source == source and a.target == target]
    assert len(hits) == 1
    return hits[0]


def test_is_r_free_examples(sink_tree):
    net = pullback_network(sink_tree, sink_tree)
    down = _find_arrow(net, (3, 3), (1, 1))
    up = _find_arrow(net, (2, 2), (1, 1))
    ok = Traversal((3, 3), [("fwd", down), ("bwd", up)])
    assert is_r_free(ok, net)
    edge = _edge((2, 2), (2, 4))
    blocked = Traversal((2, 4), [("edge", edge), ("fwd", up)])
    assert not is_r_free(blocked, net)
    assert is_r_free(Traversal((4, 1)), net)


def test_malformed_traversal_rejected(sink_tree):
    net = pullback_network(sink_tree, sink_tree)
    down = _find_arrow(net, (3, 3), (1, 1))
    with pytest.raises(ValueError):
        is_r_free(Traversal((5, 5), [("fwd", down)]), net)  # wrong start
    with pytest.raises(ValueError):
        is_r_free(Traversal((3, 3), [("fwd", down), ("bwd", down)]), net)  # backtrack


def test_census_of_sink_example(sink_tree):
    net = pullback_network(sink_tree, sink_tree)
    keys = census_keys(net)
    assert len(keys) == 13
    assert ((2, 4), (2, 2), (5, 5)) in keys  # descend then cross the edge
    assert ((4, 2), (4, 4)) in keys  # a bare edge
    assert ((2, 1), (5, 3)) in keys  # a smaller component
    assert ((1, 4), (1, 2), (3, 5)) in keys  # arrow plus edge component
    assert ((4, 1),) in keys  # the isolated vertex
    assert not any(len(k) == 1 for k in keys - {((4, 1),)})


def test_census_counts_up_to_inversion(sink_tree):
    net = pullback_network(sink_tree, sink_tree)
    census = maximal_r_free_traversals(net)
    seqs = {t.vertex_sequence() for t in census}
    for t in census:
        rev = t.inverse().vertex_sequence()
        if rev != t.vertex_sequence():
            assert rev not in seqs


def test_projection_preserves_r_freeness(sink_tree):
    net = pullback_network(sink_tree, sink_tree)
    cover = two_cover(net)
    for trav in maximal_r_free_traversals(cover):
        projected_steps = []
        for kind, link in trav.steps:
            if kind == "edge":
                projected_steps.append(("edge", cover.project_edge(link)))
            else:
                projected_steps.append((kind, cover.project_arrow(link)))
        projected = Traversal(cover.project(trav.start), projected_steps)
        assert is_r_free(trav, cover) == is_r_free(projected, net)


SHAPES = {SINK: re.compile(r"f*e?b*"), SOURCE: re.compile(r"b*e?f*")}


def test_structural_invariants_on_random_instances():
    for seed in range(30):
        for orientation in (SINK, SOURCE):
            t1 = random_instance(seed, orientation, max_vertices=8, end_dim_cap=None)
            t2 = random_instance(
                seed + 500, orientation, max_vertices=8, end_dim_cap=None, codomain=t1.codomain
            )
            net = pullback_network(t1, t2)
            edge_set = set(net.edges)
            for v in net.vertices:
                ups = net.arrows_from(v) if orientation == SINK else net.arrows_into(v)
                assert len(ups) <= 1
                assert (len(ups) == 0) == (net.pullback_height[v] == 0)
            # at most one link between two vertices, and the arrow part is acyclic
            seen_pairs = set()
            for a in net.arrows:
                pair = _edge(a.source, a.target)
                assert pair not in seen_pairs and pair not in edge_set
                seen_pairs.add(pair)
            assert all(net.pullback_height[v] <= len(net.vertices) for v in net.vertices)
            # edge transitivity
            for e1 in net.edges:
                for shared, far in ((e1[0], e1[1]), (e1[1], e1[0])):
                    for e2 in net.edges_at(shared):
                        other = e2[0] if e2[1] == shared else e2[1]
                        if other != far:
                            assert _edge(far, other) in edge_set
            # census shape law: at most one edge, arrows never flip back
            for trav in maximal_r_free_traversals(net):
                word = "".join(k[0] for k in trav.step_kinds())  # f / b / e
                assert SHAPES[orientation].fullmatch(word), (seed, orientation, word)


def test_dot_output_is_stable(sink_tree):
    net = pullback_network(sink_tree, sink_tree)
    dot = to_dot(net)
    assert dot == to_dot(pullback_network(sink_tree, sink_tree))
    assert '"2,2" -> "1,1"' in dot
    assert "style=dashed" in dot
    cover_dot = to_dot(two_cover(net))
    assert '"2,2,+"' in cover_dot and '"2,2,-"' in cover_dot
