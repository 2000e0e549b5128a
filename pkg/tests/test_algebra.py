"""Bound quivers: ideal membership, locally-bound check, path enumeration."""

import random

import pytest

from rtmtools import (
    BoundQuiver,
    Quiver,
    StructureError,
    check_locally_bound,
    enumerate_paths_from,
    path_in_ideal,
)
from rtmtools.algebra import automaton_state_count


def brute_force_relation_free_paths(bq, vertex, max_len):
    """Independent oracle: exhaustive walk plus naive subword filtering."""
    q = bq.quiver

    def contains_relation(word):
        return any(
            word[i : i + len(r)] == r
            for r in bq.relations
            for i in range(len(word) - len(r) + 1)
        )

    out = [()]
    frontier = [(vertex, ())]
    for _ in range(max_len):
        nxt = []
        for at, word in frontier:
            for a in q.arrows:
                if q.source(a) != at:
                    continue
                w = word + (a,)
                if not contains_relation(w):
                    nxt.append((q.target(a), w))
                    out.append(w)
        frontier = nxt
    return sorted(out, key=lambda w: (len(w), w))


def test_loop_tail_quiver_is_locally_bound(loop_tail_quiver):
    assert check_locally_bound(loop_tail_quiver).ok


def test_unbounded_loop_reports_cycle_witness():
    q = Quiver(["v"], [("loop", "v", "v")])
    bq = BoundQuiver(q, [])
    report = check_locally_bound(bq)
    assert not report.ok
    assert report.cycle == ("loop",)
    # the witness really is a relation-free cycle: it composes back to its start
    path = q.path(q.source(report.cycle[0]), report.cycle)
    assert path.source == path.target
    repeated = q.path(path.source, report.cycle * 3)
    assert not path_in_ideal(bq, repeated)


def test_two_loop_quiver_with_length_three_relations_is_bound(two_loop_quiver):
    assert check_locally_bound(two_loop_quiver).ok


def test_two_loops_without_relations_not_bound():
    q = Quiver(["1"], [("alpha", "1", "1"), ("beta", "1", "1")])
    report = check_locally_bound(BoundQuiver(q, []))
    assert not report.ok


def test_path_in_ideal_examples(loop_tail_quiver):
    q = loop_tail_quiver.quiver
    assert not path_in_ideal(loop_tail_quiver, q.path("1", ("beta", "alpha")))
    assert path_in_ideal(loop_tail_quiver, q.path("2", ("alpha", "alpha")))
    assert not path_in_ideal(loop_tail_quiver, q.path("2"))


def test_every_relation_is_in_its_own_ideal(two_loop_quiver):
    q = two_loop_quiver.quiver
    for rel in two_loop_quiver.relations:
        assert path_in_ideal(two_loop_quiver, q.path("1", rel))


def test_ideal_membership_monotone_under_extension(two_loop_quiver):
    q = two_loop_quiver.quiver
    rng = random.Random(7)
    for _ in range(100):
        word = tuple(rng.choice(["alpha", "beta"]) for _ in range(rng.randint(0, 6)))
        path = q.path("1", word)
        if path_in_ideal(two_loop_quiver, path):
            longer = q.path("1", word + (rng.choice(["alpha", "beta"]),))
            assert path_in_ideal(two_loop_quiver, longer)


def test_malformed_relations_rejected(loop_tail_quiver):
    q = loop_tail_quiver.quiver
    with pytest.raises(StructureError):
        BoundQuiver(q, [("alpha",)])  # length 1
    with pytest.raises(StructureError):
        BoundQuiver(q, [("alpha", "beta")])  # not composable


def test_enumerate_paths_matches_brute_force(loop_tail_quiver):
    got = enumerate_paths_from(loop_tail_quiver, "1", 3)
    assert [p.arrows for p in got] == [(), ("beta",), ("beta", "alpha")]
    assert [p.arrows for p in got] == brute_force_relation_free_paths(loop_tail_quiver, "1", 3)


def test_enumerate_paths_zero_length(loop_tail_quiver):
    got = enumerate_paths_from(loop_tail_quiver, "2", 0)
    assert len(got) == 1 and got[0].arrows == () and got[0].source == "2"


def test_enumerate_paths_two_loops(two_loop_quiver):
    got = enumerate_paths_from(two_loop_quiver, "1", 9)
    assert len(got) == 7  # 1 + 2 + 4, every length-3 word dies
    assert [p.arrows for p in got] == brute_force_relation_free_paths(two_loop_quiver, "1", 9)


def test_enumeration_order_is_length_then_lex(two_loop_quiver):
    words = [p.arrows for p in enumerate_paths_from(two_loop_quiver, "1", 2)]
    assert words == sorted(words, key=lambda w: (len(w), w))


def _random_bound_quiver(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 3)
    vertices = [f"q{i}" for i in range(n)]
    arrows = [
        (f"g{j}", rng.choice(vertices), rng.choice(vertices))
        for j in range(rng.randint(1, n + 2))
    ]
    q = Quiver(vertices, arrows)
    pairs = [(a, b) for a in q.arrows for b in q.arrows if q.target(a) == q.source(b)]
    rels = [p for p in pairs if rng.random() < 0.6]
    return BoundQuiver(q, rels)


def test_locally_bound_iff_path_enumeration_saturates():
    for seed in range(40):
        bq = _random_bound_quiver(seed)
        cap = automaton_state_count(bq)
        longest = max(
            (len(p.arrows) for v in bq.quiver.vertices for p in enumerate_paths_from(bq, v, cap)),
            default=0,
        )
        if check_locally_bound(bq).ok:
            assert longest < cap, f"seed {seed}: bound quiver has a length-{cap} path"
        else:
            assert longest == cap, f"seed {seed}: unbounded quiver saturated early"
