import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from netsheaf.graph import (
    FORWARD,
    REVERSE,
    GraphError,
    Walk,
    build_graph,
    concat_walks,
    cycle_graph,
    enumerate_automorphisms,
    fundamental_cycles,
    path_graph,
    reverse_walk,
    rose_graph,
    spanning_tree,
    star_graph,
    walk_vertices,
)
from oracles import vertex_automorphisms
from support import random_connected_graph, random_walk


def test_cycle_shape():
    g = cycle_graph(4)
    assert g.vertices == ("v1", "v2", "v3", "v4")
    assert [(e.id, e.tail, e.head) for e in g.edges][-1] == ("e4", "v4", "v1")
    assert g.betti1() == 1 and g.is_connected()


def test_rose_and_point():
    assert rose_graph(2).betti1() == 2
    pt = build_graph(["v"], [])
    assert pt.betti1() == 0 and pt.is_tree()


@pytest.mark.parametrize(
    "vertices, edges, msg",
    [
        (["a", "a"], [], "duplicate vertex"),
        (["a"], [("e", "a", "b")], "undeclared endpoint"),
        (["a", "b"], [("e", "a", "b"), ("e", "b", "a")], "duplicate edge"),
    ],
)
def test_validation(vertices, edges, msg):
    with pytest.raises(GraphError, match=msg):
        build_graph(vertices, edges)


def test_unknown_edge_lookup():
    with pytest.raises(GraphError):
        cycle_graph(3).edge("nope")


def test_spanning_tree_c4():
    g = cycle_graph(4)
    t = spanning_tree(g, "v1")
    assert len(t.tree_edges) == 3
    assert {"e1", "e4"} <= t.tree_edges
    assert len(set(g.edge_ids) - t.tree_edges) == 1


def test_spanning_tree_rose_and_path():
    assert spanning_tree(rose_graph(2), "v").tree_edges == frozenset()
    p = path_graph(3)
    assert spanning_tree(p, "v0").tree_edges == frozenset(p.edge_ids)


def test_spanning_tree_errors():
    g = build_graph(["a", "b"], [])
    with pytest.raises(GraphError, match="not connected"):
        spanning_tree(g, "a")
    with pytest.raises(GraphError, match="unknown root"):
        spanning_tree(cycle_graph(3), "zz")


def test_fundamental_cycles_examples():
    g = cycle_graph(4)
    (c,) = fundamental_cycles(g, spanning_tree(g, "v1"))
    assert sorted(eid for eid, _ in c.steps) == ["e1", "e2", "e3", "e4"]
    rose = rose_graph(2)
    cycles = fundamental_cycles(rose, spanning_tree(rose, "v"))
    assert [c.steps for c in cycles] == [(("a", FORWARD),), (("b", FORWARD),)]
    p = path_graph(3)
    assert fundamental_cycles(p, spanning_tree(p, "v0")) == []


@pytest.mark.parametrize(
    "graph, count",
    [(star_graph(4), 24), (path_graph(3), 2), (build_graph(["v"], []), 1), (cycle_graph(4), 8)],
)
def test_automorphism_counts(graph, count):
    autos = enumerate_automorphisms(graph)
    assert len(autos) == count
    assert all(a.is_valid(graph, graph) for a in autos)


def test_walk_errors():
    g = cycle_graph(3)
    with pytest.raises(GraphError, match="does not start"):
        walk_vertices(g, Walk("v1", (("e2", FORWARD),)))
    with pytest.raises(GraphError, match="bad direction"):
        walk_vertices(g, Walk("v1", (("e1", 0),)))
    with pytest.raises(GraphError, match="not composable"):
        concat_walks(g, Walk("v1"), Walk("v2"))


seeds = st.integers(min_value=0, max_value=10**9)


@settings(max_examples=80, deadline=None)
@given(seeds)
def test_cycles_are_closed_and_count_b1(seed):
    rng = random.Random(seed)
    g = random_connected_graph(rng)
    root = rng.choice(g.vertices)
    t = spanning_tree(g, root)
    assert len(t.tree_edges) == len(g.vertices) - 1
    cycles = fundamental_cycles(g, t)
    assert len(cycles) == g.betti1() == len(g.edges) - len(g.vertices) + 1
    non_tree = [e.id for e in g.edges if e.id not in t.tree_edges]
    for c, eid in zip(cycles, non_tree):
        assert c.start == root and c.end(g) == root
        # each non-tree edge appears in exactly its own cycle
        assert [s for s in c.steps if s[0] not in t.tree_edges] == [(eid, FORWARD)]


@settings(max_examples=80, deadline=None)
@given(seeds, st.integers(min_value=0, max_value=8))
def test_walk_reverse_involution(seed, length):
    rng = random.Random(seed)
    g = random_connected_graph(rng)
    w = random_walk(g, rng, length)
    r = reverse_walk(g, w)
    assert reverse_walk(g, r) == w
    assert walk_vertices(g, r) == list(reversed(walk_vertices(g, w)))
    loop = concat_walks(g, w, r)
    assert loop.start == loop.end(g) == w.start
    assert all(d in (FORWARD, REVERSE) for _, d in loop.steps)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_automorphism_group_laws(seed):
    rng = random.Random(seed)
    g = random_connected_graph(rng, max_vertices=4, max_extra=2)
    autos = enumerate_automorphisms(g)
    keyset = set(autos)
    assert len(keyset) == len(autos)
    ident = [a for a in autos if all(a.vertex_map[v] == v for v in g.vertices)
             and all(a.edge_map[e] == e and not a.flips[e] for e in g.edge_ids)]
    assert len(ident) == 1
    for a in autos[:6]:
        assert a.inverse() in keyset
        for b in autos[:6]:
            assert a.compose(b) in keyset


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_tree_vertex_automorphisms_match_oracle(seed):
    # trees have no parallel edges, so vertex maps determine edge maps
    rng = random.Random(seed)
    n = rng.randint(1, 6)
    verts = [f"t{i}" for i in range(n)]
    edges = [(f"f{i}", verts[rng.randrange(i)], verts[i]) for i in range(1, n)]
    g = build_graph(verts, edges)
    vmaps = {tuple(sorted(a.vertex_map.items())) for a in enumerate_automorphisms(g)}
    oracle = {tuple(sorted(p.items())) for p in vertex_automorphisms(verts, edges)}
    assert vmaps == oracle
