import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from netsheaf.cohomology import (
    HEAD,
    TAIL,
    SheafError,
    boundary_trivialized_sheaf,
    cohomologous,
    constant_sheaf,
    walk_product,
)
from netsheaf.graph import FORWARD, GraphError, REVERSE, Walk, cycle_graph, path_graph, rose_graph
from netsheaf.groups import Cyclic, FreeAbelian, InfiniteDihedral
from netsheaf.torsor import (
    Torsor,
    TorsorMorphism,
    cocycle_from_torsor,
    global_sections,
    section_from_coboundary,
    section_is_compatible,
    torsor_from_cocycle,
    torsors_isomorphic,
    transport,
    trivial_torsor,
)
from support import GROUP_ZOO, random_connected_graph, random_element, random_walk

Z = FreeAbelian(1)
D = InfiniteDihedral()


def _c(graph, values):
    return dict(zip(graph.edge_ids, values))


def _penrose():
    g = cycle_graph(4)
    return torsor_from_cocycle(constant_sheaf(g, Z), _c(g, [1, 1, 1, 1]))


def _mobius(delta=1):
    g = cycle_graph(3)
    return torsor_from_cocycle(constant_sheaf(g, D), _c(g, [(0, 1), (delta, 1), (0, -1)]))


def _klein(delta=1):
    g = rose_graph(2)
    return torsor_from_cocycle(constant_sheaf(g, D), {"a": (delta, -1), "b": (delta, 1)})


def test_identity_cocycle_gives_trivial_torsor():
    S = constant_sheaf(cycle_graph(3), Cyclic(3))
    assert torsor_from_cocycle(S, S.identity1()) == trivial_torsor(S)
    assert global_sections(trivial_torsor(S)) == S.identity0()


def test_penrose_head_restriction_shifts_by_one():
    T = _penrose()
    for p in (-2, 0, 5):
        for eid in T.graph.edge_ids:
            assert T.restrict(eid, HEAD, (p,)) == (p - 1,)
            assert T.restrict(eid, TAIL, (p,)) == (p,)
    assert global_sections(T) is None


@pytest.mark.parametrize("delta", [1, 2, -3])
def test_mobius_loop_transport(delta):
    T = _mobius(delta)
    loop = Walk("v1", (("e1", FORWARD), ("e2", FORWARD), ("e3", FORWARD)))
    p = (7, 1)
    once = transport(T, loop, p)
    assert once == D.mul(p, (delta, -1))
    assert transport(T, Walk("v1", loop.steps * 2), p) == p


@pytest.mark.parametrize("delta", [1, 4])
def test_klein_transport_order_matters(delta):
    T = _klein(delta)
    e = D.identity()
    ab = Walk("v", (("a", FORWARD), ("b", FORWARD)))
    ba = Walk("v", (("b", FORWARD), ("a", FORWARD)))
    assert transport(T, ab, e) == (0, -1)
    assert transport(T, ba, e) == (2 * delta, -1)


def test_empty_walk_and_reverse():
    T = _penrose()
    assert transport(T, Walk("v2"), (3,)) == (3,)
    assert transport(T, Walk("v2", (("e1", REVERSE),)), (3,)) == (2,)


def test_transport_rejects_bad_walk_and_sheaf():
    with pytest.raises(GraphError):
        transport(_penrose(), Walk("v1", (("e2", FORWARD),)), (0,))
    g = path_graph(2)
    T = trivial_torsor(boundary_trivialized_sheaf(g, Z, ["v0"]))
    with pytest.raises(SheafError):
        transport(T, Walk("v0"), ())


def test_c3_section_from_witness():
    g = cycle_graph(3)
    T = torsor_from_cocycle(constant_sheaf(g, Z), _c(g, [1, 2, -3]))
    s = global_sections(T)
    assert s == {"v1": (0,), "v2": (1,), "v3": (3,)}
    assert section_is_compatible(T, s)


def test_torsor_isomorphism_examples():
    g = cycle_graph(4)
    S = constant_sheaf(g, Z)
    A = torsor_from_cocycle(S, _c(g, [1, 1, 1, 1]))
    B = torsor_from_cocycle(S, _c(g, [4, 0, 0, 0]))
    m = torsors_isomorphic(A, A)
    assert m is not None and m.gauge == S.identity0()
    m = torsors_isomorphic(A, B)
    assert m is not None and m.verify()
    assert torsors_isomorphic(A, trivial_torsor(S)) is None
    with pytest.raises(SheafError):
        torsors_isomorphic(A, trivial_torsor(constant_sheaf(g, Cyclic(2))))


def test_bad_morphism_fails_verification():
    A = _penrose()
    m = TorsorMorphism(A, A, {v: (1,) if v == "v1" else (0,) for v in A.graph.vertices})
    assert not m.verify()


seeds = st.integers(min_value=0, max_value=10**9)
zoo = st.sampled_from(sorted(GROUP_ZOO))


def _random_torsor(seed, name):
    rng = random.Random(seed)
    G = GROUP_ZOO[name]
    g = random_connected_graph(rng, max_vertices=4, max_extra=3)
    S = constant_sheaf(g, G)
    eta = {e.id: random_element(G, rng) for e in g.edges}
    return rng, G, g, S, Torsor(S, S.check1(eta))


@settings(max_examples=120, deadline=None)
@given(zoo, seeds)
def test_restrictions_are_equivariant(name, seed):
    rng, G, g, S, T = _random_torsor(seed, name)
    for e in g.edges:
        for side, v in ((TAIL, e.tail), (HEAD, e.head)):
            x, p = random_element(G, rng), random_element(G, rng)
            lhs = T.restrict(e.id, side, T.act(x, p, v))
            assert lhs == T.act(x, T.restrict(e.id, side, p), e.id, is_edge=True)


@settings(max_examples=120, deadline=None)
@given(zoo, seeds)
def test_transport_is_right_multiplication(name, seed):
    rng, G, g, S, T = _random_torsor(seed, name)
    w = random_walk(g, rng, rng.randint(0, 8))
    p = random_element(G, rng)
    assert transport(T, w, p) == G.mul(p, walk_product(G, T.cocycle, w))
    # transport commutes with the left action
    x = random_element(G, rng)
    assert transport(T, w, G.mul(x, p)) == G.mul(x, transport(T, w, p))


@settings(max_examples=120, deadline=None)
@given(zoo, seeds)
def test_sections_from_coboundaries(name, seed):
    rng, G, g, S, _ = _random_torsor(seed, name)
    xi = {v: random_element(G, rng) for v in g.vertices}
    T, s = section_from_coboundary(S, xi)
    assert section_is_compatible(T, s)
    found = global_sections(T)
    assert found is not None and section_is_compatible(T, found)


@settings(max_examples=120, deadline=None)
@given(zoo, seeds)
def test_cocycle_recovery(name, seed):
    rng, G, g, S, T = _random_torsor(seed, name)
    assert cocycle_from_torsor(T) == T.cocycle
    points = {v: random_element(G, rng) for v in g.vertices}
    eta2 = cocycle_from_torsor(T, points)
    assert cohomologous(S, T.cocycle, eta2) is not None


@settings(max_examples=80, deadline=None)
@given(zoo, seeds)
def test_isomorphism_after_gauge(name, seed):
    rng, G, g, S, T = _random_torsor(seed, name)
    points = {v: random_element(G, rng) for v in g.vertices}
    T2 = Torsor(S, cocycle_from_torsor(T, points))
    m = torsors_isomorphic(T, T2)
    assert m is not None
    samples = list(T.cocycle.values()) + list(points.values())
    assert m.verify(samples)
