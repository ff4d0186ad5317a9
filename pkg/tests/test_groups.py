import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from netsheaf.errors import Undecided
from netsheaf.groups import (
    Cyclic,
    DirectProduct,
    FreeAbelian,
    GroupError,
    Homomorphism,
    InfiniteDihedral,
    ScaleLattice,
    automorphisms,
    compose,
    cube_rotation_group,
    dihedral_abelianization,
    enumerate_homomorphisms,
    group_from_descriptor,
    groups_isomorphic,
    identity_hom,
    scale_exp,
    scale_log,
    simultaneous_conjugacy,
    symmetric_group,
    trivial_hom,
)
from support import GROUP_ZOO, random_element

D = InfiniteDihedral()
Z3 = FreeAbelian(3)
Z = FreeAbelian(1)


@pytest.mark.parametrize("delta", [-3, 0, 1, 7])
def test_dihedral_reflection_squares_to_identity(delta):
    assert D.mul((delta, -1), (delta, -1)) == (0, 1)


@pytest.mark.parametrize("h, eps", [(3, 1), (3, -1), (-2, -1), (0, 1)])
def test_dihedral_inverse_formula(h, eps):
    assert D.inv((h, eps)) == (-eps * h, eps)


def test_free_abelian_repeated_sum():
    x = (1, 1, 1)
    assert Z3.product([x] * 4) == (4, 4, 4)
    assert Z3.power(x, 4) == (4, 4, 4)


def test_z3_z_fiber_homs():
    Phi = Homomorphism.from_matrix(Z3, Z, [[-1, 1, 0]])
    Psi = Homomorphism.from_matrix(Z, Z3, [[1], [2], [3]])
    assert Phi((2, 4, 6)) == (2,)
    assert Psi((2,)) == (2, 4, 6)
    assert Phi.matrix() == [[-1, 1, 0]]


def test_cyclic2_is_multiplicative():
    G = Cyclic(2)
    assert G.identity() == 1 and G.mul(-1, -1) == 1
    assert G.elements() == [1, -1]
    Z2add = Cyclic(4)
    assert Homomorphism(G, Z2add, [2])(G.identity()) == Z2add.identity()


def test_conjugacy_examples():
    assert simultaneous_conjugacy(Z3, [(2, 2, 1)], [(2, 2, 1)]) == (0, 0, 0)
    x = simultaneous_conjugacy(D, [(5, -1)], [(1, -1)])
    assert x is not None and D.conjugate((5, -1), x) == (1, -1)
    S3 = symmetric_group(3)
    x = simultaneous_conjugacy(S3, ["(1 2)"], ["(1 3)"])
    assert x == "(2 3)"
    assert simultaneous_conjugacy(S3, ["(1 2)"], ["(1 2 3)"]) is None


def test_conjugacy_dihedral_obstruction():
    # reflections (h,-1) split into two classes by parity of h
    assert simultaneous_conjugacy(D, [(4, -1)], [(1, -1)]) is None
    assert simultaneous_conjugacy(D, [(3, 1)], [(-3, 1)]) is not None
    assert simultaneous_conjugacy(D, [(3, 1)], [(2, 1)]) is None


@pytest.mark.parametrize(
    "src, dst, count",
    [
        (Cyclic(2), Cyclic(4), 2),
        (Cyclic(2), Cyclic(3), 1),
        (symmetric_group(3), Cyclic(1), 1),
        (Cyclic(4), Cyclic(2), 2),
        (symmetric_group(3), Cyclic(2), 2),
        (Cyclic(6), symmetric_group(3), 6),
    ],
)
def test_homomorphism_counts(src, dst, count):
    homs = enumerate_homomorphisms(src, dst)
    assert len(homs) == count
    assert len(set(homs)) == count


def test_z4_to_z2_kills_two():
    # every hom Z4 -> Z2 sends 2 to the identity; every hom Z2 -> Z4 lands in {0, 2}
    assert all(phi(2) == 1 for phi in enumerate_homomorphisms(Cyclic(4), Cyclic(2)))
    assert {phi(-1) for phi in enumerate_homomorphisms(Cyclic(2), Cyclic(4))} == {0, 2}


def test_automorphism_group_orders():
    assert len(automorphisms(symmetric_group(3))) == 6
    assert len(automorphisms(Cyclic(5))) == 4
    assert len(automorphisms(cube_rotation_group())) == 24
    with pytest.raises(Undecided):
        automorphisms(Z)


def test_not_a_homomorphism_rejected():
    with pytest.raises(GroupError, match="not a homomorphism"):
        Homomorphism(Cyclic(3), Cyclic(2), [-1])
    with pytest.raises(GroupError):
        Homomorphism.from_matrix(Z3, Z, [[1, 2]])


def test_compose_and_identity():
    Phi = Homomorphism.from_matrix(Z3, Z, [[-1, 1, 0]])
    Psi = Homomorphism.from_matrix(Z, Z3, [[1], [2], [3]])
    assert compose(Phi, Psi).matrix() == [[1]]
    assert compose(Phi, identity_hom(Z3)) == Phi
    assert compose(trivial_hom(Z, Z3), Phi)((5, 5, 5)) == (0, 0, 0)
    with pytest.raises(GroupError):
        compose(Phi, Phi)


def test_named_maps():
    ab = dihedral_abelianization()
    assert ab((3, -1)) == (-1, -1) and ab((2, 1)) == (1, 1)
    S = ScaleLattice(2)
    assert scale_log()(S.coerce(8)) == (3,)
    assert scale_exp()((-2,)) == S.coerce("1/4")


def test_groups_isomorphic():
    assert groups_isomorphic(DirectProduct((Cyclic(2), Cyclic(3))), Cyclic(6)) is True
    assert groups_isomorphic(Cyclic(6), symmetric_group(3)) is False
    assert groups_isomorphic(FreeAbelian(2), FreeAbelian(3)) is False
    assert groups_isomorphic(ScaleLattice(2), Z) is True


def test_membership_errors():
    with pytest.raises(GroupError):
        Cyclic(2).check(0)
    with pytest.raises(GroupError):
        D.check((1, 2))
    with pytest.raises(GroupError):
        Z3.check((1, 2))
    with pytest.raises(GroupError):
        Cyclic(0)


@pytest.mark.parametrize("name", sorted(GROUP_ZOO))
def test_descriptor_roundtrip(name):
    G = GROUP_ZOO[name]
    H = group_from_descriptor(G.descriptor())
    assert H == G or (H.order == G.order and groups_isomorphic(G, H))
    rng = random.Random(0)
    for _ in range(5):
        a = random_element(G, rng)
        assert G.decode(G.encode(a)) == a


zoo = st.sampled_from(sorted(GROUP_ZOO))
seeds = st.integers(min_value=0, max_value=10**9)


@settings(max_examples=150, deadline=None)
@given(zoo, seeds)
def test_group_axioms(name, seed):
    G = GROUP_ZOO[name]
    rng = random.Random(seed)
    a, b, c = (random_element(G, rng) for _ in range(3))
    e = G.identity()
    assert G.mul(G.mul(a, b), c) == G.mul(a, G.mul(b, c))
    assert G.mul(a, e) == a == G.mul(e, a)
    assert G.mul(a, G.inv(a)) == e == G.mul(G.inv(a), a)
    if G.is_abelian:
        assert G.mul(a, b) == G.mul(b, a)
    n = rng.randint(-4, 4)
    assert G.power(a, n) == G.product([a if n >= 0 else G.inv(a)] * abs(n))


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(["Z_2", "Z_3", "Z_4", "S_3", "Z_2 x Z_3"]), st.sampled_from(["Z_2", "Z_4", "S_3", "Z_2 x Z_3"]))
def test_enumerated_homs_are_homomorphisms(src, dst):
    G, H = GROUP_ZOO[src], GROUP_ZOO[dst]
    for phi in enumerate_homomorphisms(G, H):
        for a in G.elements():
            for b in G.elements():
                assert phi(G.mul(a, b)) == H.mul(phi(a), phi(b))


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(["S_3", "D_inf", "Rot(cube)", "Z_2 x Z_3", "Z^2"]), seeds, st.integers(1, 3))
def test_conjugacy_solver_finds_planted_conjugator(name, seed, k):
    G = GROUP_ZOO[name]
    rng = random.Random(seed)
    first = [random_element(G, rng) for _ in range(k)]
    x = random_element(G, rng)
    second = [G.conjugate(a, x) for a in first]
    y = simultaneous_conjugacy(G, first, second)
    assert y is not None
    assert [G.conjugate(a, y) for a in first] == second


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_finite_conjugacy_matches_exhaustive(seed):
    G = GROUP_ZOO["S_3"]
    rng = random.Random(seed)
    first = [random_element(G, rng) for _ in range(2)]
    second = [random_element(G, rng) for _ in range(2)]
    exists = any([G.conjugate(a, x) for a in first] == second for x in G.elements())
    assert (simultaneous_conjugacy(G, first, second) is not None) == exists
