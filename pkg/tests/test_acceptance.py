"""Acceptance suite: eight criteria, one PASS/FAIL line each.

Run under pytest (the lines appear in the terminal summary) or directly
with ``python tests/test_acceptance.py``.
"""

from __future__ import annotations

import contextlib
import io
import json
import random
import sys
import traceback
from math import gcd
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

import oracles  # noqa: E402
import support  # noqa: E402
from netsheaf import cli  # noqa: E402
from netsheaf.cohomology import (  # noqa: E402
    abelian_cohomology,
    coboundary,
    constant_sheaf,
    enumerate_h1_classes,
    holonomy,
    is_coboundary,
)
from netsheaf.gallery import (  # noqa: E402
    CUBIC_HOLONOMIES,
    KLEIN_RELATOR,
    TORUS_RELATOR,
    circle,
    cubic_staircase,
    petal_inclusion,
    torus,
)
from netsheaf.graph import Walk, build_graph, cycle_graph, rose_graph, star_graph  # noqa: E402
from netsheaf.groups import (  # noqa: E402
    Cyclic,
    DirectProduct,
    FreeAbelian,
    Homomorphism,
    InfiniteDihedral,
    enumerate_homomorphisms,
    identity_hom,
    symmetric_group,
)
from netsheaf.intlinalg import is_smith_form, smith_normal_form  # noqa: E402
from netsheaf.paradox import (  # noqa: E402
    Paradox,
    ParadoxMorphism,
    are_isomorphic,
    check_morphism,
    classify_tree_boundary,
    fiber_equivalent,
    search_fiber_equivalence,
    validate_presentation_rep,
)
from netsheaf.torsor import (  # noqa: E402
    global_sections,
    section_is_compatible,
    torsor_from_cocycle,
    transport,
)

RESULTS: dict[int, tuple[bool, str]] = {}


def _criterion_1() -> str:
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = cli.main(["gallery", "--format", "machine"])
    records = {r["name"]: r for r in map(json.loads, buf.getvalue().splitlines())}
    assert code == 0, f"gallery exit status {code}: {[n for n, r in records.items() if not r['passed']]}"
    assert all(r["passed"] for r in records.values())

    def computed(name, key):
        return records[name]["computed"][key]

    assert computed("penrose_staircase", "holonomy") == [4]
    for i, h in enumerate(CUBIC_HOLONOMIES):
        assert computed(f"cubic_staircase_{i + 1}", "holonomy") == list(h)
        assert computed(f"cubic_staircase_{i + 1}", "trivial") is False
    for name in ("mobius", "rp2"):
        assert computed(name, "holonomy") == [1, -1]
        assert computed(name, "square") == [0, 1]
    assert computed("klein", "transport_ab") == [0, -1]
    assert computed("klein", "transport_ba") == [2, -1]
    assert [computed(f"zigzag_{n}", "trivial") for n in (3, 4, 5)] == [False, True, False]
    return f"{len(records)} gallery entries pass"


def _criterion_2() -> str:
    Ps = [cubic_staircase(h, f"cubic{i + 1}") for i, h in enumerate(CUBIC_HOLONOMIES)]
    verdict = {(i, j): are_isomorphic(Ps[i], Ps[j]).verdict for i in range(8) for j in range(8)}
    assert all(v in ("isomorphic", "not_isomorphic") for v in verdict.values())
    classes: list[list[int]] = []
    for i in range(8):
        for cls in classes:
            if verdict[(i, cls[0])] == "isomorphic":
                cls.append(i)
                break
        else:
            classes.append([i])
    for a in classes:
        for i in a:
            for j in range(8):
                assert (verdict[(i, j)] == "isomorphic") == (j in a)
    gcds = sorted({gcd(*CUBIC_HOLONOMIES[c[0]]) for c in classes})
    assert len(classes) == 3 and gcds == [1, 2, 4], (classes, gcds)
    v = are_isomorphic(cubic_staircase((2, 2, 1)), cubic_staircase((-2, -2, -1)))
    assert v.verdict == "isomorphic"
    assert v.witness["matrix"] == [[-1, 0, 0], [0, -1, 0], [0, 0, -1]]
    assert check_morphism(v.witness["morphism"], cubic_staircase((2, 2, 1)), cubic_staircase((-2, -2, -1)))
    return f"3 classes, gcds {gcds}, -id witness verified"


def _criterion_3() -> str:
    Z2 = Cyclic(2)
    counts = []
    for N in range(2, 7):
        g = star_graph(N)
        counts.append(classify_tree_boundary(g, g.leaves(), Z2).count)
    assert counts == [1, 1, 2, 2, 3], counts
    rng = random.Random(20240611)
    leaf_counts = []
    for _ in range(50):
        vs, es = oracles.random_tree(rng, rng.randint(2, 7))
        g = build_graph(vs, es)
        got = classify_tree_boundary(g, g.leaves(), Z2).count
        want = oracles.tree_class_count_oracle(Z2, vs, es)
        assert got == want, (vs, es, got, want)
        Z3 = Cyclic(3)
        assert classify_tree_boundary(g, g.leaves(), Z3).count == oracles.tree_class_count_oracle(Z3, vs, es)
        leaf_counts.append(len(g.leaves()))
    return f"stars {counts}; 50 random trees match oracle over Z_2 and Z_3 (leaf counts {min(leaf_counts)}..{max(leaf_counts)})"


def _criterion_4() -> str:
    graphs = oracles.small_connected_multigraphs(4)
    groups = [Cyclic(2), Cyclic(3), Cyclic(4), symmetric_group(3)]
    n = 0
    for G in groups:
        for vs, es in graphs:
            got = enumerate_h1_classes(build_graph(vs, es), G).count
            want = oracles.h1_class_count_oracle(vs, es, G)
            assert got == want, (vs, es, str(G), got, want)
            n += 1
    assert enumerate_h1_classes(rose_graph(2), symmetric_group(3)).count == 11
    return f"{len(graphs)} graphs x {len(groups)} groups = {n} exact matches"


def _criterion_5() -> str:
    finite = [Cyclic(2), Cyclic(3), Cyclic(4), Cyclic(6), DirectProduct((Cyclic(2), Cyclic(2)))]
    bases = [(cycle_graph(n), 1) for n in range(1, 7)] + [(rose_graph(k), k) for k in range(0, 5)]
    for g, b1 in bases:
        assert g.betti1() == b1
        for G in finite:
            h1 = abelian_cohomology(constant_sheaf(g, G)).h1
            assert h1.order == G.order**b1, (str(G), b1, str(h1))
        h1 = abelian_cohomology(constant_sheaf(g, FreeAbelian(1))).h1
        assert (h1.free_rank, list(h1.torsion)) == (b1, []), str(h1)
    rng = random.Random(7)
    for _ in range(1000):
        r, c = rng.randint(1, 8), rng.randint(1, 8)
        density = rng.random()
        A = [[rng.randint(-9, 9) if rng.random() < density else 0 for _ in range(c)] for _ in range(r)]
        U, D, V = smith_normal_form(A)
        assert oracles.matmul(oracles.matmul(U, A), V) == D
        assert abs(oracles.det_fraction(U)) == 1 and abs(oracles.det_fraction(V)) == 1
        assert is_smith_form(D)
        assert sum(1 for i in range(min(r, c)) if D[i][i]) == oracles.rank_fraction(A)
    return f"|H^1| = |G|^b1 on {len(bases)} bases x {len(finite)} groups, Z^b1 over Z; 1000 SNF checks"


def _criterion_6() -> str:
    rng = random.Random(99)
    names = list(support.GROUP_ZOO)
    n_trivial = 0
    oracle_checked = 0
    for k in range(500):
        G = support.GROUP_ZOO[names[k % len(names)]]
        g = support.random_connected_graph(rng)
        sheaf = constant_sheaf(g, G)
        if rng.random() < 0.5:
            xi = {v: support.random_element(G, rng) for v in g.vertices}
            eta = coboundary(sheaf, xi)
        else:
            eta = {e.id: support.random_element(G, rng) for e in g.edges}
        T = torsor_from_cocycle(sheaf, eta)
        s = global_sections(T)
        cob = is_coboundary(sheaf, eta)
        assert (s is None) == (cob is None)
        if s is not None:
            n_trivial += 1
            assert section_is_compatible(T, s)
        if G.is_finite and G.order ** len(g.vertices) <= 5000:
            edges = [(e.id, e.tail, e.head) for e in g.edges]
            assert (s is not None) == bool(oracles.compatible_sections(G, g.vertices, edges, eta))
            oracle_checked += 1
        for _ in range(3):
            w = support.random_walk(g, rng, rng.randint(0, 6))
            p, x = support.random_element(G, rng), support.random_element(G, rng)
            assert transport(T, w, G.mul(x, p)) == G.mul(x, transport(T, w, p))
        if g.is_connected():
            hd = holonomy(sheaf, eta)
            p = support.random_element(G, rng)
            for c, h in zip(hd.cycles, hd.holonomies):
                assert transport(T, c, G.identity()) == h
                assert transport(T, c, p) == G.mul(p, h)
    return f"500 instances ({n_trivial} trivial, {oracle_checked} against exhaustive sections)"


def _criterion_7() -> str:
    Z, Z3 = FreeAbelian(1), FreeAbelian(3)
    c = cycle_graph(4)
    P1 = Paradox.constant(c, Z3, dict(e1=(2, 4, 6), e2=(0, 0, 0), e3=(0, 0, 0), e4=(0, 0, 0)))
    P2 = Paradox.constant(c, Z, dict(e1=2, e2=0, e3=0, e4=0))
    Phi = Homomorphism.from_function(Z3, Z, lambda v: (-v[0] + v[1],))
    Psi = Homomorphism.from_function(Z, Z3, lambda n: (n[0], 2 * n[0], 3 * n[0]))
    assert fiber_equivalent(P1, P2, Phi, Psi)
    tor, circ = torus(1, 0), circle(1)
    m = ParadoxMorphism(petal_inclusion(circ, tor), identity_hom(Z))
    assert check_morphism(m, circ, tor)
    occ = Paradox.constant(c, Cyclic(2), dict(e1=-1, e2=1, e3=1, e4=1))
    z3 = Paradox.constant(c, Cyclic(3), dict(e1=1, e2=0, e3=0, e4=0))
    assert search_fiber_equivalence(occ, z3) is None
    homs = enumerate_homomorphisms(Cyclic(2), Cyclic(3)) + enumerate_homomorphisms(Cyclic(3), Cyclic(2))
    assert len(homs) == 2 and all(h.images == (h.target.identity(),) * len(h.images) for h in homs)
    return "Phi/Psi fiber pair, petal inclusion, Z_2 vs Z_3 exhaustive non-equivalence"


def _criterion_8() -> str:
    D = InfiniteDihedral()
    g = rose_graph(2)
    for delta in range(-5, 6):
        images = {"a": (delta, -1), "b": (delta, 1)}
        T = torsor_from_cocycle(constant_sheaf(g, D), images)
        ab = transport(T, Walk("v", (("a", 1), ("b", 1))), D.identity())
        ba = transport(T, Walk("v", (("b", 1), ("a", 1))), D.identity())
        assert (ab != ba) == (delta != 0)
        assert ab == (0, -1) and ba == (2 * delta, -1)
        if delta != 0:
            assert validate_presentation_rep([KLEIN_RELATOR], images, D)
            assert not validate_presentation_rep([TORUS_RELATOR], images, D)
    return "Klein relator holds, torus relator fails, ab != ba exactly for delta != 0"


CRITERIA = {
    1: ("gallery regression", _criterion_1),
    2: ("cubic staircase classification", _criterion_2),
    3: ("tree boundary counts", _criterion_3),
    4: ("H^1 class count vs Burnside oracle", _criterion_4),
    5: ("abelian pipeline and SNF", _criterion_5),
    6: ("torsor laws", _criterion_6),
    7: ("fiber / path equivalence fixtures", _criterion_7),
    8: ("Klein nonabelianness", _criterion_8),
}


def run_criterion(n: int) -> tuple[bool, str]:
    title, fn = CRITERIA[n]
    try:
        detail = fn()
        ok = True
    except Exception as exc:  # recorded, then re-raised by the pytest wrapper
        ok, detail = False, f"{type(exc).__name__}: {exc}"
        RESULTS[n] = (ok, detail)
        line = f"CRITERION {n} [{title}]: FAIL - {detail}"
        print(line)
        raise
    RESULTS[n] = (ok, detail)
    print(f"CRITERION {n} [{title}]: PASS - {detail}")
    return ok, detail


@pytest.mark.parametrize("n", sorted(CRITERIA))
def test_criterion(n):
    run_criterion(n)


def summary_lines() -> list[str]:
    out = []
    for n in sorted(CRITERIA):
        if n in RESULTS:
            ok, detail = RESULTS[n]
            out.append(f"CRITERION {n} [{CRITERIA[n][0]}]: {'PASS' if ok else 'FAIL'} - {detail}")
    return out


if __name__ == "__main__":
    failed = 0
    for n in sorted(CRITERIA):
        try:
            run_criterion(n)
        except Exception:
            failed += 1
            traceback.print_exc()
    sys.exit(1 if failed else 0)
