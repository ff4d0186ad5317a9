"""Built-in worked examples with their expected analysis results.

Each entry computes a small record of results through the public API and
compares it key by key with the recorded expectation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Any, Callable, Iterable

from .cohomology import (
    abelian_cohomology,
    boundary_obstruction,
    constant_sheaf,
    holonomy,
    is_coboundary,
)
from .graph import Walk, cycle_graph, path_graph, rose_graph, star_graph
from .groups import (
    Cyclic,
    FreeAbelian,
    Homomorphism,
    InfiniteDihedral,
    ScaleLattice,
    cube_rotation_group,
    identity_hom,
    scale_exp,
    scale_log,
)
from .paradox import (
    GraphMap,
    Paradox,
    ParadoxMorphism,
    _plain,
    are_isomorphic,
    check_morphism,
    classify_tree_boundary,
    fiber_equivalent,
    pullback_cocycle,
    search_fiber_equivalence,
    validate_presentation_rep,
)
from .torsor import torsor_from_cocycle, transport

CUBIC_HOLONOMIES = [
    (2, 2, 2),
    (1, 1, 1),
    (1, 1, 1),
    (4, 4, 4),
    (-2, -2, -1),
    (-2, -2, -1),
    (2, 2, 1),
    (2, 2, 1),
]
KLEIN_RELATOR = "a b a^-1 b"
TORUS_RELATOR = "a b a^-1 b^-1"


@dataclass
class GalleryEntry:
    name: str
    compute: Callable[[], dict]
    expected: dict
    source: str
    metadata: dict = field(default_factory=dict)


@dataclass
class EntryResult:
    name: str
    passed: bool
    computed: dict
    expected: dict
    mismatches: list
    source: str
    error: str | None = None

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "computed": _plain(self.computed),
            "expected": _plain(self.expected),
            "mismatches": _plain(self.mismatches),
            "source": self.source,
            "error": self.error,
        }


@dataclass
class GalleryReport:
    results: list

    @property
    def ok(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def failures(self) -> list:
        return [r for r in self.results if not r.passed]


def run_gallery(entries: Iterable[GalleryEntry]) -> GalleryReport:
    results = []
    for entry in entries:
        try:
            computed = entry.compute()
        except Exception as exc:  # failures are report content
            results.append(EntryResult(entry.name, False, {}, entry.expected, [], entry.source, f"{type(exc).__name__}: {exc}"))
            continue
        mismatches = [
            {"key": k, "expected": v, "computed": computed.get(k, "<missing>")}
            for k, v in entry.expected.items()
            if computed.get(k, object()) != v
        ]
        results.append(EntryResult(entry.name, not mismatches, computed, entry.expected, mismatches, entry.source))
    return GalleryReport(results)


# ---------------------------------------------------------------------------
# fixtures

Z = FreeAbelian(1)
Z3 = FreeAbelian(3)
D = InfiniteDihedral()


def penrose(delta=(1, 1, 1, 1)) -> Paradox:
    return Paradox.constant(
        cycle_graph(4), Z, {f"e{i + 1}": d for i, d in enumerate(delta)}, "penrose_staircase", {"delta": delta}
    )


def cubic_staircase(h, name: str | None = None) -> Paradox:
    """A cycle of unit translations summing to ``h``."""
    steps = []
    for axis, k in enumerate(h):
        unit = [0, 0, 0]
        unit[axis] = 1 if k > 0 else -1
        steps.extend([tuple(unit)] * abs(k))
    g = cycle_graph(len(steps))
    return Paradox.constant(g, Z3, {f"e{i + 1}": s for i, s in enumerate(steps)}, name or f"cubic{tuple(h)}")


def cylindrical() -> Paradox:
    # six stair segments; the two seam-crossing segments are flat
    return Paradox.constant(
        cycle_graph(6), Z, dict(e1=1, e2=1, e3=0, e4=1, e5=1, e6=0), "cylindrical_staircase"
    )


def zigzag_cocycle(n: int) -> dict:
    return {f"e{i + 1}": -1 for i in range(n)}


def torus(da: int, db: int) -> Paradox:
    return Paradox.constant(rose_graph(2), Z, {"a": da, "b": db}, f"torus({da},{db})")


def mobius(delta: int = 1, name: str = "mobius") -> Paradox:
    return Paradox.constant(
        cycle_graph(3), D, {"e1": (0, 1), "e2": (delta, 1), "e3": (0, -1)}, name, {"delta": delta}
    )


def klein(delta: int = 1) -> Paradox:
    return Paradox.constant(rose_graph(2), D, {"a": (delta, -1), "b": (delta, 1)}, f"klein({delta})")


def necker_path(n: int = 5) -> Paradox:
    g = path_graph(n)
    return Paradox.from_boundary(g, Cyclic(2), {"v0": 1, f"v{n - 1}": -1}, f"necker_path({n})")


def impossible_bar(n: int = 5, g0: str = "+x+y+z", g1: str = "+y-x+z") -> Paradox:
    g = path_graph(n)
    return Paradox.from_boundary(g, cube_rotation_group(), {"v0": g0, f"v{n - 1}": g1}, "impossible_bar")


def circle(k: int = 1) -> Paradox:
    return Paradox.constant(cycle_graph(4), Z, dict(e1=k, e2=0, e3=0, e4=0), f"circle({k})")


def petal_inclusion(source: Paradox, target: Paradox) -> GraphMap:
    """Wrap ``e1`` of a 4-cycle once around petal ``a``; collapse the rest."""
    walks = {e.id: Walk("v") for e in source.graph.edges}
    walks["e1"] = Walk("v", (("a", 1),))
    return GraphMap(source.graph, target.graph, {v: "v" for v in source.graph.vertices}, walks)


# ---------------------------------------------------------------------------
# computations

def _loop_record(P: Paradox, **extra) -> dict:
    hol = P.holonomy().holonomies
    rec = {
        "holonomy": hol[0] if len(hol) == 1 else hol,
        "trivial": is_coboundary(P.sheaf, P.cocycle) is not None,
    }
    rec.update(extra)
    return rec


def _gcd(v) -> int:
    return gcd(*v)


def _cubic(h):
    def compute():
        P = cubic_staircase(h)
        return _loop_record(P, gcd=_gcd(P.holonomy().holonomies[0]))

    return compute


def _penrose():
    P = penrose()
    coh = abelian_cohomology(P.sheaf)
    return _loop_record(P, h1=str(coh.h1))


def _cylindrical():
    P = cylindrical()
    return _loop_record(P, isomorphic_to_penrose=are_isomorphic(P, penrose()).verdict == "isomorphic")


def _zigzag(n):
    def compute():
        sheaf = constant_sheaf(cycle_graph(n), Cyclic(2))
        eta = zigzag_cocycle(n)
        trivial = is_coboundary(sheaf, eta) is not None
        return {"holonomy": holonomy(sheaf, eta).holonomies[0], "trivial": trivial}

    return compute


def _torus(da, db):
    def compute():
        P = torus(da, db)
        hol = tuple(x[0] for x in P.holonomy().holonomies)
        return {
            "holonomy": hol,
            "trivial": is_coboundary(P.sheaf, P.cocycle) is not None,
            "h1": str(abelian_cohomology(P.sheaf).h1),
            "gcd": _gcd(hol),
            "commutator_transport": transport(
                torsor_from_cocycle(P.sheaf, P.cocycle), Walk("v", (("a", 1), ("b", 1), ("a", -1), ("b", -1))), (0,)
            ),
        }

    return compute


def _mobius(name):
    def compute():
        P = mobius(1, name)
        (g,) = P.holonomy().holonomies
        rec = _loop_record(P, square=D.mul(g, g))
        if name == "rp2":
            rec["isomorphic_to_mobius"] = are_isomorphic(P, mobius(1)).verdict == "isomorphic"
        return rec

    return compute


def _klein(delta):
    def compute():
        P = klein(delta)
        T = torsor_from_cocycle(P.sheaf, P.cocycle)
        images = {"a": P.cocycle["a"], "b": P.cocycle["b"]}
        return {
            "transport_ab": transport(T, Walk("v", (("a", 1), ("b", 1))), D.identity()),
            "transport_ba": transport(T, Walk("v", (("b", 1), ("a", 1))), D.identity()),
            "klein_relator": validate_presentation_rep([KLEIN_RELATOR], images, D),
            "torus_relator": validate_presentation_rep([TORUS_RELATOR], images, D),
            "trivial": is_coboundary(P.sheaf, P.cocycle) is not None,
        }

    return compute


def _necker():
    P = necker_path(5)
    res = boundary_obstruction(P.graph, ["v0", "v4"], Cyclic(2), P.metadata["boundary_values"])
    cls = classify_tree_boundary(P.graph, P.graph.leaves(), Cyclic(2))
    return {"extendable": res.extendable, "relative_invariant": P.relative_invariant(), "classes": cls.count}


def _bar():
    P = impossible_bar()
    G = P.group
    beta = P.metadata["boundary_values"]
    g0, g1 = beta["v0"], beta["v4"]
    res = boundary_obstruction(P.graph, ["v0", "v4"], G, beta)
    return {
        "extendable": res.extendable,
        "relative_transform_nontrivial": not G.is_identity(G.mul(g1, G.inv(g0))),
        "group_order": G.order,
    }


def _star(N):
    def compute():
        g = star_graph(N)
        cls = classify_tree_boundary(g, g.leaves(), Cyclic(2))
        parts = sorted(
            tuple(sorted((sum(1 for x in b.values() if x == 1), sum(1 for x in b.values() if x == -1))))
            for b in cls.representatives
        )
        return {"classes": cls.count, "partitions": parts}

    return compute


def _fiber_z3_z():
    g = cycle_graph(3)
    P1 = Paradox.constant(g, Z3, {"e1": (2, 4, 6), "e2": (0, 0, 0), "e3": (0, 0, 0)}, "cubic(2,4,6)")
    P2 = Paradox.constant(g, Z, {"e1": 2, "e2": 0, "e3": 0}, "height(2)")
    Phi = Homomorphism.from_matrix(Z3, Z, [[-1, 1, 0]])
    Psi = Homomorphism.from_matrix(Z, Z3, [[1], [2], [3]])
    return {
        "fiber_equivalent": fiber_equivalent(P1, P2, Phi, Psi).ok,
        "Phi(h)": Phi((2, 4, 6)),
        "Psi(d)": Psi((2,)),
        "isomorphic": are_isomorphic(P1, P2).verdict,
    }


def _occlusion():
    g = cycle_graph(4)
    occ = Paradox.constant(g, Cyclic(2), dict(e1=-1, e2=1, e3=1, e4=1), "occlusion")
    height = Paradox.constant(g, Z, dict(e1=1, e2=0, e3=0, e4=0), "height")
    z3 = Paradox.constant(g, Cyclic(3), dict(e1=1, e2=0, e3=0, e4=0), "Z3")
    return {
        "search_vs_height": search_fiber_equivalence(occ, height),
        "search_vs_Z3": search_fiber_equivalence(occ, z3),
    }


def _scale():
    g = cycle_graph(3)
    S = ScaleLattice(2)
    height = Paradox.constant(g, Z, {"e1": 1, "e2": 0, "e3": 0}, "height")
    scale = Paradox.constant(g, S, {"e1": 2, "e2": 1, "e3": 1}, "scale")
    return {
        "isomorphic": are_isomorphic(height, scale).verdict,
        "fiber_equivalent": fiber_equivalent(height, scale, scale_exp(2), scale_log(2)).ok,
    }


def _petal():
    tor = torus(1, 0)
    c = circle(1)
    m = ParadoxMorphism(petal_inclusion(c, tor), identity_hom(Z))
    pen = penrose()
    m4 = ParadoxMorphism(petal_inclusion(pen, tor), Homomorphism.from_matrix(Z, Z, [[4]]))
    pulled = pullback_cocycle(m.f, tor.cocycle, Z)
    return {
        "pullback_holonomy": sum(x[0] for x in pulled.values()),
        "circle_to_torus": check_morphism(m, c, tor).ok,
        "penrose_to_torus_times4": check_morphism(m4, pen, tor).ok,
        "circle_torus_isomorphic": are_isomorphic(c, tor).verdict,
    }


def _cubic_classes():
    Ps = [cubic_staircase(h, f"cubic{i + 1}") for i, h in enumerate(CUBIC_HOLONOMIES)]
    classes: list[list] = []
    for P in Ps:
        for cls in classes:
            if are_isomorphic(P, cls[0]).verdict == "isomorphic":
                cls.append(P)
                break
        else:
            classes.append([P])
    gcds = sorted(_gcd(c[0].holonomy().holonomies[0]) for c in classes)
    v = are_isomorphic(cubic_staircase((2, 2, 1)), cubic_staircase((-2, -2, -1)))
    return {"classes": len(classes), "gcds": gcds, "witness_matrix": v.witness["matrix"]}


def builtin_gallery() -> list[GalleryEntry]:
    entries = [
        GalleryEntry(
            "penrose_staircase",
            _penrose,
            {"holonomy": (4,), "trivial": False, "h1": "Z"},
            "Penrose staircase: height holonomy k = sum of step heights",
            {"pinned": "all step heights set to 1, so k = 4"},
        )
    ]
    for i, h in enumerate(CUBIC_HOLONOMIES):
        entries.append(
            GalleryEntry(
                f"cubic_staircase_{i + 1}",
                _cubic(h),
                {"holonomy": h, "trivial": False, "gcd": _gcd(h)},
                "cubic staircases: net translation around a cycle of cubes",
            )
        )
    entries.append(
        GalleryEntry(
            "cubic_classes",
            _cubic_classes,
            {"classes": 3, "gcds": [1, 2, 4], "witness_matrix": [[-1, 0, 0], [0, -1, 0], [0, 0, -1]]},
            "cubic staircases up to isomorphism",
        )
    )
    entries.append(
        GalleryEntry(
            "cylindrical_staircase",
            _cylindrical,
            {"holonomy": (4,), "trivial": False, "isomorphic_to_penrose": True},
            "cylindrical staircase: same class as the Penrose staircase",
        )
    )
    for n in (3, 4, 5):
        entries.append(
            GalleryEntry(
                f"zigzag_{n}",
                _zigzag(n),
                {"holonomy": (-1) ** n, "trivial": n % 2 == 0},
                "zigzag depth: consistent exactly for an even number of corners",
            )
        )
    for da, db, note in ((1, 1, "unit height change on both loops"), (3, 2, "vertical loop a = 3, horizontal loop b = 2"), (1, 0, "paradox along one loop only")):
        entries.append(
            GalleryEntry(
                f"torus_{da}_{db}",
                _torus(da, db),
                {"holonomy": (da, db), "trivial": False, "h1": "Z^2", "gcd": _gcd((da, db)), "commutator_transport": (0,)},
                "torus staircase on a wedge of two circles",
                {"axes": note},
            )
        )
    for name in ("mobius", "rp2"):
        exp = {"holonomy": (1, -1), "trivial": False, "square": (0, 1)}
        if name == "rp2":
            exp["isomorphic_to_mobius"] = True
        entries.append(GalleryEntry(name, _mobius(name), exp, "orientation flip on a triangle: holonomy (delta, -1)", {"delta": 1}))
    entries.append(
        GalleryEntry(
            "klein",
            _klein(1),
            {"transport_ab": (0, -1), "transport_ba": (2, -1), "klein_relator": True, "torus_relator": False, "trivial": False},
            "Klein bottle staircase: rho(a) = (delta, -1), rho(b) = (delta, +1)",
            {"delta": 1},
        )
    )
    entries.append(
        GalleryEntry(
            "necker_path",
            _necker,
            {"extendable": False, "relative_invariant": (-1,), "classes": 1},
            "Necker cube sequence with contradictory ends",
        )
    )
    entries.append(
        GalleryEntry(
            "impossible_bar",
            _bar,
            {"extendable": False, "relative_transform_nontrivial": True, "group_order": 24},
            "impossible bar: end orientations g0, g1 with g1 g0^-1 != 1",
            {"model": "24-element cube rotation group as a finite orientation group"},
        )
    )
    for N in range(2, 7):
        exp = {"classes": N // 2}
        if N == 4:
            exp["partitions"] = [(1, 3), (2, 2)]
        entries.append(GalleryEntry(f"star_tree_{N}", _star(N), exp, "star tree boundary paradoxes: floor(N/2) classes"))
    entries.append(
        GalleryEntry(
            "fiber_cubic_height",
            _fiber_z3_z,
            {"fiber_equivalent": True, "Phi(h)": (2,), "Psi(d)": (2, 4, 6), "isomorphic": "not_isomorphic"},
            "Z^3 holonomy (2,4,6) and Z holonomy 2 via Phi(a,b,c) = -a+b, Psi(n) = (n,2n,3n)",
        )
    )
    entries.append(
        GalleryEntry(
            "occlusion_distinct",
            _occlusion,
            {"search_vs_height": None, "search_vs_Z3": None},
            "binary occlusion paradox is not fiber-equivalent to height",
        )
    )
    entries.append(
        GalleryEntry(
            "scale_height_isomorphic",
            _scale,
            {"isomorphic": "isomorphic", "fiber_equivalent": True},
            "height and multiplicative scale related by exp / log",
            {"model": "scale group restricted to the lattice 2^Z"},
        )
    )
    entries.append(
        GalleryEntry(
            "petal_inclusion",
            _petal,
            {"pullback_holonomy": 1, "circle_to_torus": True, "penrose_to_torus_times4": True, "circle_torus_isomorphic": "not_isomorphic"},
            "circle included as the first loop of the torus wedge",
        )
    )
    return entries


def gallery_names() -> list[str]:
    return [e.name for e in builtin_gallery()]


def format_value(x: Any) -> str:
    return str(_plain(x))
