"""Network sheaves of groups, coboundaries, holonomy and H^0/H^1.

Conventions used everywhere in the package:

* cochains are dicts (vertex id -> element, edge id -> element);
* ``(delta xi)_e = F_tail(xi_tail)^-1 * F_head(xi_head)`` (for abelian
  groups this is head minus tail);
* a 0-cochain ``xi`` twists a 1-cochain by
  ``eta'_e = F_tail(xi_tail)^-1 * eta_e * F_head(xi_head)``;
* the product along a walk uses ``eta_e`` on forward steps and
  ``eta_e^-1`` on reverse steps, in walk order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import prod
from typing import Mapping, Sequence

from . import intlinalg as la
from . import kernels
from .errors import BoundExceeded, Undecided
from .graph import (
    FORWARD,
    GraphError,
    Multigraph,
    SpanningTree,
    Walk,
    fundamental_cycles,
    spanning_tree,
)
from .groups import (
    TRIVIAL,
    Group,
    GroupError,
    Homomorphism,
    abelian_orders,
    from_coords,
    simultaneous_conjugacy,
    to_coords,
)

MAX_H1_SEARCH = 10**7

TAIL, HEAD = "tail", "head"


class SheafError(ValueError):
    pass


@dataclass(frozen=True)
class NetworkSheaf:
    """Stalks and restriction maps over a multigraph.

    ``kind`` is ``"constant"``, ``"boundary_trivial"`` or ``"general"``.
    Restrictions are keyed by ``(edge id, "tail"|"head")`` so a self-loop
    keeps its two incidences apart.
    """

    graph: Multigraph
    kind: str
    group: Group | None = None
    boundary: frozenset = frozenset()
    vertex_stalks: dict = field(default_factory=dict, hash=False, compare=False)
    edge_stalks: dict = field(default_factory=dict, hash=False, compare=False)
    restrictions: dict = field(default_factory=dict, hash=False, compare=False)

    def vertex_stalk(self, v) -> Group:
        if self.kind == "constant":
            return self.group
        if self.kind == "boundary_trivial":
            return TRIVIAL if v in self.boundary else self.group
        return self.vertex_stalks[v]

    def edge_stalk(self, eid) -> Group:
        if self.kind == "general":
            return self.edge_stalks[eid]
        return self.group

    def endpoint(self, eid, side: str):
        e = self.graph.edge(eid)
        return e.tail if side == TAIL else e.head

    def restriction(self, eid, side: str) -> Homomorphism:
        if self.kind == "general":
            return self.restrictions[(eid, side)]
        v = self.endpoint(eid, side)
        src = self.vertex_stalk(v)
        return Homomorphism.from_function(src, self.group, lambda g: g if src == self.group else self.group.identity())

    def restrict(self, eid, side: str, value):
        """Apply the restriction map of the given incidence."""
        if self.kind == "constant":
            return value
        if self.kind == "boundary_trivial":
            return self.group.identity() if self.endpoint(eid, side) in self.boundary else value
        return self.restrictions[(eid, side)](value)

    @property
    def is_abelian(self) -> bool:
        stalks = [self.vertex_stalk(v) for v in self.graph.vertices]
        stalks += [self.edge_stalk(e.id) for e in self.graph.edges]
        return all(s.is_abelian for s in stalks)

    def identity0(self) -> dict:
        return {v: self.vertex_stalk(v).identity() for v in self.graph.vertices}

    def identity1(self) -> dict:
        return {e.id: self.edge_stalk(e.id).identity() for e in self.graph.edges}

    def check0(self, xi: Mapping) -> dict:
        return _check_cochain(xi, self.graph.vertices, self.vertex_stalk, "vertex")

    def check1(self, eta: Mapping) -> dict:
        return _check_cochain(eta, self.graph.edge_ids, self.edge_stalk, "edge")


def _check_cochain(c: Mapping, keys, stalk, what) -> dict:
    keys = list(keys)
    missing = [k for k in keys if k not in c]
    if missing:
        raise SheafError(f"cochain is missing {what}(s) {missing}")
    extra = set(c) - set(keys)
    if extra:
        raise SheafError(f"cochain names unknown {what}(s) {sorted(map(str, extra))}")
    out = {}
    for k in keys:
        try:
            out[k] = stalk(k).coerce(c[k])
        except GroupError as exc:
            raise SheafError(f"{what} {k!r}: {exc}") from None
    return out


def constant_sheaf(graph: Multigraph, G: Group) -> NetworkSheaf:
    return NetworkSheaf(graph, "constant", G)


def boundary_trivialized_sheaf(graph: Multigraph, G: Group, boundary) -> NetworkSheaf:
    """The constant sheaf with trivial stalks forced on ``boundary`` vertices."""
    boundary = frozenset(boundary)
    unknown = [a for a in boundary if not graph.has_vertex(a)]
    if unknown:
        raise SheafError(f"unknown boundary vertices {unknown}")
    return NetworkSheaf(graph, "boundary_trivial", G, boundary)


def general_sheaf(graph: Multigraph, vertex_stalks: Mapping, edge_stalks: Mapping, restrictions: Mapping) -> NetworkSheaf:
    """Arbitrary stalks; ``restrictions[(eid, side)]`` maps the endpoint stalk to the edge stalk."""
    for v in graph.vertices:
        if v not in vertex_stalks:
            raise SheafError(f"no stalk for vertex {v!r}")
    for e in graph.edges:
        if e.id not in edge_stalks:
            raise SheafError(f"no stalk for edge {e.id!r}")
        for side, v in ((TAIL, e.tail), (HEAD, e.head)):
            phi = restrictions.get((e.id, side))
            if phi is None:
                raise SheafError(f"missing restriction for {side} of edge {e.id!r}")
            if phi.source != vertex_stalks[v] or phi.target != edge_stalks[e.id]:
                raise SheafError(f"restriction for {side} of edge {e.id!r} has the wrong source or target")
    return NetworkSheaf(graph, "general", None, frozenset(), dict(vertex_stalks), dict(edge_stalks), dict(restrictions))


# ---------------------------------------------------------------------------
# cochain operations

def coboundary(sheaf: NetworkSheaf, xi: Mapping) -> dict:
    xi = sheaf.check0(xi)
    out = {}
    for e in sheaf.graph.edges:
        G = sheaf.edge_stalk(e.id)
        a = sheaf.restrict(e.id, TAIL, xi[e.tail])
        b = sheaf.restrict(e.id, HEAD, xi[e.head])
        out[e.id] = G.mul(G.inv(a), b)
    return out


def twist(sheaf: NetworkSheaf, eta: Mapping, xi: Mapping) -> dict:
    """Gauge transform of ``eta`` by the 0-cochain ``xi``."""
    eta = sheaf.check1(eta)
    xi = sheaf.check0(xi)
    out = {}
    for e in sheaf.graph.edges:
        G = sheaf.edge_stalk(e.id)
        a = sheaf.restrict(e.id, TAIL, xi[e.tail])
        b = sheaf.restrict(e.id, HEAD, xi[e.head])
        out[e.id] = G.mul(G.mul(G.inv(a), eta[e.id]), b)
    return out


def walk_product(G: Group, eta: Mapping, walk: Walk):
    out = G.identity()
    for eid, d in walk.steps:
        x = eta[eid]
        out = G.mul(out, x if d == FORWARD else G.inv(x))
    return out


@dataclass(frozen=True)
class HolonomyData:
    basepoint: object
    tree: SpanningTree
    cycles: tuple
    holonomies: tuple


def _require_constant(sheaf: NetworkSheaf):
    if sheaf.kind != "constant":
        raise SheafError("holonomy needs a constant sheaf")


def holonomy(sheaf: NetworkSheaf, eta: Mapping, basepoint=None) -> HolonomyData:
    """Holonomy of ``eta`` around each fundamental cycle at ``basepoint``."""
    _require_constant(sheaf)
    g = sheaf.graph
    if not g.is_connected():
        raise GraphError("holonomy needs a connected graph")
    eta = sheaf.check1(eta)
    if basepoint is None:
        basepoint = g.vertices[0]
    tree = spanning_tree(g, basepoint)
    cycles = fundamental_cycles(g, tree)
    hol = tuple(walk_product(sheaf.group, eta, c) for c in cycles)
    return HolonomyData(basepoint, tree, tuple(cycles), hol)


def _component_trees(g: Multigraph) -> list[SpanningTree]:
    """One BFS tree per component, rooted at its first declared vertex."""
    trees = []
    for comp in g.components():
        members = set(comp)
        sub = Multigraph(
            tuple(v for v in g.vertices if v in members),
            tuple(e for e in g.edges if e.tail in members),
        )
        trees.append(spanning_tree(sub, sub.vertices[0]))
    return trees


def _tree_gauge(G: Group, eta: Mapping, trees: Sequence[SpanningTree]) -> dict:
    """``P_v``: the product of ``eta`` along the tree path from the root to ``v``."""
    P = {}
    for t in trees:
        P[t.root] = G.identity()
        for v in t.order[1:]:
            u, eid, d = t.parent[v]
            x = eta[eid]
            P[v] = G.mul(P[u], x if d == FORWARD else G.inv(x))
    return P


def _constant_witness(sheaf: NetworkSheaf, eta: dict):
    G = sheaf.group
    P = _tree_gauge(G, eta, _component_trees(sheaf.graph))
    const = constant_sheaf(sheaf.graph, G)
    return P if coboundary(const, P) == eta else None


def is_coboundary(sheaf: NetworkSheaf, eta: Mapping):
    """A 0-cochain ``xi`` with ``delta xi = eta``, or None.

    Raises :class:`Undecided` for nonabelian sheaves with varying stalks.
    """
    eta = sheaf.check1(eta)
    if sheaf.kind == "constant":
        return _constant_witness(sheaf, eta)
    if sheaf.kind == "boundary_trivial":
        G = sheaf.group
        xi = _constant_witness(sheaf, eta)
        if xi is None:
            return None
        # constant-sheaf witnesses differ by a left constant per component
        out = {}
        for comp in sheaf.graph.components():
            anchors = [v for v in comp if v in sheaf.boundary]
            c = G.identity()
            if anchors:
                vals = {xi[a] for a in anchors}
                if len(vals) != 1:
                    return None
                c = G.inv(xi[anchors[0]])
            for v in comp:
                out[v] = TRIVIAL.identity() if v in sheaf.boundary else G.mul(c, xi[v])
        if coboundary(sheaf, out) != eta:
            return None
        return out
    if sheaf.is_abelian:
        return _abelian_solve(sheaf, sheaf.identity1(), eta)
    raise Undecided("coboundary test for nonabelian sheaves with varying stalks")


def cohomologous(sheaf: NetworkSheaf, eta: Mapping, eta2: Mapping):
    """A 0-cochain ``xi`` with ``twist(eta, xi) == eta2``, or None."""
    eta = sheaf.check1(eta)
    eta2 = sheaf.check1(eta2)
    if sheaf.kind in ("constant", "boundary_trivial"):
        G = sheaf.group
        trees = _component_trees(sheaf.graph)
        P = _tree_gauge(G, eta, trees)
        P2 = _tree_gauge(G, eta2, trees)
        const = constant_sheaf(sheaf.graph, G)
        xi = {}
        for t in trees:
            comp = t.order
            anchors = [v for v in comp if v in sheaf.boundary]
            if anchors:
                a = anchors[0]
                x = G.mul(P[a], G.inv(P2[a]))
            else:
                hol1, hol2 = [], []
                members = set(comp)
                for e in sheaf.graph.edges:
                    if e.tail in members and e.id not in t.tree_edges:
                        hol1.append(G.mul(G.mul(P[e.tail], eta[e.id]), G.inv(P[e.head])))
                        hol2.append(G.mul(G.mul(P2[e.tail], eta2[e.id]), G.inv(P2[e.head])))
                x = simultaneous_conjugacy(G, hol1, hol2)
                if x is None:
                    return None
            for v in comp:
                xi[v] = G.mul(G.mul(G.inv(P[v]), x), P2[v])
        if twist(const, eta, xi) != eta2:
            return None
        if sheaf.kind == "boundary_trivial":
            if any(xi[a] != G.identity() for a in sheaf.boundary):
                return None
            xi = {v: (TRIVIAL.identity() if v in sheaf.boundary else x) for v, x in xi.items()}
        return xi
    if sheaf.is_abelian:
        return _abelian_solve(sheaf, eta, eta2)
    raise Undecided("cohomology test for nonabelian sheaves with varying stalks")


def is_trivial_class(sheaf: NetworkSheaf, eta: Mapping) -> bool:
    return is_coboundary(sheaf, eta) is not None


# ---------------------------------------------------------------------------
# abelian pipeline

@dataclass(frozen=True)
class AbelianGroupDescription:
    free_rank: int
    torsion: tuple  # invariant factors > 1, divisibility chain

    @property
    def order(self) -> int | None:
        return None if self.free_rank else prod(self.torsion)

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def __str__(self):
        parts = [f"Z_{d}" for d in self.torsion]
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        return " x ".join(parts) if parts else "0"

    def as_dict(self):
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}


@dataclass(frozen=True)
class AbelianCohomology:
    h0: AbelianGroupDescription
    h1: AbelianGroupDescription
    coboundary_matrix: tuple  # rows = edge coordinates, cols = vertex coordinates
    shape: tuple
    snf_diagonal: tuple


class _Coordinates:
    """Integer coordinates for an abelian sheaf's cochain groups."""

    def __init__(self, sheaf: NetworkSheaf):
        if not sheaf.is_abelian:
            raise SheafError("abelian cohomology needs abelian stalks; use holonomy analysis instead")
        g = sheaf.graph
        self.sheaf = sheaf
        self.v_orders, self.v_slots = [], {}
        for v in g.vertices:
            orders = abelian_orders(sheaf.vertex_stalk(v))
            self.v_slots[v] = (len(self.v_orders), len(orders))
            self.v_orders += orders
        self.e_orders, self.e_slots = [], {}
        for e in g.edges:
            orders = abelian_orders(sheaf.edge_stalk(e.id))
            self.e_slots[e.id] = (len(self.e_orders), len(orders))
            self.e_orders += orders
        nv, ne = len(self.v_orders), len(self.e_orders)
        D = la.zeros(ne, nv)
        for e in g.edges:
            E = sheaf.edge_stalk(e.id)
            r0, _ = self.e_slots[e.id]
            for side, v, sign in ((TAIL, e.tail, -1), (HEAD, e.head, 1)):
                S = sheaf.vertex_stalk(v)
                c0, k = self.v_slots[v]
                for j in range(k):
                    unit = from_coords(S, [int(i == j) for i in range(k)])
                    img = to_coords(E, sheaf.restrict(e.id, side, unit))
                    for i, x in enumerate(img):
                        D[r0 + i][c0 + j] += sign * x
        self.D = D
        self.R1_cols = [i for i, m in enumerate(self.e_orders) if m]
        self.R0_cols = [i for i, m in enumerate(self.v_orders) if m]

    def augmented(self):
        """``[D | R1]``: coboundary plus the edge relations."""
        ne = len(self.e_orders)
        return [
            row + [self.e_orders[i] if i == r else 0 for i in self.R1_cols]
            for r, row in enumerate(self.D)
        ] if ne else []

    def n_aug_cols(self):
        return len(self.v_orders) + len(self.R1_cols)

    def edge_vector(self, eta: dict) -> list[int]:
        out = []
        for e in self.sheaf.graph.edges:
            out += to_coords(self.sheaf.edge_stalk(e.id), eta[e.id])
        return out

    def vertex_cochain(self, x: Sequence[int]) -> dict:
        out = {}
        for v in self.sheaf.graph.vertices:
            c0, k = self.v_slots[v]
            out[v] = from_coords(self.sheaf.vertex_stalk(v), x[c0:c0 + k])
        return out


def _abelian_solve(sheaf: NetworkSheaf, eta: dict, eta2: dict):
    """Solve ``eta + delta xi = eta2`` over the integers."""
    co = _Coordinates(sheaf)
    b = [y - x for x, y in zip(co.edge_vector(eta), co.edge_vector(eta2))]
    sol = la.solve_integer_linear(co.augmented(), b, co.n_aug_cols())
    if sol is None:
        return None
    xi = co.vertex_cochain(sol[: len(co.v_orders)])
    if twist(sheaf, eta, xi) != eta2:  # defensive re-check
        return None
    return xi


def abelian_cohomology(sheaf: NetworkSheaf) -> AbelianCohomology:
    """H^0 and H^1 of an abelian sheaf through Smith normal form."""
    co = _Coordinates(sheaf)
    nv, ne = len(co.v_orders), len(co.e_orders)
    M = co.augmented()
    ncols = co.n_aug_cols()

    free1, tors1 = la.invariant_factors(M, ne, ncols)
    h1 = AbelianGroupDescription(free1, tuple(tors1))

    # H^0 = {x : D x in im R1} / im R0
    if ne:
        K = [v[:nv] for v in la.integer_kernel(M, ncols)]
    else:
        K = [[int(i == j) for i in range(nv)] for j in range(nv)]
    basis = la.column_space_basis(la.transpose(K, nv), len(K)) if K and nv else []
    k = len(basis)
    if k == 0:
        h0 = AbelianGroupDescription(0, ())
    else:
        B = la.transpose(basis, nv)  # nv x k
        Y = []
        for j in co.R0_cols:
            r = [co.v_orders[j] if i == j else 0 for i in range(nv)]
            y = la.solve_integer_linear(B, r, k)
            if y is None:  # pragma: no cover - im R0 lies in K
                raise AssertionError("vertex relation outside the kernel lattice")
            Y.append(y)
        free0, tors0 = la.invariant_factors(la.transpose(Y, k), k, len(Y)) if Y else (k, [])
        h0 = AbelianGroupDescription(free0, tuple(tors0))

    diag = ()
    if ne and nv:
        _, Dm, _ = la.smith_normal_form(co.D, nv)
        diag = tuple(la.diagonal(Dm))
    return AbelianCohomology(h0, h1, tuple(tuple(r) for r in co.D), (ne, nv), diag)


# ---------------------------------------------------------------------------
# brute-force class enumeration (finite constant sheaves)

@dataclass(frozen=True)
class H1Classes:
    count: int
    representatives: tuple  # one cochain dict per class, lexicographically least code
    backend: str


def _gauge_generators(G: Group, elems: list) -> list[int]:
    from .groups import _generating_set

    index = {x: i for i, x in enumerate(elems)}
    return [index[g] for g in _generating_set(G)]


def enumerate_h1_classes(graph: Multigraph, G: Group, max_search: int = MAX_H1_SEARCH) -> H1Classes:
    """Partition all of C^1 into gauge orbits by exhaustive search."""
    if not G.is_finite:
        raise Undecided("class enumeration needs a finite group")
    n, m = G.order, len(graph.edges)
    if n ** m > max_search:
        raise BoundExceeded(f"|G|^|E| = {n ** m} exceeds {max_search}")
    elems = G.elements()
    index = {x: i for i, x in enumerate(elems)}
    table = [index[G.mul(a, b)] for a in elems for b in elems]
    inv = [index[G.inv(a)] for a in elems]
    vpos = {v: i for i, v in enumerate(graph.vertices)}
    tails = [vpos[e.tail] for e in graph.edges]
    heads = [vpos[e.head] for e in graph.edges]
    gens = _gauge_generators(G, elems)
    labels, count = kernels.gauge_orbits(n, table, inv, tails, heads, len(graph.vertices), gens)
    reps = []
    seen = set()
    for code in range(n ** m):
        lab = labels[code]
        if lab in seen:
            continue
        seen.add(lab)
        eta, c = {}, code
        for e in graph.edges:
            eta[e.id] = elems[c % n]
            c //= n
        reps.append(eta)
    return H1Classes(count, tuple(reps), kernels.BACKEND)


# ---------------------------------------------------------------------------
# boundary data on trees

def _leaf_order(graph: Multigraph, leaves) -> list:
    leaves = set(leaves)
    unknown = [v for v in leaves if not graph.has_vertex(v)]
    if unknown:
        raise GraphError(f"unknown leaf {unknown[0]!r}")
    return [v for v in graph.vertices if v in leaves]


def tree_relative_invariant(graph: Multigraph, leaves, eta: Mapping, G: Group) -> tuple:
    """Products of ``eta`` from the first leaf to every other leaf."""
    if not graph.is_tree():
        raise GraphError("relative invariant needs a tree")
    order = _leaf_order(graph, leaves)
    if set(order) != set(graph.leaves()):
        raise GraphError("boundary set must be exactly the leaves of the tree")
    if not order:
        return ()
    sheaf = boundary_trivialized_sheaf(graph, G, order)
    eta = sheaf.check1(eta)
    tree = spanning_tree(graph, order[0])
    return tuple(walk_product(G, eta, tree.path_from_root(v)) for v in order[1:])


@dataclass(frozen=True)
class BoundaryResult:
    extendable: bool
    section: dict | None
    invariant: tuple
    cocycle: dict  # the induced cocycle of the boundary-trivialized sheaf


def boundary_lift(graph: Multigraph, G: Group, beta: Mapping) -> dict:
    return {v: (G.coerce(beta[v]) if v in beta else G.identity()) for v in graph.vertices}


def boundary_obstruction(graph: Multigraph, boundary, G: Group, beta: Mapping) -> BoundaryResult:
    """Decide whether boundary values extend to a global section of the constant sheaf."""
    if not graph.is_connected():
        raise GraphError("boundary obstruction needs a connected graph")
    order = _leaf_order(graph, boundary)
    if set(beta) != set(order):
        raise GraphError("boundary values must be given on exactly the boundary vertices")
    lift = boundary_lift(graph, G, beta)
    cocycle = coboundary(constant_sheaf(graph, G), lift)
    root = order[0] if order else None
    invariant = tuple(G.mul(G.inv(lift[root]), lift[v]) for v in order[1:])
    values = {lift[v] for v in order}
    if len(values) <= 1:
        g = values.pop() if values else G.identity()
        return BoundaryResult(True, {v: g for v in graph.vertices}, invariant, cocycle)
    return BoundaryResult(False, None, invariant, cocycle)
