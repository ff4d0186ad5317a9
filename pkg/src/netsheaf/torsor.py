"""Network torsors built from cocycles.

A torsor is kept intensionally as ``(sheaf, eta)``.  Every stalk is the
underlying set of the corresponding structure group, with ``G`` acting by
left multiplication.  The tail restriction of an edge is the sheaf's own
restriction map; the head restriction is followed by right multiplication
by ``eta_e^-1``.  Right multiplications commute with the left action, so
all restriction maps are equivariant for any group.

Crossing edge ``e`` forward sends ``p`` to ``p * eta_e``, so transport
around a closed walk at the basepoint is right multiplication by its
holonomy.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .cohomology import (
    HEAD,
    TAIL,
    NetworkSheaf,
    SheafError,
    cohomologous,
    coboundary,
    is_coboundary,
)
from .graph import FORWARD, Walk, walk_vertices


@dataclass(frozen=True)
class Torsor:
    sheaf: NetworkSheaf
    cocycle: dict

    @property
    def graph(self):
        return self.sheaf.graph

    def vertex_group(self, v):
        return self.sheaf.vertex_stalk(v)

    def edge_group(self, eid):
        return self.sheaf.edge_stalk(eid)

    def act(self, g, p, cell, is_edge: bool = False):
        """Left action of ``g`` on the stalk element ``p``."""
        G = self.edge_group(cell) if is_edge else self.vertex_group(cell)
        return G.mul(G.check(g), G.check(p))

    def restrict(self, eid, side: str, p):
        """Restriction from the endpoint stalk on ``side`` into the edge stalk."""
        x = self.sheaf.restrict(eid, side, p)
        if side == HEAD:
            G = self.edge_group(eid)
            x = G.mul(x, G.inv(self.cocycle[eid]))
        return x

    def stalk_elements(self, cell, is_edge: bool = False) -> list:
        G = self.edge_group(cell) if is_edge else self.vertex_group(cell)
        return G.elements()


def torsor_from_cocycle(sheaf: NetworkSheaf, eta: Mapping) -> Torsor:
    return Torsor(sheaf, sheaf.check1(eta))


def trivial_torsor(sheaf: NetworkSheaf) -> Torsor:
    return Torsor(sheaf, sheaf.identity1())


def transport(torsor: Torsor, walk: Walk, p):
    """Carry ``p`` from the start of ``walk`` to its end (constant sheaves)."""
    if torsor.sheaf.kind != "constant":
        raise SheafError("transport needs a constant sheaf")
    G = torsor.sheaf.group
    walk_vertices(torsor.graph, walk)  # validates incidence
    p = G.check(p)
    for eid, d in walk.steps:
        x = torsor.cocycle[eid]
        p = G.mul(p, x if d == FORWARD else G.inv(x))
    return p


def section_is_compatible(torsor: Torsor, s: Mapping) -> bool:
    return all(
        torsor.restrict(e.id, TAIL, s[e.tail]) == torsor.restrict(e.id, HEAD, s[e.head])
        for e in torsor.graph.edges
    )


def global_sections(torsor: Torsor):
    """A global section (vertex -> stalk element) or None."""
    xi = is_coboundary(torsor.sheaf, torsor.cocycle)
    if xi is None:
        return None
    if not section_is_compatible(torsor, xi):  # pragma: no cover - guarded by is_coboundary
        raise AssertionError("coboundary witness is not a compatible section")
    return xi


@dataclass(frozen=True)
class TorsorMorphism:
    """``Phi_v(p) = p * xi_v`` on vertices, ``Phi_e(q) = q * F_tail(xi_tail)`` on edges."""

    source: Torsor
    target: Torsor
    gauge: dict

    def on_vertex(self, v, p):
        G = self.source.vertex_group(v)
        return G.mul(p, self.gauge[v])

    def on_edge(self, eid, q):
        G = self.source.edge_group(eid)
        e = self.source.graph.edge(eid)
        return G.mul(q, self.source.sheaf.restrict(eid, TAIL, self.gauge[e.tail]))

    def verify(self, samples: Iterable | None = None) -> bool:
        """Check equivariance, restriction compatibility and bijectivity.

        Finite stalks are checked exhaustively; infinite stalks on
        ``samples`` (group elements usable at every cell) plus generators.
        """
        src = self.source
        for v in src.graph.vertices:
            G = src.vertex_group(v)
            pts = _points(G, samples)
            images = [self.on_vertex(v, p) for p in pts]
            if G.is_finite and len(set(images)) != len(pts):
                return False
            for g in pts:
                for p in pts:
                    if self.on_vertex(v, G.mul(g, p)) != G.mul(g, self.on_vertex(v, p)):
                        return False
        for e in src.graph.edges:
            for side, v in ((TAIL, e.tail), (HEAD, e.head)):
                G = src.vertex_group(v)
                for p in _points(G, samples):
                    lhs = self.on_edge(e.id, src.restrict(e.id, side, p))
                    rhs = self.target.restrict(e.id, side, self.on_vertex(v, p))
                    if lhs != rhs:
                        return False
        return True


def _points(G, samples) -> list:
    if G.is_finite:
        return G.elements()
    pts = [G.identity(), *G.generators()]
    for s in samples or ():
        if G.contains(s) and s not in pts:
            pts.append(s)
    return pts


def torsors_isomorphic(T: Torsor, T2: Torsor):
    """A verified :class:`TorsorMorphism` ``T -> T2`` or None."""
    if T.sheaf != T2.sheaf:
        raise SheafError("torsors live over different structure sheaves")
    xi = cohomologous(T.sheaf, T.cocycle, T2.cocycle)
    if xi is None:
        return None
    m = TorsorMorphism(T, T2, xi)
    if not m.verify(list(T.cocycle.values()) + list(T2.cocycle.values())):  # pragma: no cover
        raise AssertionError("assembled torsor morphism failed verification")
    return m


def cocycle_from_torsor(torsor: Torsor, points: Mapping | None = None) -> dict:
    """Recover a defining cocycle from chosen stalk points ``p_v``.

    For each edge the two restricted points differ by a unique ``g`` with
    ``g * r_tail = r_head``; the cocycle value is ``g^-1``.  Identity points
    give back the defining cocycle exactly.
    """
    sheaf = torsor.sheaf
    if points is None:
        points = sheaf.identity0()
    points = sheaf.check0(points)
    out = {}
    for e in torsor.graph.edges:
        G = torsor.edge_group(e.id)
        rt = torsor.restrict(e.id, TAIL, points[e.tail])
        rh = torsor.restrict(e.id, HEAD, points[e.head])
        g = G.mul(rh, G.inv(rt))
        out[e.id] = G.inv(g)
    return out


def section_from_coboundary(sheaf: NetworkSheaf, xi: Mapping) -> tuple[Torsor, dict]:
    """The torsor of ``delta xi`` together with its canonical section ``xi``."""
    return torsor_from_cocycle(sheaf, coboundary(sheaf, xi)), sheaf.check0(xi)
