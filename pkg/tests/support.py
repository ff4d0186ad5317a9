"""Random instance generators shared by the property and acceptance tests."""

from __future__ import annotations

import random

from netsheaf.graph import FORWARD, REVERSE, Walk, build_graph
from netsheaf.groups import (
    Cyclic,
    DirectProduct,
    FreeAbelian,
    InfiniteDihedral,
    cube_rotation_group,
    symmetric_group,
)

GROUP_ZOO = {
    "Z": FreeAbelian(1),
    "Z^2": FreeAbelian(2),
    "Z_2": Cyclic(2),
    "Z_3": Cyclic(3),
    "Z_4": Cyclic(4),
    "S_3": symmetric_group(3),
    "D_inf": InfiniteDihedral(),
    "Rot(cube)": cube_rotation_group(),
    "Z_2 x Z_3": DirectProduct((Cyclic(2), Cyclic(3))),
}


def random_element(G, rng: random.Random):
    if G.is_finite:
        return rng.choice(G.elements())
    if isinstance(G, FreeAbelian):
        return tuple(rng.randint(-6, 6) for _ in range(G.rank))
    if isinstance(G, InfiniteDihedral):
        return (rng.randint(-6, 6), rng.choice((1, -1)))
    raise TypeError(f"no sampler for {G}")


def random_connected_graph(rng: random.Random, max_vertices: int = 5, max_extra: int = 3):
    """A random connected multigraph; loops and parallel edges allowed."""
    n = rng.randint(1, max_vertices)
    verts = [f"v{i}" for i in range(n)]
    edges = []
    for i in range(1, n):
        j = rng.randrange(i)
        a, b = (verts[i], verts[j]) if rng.random() < 0.5 else (verts[j], verts[i])
        edges.append((f"e{len(edges)}", a, b))
    for _ in range(rng.randint(0, max_extra)):
        edges.append((f"e{len(edges)}", rng.choice(verts), rng.choice(verts)))
    rng.shuffle(edges)
    return build_graph(verts, edges)


def random_walk(g, rng: random.Random, length: int, start=None) -> Walk:
    v = start if start is not None else rng.choice(g.vertices)
    w0 = v
    steps = []
    for _ in range(length):
        options = []
        for e in g.edges:
            if e.tail == v:
                options.append((e.id, FORWARD, e.head))
            if e.head == v:
                options.append((e.id, REVERSE, e.tail))
        if not options:
            break
        eid, d, v = rng.choice(options)
        steps.append((eid, d))
    return Walk(w0, tuple(steps))
