"""Oriented multigraphs: spanning trees, fundamental cycles, walks, automorphisms.

Each edge is stored as ``(id, tail, head)``.  Traversing an edge ``FORWARD``
goes tail -> head, ``REVERSE`` goes head -> tail.  Self-loops and parallel
edges are allowed.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Sequence

FORWARD = 1
REVERSE = -1

MAX_AUTOMORPHISM_VERTICES = 12

Vertex = Hashable
EdgeId = Hashable


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class Edge:
    id: EdgeId
    tail: Vertex
    head: Vertex

    @property
    def is_loop(self) -> bool:
        return self.tail == self.head


@dataclass(frozen=True)
class Multigraph:
    vertices: tuple
    edges: tuple  # tuple[Edge, ...]
    _edge_index: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise GraphError("duplicate vertex id")
        seen = set()
        declared = set(self.vertices)
        for e in self.edges:
            if e.id in seen:
                raise GraphError(f"duplicate edge id {e.id!r}")
            seen.add(e.id)
            for end in (e.tail, e.head):
                if end not in declared:
                    raise GraphError(f"edge {e.id!r} has undeclared endpoint {end!r}")
        self._edge_index.update({e.id: e for e in self.edges})

    def edge(self, eid: EdgeId) -> Edge:
        try:
            return self._edge_index[eid]
        except KeyError:
            raise GraphError(f"unknown edge {eid!r}") from None

    @property
    def edge_ids(self) -> tuple:
        return tuple(e.id for e in self.edges)

    def has_vertex(self, v) -> bool:
        return v in self._vertex_set

    @property
    def _vertex_set(self) -> frozenset:
        return frozenset(self.vertices)

    def degree(self, v) -> int:
        # a self-loop counts twice
        return sum((e.tail == v) + (e.head == v) for e in self.edges)

    def leaves(self) -> tuple:
        return tuple(v for v in self.vertices if self.degree(v) == 1)

    def incident(self, v) -> list[tuple[Edge, int]]:
        """Edges leaving ``v`` with the direction that departs from ``v``.

        A self-loop at ``v`` shows up twice, once per direction.
        """
        out = []
        for e in self.edges:
            if e.tail == v:
                out.append((e, FORWARD))
            if e.head == v:
                out.append((e, REVERSE))
        return out

    def components(self) -> list[list]:
        seen: set = set()
        comps = []
        for root in self.vertices:
            if root in seen:
                continue
            comp = [root]
            seen.add(root)
            queue = deque([root])
            while queue:
                u = queue.popleft()
                for e, d in self.incident(u):
                    w = e.head if d == FORWARD else e.tail
                    if w not in seen:
                        seen.add(w)
                        comp.append(w)
                        queue.append(w)
            comps.append(comp)
        return comps

    def is_connected(self) -> bool:
        return len(self.vertices) > 0 and len(self.components()) == 1

    def betti1(self) -> int:
        return len(self.edges) - len(self.vertices) + len(self.components())

    def is_tree(self) -> bool:
        return self.is_connected() and len(self.edges) == len(self.vertices) - 1


def build_graph(vertices: Iterable, edges: Iterable[Sequence]) -> Multigraph:
    """Validate and build a multigraph from vertex ids and ``(id, tail, head)`` triples."""
    return Multigraph(tuple(vertices), tuple(Edge(*t) for t in edges))


@dataclass(frozen=True)
class Walk:
    start: Vertex
    steps: tuple = ()  # tuple[(edge id, direction), ...]

    def end(self, graph: Multigraph) -> Vertex:
        return walk_vertices(graph, self)[-1]

    def __len__(self):
        return len(self.steps)


def step_target(graph: Multigraph, at: Vertex, eid: EdgeId, direction: int) -> Vertex:
    if direction not in (FORWARD, REVERSE):
        raise GraphError(f"bad direction {direction!r}")
    e = graph.edge(eid)
    src, dst = (e.tail, e.head) if direction == FORWARD else (e.head, e.tail)
    if src != at:
        raise GraphError(f"step over {eid!r} does not start at {at!r}")
    return dst


def walk_vertices(graph: Multigraph, walk: Walk) -> list:
    if not graph.has_vertex(walk.start):
        raise GraphError(f"walk starts at unknown vertex {walk.start!r}")
    out = [walk.start]
    for eid, d in walk.steps:
        out.append(step_target(graph, out[-1], eid, d))
    return out


def reverse_walk(graph: Multigraph, walk: Walk) -> Walk:
    end = walk.end(graph)
    return Walk(end, tuple((eid, -d) for eid, d in reversed(walk.steps)))


def concat_walks(graph: Multigraph, first: Walk, second: Walk) -> Walk:
    if first.end(graph) != second.start:
        raise GraphError("walks are not composable")
    return Walk(first.start, first.steps + second.steps)


@dataclass(frozen=True)
class SpanningTree:
    root: Vertex
    tree_edges: frozenset
    # vertex -> (parent vertex, edge id, direction of the step parent -> vertex)
    parent: dict = field(hash=False)
    order: tuple = ()  # BFS discovery order, root first

    def path_from_root(self, v: Vertex) -> Walk:
        steps = []
        while v != self.root:
            p, eid, d = self.parent[v]
            steps.append((eid, d))
            v = p
        return Walk(self.root, tuple(reversed(steps)))


def spanning_tree(graph: Multigraph, root: Vertex) -> SpanningTree:
    """Breadth-first spanning tree; ties broken by declaration order."""
    if not graph.has_vertex(root):
        raise GraphError(f"unknown root {root!r}")
    if not graph.is_connected():
        raise GraphError("graph is not connected")
    parent: dict = {}
    seen = {root}
    order = [root]
    tree: set = set()
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for e, d in graph.incident(u):
            w = e.head if d == FORWARD else e.tail
            if w in seen:
                continue
            seen.add(w)
            parent[w] = (u, e.id, d)
            tree.add(e.id)
            order.append(w)
            queue.append(w)
    return SpanningTree(root, frozenset(tree), parent, tuple(order))


def fundamental_cycles(graph: Multigraph, tree: SpanningTree) -> list[Walk]:
    """One closed walk at the root per non-tree edge, in edge declaration order."""
    cycles = []
    for e in graph.edges:
        if e.id in tree.tree_edges:
            continue
        to_tail = tree.path_from_root(e.tail)
        from_head = reverse_walk(graph, tree.path_from_root(e.head))
        cycles.append(Walk(tree.root, to_tail.steps + ((e.id, FORWARD),) + from_head.steps))
    return cycles


@dataclass(frozen=True)
class GraphAutomorphism:
    """Vertex/edge relabelling; ``flips[e]`` is True when edge ``e`` maps reversed."""

    vertex_map: dict = field(hash=False)
    edge_map: dict = field(hash=False)
    flips: dict = field(hash=False)

    def key(self) -> tuple:
        return (
            tuple(sorted(self.vertex_map.items(), key=repr)),
            tuple(sorted(((e, self.edge_map[e], self.flips[e]) for e in self.edge_map), key=repr)),
        )

    def __eq__(self, other):
        return isinstance(other, GraphAutomorphism) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def compose(self, other: "GraphAutomorphism") -> "GraphAutomorphism":
        """``self after other``."""
        vm = {v: self.vertex_map[w] for v, w in other.vertex_map.items()}
        em = {e: self.edge_map[f] for e, f in other.edge_map.items()}
        fl = {e: other.flips[e] != self.flips[f] for e, f in other.edge_map.items()}
        return GraphAutomorphism(vm, em, fl)

    def inverse(self) -> "GraphAutomorphism":
        vm = {w: v for v, w in self.vertex_map.items()}
        em = {f: e for e, f in self.edge_map.items()}
        fl = {f: self.flips[e] for e, f in self.edge_map.items()}
        return GraphAutomorphism(vm, em, fl)

    def is_valid(self, source: Multigraph, target: Multigraph) -> bool:
        for e in source.edges:
            img = target.edge(self.edge_map[e.id])
            t, h = self.vertex_map[e.tail], self.vertex_map[e.head]
            want = (img.head, img.tail) if self.flips[e.id] else (img.tail, img.head)
            if (t, h) != want:
                return False
        return True


def _edge_multiset(graph: Multigraph) -> dict:
    """Unordered endpoint pair -> list of edges between them."""
    out: dict = {}
    for e in graph.edges:
        out.setdefault(frozenset((e.tail, e.head)), []).append(e)
    return out


def _matchings(src_edges, dst_edges, vmap):
    """All bijections between two equal-size parallel classes, with flip flags."""
    from itertools import permutations

    for perm in permutations(dst_edges):
        choices = []
        for e, f in zip(src_edges, perm):
            t, h = vmap[e.tail], vmap[e.head]
            opts = []
            if (t, h) == (f.tail, f.head):
                opts.append(False)
            if (t, h) == (f.head, f.tail):
                opts.append(True)
            choices.append(opts)
        yield from _flip_product(src_edges, perm, choices)


def _flip_product(src_edges, perm, choices):
    from itertools import product

    for flags in product(*choices):
        yield {e.id: f.id for e, f in zip(src_edges, perm)}, {e.id: fl for e, fl in zip(src_edges, flags)}


def enumerate_isomorphisms(
    source: Multigraph, target: Multigraph, max_vertices: int = MAX_AUTOMORPHISM_VERTICES
) -> list[GraphAutomorphism]:
    """All isomorphisms of the underlying undirected multigraphs.

    Plain backtracking over vertex images with degree and loop-count pruning;
    edges are then matched class by class.
    """
    n = len(source.vertices)
    if n > max_vertices or len(target.vertices) > max_vertices:
        raise GraphError(f"graph exceeds the automorphism search bound of {max_vertices} vertices")
    if n != len(target.vertices) or len(source.edges) != len(target.edges):
        return []

    def signature(g: Multigraph, v):
        loops = sum(1 for e in g.edges if e.tail == v and e.head == v)
        return (g.degree(v), loops)

    src_sig = {v: signature(source, v) for v in source.vertices}
    dst_sig = {v: signature(target, v) for v in target.vertices}
    src_mult = {k: len(v) for k, v in _edge_multiset(source).items()}
    dst_mult = {k: len(v) for k, v in _edge_multiset(target).items()}

    order = list(source.vertices)
    results: list[GraphAutomorphism] = []
    vmap: dict = {}
    used: set = set()

    def consistent(v, w) -> bool:
        for u, x in vmap.items():
            if src_mult.get(frozenset((u, v)), 0) != dst_mult.get(frozenset((x, w)), 0):
                return False
        return src_mult.get(frozenset((v,)), 0) == dst_mult.get(frozenset((w,)), 0)

    def extend(i: int):
        if i == n:
            _emit_edge_maps(source, target, dict(vmap), results)
            return
        v = order[i]
        for w in target.vertices:
            if w in used or dst_sig[w] != src_sig[v] or not consistent(v, w):
                continue
            vmap[v] = w
            used.add(w)
            extend(i + 1)
            del vmap[v]
            used.discard(w)

    extend(0)
    return results


def _emit_edge_maps(source, target, vmap, results):
    src_classes = _edge_multiset(source)
    dst_classes = _edge_multiset(target)
    per_class = []
    for key, edges in src_classes.items():
        img_key = frozenset(vmap[v] for v in key)
        per_class.append(list(_matchings(edges, dst_classes[img_key], vmap)))
    from itertools import product

    for combo in product(*per_class):
        em: dict = {}
        fl: dict = {}
        for m, f in combo:
            em.update(m)
            fl.update(f)
        results.append(GraphAutomorphism(dict(vmap), em, fl))


def enumerate_automorphisms(graph: Multigraph, max_vertices: int = MAX_AUTOMORPHISM_VERTICES) -> list[GraphAutomorphism]:
    return enumerate_isomorphisms(graph, graph, max_vertices)


# Common shapes used throughout the tests and the gallery.

def cycle_graph(n: int, prefix_v: str = "v", prefix_e: str = "e") -> Multigraph:
    vs = [f"{prefix_v}{i + 1}" for i in range(n)]
    es = [(f"{prefix_e}{i + 1}", vs[i], vs[(i + 1) % n]) for i in range(n)]
    return build_graph(vs, es)


def rose_graph(k: int, names: Sequence[str] | None = None) -> Multigraph:
    names = list(names) if names is not None else [chr(ord("a") + i) for i in range(k)]
    return build_graph(["v"], [(nm, "v", "v") for nm in names])


def path_graph(n: int) -> Multigraph:
    vs = [f"v{i}" for i in range(n)]
    es = [(f"e{i}", vs[i], vs[i + 1]) for i in range(n - 1)]
    return build_graph(vs, es)


def star_graph(n_leaves: int) -> Multigraph:
    vs = ["c"] + [f"l{i}" for i in range(n_leaves)]
    es = [(f"s{i}", "c", f"l{i}") for i in range(n_leaves)]
    return build_graph(vs, es)
