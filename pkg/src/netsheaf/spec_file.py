"""JSON paradox files: strict parsing, serialization, conversion.

A paradox file looks like::

    {
      "name": "penrose",
      "graph": {"vertices": ["v1", "v2"], "edges": [{"id": "e1", "tail": "v1", "head": "v2"}, ...]},
      "group": {"kind": "free_abelian", "rank": 1},
      "sheaf": {"kind": "constant"},
      "cocycle": {"e1": 1, ...}
    }

``sheaf`` may instead be ``{"kind": "boundary_trivial", "boundary": [...]}``
and a file may carry ``boundary_values`` (vertex -> element) in place of or
next to ``cocycle``.  Unknown keys and dangling ids are errors.

A morphism file holds any of ``forward`` (A -> B), ``backward`` (B -> A)
and ``fiber`` blocks::

    {"forward": {"graph_map": {"vertex_map": {...}, "edge_map": {"e1": [["a", 1]], "e2": []}},
                 "homomorphism": {"images": [...]}},
     "fiber": {"Phi": {"matrix": [[-1, 1, 0]]}, "Psi": {"images": [[1, 2, 3]]}}}

Homomorphism ``images`` list the images of the source group's generators;
``matrix`` is accepted between free abelian groups.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .cohomology import (
    NetworkSheaf,
    boundary_obstruction,
    boundary_trivialized_sheaf,
    constant_sheaf,
)
from .graph import FORWARD, REVERSE, GraphError, Multigraph, Walk, build_graph
from .groups import FreeAbelian, Group, GroupError, Homomorphism, group_from_descriptor
from .paradox import GraphMap, Paradox, ParadoxMorphism


class SpecError(ValueError):
    """Invalid paradox or morphism file; the message names the offending field."""


TOP_KEYS = {"name", "graph", "group", "sheaf", "cocycle", "boundary_values"}
REQUIRED_KEYS = {"graph", "group", "sheaf"}


def _keys(obj: Any, where: str, allowed: set, required: set = frozenset()) -> dict:
    if not isinstance(obj, dict):
        raise SpecError(f"{where}: expected an object, got {type(obj).__name__}")
    extra = sorted(set(obj) - allowed)
    if extra:
        raise SpecError(f"{where}: unknown key(s) {extra}")
    missing = sorted(set(required) - set(obj))
    if missing:
        raise SpecError(f"{where}: missing key(s) {missing}")
    return obj


def _json(text: str, source: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"{source}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


@dataclass(frozen=True)
class ParadoxSpec:
    name: str | None
    graph: Multigraph
    group_descriptor: dict = field(hash=False)
    group: Group
    sheaf: NetworkSheaf
    cocycle: dict | None = field(default=None, hash=False)
    boundary_values: dict | None = field(default=None, hash=False)

    def has_cocycle(self) -> bool:
        return self.cocycle is not None

    def effective_cocycle(self) -> dict:
        """The given cocycle, else the one induced by the boundary values."""
        if self.cocycle is not None:
            return self.cocycle
        if self.boundary_values is not None:
            return boundary_obstruction(self.graph, list(self.boundary_values), self.group, self.boundary_values).cocycle
        raise SpecError("file has neither 'cocycle' nor 'boundary_values'")


def _parse_graph(obj) -> Multigraph:
    _keys(obj, "graph", {"vertices", "edges"}, {"vertices", "edges"})
    vertices = obj["vertices"]
    if not isinstance(vertices, list) or not all(isinstance(v, str) for v in vertices):
        raise SpecError("graph.vertices: expected a list of vertex-id strings")
    edges = []
    if not isinstance(obj["edges"], list):
        raise SpecError("graph.edges: expected a list")
    for i, e in enumerate(obj["edges"]):
        _keys(e, f"graph.edges[{i}]", {"id", "tail", "head"}, {"id", "tail", "head"})
        edges.append((e["id"], e["tail"], e["head"]))
    try:
        return build_graph(vertices, edges)
    except GraphError as exc:
        raise SpecError(f"graph: {exc}") from None


def _decode(G: Group, obj, where: str):
    try:
        return G.decode(obj)
    except GroupError as exc:
        raise SpecError(f"{where}: {exc}") from None


def _parse_sheaf(obj, graph: Multigraph, G: Group) -> NetworkSheaf:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise SpecError("sheaf: expected an object with a 'kind'")
    if obj["kind"] == "constant":
        _keys(obj, "sheaf", {"kind"})
        return constant_sheaf(graph, G)
    if obj["kind"] == "boundary_trivial":
        _keys(obj, "sheaf", {"kind", "boundary"}, {"boundary"})
        boundary = obj["boundary"]
        if not isinstance(boundary, list):
            raise SpecError("sheaf.boundary: expected a list of vertex ids")
        for v in boundary:
            if not graph.has_vertex(v):
                raise SpecError(f"sheaf.boundary: unknown vertex {v!r}")
        return boundary_trivialized_sheaf(graph, G, boundary)
    raise SpecError(f"sheaf.kind: unknown sheaf kind {obj['kind']!r}")


def spec_from_dict(obj: Any) -> ParadoxSpec:
    _keys(obj, "file", TOP_KEYS, REQUIRED_KEYS)
    name = obj.get("name")
    if name is not None and not isinstance(name, str):
        raise SpecError("name: expected a string")
    graph = _parse_graph(obj["graph"])
    try:
        G = group_from_descriptor(obj["group"])
    except GroupError as exc:
        raise SpecError(f"group: {exc}") from None
    sheaf = _parse_sheaf(obj["sheaf"], graph, G)
    cocycle = None
    if "cocycle" in obj:
        raw = obj["cocycle"]
        if not isinstance(raw, dict):
            raise SpecError("cocycle: expected an object mapping edge ids to elements")
        for eid in raw:
            if eid not in graph.edge_ids:
                raise SpecError(f"cocycle.{eid}: unknown edge")
        missing = [e for e in graph.edge_ids if e not in raw]
        if missing:
            raise SpecError(f"cocycle: missing value(s) for edge(s) {missing}")
        cocycle = {eid: _decode(G, raw[eid], f"cocycle.{eid}") for eid in graph.edge_ids}
    boundary_values = None
    if "boundary_values" in obj:
        raw = obj["boundary_values"]
        if not isinstance(raw, dict):
            raise SpecError("boundary_values: expected an object mapping vertex ids to elements")
        for v in raw:
            if not graph.has_vertex(v):
                raise SpecError(f"boundary_values.{v}: unknown vertex")
        if sheaf.kind == "boundary_trivial" and set(raw) != set(sheaf.boundary):
            raise SpecError("boundary_values: keys must be exactly sheaf.boundary")
        boundary_values = {v: _decode(G, x, f"boundary_values.{v}") for v, x in raw.items()}
    return ParadoxSpec(name, graph, obj["group"], G, sheaf, cocycle, boundary_values)


def parse_spec(text: str, source: str = "<string>") -> ParadoxSpec:
    return spec_from_dict(_json(text, source))


def load_spec(path: str | Path) -> ParadoxSpec:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise SpecError(f"{path}: {exc.strerror}") from None
    return parse_spec(text, str(path))


def spec_to_dict(spec: ParadoxSpec) -> dict:
    G = spec.group
    out: dict = {}
    if spec.name is not None:
        out["name"] = spec.name
    out["graph"] = {
        "vertices": list(spec.graph.vertices),
        "edges": [{"id": e.id, "tail": e.tail, "head": e.head} for e in spec.graph.edges],
    }
    out["group"] = spec.group_descriptor
    if spec.sheaf.kind == "constant":
        out["sheaf"] = {"kind": "constant"}
    else:
        boundary = [v for v in spec.graph.vertices if v in spec.sheaf.boundary]
        out["sheaf"] = {"kind": "boundary_trivial", "boundary": boundary}
    if spec.cocycle is not None:
        out["cocycle"] = {eid: G.encode(x) for eid, x in spec.cocycle.items()}
    if spec.boundary_values is not None:
        out["boundary_values"] = {v: G.encode(x) for v, x in spec.boundary_values.items()}
    return out


def dump_spec(spec: ParadoxSpec) -> str:
    return json.dumps(spec_to_dict(spec), indent=2)


def spec_to_paradox(spec: ParadoxSpec) -> Paradox:
    """Raises :class:`TrivialClassError` when the class is trivial."""
    meta = {"boundary_values": spec.boundary_values} if spec.boundary_values else None
    return Paradox(spec.sheaf, spec.effective_cocycle(), spec.name, meta)


# ---------------------------------------------------------------------------
# morphism files

def _parse_hom(obj, source: Group, target: Group, where: str) -> Homomorphism:
    _keys(obj, where, {"images", "matrix"})
    if ("images" in obj) == ("matrix" in obj):
        raise SpecError(f"{where}: give exactly one of 'images' or 'matrix'")
    try:
        if "matrix" in obj:
            if not (isinstance(source, FreeAbelian) and isinstance(target, FreeAbelian)):
                raise SpecError(f"{where}.matrix: only allowed between free abelian groups")
            return Homomorphism.from_matrix(source, target, obj["matrix"])
        images = obj["images"]
        if not isinstance(images, list):
            raise SpecError(f"{where}.images: expected a list")
        decoded = [_decode(target, x, f"{where}.images[{i}]") for i, x in enumerate(images)]
        return Homomorphism(source, target, decoded)
    except GroupError as exc:
        raise SpecError(f"{where}: {exc}") from None


def _parse_graph_map(obj, src: Multigraph, dst: Multigraph, where: str) -> GraphMap:
    _keys(obj, where, {"vertex_map", "edge_map"}, {"vertex_map", "edge_map"})
    vm, em = obj["vertex_map"], obj["edge_map"]
    if not isinstance(vm, dict) or not isinstance(em, dict):
        raise SpecError(f"{where}: vertex_map and edge_map must be objects")
    for v in vm:
        if not src.has_vertex(v):
            raise SpecError(f"{where}.vertex_map.{v}: unknown source vertex")
    for e in em:
        if e not in src.edge_ids:
            raise SpecError(f"{where}.edge_map.{e}: unknown source edge")
    walks = {}
    for e in src.edges:
        if e.id not in em:
            raise SpecError(f"{where}.edge_map: missing edge {e.id!r}")
        steps = []
        for i, step in enumerate(em[e.id]):
            if not (isinstance(step, list) and len(step) == 2 and step[1] in (FORWARD, REVERSE)):
                raise SpecError(f"{where}.edge_map.{e.id}[{i}]: expected [edge id, 1 | -1]")
            if step[0] not in dst.edge_ids:
                raise SpecError(f"{where}.edge_map.{e.id}[{i}]: unknown target edge {step[0]!r}")
            steps.append((step[0], step[1]))
        walks[e.id] = Walk(vm.get(e.tail), tuple(steps))
    try:
        return GraphMap(src, dst, dict(vm), walks)
    except GraphError as exc:
        raise SpecError(f"{where}: {exc}") from None


@dataclass
class MorphismSpec:
    forward: ParadoxMorphism | None = None
    backward: ParadoxMorphism | None = None
    fiber: tuple | None = None  # (Phi: G_A -> G_B, Psi: G_B -> G_A)


def morphisms_from_dict(obj: Any, A: ParadoxSpec, B: ParadoxSpec) -> MorphismSpec:
    _keys(obj, "morphisms", {"forward", "backward", "fiber"})
    out = MorphismSpec()
    for key, P, Q in (("forward", A, B), ("backward", B, A)):
        if key in obj:
            block = _keys(obj[key], key, {"graph_map", "homomorphism"}, {"graph_map", "homomorphism"})
            f = _parse_graph_map(block["graph_map"], P.graph, Q.graph, f"{key}.graph_map")
            phi = _parse_hom(block["homomorphism"], Q.group, P.group, f"{key}.homomorphism")
            setattr(out, key, ParadoxMorphism(f, phi))
    if "fiber" in obj:
        block = _keys(obj["fiber"], "fiber", {"Phi", "Psi"}, {"Phi", "Psi"})
        out.fiber = (
            _parse_hom(block["Phi"], A.group, B.group, "fiber.Phi"),
            _parse_hom(block["Psi"], B.group, A.group, "fiber.Psi"),
        )
    return out


def load_morphisms(path: str | Path, A: ParadoxSpec, B: ParadoxSpec) -> MorphismSpec:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise SpecError(f"{path}: {exc.strerror}") from None
    return morphisms_from_dict(_json(text, str(path)), A, B)
