"""Command-line front end (``netsheaf``)."""

from __future__ import annotations

import argparse
import json
import sys
from math import gcd
from typing import Sequence

from .cohomology import (
    AbelianCohomology,
    SheafError,
    abelian_cohomology,
    boundary_obstruction,
    holonomy,
    is_coboundary,
    tree_relative_invariant,
)
from .errors import BoundExceeded, TrivialClassError, Undecided
from .gallery import builtin_gallery, run_gallery
from .graph import GraphError, Walk
from .groups import Cyclic, FreeAbelian, GroupError, InfiniteDihedral, to_coords
from .paradox import (
    MAX_ORBIT_SEARCH,
    Verdict,
    _free_coordinates,
    _plain,
    are_isomorphic,
    check_morphism,
    classify_tree_boundary,
    fiber_equivalent,
    search_fiber_equivalence,
)
from .spec_file import SpecError, load_morphisms, load_spec, spec_to_paradox
from .torsor import torsor_from_cocycle, transport

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_INPUT = 2
EXIT_UNDECIDED = 3


class _Out:
    def __init__(self, fmt: str):
        self.fmt = fmt
        self.record: dict = {}
        self.lines: list[str] = []

    def add(self, key: str, value, text: str | None = None):
        self.record[key] = _plain(value)
        self.lines.append(f"{key}: {text if text is not None else value}")

    def emit(self):
        if self.fmt == "machine":
            print(json.dumps(self.record, sort_keys=True))
        else:
            print("\n".join(self.lines))


def _fmt_tuple(G, xs) -> str:
    return "(" + ", ".join(G.format(x) for x in xs) + ")" if len(xs) != 1 else G.format(xs[0])


# ---------------------------------------------------------------------------
# analyze

def _class_text(G, hol, b1: int) -> str:
    if isinstance(G, FreeAbelian) and G.rank == 1 and b1 == 1:
        return f"class k = {hol[0][0]} in H^1(S^1; Z)"
    return f"class of holonomy {_fmt_tuple(G, hol)}"


def _nonabelian_witness(T, G, cycles, names):
    for i in range(len(cycles)):
        for j in range(i + 1, len(cycles)):
            ab = Walk(cycles[i].start, cycles[i].steps + cycles[j].steps)
            ba = Walk(cycles[i].start, cycles[j].steps + cycles[i].steps)
            x, y = transport(T, ab, G.identity()), transport(T, ba, G.identity())
            if x != y:
                return names[i], names[j], x, y
    return None


def cmd_analyze(args) -> int:
    spec = load_spec(args.spec)
    G, sheaf = spec.group, spec.sheaf
    out = _Out(args.format)
    out.add("name", spec.name)
    out.add("group", str(G))
    out.add("sheaf", sheaf.kind)
    out.add("betti1", spec.graph.betti1())
    eta = spec.effective_cocycle()
    if sheaf.kind == "boundary_trivial":
        leaves = [v for v in spec.graph.vertices if v in sheaf.boundary]
        if spec.graph.is_tree():
            inv = tree_relative_invariant(spec.graph, leaves, eta, G)
            out.add("relative_invariant", [G.encode(x) for x in inv], _fmt_tuple(G, inv) if inv else "()")
        if spec.boundary_values is not None:
            res = boundary_obstruction(spec.graph, leaves, G, spec.boundary_values)
            out.add("extendable", res.extendable)
    else:
        if not spec.graph.is_connected():
            raise SpecError("graph: holonomy analysis needs a connected graph")
        hd = holonomy(sheaf, eta, args.basepoint)
        out.add("basepoint", hd.basepoint)
        out.add("holonomy", [G.encode(x) for x in hd.holonomies], _fmt_tuple(G, hd.holonomies) if hd.holonomies else "()")
    xi = is_coboundary(sheaf, eta)
    if xi is not None:
        section = {v: G.encode(x) for v, x in xi.items()}
        out.add("verdict", "trivial", f"trivial, global section: {section}")
        out.add("global_section", section, json.dumps(section))
        out.emit()
        return EXIT_OK
    if sheaf.kind == "constant":
        out.add("verdict", "non-trivial", f"non-trivial, {_class_text(G, hd.holonomies, spec.graph.betti1())}")
        n = _free_coordinates(G)
        if n:
            coords = [c for x in hd.holonomies for c in to_coords(G, x)]
            out.add("gcd", gcd(*coords))
        if isinstance(G, Cyclic) and G.modulus == 2:
            out.add("parity", ["odd" if x == -1 else "even" for x in hd.holonomies])
        if isinstance(G, InfiniteDihedral):
            dec = [{"height": h, "orientation": "flip" if e == -1 else "keep"} for h, e in hd.holonomies]
            out.add("decomposition", dec, "; ".join(f"height {d['height']}, {d['orientation']}" for d in dec))
        if not G.is_abelian and len(hd.cycles) >= 2:
            T = torsor_from_cocycle(sheaf, eta)
            names = [next(e for e, _ in c.steps if e not in hd.tree.tree_edges) for c in hd.cycles]
            w = _nonabelian_witness(T, G, hd.cycles, names)
            if w is not None:
                a, b, x, y = w
                out.add(
                    "nonabelian_witness",
                    {"transport": {f"{a} {b}": G.encode(x), f"{b} {a}": G.encode(y)}},
                    f"transport({a} {b}) = {G.format(x)} != transport({b} {a}) = {G.format(y)}",
                )
    else:
        out.add("verdict", "non-trivial", "non-trivial, boundary values do not extend")
    out.emit()
    return EXIT_OK


# ---------------------------------------------------------------------------
# compare

def _witness_text(v: Verdict) -> str:
    w = v.witness or {}
    if v.method == "identity":
        return "identity"
    if "matrix" in w:
        M = w["matrix"]
        n = len(M)
        if M == [[-int(i == j) for j in range(n)] for i in range(n)]:
            return f"GL{n}(Z) via -id"
        if M == [[int(i == j) for j in range(n)] for i in range(n)]:
            return f"GL{n}(Z) via id"
        return f"GL{n}(Z) via {M}"
    return v.method


def cmd_compare(args) -> int:
    A, B = load_spec(args.a), load_spec(args.b)
    P1, P2 = spec_to_paradox(A), spec_to_paradox(B)
    out = _Out(args.format)
    out.add("A", P1.name)
    out.add("B", P2.name)
    if args.morphisms:
        ms = load_morphisms(args.morphisms, A, B)
        if ms.forward is not None:
            r = check_morphism(ms.forward, P1, P2)
            out.add("forward", r.ok, "coherent" if r else f"not coherent ({r.reason})")
        if ms.backward is not None:
            r = check_morphism(ms.backward, P2, P1)
            out.add("backward", r.ok, "coherent" if r else f"not coherent ({r.reason})")
        if ms.fiber is not None:
            fc = fiber_equivalent(P1, P2, *ms.fiber)
            out.add("verdict", "fiber_equivalent" if fc else "not_fiber_equivalent",
                    "fiber-equivalent" if fc else "not fiber-equivalent with the supplied maps")
        out.emit()
        return EXIT_OK
    v = are_isomorphic(P1, P2, args.max_search)
    out.add("isomorphism", v.as_dict(), _verdict_text(v))
    final = v.verdict
    if v.verdict != "isomorphic" and P1.graph == P2.graph and not (P1.is_boundary or P2.is_boundary):
        try:
            pair = search_fiber_equivalence(P1, P2, args.max_search)
        except (Undecided, BoundExceeded) as exc:
            out.add("fiber", {"verdict": "undecided", "reason": str(exc)}, f"undecided ({exc})")
        else:
            if pair is None:
                out.add("fiber", {"verdict": "not_fiber_equivalent"}, "not fiber-equivalent (all homomorphisms tried)")
                final = "not_fiber_equivalent"
            else:
                Phi, Psi = pair
                out.add(
                    "fiber",
                    {"verdict": "fiber_equivalent", "Phi": Phi, "Psi": Psi},
                    f"fiber-equivalent (Phi images {[str(x) for x in Phi.images]}, Psi images {[str(x) for x in Psi.images]})",
                )
                final = "fiber_equivalent"
    out.add("verdict", final)
    out.emit()
    return EXIT_UNDECIDED if final == "undecided" else EXIT_OK


def _verdict_text(v: Verdict) -> str:
    if v.verdict == "isomorphic":
        return f"isomorphic ({_witness_text(v)})"
    if v.verdict == "not_isomorphic":
        return f"not isomorphic [{v.method}: {v.invariant}]"
    return f"undecided [{v.method}: {v.invariant}]"


# ---------------------------------------------------------------------------
# cohomology, classify-tree, gallery

def cmd_cohomology(args) -> int:
    spec = load_spec(args.spec)
    if not spec.sheaf.is_abelian:
        raise SheafError(
            f"{spec.group} is nonabelian; H^1 is not a group here, use 'analyze' for holonomy analysis"
        )
    coh: AbelianCohomology = abelian_cohomology(spec.sheaf)
    out = _Out(args.format)
    out.add("name", spec.name)
    out.add("H0", coh.h0.as_dict(), str(coh.h0))
    out.add("H1", coh.h1.as_dict(), str(coh.h1))
    rows, cols = coh.shape
    out.add("coboundary_matrix", [rows, cols], f"{rows} x {cols}")
    out.emit()
    return EXIT_OK


def cmd_classify_tree(args) -> int:
    spec = load_spec(args.spec)
    G = spec.group
    if not spec.graph.is_tree():
        raise SpecError("graph: classify-tree needs a tree")
    leaves = spec.sheaf.boundary if spec.sheaf.kind == "boundary_trivial" else spec.graph.leaves()
    cls = classify_tree_boundary(spec.graph, leaves, G, max_search=args.max_search)
    out = _Out(args.format)
    out.add("name", spec.name)
    out.add("leaves", list(cls.leaves))
    out.add("classes", cls.count)
    reps = [{v: G.encode(x) for v, x in b.items()} for b in cls.representatives]
    out.add("representatives", reps, "; ".join(json.dumps(r) for r in reps))
    out.add("orbit_sizes", list(cls.orbit_sizes))
    out.emit()
    return EXIT_OK


def cmd_gallery(args) -> int:
    entries = builtin_gallery()
    if args.only:
        entries = [e for e in entries if e.name in args.only]
        unknown = set(args.only) - {e.name for e in entries}
        if unknown:
            raise SpecError(f"--only: unknown gallery entr{'y' if len(unknown) == 1 else 'ies'} {sorted(unknown)}")
    report = run_gallery(entries)
    if args.format == "machine":
        for r in report.results:
            print(json.dumps(r.as_dict(), sort_keys=True))
    else:
        width = max((len(r.name) for r in report.results), default=0)
        for r in report.results:
            status = "PASS" if r.passed else "FAIL"
            print(f"{r.name.ljust(width)}  {status}  {r.source}")
            if r.error:
                print(f"{'':{width}}  error: {r.error}")
            for m in r.mismatches:
                print(f"{'':{width}}  {m['key']}: expected {_plain(m['expected'])}, computed {_plain(m['computed'])}")
        print(f"{sum(r.passed for r in report.results)}/{len(report.results)} entries pass")
    return EXIT_OK if report.ok else EXIT_MISMATCH


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("human", "machine"), default="human")
    common.add_argument("--max-search", type=int, default=MAX_ORBIT_SEARCH, help="bound for brute-force searches")

    p = argparse.ArgumentParser(prog="netsheaf", description="Sheaf cohomology and torsor analysis of paradox networks.")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", parents=[common], help="holonomy, triviality and invariants of one paradox file")
    a.add_argument("spec")
    a.add_argument("--basepoint", help="vertex id used as holonomy basepoint")
    a.set_defaults(func=cmd_analyze)

    c = sub.add_parser("compare", parents=[common], help="isomorphism / fiber-equivalence verdict for two files")
    c.add_argument("a")
    c.add_argument("b")
    c.add_argument("--morphisms", help="file with forward/backward/fiber morphism blocks to check")
    c.set_defaults(func=cmd_compare)

    h = sub.add_parser("cohomology", parents=[common], help="H^0 and H^1 of an abelian sheaf")
    h.add_argument("spec")
    h.set_defaults(func=cmd_cohomology)

    t = sub.add_parser("classify-tree", parents=[common], help="count boundary paradoxes on a tree")
    t.add_argument("spec")
    t.set_defaults(func=cmd_classify_tree)

    g = sub.add_parser("gallery", parents=[common], help="run the built-in example gallery")
    g.add_argument("--only", action="append", help="run only this entry (repeatable)")
    g.set_defaults(func=cmd_gallery)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (Undecided, BoundExceeded) as exc:
        print(f"undecided: {exc}", file=sys.stderr)
        return EXIT_UNDECIDED
    except TrivialClassError as exc:
        print(f"error: not a paradox: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (SpecError, GroupError, GraphError, SheafError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
