"""Time the gauge-orbit kernel: compiled extension vs pure Python.

    python benchmarks/bench_kernels.py [--repeat 3]
"""

import argparse
import time

from netsheaf import _kernels_py
from netsheaf.graph import cycle_graph, rose_graph
from netsheaf.groups import Cyclic, cube_rotation_group, symmetric_group

try:
    from netsheaf import _kernels as _kernels_c
except ImportError:
    _kernels_c = None

CASES = [
    ("S3 on rose(3)", symmetric_group(3), rose_graph(3)),
    ("S3 on rose(4)", symmetric_group(3), rose_graph(4)),
    ("Z_5 on C_6", Cyclic(5), cycle_graph(6)),
    ("Rot(cube) on rose(3)", cube_rotation_group(), rose_graph(3)),
]


def kernel_args(G, g):
    elems = G.elements()
    index = {x: i for i, x in enumerate(elems)}
    table = [index[G.mul(a, b)] for a in elems for b in elems]
    inv = [index[G.inv(a)] for a in elems]
    vpos = {v: i for i, v in enumerate(g.vertices)}
    tails = [vpos[e.tail] for e in g.edges]
    heads = [vpos[e.head] for e in g.edges]
    return len(elems), table, inv, tails, heads, len(g.vertices), list(range(len(elems)))


def best_of(fn, args, repeat):
    best, result = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, result


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    print(f"{'case':24} {'cochains':>9} {'orbits':>7} {'python s':>10} {'cython s':>10} {'speedup':>8}")
    for label, G, g in CASES:
        kargs = kernel_args(G, g)
        tp, (_, count) = best_of(_kernels_py.gauge_orbits, kargs, args.repeat)
        size = G.order ** len(g.edges)
        if _kernels_c is None:
            print(f"{label:24} {size:9d} {count:7d} {tp:10.4f} {'n/a':>10} {'n/a':>8}")
            continue
        tc, (_, count_c) = best_of(_kernels_c.gauge_orbits, kargs, args.repeat)
        assert count_c == count, "backends disagree"
        print(f"{label:24} {size:9d} {count:7d} {tp:10.4f} {tc:10.4f} {tp / tc:7.1f}x")


if __name__ == "__main__":
    main()
