# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled gauge-orbit kernel; same contract as ``_kernels_py.gauge_orbits``."""

from cpython.mem cimport PyMem_Malloc, PyMem_Free


def gauge_orbits(int order, table, inv, tails, heads, int n_vertices, gens):
    cdef Py_ssize_t m = len(tails)
    cdef Py_ssize_t ng = len(gens)
    cdef long long total = 1
    cdef Py_ssize_t i
    for i in range(m):
        total *= order
    cdef int *tab = <int *> PyMem_Malloc(order * order * sizeof(int))
    cdef int *iv = <int *> PyMem_Malloc(order * sizeof(int))
    cdef int *tl = <int *> PyMem_Malloc((m + 1) * sizeof(int))
    cdef int *hd = <int *> PyMem_Malloc((m + 1) * sizeof(int))
    cdef int *gs = <int *> PyMem_Malloc((ng + 1) * sizeof(int))
    cdef int *dig = <int *> PyMem_Malloc((m + 1) * sizeof(int))
    cdef int *lab = <int *> PyMem_Malloc(total * sizeof(int))
    cdef long long *queue = <long long *> PyMem_Malloc(total * sizeof(long long))
    if not (tab and iv and tl and hd and gs and dig and lab and queue):
        raise MemoryError()
    cdef long long start, code, c, new, place
    cdef long long qhead, qtail
    cdef int n_orbits = 0
    cdef int v, k, g, gi, d
    try:
        for i in range(order * order):
            tab[i] = table[i]
        for i in range(order):
            iv[i] = inv[i]
        for i in range(m):
            tl[i] = tails[i]
            hd[i] = heads[i]
        for i in range(ng):
            gs[i] = gens[i]
        for start in range(total):
            lab[start] = -1
        for start in range(total):
            if lab[start] >= 0:
                continue
            lab[start] = n_orbits
            qhead = 0
            qtail = 0
            queue[qtail] = start
            qtail += 1
            while qhead < qtail:
                code = queue[qhead]
                qhead += 1
                c = code
                for i in range(m):
                    dig[i] = c % order
                    c //= order
                for v in range(n_vertices):
                    for k in range(ng):
                        g = gs[k]
                        gi = iv[g]
                        new = 0
                        place = 1
                        for i in range(m):
                            d = dig[i]
                            if tl[i] == v:
                                d = tab[gi * order + d]
                            if hd[i] == v:
                                d = tab[d * order + g]
                            new += d * place
                            place *= order
                        if lab[new] < 0:
                            lab[new] = n_orbits
                            queue[qtail] = new
                            qtail += 1
            n_orbits += 1
        labels = [lab[i] for i in range(total)]
    finally:
        PyMem_Free(tab)
        PyMem_Free(iv)
        PyMem_Free(tl)
        PyMem_Free(hd)
        PyMem_Free(gs)
        PyMem_Free(dig)
        PyMem_Free(lab)
        PyMem_Free(queue)
    return labels, n_orbits
