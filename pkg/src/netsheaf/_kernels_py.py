"""Pure-Python gauge-orbit kernel (fallback for the compiled extension)."""

from collections import deque


def gauge_orbits(order, table, inv, tails, heads, n_vertices, gens):
    """Label every 1-cochain by its gauge orbit.

    A cochain is encoded as ``sum(eta[i] * order**i)`` over edge positions,
    with group elements given by index; ``table[a*order + b]`` is ``a*b``.
    Returns ``(labels, n_orbits)``.
    """
    m = len(tails)
    total = order ** m
    labels = [-1] * total
    n_orbits = 0
    digits = [0] * m
    for start in range(total):
        if labels[start] >= 0:
            continue
        labels[start] = n_orbits
        queue = deque([start])
        while queue:
            code = queue.popleft()
            c = code
            for i in range(m):
                digits[i] = c % order
                c //= order
            for v in range(n_vertices):
                for g in gens:
                    gi = inv[g]
                    new = 0
                    place = 1
                    for i in range(m):
                        d = digits[i]
                        if tails[i] == v:
                            d = table[gi * order + d]
                        if heads[i] == v:
                            d = table[d * order + g]
                        new += d * place
                        place *= order
                    if labels[new] < 0:
                        labels[new] = n_orbits
                        queue.append(new)
        n_orbits += 1
    return labels, n_orbits
