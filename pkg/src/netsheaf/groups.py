"""Exact structure groups and homomorphisms between them.

Elements are plain hashable Python values; the group object knows how to
multiply them:

* ``FreeAbelian(n)``      -- tuples of ``n`` ints, written additively
* ``Cyclic(m)``           -- residues ``0..m-1``; ``Cyclic(2)`` is the
  multiplicative group ``{+1, -1}``
* ``FiniteTable``         -- element names (strings) with a Cayley table
* ``InfiniteDihedral()``  -- pairs ``(h, eps)`` with
  ``(h1, e1)(h2, e2) = (h1 + e1*h2, e1*e2)``
* ``DirectProduct``       -- tuples of factor elements
* ``ScaleLattice(b)``     -- the multiplicative group ``b**Z`` of exact
  :class:`~fractions.Fraction` powers

No floating point is involved anywhere, so equality is always decidable.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, reduce
from math import prod
from typing import Any, Callable, Iterable, Sequence

from .errors import BoundExceeded, Undecided

MAX_TABLE_ASSOC_CHECK = 256
MAX_HOM_SEARCH = 10**6


class GroupError(ValueError):
    pass


class Group:
    kind: str = "abstract"

    # -- required by every kind --------------------------------------------
    def identity(self) -> Any:
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def contains(self, a) -> bool:
        raise NotImplementedError

    def generators(self) -> tuple:
        raise NotImplementedError

    def encode(self, a):
        raise NotImplementedError

    def decode(self, obj):
        raise NotImplementedError

    def descriptor(self) -> dict:
        raise NotImplementedError

    # -- defaults -----------------------------------------------------------
    is_finite = False
    is_abelian = False

    @property
    def order(self) -> int | None:
        return None

    def elements(self) -> list:
        raise GroupError(f"{self} is infinite")

    def check(self, a):
        if not self.contains(a):
            raise GroupError(f"{a!r} is not an element of {self}")
        return a

    def coerce(self, a):
        return self.check(a)

    def power(self, a, n: int):
        if n < 0:
            a, n = self.inv(a), -n
        result = self.identity()
        base = a
        while n:
            if n & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            n >>= 1
        return result

    def product(self, items: Iterable) -> Any:
        return reduce(self.mul, items, self.identity())

    def is_identity(self, a) -> bool:
        return a == self.identity()

    def conjugate(self, a, x):
        """``x^-1 a x``."""
        return self.mul(self.mul(self.inv(x), a), x)

    def commutes(self, a, b) -> bool:
        return self.mul(a, b) == self.mul(b, a)

    def format(self, a) -> str:
        return str(a)

    def __str__(self):
        return self.kind


@dataclass(frozen=True, eq=True)
class FreeAbelian(Group):
    rank: int
    kind = "free_abelian"
    is_abelian = True

    def __post_init__(self):
        if self.rank < 0:
            raise GroupError("rank must be non-negative")

    @property
    def is_finite(self):
        return self.rank == 0

    @property
    def order(self):
        return 1 if self.rank == 0 else None

    def elements(self):
        if self.rank:
            return super().elements()
        return [()]

    def identity(self):
        return (0,) * self.rank

    def mul(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def inv(self, a):
        return tuple(-x for x in a)

    def power(self, a, n):
        return tuple(n * x for x in a)

    def contains(self, a):
        return (
            isinstance(a, tuple)
            and len(a) == self.rank
            and all(isinstance(x, int) and not isinstance(x, bool) for x in a)
        )

    def coerce(self, a):
        if isinstance(a, int) and self.rank == 1:
            a = (a,)
        elif isinstance(a, list):
            a = tuple(a)
        return self.check(a)

    def generators(self):
        return tuple(tuple(int(i == j) for j in range(self.rank)) for i in range(self.rank))

    def encode(self, a):
        return a[0] if self.rank == 1 else list(a)

    def decode(self, obj):
        if self.rank == 1 and isinstance(obj, int) and not isinstance(obj, bool):
            obj = [obj]
        if not isinstance(obj, list):
            raise GroupError(f"free_abelian element must be an integer array, got {obj!r}")
        return self.check(tuple(obj))

    def descriptor(self):
        return {"kind": "free_abelian", "rank": self.rank}

    def format(self, a):
        return str(a[0]) if self.rank == 1 else "(" + ", ".join(map(str, a)) + ")"

    def __str__(self):
        return "Z" if self.rank == 1 else f"Z^{self.rank}"


@dataclass(frozen=True, eq=True)
class Cyclic(Group):
    """Cyclic group of order ``m``; order 2 uses the multiplicative ``{+1, -1}``."""

    modulus: int
    kind = "cyclic"
    is_abelian = True
    is_finite = True

    def __post_init__(self):
        if self.modulus < 1:
            raise GroupError("cyclic order must be positive")

    @property
    def multiplicative(self) -> bool:
        return self.modulus == 2

    @property
    def order(self):
        return self.modulus

    def residue(self, a) -> int:
        if self.multiplicative:
            return 0 if a == 1 else 1
        return a

    def from_residue(self, r: int):
        r %= self.modulus
        if self.multiplicative:
            return 1 if r == 0 else -1
        return r

    def elements(self):
        return [self.from_residue(r) for r in range(self.modulus)]

    def identity(self):
        return self.from_residue(0)

    def mul(self, a, b):
        if self.multiplicative:
            return a * b
        return (a + b) % self.modulus

    def inv(self, a):
        if self.multiplicative:
            return a
        return (-a) % self.modulus

    def power(self, a, n):
        return self.from_residue(self.residue(a) * n)

    def contains(self, a):
        if not isinstance(a, int) or isinstance(a, bool):
            return False
        if self.multiplicative:
            return a in (1, -1)
        return 0 <= a < self.modulus

    def generators(self):
        return () if self.modulus == 1 else (self.from_residue(1),)

    def encode(self, a):
        return a

    def decode(self, obj):
        if not isinstance(obj, int) or isinstance(obj, bool):
            raise GroupError(f"cyclic element must be an integer, got {obj!r}")
        return self.check(obj)

    def descriptor(self):
        return {"kind": "cyclic", "order": self.modulus}

    def format(self, a):
        return f"{a:+d}" if self.multiplicative else str(a)

    def __str__(self):
        return f"Z_{self.modulus}"


class FiniteTable(Group):
    """A finite group given by named elements and a multiplication table."""

    kind = "finite_table"
    is_finite = True

    def __init__(self, names: Sequence[str], table: Sequence[Sequence], label: str | None = None):
        names = tuple(str(n) for n in names)
        n = len(names)
        if n == 0 or len(set(names)) != n:
            raise GroupError("element names must be non-empty and unique")
        index = {nm: i for i, nm in enumerate(names)}
        rows = []
        for row in table:
            if len(row) != n:
                raise GroupError("multiplication table must be square")
            rows.append(tuple(index[x] if isinstance(x, str) else int(x) for x in row))
        if len(rows) != n:
            raise GroupError("multiplication table must be square")
        full = set(range(n))
        for i in range(n):
            if set(rows[i]) != full or {rows[j][i] for j in range(n)} != full:
                raise GroupError("multiplication table is not a Latin square")
        ident = [i for i in range(n) if all(rows[i][j] == j and rows[j][i] == j for j in range(n))]
        if len(ident) != 1:
            raise GroupError("multiplication table has no two-sided identity")
        e = ident[0]
        inverse = []
        for i in range(n):
            j = rows[i].index(e)
            if rows[j][i] != e:
                raise GroupError(f"element {names[i]!r} has no two-sided inverse")
            inverse.append(j)
        if n <= MAX_TABLE_ASSOC_CHECK:
            for a in range(n):
                ra = rows[a]
                for b in range(n):
                    rab = rows[ra[b]]
                    rb = rows[b]
                    for c in range(n):
                        if rab[c] != ra[rb[c]]:
                            raise GroupError("multiplication table is not associative")
        self.names = names
        self.table = tuple(rows)
        self.index = index
        self.inverse = tuple(inverse)
        self.e = e
        self.label = label

    def __eq__(self, other):
        return isinstance(other, FiniteTable) and self.names == other.names and self.table == other.table

    def __hash__(self):
        return hash((self.names, self.table))

    def __repr__(self):
        return f"FiniteTable({self.label or len(self.names)})"

    def __str__(self):
        return self.label or f"G{len(self.names)}"

    @property
    def order(self):
        return len(self.names)

    @cached_property
    def _abelian(self) -> bool:
        t = self.table
        return all(t[a][b] == t[b][a] for a in range(len(t)) for b in range(a))

    @property
    def is_abelian(self):
        return self._abelian

    def elements(self):
        return list(self.names)

    def identity(self):
        return self.names[self.e]

    def mul(self, a, b):
        return self.names[self.table[self.index[a]][self.index[b]]]

    def inv(self, a):
        return self.names[self.inverse[self.index[a]]]

    def contains(self, a):
        return isinstance(a, str) and a in self.index

    def generators(self):
        # every element, so a homomorphism out of a table group is its full image table
        return self.names

    def encode(self, a):
        return a

    def decode(self, obj):
        if not isinstance(obj, str):
            raise GroupError(f"finite_table element must be a name string, got {obj!r}")
        return self.check(obj)

    def descriptor(self):
        return {
            "kind": "finite_table",
            "elements": list(self.names),
            "table": [[self.names[j] for j in row] for row in self.table],
        }


@dataclass(frozen=True, eq=True)
class InfiniteDihedral(Group):
    """``Z x| Z_2``: height ``h`` with orientation ``eps`` in ``{+1, -1}``."""

    kind = "infinite_dihedral"

    def identity(self):
        return (0, 1)

    def mul(self, a, b):
        h1, e1 = a
        h2, e2 = b
        return (h1 + e1 * h2, e1 * e2)

    def inv(self, a):
        h, e = a
        return (-e * h, e)

    def conjugate(self, a, x):
        # x^-1 (h,+1) x = (s h, +1);  x^-1 (h,-1) x = (s (h - 2k), -1)  for x = (k, s)
        h, e = a
        k, s = x
        return (s * h, 1) if e == 1 else (s * (h - 2 * k), -1)

    def contains(self, a):
        return (
            isinstance(a, tuple)
            and len(a) == 2
            and isinstance(a[0], int)
            and not isinstance(a[0], bool)
            and a[1] in (1, -1)
            and not isinstance(a[1], bool)
        )

    def coerce(self, a):
        if isinstance(a, list):
            a = tuple(a)
        return self.check(a)

    def generators(self):
        return ((1, 1), (0, -1))  # t, s

    def encode(self, a):
        return {"h": a[0], "eps": a[1]}

    def decode(self, obj):
        if not isinstance(obj, dict) or set(obj) != {"h", "eps"}:
            raise GroupError(f'infinite_dihedral element must be {{"h": int, "eps": 1|-1}}, got {obj!r}')
        return self.check((obj["h"], obj["eps"]))

    def descriptor(self):
        return {"kind": "infinite_dihedral"}

    def format(self, a):
        return f"({a[0]}, {a[1]:+d})"

    def __str__(self):
        return "Z x| Z_2"


@dataclass(frozen=True, eq=True)
class DirectProduct(Group):
    factors: tuple
    kind = "direct_product"

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        if not self.factors:
            raise GroupError("direct product needs at least one factor")

    @property
    def is_finite(self):
        return all(f.is_finite for f in self.factors)

    @property
    def is_abelian(self):
        return all(f.is_abelian for f in self.factors)

    @property
    def order(self):
        if not self.is_finite:
            return None
        return prod(f.order for f in self.factors)

    def elements(self):
        if not self.is_finite:
            return super().elements()
        return [tuple(t) for t in itertools.product(*(f.elements() for f in self.factors))]

    def identity(self):
        return tuple(f.identity() for f in self.factors)

    def mul(self, a, b):
        return tuple(f.mul(x, y) for f, x, y in zip(self.factors, a, b))

    def inv(self, a):
        return tuple(f.inv(x) for f, x in zip(self.factors, a))

    def contains(self, a):
        return (
            isinstance(a, tuple)
            and len(a) == len(self.factors)
            and all(f.contains(x) for f, x in zip(self.factors, a))
        )

    def coerce(self, a):
        if isinstance(a, (list, tuple)) and len(a) == len(self.factors):
            a = tuple(f.coerce(x) for f, x in zip(self.factors, a))
        return self.check(a)

    def embed(self, i: int, x):
        out = list(self.identity())
        out[i] = x
        return tuple(out)

    def generators(self):
        return tuple(self.embed(i, g) for i, f in enumerate(self.factors) for g in f.generators())

    def encode(self, a):
        return [f.encode(x) for f, x in zip(self.factors, a)]

    def decode(self, obj):
        if not isinstance(obj, list) or len(obj) != len(self.factors):
            raise GroupError(f"direct_product element must be an array of {len(self.factors)} encodings")
        return tuple(f.decode(x) for f, x in zip(self.factors, obj))

    def descriptor(self):
        return {"kind": "direct_product", "factors": [f.descriptor() for f in self.factors]}

    def format(self, a):
        return "(" + ", ".join(f.format(x) for f, x in zip(self.factors, a)) + ")"

    def __str__(self):
        return " x ".join(str(f) for f in self.factors)


@dataclass(frozen=True, eq=True)
class ScaleLattice(Group):
    """``base**Z`` under multiplication, elements are exact Fractions."""

    base: int = 2
    kind = "scale_lattice"
    is_abelian = True

    def __post_init__(self):
        if self.base < 2:
            raise GroupError("scale lattice base must be >= 2")

    def log(self, a) -> int:
        a = Fraction(a)
        k = 0
        num, den = a.numerator, a.denominator
        while num % self.base == 0 and num > 1:
            num //= self.base
            k += 1
        while den % self.base == 0 and den > 1:
            den //= self.base
            k -= 1
        if num != 1 or den != 1:
            raise GroupError(f"{a} is not a power of {self.base}")
        return k

    def exp(self, k: int) -> Fraction:
        return Fraction(self.base) ** k

    def identity(self):
        return Fraction(1)

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        return 1 / a

    def contains(self, a):
        if not isinstance(a, Fraction) or a <= 0:
            return False
        try:
            self.log(a)
        except GroupError:
            return False
        return True

    def coerce(self, a):
        if isinstance(a, (int, str)):
            a = Fraction(a)
        return self.check(a)

    def generators(self):
        return (Fraction(self.base),)

    def encode(self, a):
        return str(a)

    def decode(self, obj):
        if not isinstance(obj, str):
            raise GroupError(f"scale_lattice element must be a string like '4' or '1/8', got {obj!r}")
        try:
            value = Fraction(obj)
        except (ValueError, ZeroDivisionError):
            raise GroupError(f"cannot parse {obj!r} as a fraction") from None
        return self.check(value)

    def descriptor(self):
        return {"kind": "scale_lattice", "base": self.base}

    def __str__(self):
        return f"{self.base}^Z"


TRIVIAL = Cyclic(1)


# ---------------------------------------------------------------------------
# named finite groups

def _perm_name(p: tuple) -> str:
    seen, cycles = set(), []
    for i in range(len(p)):
        if i in seen or p[i] == i:
            continue
        cyc, j = [], i
        while j not in seen:
            seen.add(j)
            cyc.append(j + 1)
            j = p[j]
        cycles.append("(" + " ".join(map(str, cyc)) + ")")
    return "".join(cycles) or "()"


def symmetric_group(n: int) -> FiniteTable:
    """``S_n`` with cycle-notation names; ``(p*q)(i) = p(q(i))``."""
    perms = sorted(itertools.permutations(range(n)), key=lambda p: (p != tuple(range(n)), p))
    index = {p: i for i, p in enumerate(perms)}
    table = [[index[tuple(p[q[i]] for i in range(n))] for q in perms] for p in perms]
    return FiniteTable([_perm_name(p) for p in perms], table, label=f"S{n}")


def _matmul3(a, b):
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(3)) for j in range(3)) for i in range(3))


def _det3(m):
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


def cube_rotation_group() -> FiniteTable:
    """The 24 rotations of a cube, as signed permutation matrices of determinant 1.

    Each element is named by the images of the x, y, z axes, e.g. ``+y-x+z``.
    """
    mats = []
    for perm in itertools.permutations(range(3)):
        for signs in itertools.product((1, -1), repeat=3):
            m = tuple(tuple(signs[j] if perm[j] == i else 0 for j in range(3)) for i in range(3))
            if _det3(m) == 1:
                mats.append(m)
    ident = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    mats.sort(key=lambda m: (m != ident, m))

    def name(m):
        out = ""
        for j in range(3):
            i = next(i for i in range(3) if m[i][j])
            out += ("+" if m[i][j] > 0 else "-") + "xyz"[i]
        return out

    index = {m: i for i, m in enumerate(mats)}
    table = [[index[_matmul3(a, b)] for b in mats] for a in mats]
    return FiniteTable([name(m) for m in mats], table, label="Rot(cube)")


# ---------------------------------------------------------------------------
# module-level element operations

def identity(G: Group):
    return G.identity()


def mul(G: Group, a, b):
    return G.mul(G.check(a), G.check(b))


def inv(G: Group, a):
    return G.inv(G.check(a))


def eq(a, b) -> bool:
    return a == b


# ---------------------------------------------------------------------------
# homomorphisms

def _evaluate(G: Group, images: Sequence, T: Group, a):
    """Image of ``a`` under the homomorphism sending ``G.generators()`` to ``images``."""
    if isinstance(G, FreeAbelian):
        return T.product(T.power(img, k) for img, k in zip(images, a))
    if isinstance(G, Cyclic):
        if G.modulus == 1:
            return T.identity()
        return T.power(images[0], G.residue(a))
    if isinstance(G, FiniteTable):
        return images[G.index[a]]
    if isinstance(G, InfiniteDihedral):
        t, s = images
        h, e = a
        out = T.power(t, h)
        return out if e == 1 else T.mul(out, s)
    if isinstance(G, DirectProduct):
        out = T.identity()
        pos = 0
        for f, x in zip(G.factors, a):
            k = len(f.generators())
            out = T.mul(out, _evaluate(f, images[pos:pos + k], T, x))
            pos += k
        return out
    if isinstance(G, ScaleLattice):
        return T.power(images[0], G.log(a))
    raise GroupError(f"cannot evaluate homomorphisms out of {G!r}")


def _relation_failure(G: Group, images: Sequence, T: Group) -> str | None:
    """Describe the first defining relation the images violate, or None."""
    if isinstance(G, FreeAbelian):
        for i, j in itertools.combinations(range(len(images)), 2):
            if not T.commutes(images[i], images[j]):
                return f"images of basis vectors {i} and {j} do not commute"
        return None
    if isinstance(G, Cyclic):
        if G.modulus > 1 and not T.is_identity(T.power(images[0], G.modulus)):
            return f"image of the generator does not have order dividing {G.modulus}"
        return None
    if isinstance(G, InfiniteDihedral):
        t, s = images
        if not T.is_identity(T.mul(s, s)):
            return "image of s does not square to the identity"
        if T.mul(T.mul(s, t), s) != T.inv(t):
            return "images violate s t s = t^-1"
        return None
    if isinstance(G, FiniteTable):
        for a in G.names:
            for b in G.names:
                if images[G.index[G.mul(a, b)]] != T.mul(images[G.index[a]], images[G.index[b]]):
                    return f"phi({a}*{b}) != phi({a})*phi({b})"
        return None
    if isinstance(G, DirectProduct):
        pos = 0
        blocks = []
        for f in G.factors:
            k = len(f.generators())
            block = images[pos:pos + k]
            msg = _relation_failure(f, block, T)
            if msg:
                return msg
            blocks.append(block)
            pos += k
        for i, j in itertools.combinations(range(len(blocks)), 2):
            for x in blocks[i]:
                for y in blocks[j]:
                    if not T.commutes(x, y):
                        return f"images of factors {i} and {j} do not commute"
        return None
    if isinstance(G, ScaleLattice):
        return None
    raise GroupError(f"no relation check for {G!r}")


class Homomorphism:
    """A verified homomorphism, stored as the images of ``source.generators()``."""

    def __init__(self, source: Group, target: Group, images: Sequence, name: str | None = None):
        images = tuple(target.coerce(x) for x in images)
        gens = source.generators()
        if len(images) != len(gens):
            raise GroupError(f"expected {len(gens)} generator images, got {len(images)}")
        msg = _relation_failure(source, images, target)
        if msg:
            raise GroupError(f"not a homomorphism: {msg}")
        self.source = source
        self.target = target
        self.images = images
        self.name = name

    @classmethod
    def from_matrix(cls, source: FreeAbelian, target: FreeAbelian, matrix: Sequence[Sequence[int]], name=None):
        if len(matrix) != target.rank or any(len(r) != source.rank for r in matrix):
            raise GroupError(f"matrix must be {target.rank}x{source.rank}")
        cols = [tuple(int(matrix[i][j]) for i in range(target.rank)) for j in range(source.rank)]
        return cls(source, target, cols, name)

    @classmethod
    def from_function(cls, source: Group, target: Group, fn: Callable, name=None):
        return cls(source, target, [fn(g) for g in source.generators()], name)

    def __call__(self, a):
        return _evaluate(self.source, self.images, self.target, self.source.check(a))

    def matrix(self) -> list[list[int]]:
        """Integer matrix when both ends are free abelian."""
        if not (isinstance(self.source, FreeAbelian) and isinstance(self.target, FreeAbelian)):
            raise GroupError("matrix form needs free abelian source and target")
        return [[self.images[j][i] for j in range(self.source.rank)] for i in range(self.target.rank)]

    def is_injective_on(self, elements: Iterable) -> bool:
        seen = set()
        for x in elements:
            y = self(x)
            if y in seen:
                return False
            seen.add(y)
        return True

    def __eq__(self, other):
        return (
            isinstance(other, Homomorphism)
            and self.source == other.source
            and self.target == other.target
            and self.images == other.images
        )

    def __hash__(self):
        return hash((self.source, self.target, self.images))

    def __repr__(self):
        label = self.name or "phi"
        imgs = ", ".join(self.target.format(x) for x in self.images)
        return f"<{label}: {self.source} -> {self.target}; gens -> [{imgs}]>"


def hom_apply(phi: Homomorphism, a):
    return phi(a)


def identity_hom(G: Group) -> Homomorphism:
    return Homomorphism(G, G, G.generators(), name="id")


def trivial_hom(source: Group, target: Group) -> Homomorphism:
    return Homomorphism(source, target, [target.identity()] * len(source.generators()), name="trivial")


def compose(outer: Homomorphism, inner: Homomorphism) -> Homomorphism:
    """``outer . inner``."""
    if inner.target != outer.source:
        raise GroupError("homomorphisms are not composable")
    return Homomorphism(inner.source, outer.target, [outer(x) for x in inner.images])


def dihedral_abelianization() -> Homomorphism:
    """``Z x| Z_2 -> Z_2 x Z_2``, ``(h, eps) -> ((-1)^h, eps)``."""
    target = DirectProduct((Cyclic(2), Cyclic(2)))
    return Homomorphism(InfiniteDihedral(), target, [(-1, 1), (1, -1)], name="ab")


def scale_exp(base: int = 2) -> Homomorphism:
    """``(Z, +) -> (base^Z, x)``, ``n -> base**n``."""
    return Homomorphism(FreeAbelian(1), ScaleLattice(base), [Fraction(base)], name="exp")


def scale_log(base: int = 2) -> Homomorphism:
    return Homomorphism(ScaleLattice(base), FreeAbelian(1), [(1,)], name="log")


# ---------------------------------------------------------------------------
# conjugacy

def _conjugate_all(G: Group, items: Sequence, x) -> list:
    return [G.conjugate(a, x) for a in items]


def simultaneous_conjugacy(G: Group, first: Sequence, second: Sequence):
    """Find ``x`` with ``x^-1 first[i] x == second[i]`` for every ``i``.

    Returns the conjugator or None.  Raises :class:`Undecided` for groups
    with no exact solver.
    """
    first = [G.check(a) for a in first]
    second = [G.check(a) for a in second]
    if len(first) != len(second):
        raise GroupError("tuples must have equal length")
    if G.is_abelian:
        return G.identity() if first == second else None
    if isinstance(G, FiniteTable):
        for x in G.elements():
            if _conjugate_all(G, first, x) == second:
                return x
        return None
    if isinstance(G, InfiniteDihedral):
        return _dihedral_conjugator(first, second)
    if isinstance(G, DirectProduct):
        parts = []
        for i, f in enumerate(G.factors):
            x = simultaneous_conjugacy(f, [a[i] for a in first], [b[i] for b in second])
            if x is None:
                return None
            parts.append(x)
        return tuple(parts)
    raise Undecided(f"no conjugacy solver for {G}")


def _dihedral_conjugator(first, second):
    for a, b in zip(first, second):
        if a[1] != b[1]:
            return None
    for sigma in (1, -1):
        k = None
        ok = True
        for (h1, e), (h2, _) in zip(first, second):
            if e == 1:
                if sigma * h1 != h2:
                    ok = False
                    break
            else:
                # sigma (h1 - 2k) = h2  =>  2k = h1 - sigma h2
                twice = h1 - sigma * h2
                if twice % 2:
                    ok = False
                    break
                if k is None:
                    k = twice // 2
                elif k != twice // 2:
                    ok = False
                    break
        if ok:
            return (k or 0, sigma)
    return None


# ---------------------------------------------------------------------------
# homomorphism search

def _generating_set(G: Group) -> list:
    elems = G.elements()
    gens: list = []
    span = {G.identity()}
    for g in elems:
        if g in span:
            continue
        gens.append(g)
        span = _closure(G, gens)
    return gens


def _closure(G: Group, gens) -> set:
    out = {G.identity()}
    frontier = [G.identity()]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = G.mul(x, g)
                if y not in out:
                    out.add(y)
                    nxt.append(y)
        frontier = nxt
    return out


def _extend_from_generators(G: Group, gens, images, T: Group) -> dict | None:
    """Cayley-graph extension; None if the assignment is inconsistent."""
    phi = {G.identity(): T.identity()}
    frontier = [G.identity()]
    while frontier:
        nxt = []
        for x in frontier:
            px = phi[x]
            for g, img in zip(gens, images):
                y = G.mul(x, g)
                val = T.mul(px, img)
                seen = phi.get(y)
                if seen is None:
                    phi[y] = val
                    nxt.append(y)
                elif seen != val:
                    return None
        frontier = nxt
    return phi


def _torsion_free(G: Group) -> bool:
    if isinstance(G, (FreeAbelian, ScaleLattice)):
        return True
    if isinstance(G, DirectProduct):
        return all(_torsion_free(f) for f in G.factors)
    return False


def enumerate_homomorphisms(source: Group, target: Group, max_search: int = MAX_HOM_SEARCH) -> list[Homomorphism]:
    """All homomorphisms ``source -> target``.

    Finite -> finite is exhaustive generator-image search.  A few infinite
    cases with a closed answer are also handled (finite into torsion-free is
    trivial; ``Z^n`` or ``Z x| Z_2`` into a finite group).  Anything else is
    :class:`Undecided`.
    """
    if target.order == 1:
        return [trivial_hom(source, target)]
    if source.is_finite and _torsion_free(target):
        return [trivial_hom(source, target)]
    if source.is_finite and target.is_finite:
        if source.order * target.order > max_search:
            raise BoundExceeded(f"|G_src|*|G_tgt| = {source.order * target.order} exceeds {max_search}")
        gens = _generating_set(source)
        out = []
        tgt_elems = target.elements()
        for images in itertools.product(tgt_elems, repeat=len(gens)):
            phi = _extend_from_generators(source, gens, images, target)
            if phi is not None:
                out.append(Homomorphism.from_function(source, target, phi.__getitem__))
        return out
    if isinstance(source, (FreeAbelian, InfiniteDihedral)) and target.is_finite:
        k = len(source.generators())
        if target.order ** k > max_search:
            raise BoundExceeded(f"{target.order}^{k} generator assignments exceed {max_search}")
        out = []
        for images in itertools.product(target.elements(), repeat=k):
            if _relation_failure(source, images, target) is None:
                out.append(Homomorphism(source, target, images))
        return out
    raise Undecided(f"homomorphism search from {source} to {target} is not supported")


def automorphisms(G: Group, max_search: int = MAX_HOM_SEARCH) -> list[Homomorphism]:
    if not G.is_finite:
        raise Undecided(f"automorphism group of {G} is not enumerated")
    elems = G.elements()
    return [phi for phi in enumerate_homomorphisms(G, G, max_search) if phi.is_injective_on(elems)]


def groups_isomorphic(G: Group, H: Group) -> bool | None:
    """True/False when decidable by invariants or search, None otherwise."""
    if G == H:
        return True
    if G.is_finite != H.is_finite:
        return False
    if G.is_finite:
        if G.order != H.order:
            return False
        if G.is_abelian != H.is_abelian:
            return False
        elems = G.elements()
        try:
            homs = enumerate_homomorphisms(G, H)
        except (BoundExceeded, Undecided):
            return None
        return any(phi.is_injective_on(elems) for phi in homs)
    if G.is_abelian != H.is_abelian:
        return False
    fa = _free_rank(G), _free_rank(H)
    if None not in fa:
        return fa[0] == fa[1]
    return None


def _free_rank(G: Group) -> int | None:
    """Rank when ``G`` is free abelian up to relabelling (incl. scale lattices)."""
    if isinstance(G, FreeAbelian):
        return G.rank
    if isinstance(G, ScaleLattice):
        return 1
    if isinstance(G, Cyclic) and G.modulus == 1:
        return 0
    if isinstance(G, DirectProduct):
        ranks = [_free_rank(f) for f in G.factors]
        return None if None in ranks else sum(ranks)
    return None


# ---------------------------------------------------------------------------
# abelian coordinates, used by the integer cohomology pipeline

def abelian_orders(G: Group) -> list[int]:
    """Coordinate orders of a finitely generated abelian group (0 means Z)."""
    if isinstance(G, FreeAbelian):
        return [0] * G.rank
    if isinstance(G, ScaleLattice):
        return [0]
    if isinstance(G, Cyclic):
        return [] if G.modulus == 1 else [G.modulus]
    if isinstance(G, DirectProduct):
        return [m for f in G.factors for m in abelian_orders(f)]
    raise GroupError(f"{G} is not supported by the abelian pipeline")


def to_coords(G: Group, a) -> list[int]:
    if isinstance(G, FreeAbelian):
        return list(a)
    if isinstance(G, ScaleLattice):
        return [G.log(a)]
    if isinstance(G, Cyclic):
        return [] if G.modulus == 1 else [G.residue(a)]
    if isinstance(G, DirectProduct):
        return [c for f, x in zip(G.factors, a) for c in to_coords(f, x)]
    raise GroupError(f"{G} is not supported by the abelian pipeline")


def from_coords(G: Group, coords: Sequence[int]):
    coords = list(coords)
    if isinstance(G, FreeAbelian):
        return tuple(coords)
    if isinstance(G, ScaleLattice):
        return G.exp(coords[0])
    if isinstance(G, Cyclic):
        return G.identity() if G.modulus == 1 else G.from_residue(coords[0])
    if isinstance(G, DirectProduct):
        out, pos = [], 0
        for f in G.factors:
            k = len(abelian_orders(f))
            out.append(from_coords(f, coords[pos:pos + k]))
            pos += k
        return tuple(out)
    raise GroupError(f"{G} is not supported by the abelian pipeline")


def group_from_descriptor(d: dict) -> Group:
    if not isinstance(d, dict) or "kind" not in d:
        raise GroupError(f"group descriptor must be an object with a 'kind', got {d!r}")
    kind = d["kind"]
    allowed = {
        "free_abelian": {"kind", "rank"},
        "cyclic": {"kind", "order"},
        "finite_table": {"kind", "elements", "table"},
        "infinite_dihedral": {"kind"},
        "direct_product": {"kind", "factors"},
        "scale_lattice": {"kind", "base"},
        "symmetric": {"kind", "degree"},
        "cube_rotations": {"kind"},
    }
    if kind not in allowed:
        raise GroupError(f"unknown group kind {kind!r}")
    extra = set(d) - allowed[kind]
    missing = allowed[kind] - set(d)
    if extra:
        raise GroupError(f"unknown key(s) {sorted(extra)} in {kind} descriptor")
    if missing:
        raise GroupError(f"missing key(s) {sorted(missing)} in {kind} descriptor")
    if kind == "free_abelian":
        return FreeAbelian(int(d["rank"]))
    if kind == "cyclic":
        return Cyclic(int(d["order"]))
    if kind == "finite_table":
        return FiniteTable(d["elements"], d["table"])
    if kind == "infinite_dihedral":
        return InfiniteDihedral()
    if kind == "direct_product":
        return DirectProduct(tuple(group_from_descriptor(f) for f in d["factors"]))
    if kind == "scale_lattice":
        return ScaleLattice(int(d["base"]))
    if kind == "symmetric":
        return symmetric_group(int(d["degree"]))
    return cube_rotation_group()
