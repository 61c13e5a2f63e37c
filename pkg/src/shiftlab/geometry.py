"""Exact geometry of Z^d for d in {1, 2}: balls, finite-index lattices, cosets.

Group elements are plain int tuples ("points"). A generating set is a finite
symmetric set of points containing the origin; the default is {0, +-e_i},
which also fixes the meaning of "touching" everywhere else in the package.
Lattices are kept in a canonical Hermite normal form so that equality of
finite-index subgroups is plain equality of basis matrices.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product


Point = tuple[int, ...]


def origin(dim):
    return (0,) * dim


def add(g, h):
    return tuple(a + b for a, b in zip(g, h))


def sub(g, h):
    return tuple(a - b for a, b in zip(g, h))


def neg(g):
    return tuple(-a for a in g)


def norm1(g):
    """Word length of g over the standard generators {+-e_i}."""
    return sum(abs(a) for a in g)


def point_key(g):
    """Deterministic sort key: word length, then coordinate lexicographic."""
    return (norm1(g), g)


def default_gens(dim):
    """The symmetric generating set {0, +-e_i} of Z^dim."""
    pts = [origin(dim)]
    for i in range(dim):
        e = tuple(1 if j == i else 0 for j in range(dim))
        pts.extend([e, neg(e)])
    return GenSet(tuple(pts))


@dataclass(frozen=True)
class GenSet:
    """Finite symmetric subset of Z^d containing the origin."""

    points: tuple

    def __post_init__(self):
        pts = set(self.points)
        if not pts:
            raise ValueError("empty generating set")
        dims = {len(p) for p in pts}
        if len(dims) != 1:
            raise ValueError("mixed dimensions in generating set")
        d = dims.pop()
        if origin(d) not in pts:
            raise ValueError("generating set must contain the origin")
        for p in pts:
            if neg(p) not in pts:
                raise ValueError("generating set must be symmetric")
        object.__setattr__(self, "points", tuple(sorted(pts, key=point_key)))

    @property
    def dim(self):
        return len(self.points[0])

    def nonzero(self):
        d = self.dim
        return tuple(p for p in self.points if p != origin(d))


def ball(r, gens):
    """All points of word length <= r over gens (as a sorted tuple).

    Contains the origin, symmetric, and monotone in r.
    """
    if r < 0:
        raise ValueError("radius must be nonnegative")
    d = gens.dim
    seen = {origin(d)}
    frontier = [origin(d)]
    for _ in range(r):
        nxt = []
        for g in frontier:
            for s in gens.nonzero():
                h = add(g, s)
                if h not in seen:
                    seen.add(h)
                    nxt.append(h)
        frontier = nxt
    return tuple(sorted(seen, key=point_key))


def connected(cells, gens):
    """Is the graph on cells with edges u ~ u+s (s in gens) connected?

    The empty set and singletons count as connected.
    """
    cells = set(cells)
    if len(cells) <= 1:
        return True
    start = next(iter(cells))
    seen = {start}
    stack = [start]
    while stack:
        g = stack.pop()
        for s in gens.nonzero():
            h = add(g, s)
            if h in cells and h not in seen:
                seen.add(h)
                stack.append(h)
    return len(seen) == len(cells)


def interior(cells, probe):
    """The probe-interior {g in cells : probe + g subset of cells}."""
    cells = set(cells)
    pts = probe.points if isinstance(probe, GenSet) else tuple(probe)
    return {g for g in cells if all(add(s, g) in cells for s in pts)}


def touch(a, b, gens):
    """Do the finite sets a, b touch (some cell of b within one step of a)?"""
    aset = set(a)
    for g in b:
        for s in gens.points:
            if add(g, s) in aset:
                return True
    return False


class Lattice:
    """Finite-index subgroup of Z^d in canonical Hermite normal form.

    d = 1: basis [[a]] with a >= 1.
    d = 2: basis columns (a, 0) and (b, c) with a, c >= 1 and 0 <= b < a,
    stored as ((a, b), (0, c)).  Index = a * c.
    """

    def __init__(self, basis):
        rows = tuple(tuple(int(v) for v in row) for row in basis)
        d = len(rows)
        if d not in (1, 2) or any(len(r) != d for r in rows):
            raise ValueError("basis must be a 1x1 or 2x2 integer matrix")
        if d == 1:
            (a,) = rows[0]
            if a == 0:
                raise ValueError("degenerate lattice")
            self.basis = ((abs(a),),)
        else:
            det = rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
            if det == 0:
                raise ValueError("degenerate lattice")
            self.basis = _hnf2(rows)
        self.dim = d

    @property
    def index(self):
        if self.dim == 1:
            return self.basis[0][0]
        return self.basis[0][0] * self.basis[1][1]

    def contains(self, g):
        return self.reduce(g) == origin(self.dim)

    def reduce(self, g):
        """Canonical coset representative of g (componentwise HNF residue)."""
        if self.dim == 1:
            return (g[0] % self.basis[0][0],)
        (a, b), (_, c) = self.basis
        x, y = g
        ry = y % c
        j = (y - ry) // c
        rx = (x - j * b) % a
        return (rx, ry)

    def coset_reps(self):
        """One canonical representative per coset; a box, hence connected."""
        if self.dim == 1:
            return tuple((i,) for i in range(self.basis[0][0]))
        (a, _), (_, c) = self.basis
        return tuple((i, j) for j in range(c) for i in range(a))

    def generators(self):
        if self.dim == 1:
            return ((self.basis[0][0],),)
        (a, b), (_, c) = self.basis
        return ((a, 0), (b, c))

    def __eq__(self, other):
        return isinstance(other, Lattice) and self.basis == other.basis

    def __hash__(self):
        return hash(self.basis)

    def __repr__(self):
        return f"Lattice({list(list(r) for r in self.basis)})"


def _hnf2(rows):
    """Column-style HNF of a nonsingular 2x2 integer matrix.

    Returns ((a, b), (0, c)) with columns (a, 0), (b, c): a, c >= 1, 0 <= b < a.
    """
    # column vectors
    v1 = (rows[0][0], rows[1][0])
    v2 = (rows[0][1], rows[1][1])
    # eliminate the second row of one column via gcd steps
    while v1[1] != 0:
        if v2[1] == 0:
            v1, v2 = v2, v1
            break
        q = v1[1] // v2[1]
        v1 = (v1[0] - q * v2[0], v1[1] - q * v2[1])
        v1, v2 = v2, v1
    # now v2 = (b', c') with c' != 0, v1 = (a', 0)
    a = abs(v1[0])
    b, c = v2
    if c < 0:
        b, c = -b, -c
    b %= a
    return ((a, b), (0, c))


def lattice_from_generators(gens_pts, dim):
    """Smallest lattice containing the given points (must have full rank)."""
    if dim == 1:
        g = 0
        for (x,) in gens_pts:
            g = _gcd(g, x)
        if g == 0:
            raise ValueError("rank-deficient generating set")
        return Lattice(((g,),))
    # integer column reduction of a 2 x n matrix
    cols = [tuple(p) for p in gens_pts if p != (0, 0)]
    if not cols:
        raise ValueError("rank-deficient generating set")
    # reduce second coordinates to a single pivot by gcd elimination
    cols.sort()
    while True:
        nz = [c for c in cols if c[1] != 0]
        if len(nz) <= 1:
            break
        nz.sort(key=lambda c: abs(c[1]))
        piv = nz[0]
        new = []
        for c in cols:
            if c is piv or c[1] == 0:
                new.append(c)
            else:
                q = c[1] // piv[1]
                new.append((c[0] - q * piv[0], c[1] - q * piv[1]))
        cols = [c for c in new if c != (0, 0)]
    pivot2 = next((c for c in cols if c[1] != 0), None)
    xs = [c[0] for c in cols if c[1] == 0]
    a = 0
    for x in xs:
        a = _gcd(a, x)
    if pivot2 is None or a == 0:
        raise ValueError("rank-deficient generating set")
    return Lattice(((a, pivot2[0]), (0, pivot2[1])))


def _gcd(a, b):
    a, b = abs(a), abs(b)
    while b:
        a, b = b, a % b
    return a


def lattices_up_to_index(n, dim):
    """All finite-index sublattices of Z^dim with index <= n, in HNF order."""
    if n < 1:
        raise ValueError("index bound must be >= 1")
    out = []
    if dim == 1:
        out = [Lattice(((a,),)) for a in range(1, n + 1)]
    else:
        for a in range(1, n + 1):
            for c in range(1, n // a + 1):
                for b in range(a):
                    out.append(Lattice(((a, b), (0, c))))
    out.sort(key=lambda lat: (lat.index, lat.basis))
    return out


def box(lo, hi):
    """All points of the box prod_i [lo_i, hi_i] (inclusive)."""
    ranges = [range(l, h + 1) for l, h in zip(lo, hi)]
    return tuple(product(*ranges))
