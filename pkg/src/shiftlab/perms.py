"""Finite permutation groups on Cartesian products.

Perm composition is function composition: (f * g)(x) = f(g(x)).
Commutator [f, g] = f^-1 g^-1 f g; left conjugation h^ g = h g h^-1 and
right conjugation g^h = h^-1 g h, matching the package-wide conventions.

PermGroup carries a deterministic Schreier-Sims stabilizer chain for exact
orders and membership; closure_enumerate is the independent BFS oracle used
to cross-check it on small groups.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations as iperms, product as iproduct


class ProductSpace:
    """Ordered factors; points are tuples indexed in mixed radix."""

    def __init__(self, factors):
        self.factors = tuple(tuple(f) for f in factors)
        self.sizes = tuple(len(f) for f in self.factors)
        self.points = tuple(iproduct(*self.factors))
        self.index = {p: i for i, p in enumerate(self.points)}

    @property
    def size(self):
        n = 1
        for s in self.sizes:
            n *= s
        return n

    def __eq__(self, other):
        return isinstance(other, ProductSpace) and self.factors == other.factors

    def __hash__(self):
        return hash(self.factors)


def plain_space(n):
    """A single-factor space on 0..n-1."""
    return ProductSpace([range(n)])


class Perm:
    """Permutation of a ProductSpace, stored as an image array over indices."""

    __slots__ = ("space", "images")

    def __init__(self, space, images):
        self.space = space
        self.images = tuple(images)
        if sorted(self.images) != list(range(space.size)):
            raise ValueError("not a permutation")

    @classmethod
    def identity(cls, space):
        return cls(space, range(space.size))

    @classmethod
    def from_cycles(cls, space, cycles):
        """Build from cycles of points, e.g. [((0,0),(1,0),(2,0))]."""
        images = list(range(space.size))
        for cyc in cycles:
            idx = [space.index[tuple(p) if isinstance(p, (tuple, list)) else (p,)] for p in cyc]
            for i in range(len(idx)):
                images[idx[i]] = idx[(i + 1) % len(idx)]
        return cls(space, images)

    @classmethod
    def from_mapping(cls, space, mapping):
        images = list(range(space.size))
        for src, dst in mapping.items():
            images[space.index[src]] = space.index[dst]
        return cls(space, images)

    def __call__(self, point):
        return self.space.points[self.images[self.space.index[point]]]

    def apply_index(self, i):
        return self.images[i]

    def __mul__(self, other):
        if self.space != other.space:
            raise ValueError("permutation space mismatch")
        return Perm(self.space, tuple(self.images[j] for j in other.images))

    def inverse(self):
        inv = [0] * len(self.images)
        for i, j in enumerate(self.images):
            inv[j] = i
        return Perm(self.space, inv)

    def conjugate_left(self, h):
        """h self h^-1."""
        return h * self * h.inverse()

    def conjugate_right(self, h):
        """h^-1 self h."""
        return h.inverse() * self * h

    def commutator(self, other):
        """self^-1 other^-1 self other."""
        return self.inverse() * other.inverse() * self * other

    def is_identity(self):
        return all(i == j for i, j in enumerate(self.images))

    def cycles(self):
        seen = set()
        out = []
        for i in range(len(self.images)):
            if i in seen or self.images[i] == i:
                continue
            cyc = [i]
            seen.add(i)
            j = self.images[i]
            while j != i:
                seen.add(j)
                cyc.append(j)
                j = self.images[j]
            out.append(tuple(self.space.points[k] for k in cyc))
        return tuple(out)

    def parity(self):
        """0 for even, 1 for odd."""
        return sum(len(c) - 1 for c in self.cycles()) % 2

    def __eq__(self, other):
        return isinstance(other, Perm) and self.space == other.space and self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def __repr__(self):
        cycs = self.cycles()
        if not cycs:
            return "Perm(id)"

        def fmt_pt(p):
            if len(p) == 1:
                return str(p[0])
            return "".join(str(v) for v in p)

        return "Perm(%s)" % "".join("(%s)" % "; ".join(fmt_pt(p) for p in c) for c in cycs)


def embed(pi, space, coords, condition_coords=None, condition=None):
    """Lift pi (a Perm of the sub-product at coords) to the full space.

    With a condition: apply pi on the coords exactly when the projection to
    condition_coords lies in the given set of tuples; otherwise fix the point.
    Without one, this is the natural embedding.
    """
    coords = tuple(coords)
    if condition_coords is not None:
        condition_coords = tuple(condition_coords)
        if set(coords) & set(condition_coords):
            raise ValueError("condition coordinates must be disjoint from acted ones")
        condition = {tuple(t) for t in condition}
    images = []
    for p in space.points:
        if condition_coords is not None:
            proj = tuple(p[i] for i in condition_coords)
            if proj not in condition:
                images.append(space.index[p])
                continue
        sub = tuple(p[i] for i in coords)
        new_sub = pi(sub)
        q = list(p)
        for pos, i in enumerate(coords):
            q[i] = new_sub[pos]
        images.append(space.index[tuple(q)])
    return Perm(space, images)


def all_three_cycles(space):
    """Every 3-cycle of the space's points (both orientations), sorted."""
    out = []
    pts = space.points
    for a, b, c in combinations(range(len(pts)), 3):
        out.append(Perm.from_cycles(space, [(pts[a], pts[b], pts[c])]))
        out.append(Perm.from_cycles(space, [(pts[a], pts[c], pts[b])]))
    return out


def natural_alt_copy(full_space, coords):
    """Generators (all 3-cycles) of the natural copy of Alt(sub-product)."""
    sub_space = ProductSpace([full_space.factors[i] for i in coords])
    return [embed(pi, full_space, coords) for pi in all_three_cycles(sub_space)]


# -- Schreier-Sims -------------------------------------------------------


class StabilizerChain:
    """Deterministic Schreier-Sims chain over point indices.

    Level l holds the orbit and transversal of base[l] under every strong
    generator fixing base[0..l-1] (strong generators are stored once, at the
    deepest level whose base prefix they fix).  After construction a full
    verification pass checks that every Schreier generator sifts to the
    identity, which certifies order and membership answers.
    """

    def __init__(self, degree):
        self.degree = degree
        self.base = []
        self.strong = []  # strong[l]: residues first moving base[l]
        self.orbits = []  # dict point -> transversal images

    def _gens_at(self, level):
        out = []
        for l in range(level, len(self.strong)):
            out.extend(self.strong[l])
        return out

    def _orbit_transversal(self, level):
        b = self.base[level]
        gens = self._gens_at(level)
        trans = {b: tuple(range(self.degree))}
        frontier = [b]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = g[x]
                    if y not in trans:
                        tx = trans[x]
                        trans[y] = tuple(g[tx[i]] for i in range(self.degree))
                        nxt.append(y)
            frontier = nxt
        self.orbits[level] = trans

    def sift(self, images, start=0):
        """Reduce through levels >= start; (None, _) when it reaches identity."""
        g = tuple(images)
        for level in range(start, len(self.base)):
            y = g[self.base[level]]
            trans = self.orbits[level]
            if y not in trans:
                return g, level
            t = trans[y]
            tinv = [0] * self.degree
            for i, j in enumerate(t):
                tinv[j] = i
            g = tuple(tinv[g[i]] for i in range(self.degree))
        if all(g[i] == i for i in range(self.degree)):
            return None, len(self.base)
        return g, len(self.base)

    def add_generator(self, images):
        res, level = self.sift(tuple(images))
        if res is None:
            return False
        if level == len(self.base):
            b = next(i for i in range(self.degree) if res[i] != i)
            self.base.append(b)
            self.strong.append([])
            self.orbits.append({})
        self.strong[level].append(res)
        for l in range(level + 1):
            self._orbit_transversal(l)
        return True

    def close(self):
        """Sift Schreier generators level by level until a clean pass."""
        dirty = True
        while dirty:
            dirty = False
            for level in range(len(self.base) - 1, -1, -1):
                trans = self.orbits[level]
                gens = self._gens_at(level)
                for x in sorted(trans):
                    tx = trans[x]
                    for g in gens:
                        y = g[x]
                        ty = trans[y]
                        tyinv = [0] * self.degree
                        for i, j in enumerate(ty):
                            tyinv[j] = i
                        s = tuple(tyinv[g[tx[i]]] for i in range(self.degree))
                        if any(s[i] != i for i in range(self.degree)):
                            if self.add_generator(s):
                                dirty = True
                if dirty:
                    break

    def order(self):
        n = 1
        for trans in self.orbits:
            n *= len(trans)
        return n

    def contains(self, images):
        res, _ = self.sift(tuple(images))
        return res is None


class PermGroup:
    """Group generated by permutations, with a lazy stabilizer chain."""

    def __init__(self, generators, space=None):
        generators = list(generators)
        if not generators and space is None:
            raise ValueError("need generators or an explicit space")
        self.space = space or generators[0].space
        self.generators = tuple(generators)
        self._chain = None

    def chain(self):
        if self._chain is None:
            ch = StabilizerChain(self.space.size)
            for g in self.generators:
                ch.add_generator(g.images)
            ch.close()
            self._chain = ch
        return self._chain

    def order(self):
        return self.chain().order()

    def contains(self, perm):
        if perm.space != self.space:
            return False
        return self.chain().contains(perm.images)

    def contains_full_alt(self):
        """Does the group contain Alt(points)?

        For groups of even permutations this is equivalent to the order being
        divisible by N!/2; a fixed 3-cycle membership is checked as well.
        """
        n = self.space.size
        half = _factorial(n) // 2
        if self.order() % half != 0:
            return False
        if n >= 3:
            pts = self.space.points
            probe = Perm.from_cycles(self.space, [(pts[0], pts[1], pts[2])])
            return self.contains(probe)
        return True


def _factorial(n):
    out = 1
    for i in range(2, n + 1):
        out *= i
    return out


def closure_enumerate(generators, cap=1_000_000):
    """All group elements by BFS over generator products; independent oracle."""
    if not generators:
        return set()
    space = generators[0].space
    ident = Perm.identity(space)
    seen = {ident.images: ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for g in frontier:
            for s in generators:
                h = s * g
                if h.images not in seen:
                    if len(seen) >= cap:
                        raise BudgetExceeded("closure enumeration cap reached")
                    seen[h.images] = h
                    nxt.append(h)
        frontier = nxt
    return set(seen.values())


class BudgetExceeded(Exception):
    pass


# -- the product-generation checks ---------------------------------------


def triple_product_alt_check(sizes, expect=None):
    """Build the group generated by the natural copies of Alt(A x B) and
    Alt(B x C) inside Sym(A x B x C) and test whether it contains the full
    alternating group.  Returns (computed, expected, match) where expected
    follows the predicate: some outer factor is a singleton, or all factors
    have >= 2 elements and some factor has >= 3.
    """
    a, b, c = sizes
    space = ProductSpace([range(a), range(b), range(c)])
    gens = natural_alt_copy(space, (0, 1)) + natural_alt_copy(space, (1, 2))
    if not gens:
        # all sub-products too small for 3-cycles
        computed = space.size <= 2
    else:
        computed = PermGroup(gens, space).contains_full_alt()
    if expect is None:
        expect = (a == 1 or c == 1) or (min(sizes) >= 2 and max(sizes) >= 3)
    return computed, expect, computed == expect


def affine_certificate(sizes=(2, 2, 2), cap=100_000):
    """For the all-binary case: every generated element is affine over F_2^3.

    Checks g(x + y + z) = g(x) + g(y) + g(z) elementwise (vector addition of
    3-bit points) for every element of the closure.  Returns True if all
    elements pass.
    """
    if sizes != (2, 2, 2):
        raise ValueError("affinity certificate is specific to (2,2,2)")
    space = ProductSpace([range(2), range(2), range(2)])
    gens = natural_alt_copy(space, (0, 1)) + natural_alt_copy(space, (1, 2))
    elements = closure_enumerate(gens, cap=cap)

    def xor(p, q):
        return tuple(x ^ y for x, y in zip(p, q))

    pts = space.points
    for g in elements:
        for x in pts:
            for y in pts:
                for z in pts:
                    lhs = g(xor(xor(x, y), z))
                    rhs = xor(xor(g(x), g(y)), g(z))
                    if lhs != rhs:
                        return False
    return True


def rotation_hypergraph_check(vertices, edges):
    """Group on the vertex set generated by the rotations of each 3-edge;
    returns (weakly_connected, contains_full_alt)."""
    vertices = tuple(vertices)
    space = ProductSpace([vertices])
    gens = []
    for e in edges:
        u, v, w = tuple(e)
        gens.append(Perm.from_cycles(space, [((u,), (v,), (w,))]))
        gens.append(Perm.from_cycles(space, [((u,), (w,), (v,))]))
    # weak connectivity of the underlying graph
    adj = {v: set() for v in vertices}
    for e in edges:
        for u in e:
            for v in e:
                if u != v:
                    adj[u].add(v)
    seen = set()
    if vertices:
        stack = [vertices[0]]
        seen.add(vertices[0])
        while stack:
            u = stack.pop()
            for v in adj[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
    connected = len(seen) == len(vertices)
    group = PermGroup(gens, space) if gens else None
    contains = group.contains_full_alt() if group else len(vertices) <= 2
    return connected, contains


def graph_edge_alt_check(nodes, edges, sizes):
    """Group on prod_g A_g generated, per graph edge {u, v}, by the natural
    copy of Alt(A_u x A_v); returns whether it contains the full Alt."""
    nodes = tuple(nodes)
    space = ProductSpace([range(sizes[g]) for g in nodes])
    pos = {g: i for i, g in enumerate(nodes)}
    gens = []
    for u, v in edges:
        gens.extend(natural_alt_copy(space, (pos[u], pos[v])))
    if not gens:
        return space.size <= 2
    return PermGroup(gens, space).contains_full_alt()


def replay_identity_checks():
    """Replay the three displayed commutator/conjugation identities used in
    the two-natural-copies analysis; returns a list of (name, ok) pairs."""
    out = []

    # identity 1: on 4 x 2 x 2
    space = ProductSpace([range(4), range(2), range(2)])
    pi1 = embed(Perm.from_cycles(ProductSpace([range(4), range(2)]), [((0, 0), (1, 0), (2, 0))]), space, (0, 1))
    pi2 = embed(Perm.from_cycles(ProductSpace([range(4), range(2)]), [((1, 1), (2, 1), (3, 1))]), space, (0, 1))
    pi3 = embed(Perm.from_cycles(ProductSpace([range(2), range(2)]), [((0, 0), (1, 0), (1, 1))]), space, (1, 2))
    lhs = (pi2.conjugate_right(pi3)).commutator(pi1)
    rhs = Perm.from_cycles(space, [((0, 0, 0), (3, 0, 0)), ((1, 0, 0), (2, 0, 0))])
    ab = ProductSpace([range(4), range(2)])
    rhs2 = embed(
        Perm.from_cycles(ab, [((0, 0), (3, 0)), ((1, 0), (2, 0))]),
        space,
        (0, 1),
        condition_coords=(2,),
        condition={(0,)},
    )
    out.append(("double-transposition via conjugated commutator", lhs == rhs and lhs == rhs2))

    # identity 2: on 2 x 3 x 2
    space = ProductSpace([range(2), range(3), range(2)])
    p1 = embed(Perm.from_cycles(ProductSpace([range(2), range(3)]), [((0, 0), (0, 1), (0, 2))]), space, (0, 1))
    p2 = embed(Perm.from_cycles(ProductSpace([range(3), range(2)]), [((0, 0), (0, 1), (1, 1))]), space, (1, 2))
    lhs = p1.commutator(p2)
    rhs = Perm.from_cycles(space, [((0, 0, 0), (0, 2, 1), (0, 2, 0), (0, 0, 1), (0, 1, 1))])
    bc = ProductSpace([range(3), range(2)])
    rhs2 = embed(
        Perm.from_cycles(bc, [((0, 0), (2, 1), (2, 0), (0, 1), (1, 1))]),
        space,
        (1, 2),
        condition_coords=(0,),
        condition={(0,)},
    )
    out.append(("five-cycle via cross-track commutator", lhs == rhs and lhs == rhs2))

    # identity 3: on 3 x 2 x 2
    space = ProductSpace([range(3), range(2), range(2)])
    base = Perm.from_cycles(space, [((0, 0, 0), (1, 0, 0), (2, 0, 0))])
    p5 = embed(Perm.from_cycles(ProductSpace([range(3), range(2)]), [((1, 0), (1, 1), (0, 1))]), space, (0, 1))
    p6 = embed(Perm.from_cycles(ProductSpace([range(2), range(2)]), [((1, 0), (1, 1), (0, 1))]), space, (1, 2))
    lhs = base.conjugate_left(p5.conjugate_right(p6))
    rhs = Perm.from_cycles(space, [((0, 0, 0), (1, 0, 1), (2, 0, 0))])
    out.append(("three-cycle pushed across tracks", lhs == rhs))

    return out


def sym_group_elements(n):
    """All permutations of 0..n-1 as Perm objects on a plain space."""
    space = plain_space(n)
    out = []
    for images in iperms(range(n)):
        out.append(Perm(space, images))
    return out
