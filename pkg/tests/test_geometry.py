import random
from itertools import product

import pytest
from hypothesis import given, strategies as st

from shiftlab.geometry import (
    GenSet,
    Lattice,
    ball,
    box,
    connected,
    default_gens,
    interior,
    lattice_from_generators,
    lattices_up_to_index,
    add,
)

G2 = default_gens(2)
G1 = default_gens(1)


def brute_ball(r, gens):
    """Independent oracle: all sums of at most r generators."""
    pts = {(0,) * gens.dim}
    for k in range(1, r + 1):
        for combo in product(gens.nonzero(), repeat=k):
            p = (0,) * gens.dim
            for s in combo:
                p = add(p, s)
            pts.add(p)
    return pts


def test_ball_identity_case():
    assert ball(0, G2) == ((0, 0),)


def test_ball_radius_one_has_five_points():
    assert len(ball(1, G2)) == 5


def test_ball_radius_two_matches_bfs_oracle():
    got = set(ball(2, G2))
    assert got == brute_ball(2, G2)
    assert len(got) == 13


def test_ball_monotone():
    for r in range(5):
        assert set(ball(r, G2)) <= set(ball(r + 1, G2))
        assert set(ball(r, G1)) <= set(ball(r + 1, G1))


def test_genset_requires_symmetry():
    with pytest.raises(ValueError):
        GenSet(((0, 0), (1, 0)))


def test_lattice_index_examples():
    assert Lattice(((6, 0), (0, 5))).index == 30
    assert Lattice(((1, 0), (0, 1))).index == 1
    assert Lattice(((2, 1), (0, 3))).index == 6


def test_degenerate_lattice_rejected():
    with pytest.raises(ValueError):
        Lattice(((2, 1), (4, 2)))


def test_index_six_matches_residue_exhaustion():
    lat = Lattice(((2, 1), (0, 3)))
    residues = {lat.reduce((i, j)) for i in range(-6, 7) for j in range(-6, 7)}
    assert len(residues) == 6


def test_identity_lattice_contains_everything():
    lat = Lattice(((1, 0), (0, 1)))
    for g in box((-3, -3), (3, 3)):
        assert lat.contains(g)


def test_reduce_is_periodic():
    rng = random.Random(0)
    for lat in lattices_up_to_index(6, 2):
        for _ in range(8):
            g = (rng.randint(-9, 9), rng.randint(-9, 9))
            i, j = rng.randint(-2, 2), rng.randint(-2, 2)
            v1, v2 = lat.generators()
            ell = add(tuple(i * a for a in v1), tuple(j * a for a in v2))
            assert lat.reduce(add(g, ell)) == lat.reduce(g)


def test_coset_reps_tile_a_box():
    for lat in lattices_up_to_index(6, 2):
        reps = lat.coset_reps()
        assert len(reps) == lat.index
        seen = {lat.reduce(g) for g in box((-10, -10), (10, 10))}
        assert seen == set(reps)


def test_connected_examples():
    assert connected([(0, 0), (1, 0)], G2)
    assert not connected([(0, 0), (2, 0)], G2)
    assert connected([], G2)
    assert connected([(4, 4)], G2)


class UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb


def test_connected_agrees_with_union_find_oracle():
    rng = random.Random(42)
    cells6 = list(box((0, 0), (5, 5)))
    for _ in range(200):
        subset = [c for c in cells6 if rng.random() < 0.45]
        uf = UnionFind(subset)
        for c in subset:
            for s in G2.nonzero():
                d = add(c, s)
                if d in uf.parent:
                    uf.union(c, d)
        comps = {uf.find(c) for c in subset}
        assert connected(subset, G2) == (len(comps) <= 1)


def test_interior_examples():
    b3 = box((0, 0), (2, 2))
    assert interior(b3, ball(1, G2)) == {(1, 1)}
    assert interior(b3, [(0, 0)]) == set(b3)
    b4 = box((0, 0), (3, 3))
    assert interior(b4, ball(1, G2)) == set(box((1, 1), (2, 2)))


def test_lattices_up_to_index_counts():
    assert len(lattices_up_to_index(1, 2)) == 1
    assert [l.basis for l in lattices_up_to_index(2, 1)] == [((1,),), ((2,),)]
    # counts by index in Z^2: 1, 3, 4
    lats = lattices_up_to_index(3, 2)
    assert len(lats) == 8
    by_index = {}
    for l in lats:
        by_index[l.index] = by_index.get(l.index, 0) + 1
    assert by_index == {1: 1, 2: 3, 3: 4}


def test_lattices_are_duplicate_free():
    lats = lattices_up_to_index(8, 2)
    assert len(set(lats)) == len(lats)


def test_lattice_from_generators_recovers_hnf():
    lat = lattice_from_generators([(6, 0), (0, 5)], 2)
    assert lat.basis == ((6, 0), (0, 5))
    lat2 = lattice_from_generators([(2, 1), (0, 3), (2, 4)], 2)
    assert lat2.index == 6


@given(st.integers(-40, 40), st.integers(-40, 40))
def test_reduce_idempotent_and_congruent(x, y):
    lat = Lattice(((4, 2), (0, 3)))
    r = lat.reduce((x, y))
    assert lat.reduce(r) == r
    assert lat.contains((x - r[0], y - r[1]))
