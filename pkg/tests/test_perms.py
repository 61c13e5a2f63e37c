import random

import pytest

from shiftlab.perms import (
    Perm,
    PermGroup,
    ProductSpace,
    affine_certificate,
    all_three_cycles,
    closure_enumerate,
    embed,
    graph_edge_alt_check,
    natural_alt_copy,
    plain_space,
    replay_identity_checks,
    rotation_hypergraph_check,
    triple_product_alt_check,
)


def cyc(space, *points):
    return Perm.from_cycles(space, [points])


def test_self_commutator_is_identity():
    sp = plain_space(5)
    g = cyc(sp, (0,), (1,), (2,), (3,), (4,))
    assert g.commutator(g).is_identity()


def test_displayed_commutator_value():
    sp = plain_space(4)
    a = cyc(sp, (1,), (2,), (3,))
    b = cyc(sp, (0,), (1,), (2,))
    got = a.commutator(b)
    want = Perm.from_cycles(sp, [((0,), (3,)), ((2,), (1,))])
    assert got == want


def test_three_cycle_is_even():
    sp = plain_space(4)
    assert cyc(sp, (0,), (1,), (2,)).parity() == 0
    assert Perm.from_cycles(sp, [((0,), (1,))]).parity() == 1


def test_conjugation_is_left_action():
    rng = random.Random(1)
    sp = plain_space(5)
    for _ in range(20):
        g, h, k = (_random_perm(rng, sp) for _ in range(3))
        assert g.conjugate_left(h).conjugate_left(k) == g.conjugate_left(k * h)


def _random_perm(rng, space):
    images = list(range(space.size))
    rng.shuffle(images)
    return Perm(space, images)


def test_embed_fixes_untouched_coordinates():
    space = ProductSpace([range(2), range(2), range(3)])
    ab = ProductSpace([range(2), range(2)])
    pi = cyc(ab, (0, 0), (0, 1), (1, 0))
    lifted = embed(pi, space, (0, 1))
    for p in space.points:
        assert lifted(p)[2] == p[2]


def test_embed_homomorphism_with_condition():
    rng = random.Random(2)
    space = ProductSpace([range(2), range(2), range(2)])
    ab = ProductSpace([range(2), range(2)])
    cond = {(0,)}
    for _ in range(25):
        p1 = _random_perm(rng, ab)
        p2 = _random_perm(rng, ab)
        lhs = embed(p1 * p2, space, (0, 1), (2,), cond)
        rhs = embed(p1, space, (0, 1), (2,), cond) * embed(p2, space, (0, 1), (2,), cond)
        assert lhs == rhs


def test_embed_full_condition_is_natural_embedding():
    space = ProductSpace([range(2), range(2), range(2)])
    ab = ProductSpace([range(2), range(2)])
    pi = cyc(ab, (0, 0), (1, 1), (1, 0))
    full_cond = {(0,), (1,)}
    assert embed(pi, space, (0, 1), (2,), full_cond) == embed(pi, space, (0, 1))


def test_embed_rejects_overlapping_coordinates():
    space = ProductSpace([range(2), range(2), range(2)])
    ab = ProductSpace([range(2), range(2)])
    pi = cyc(ab, (0, 0), (1, 1), (1, 0))
    with pytest.raises(ValueError):
        embed(pi, space, (0, 1), (1,), {(0,)})


def test_group_orders():
    sp = plain_space(4)
    alt4 = [cyc(sp, (0,), (1,), (2,)), cyc(sp, (1,), (2,), (3,))]
    assert PermGroup(alt4, sp).order() == 12
    sym4 = [Perm.from_cycles(sp, [((0,), (1,))]), cyc(sp, (0,), (1,), (2,), (3,))]
    assert PermGroup(sym4, sp).order() == 24


def test_order_matches_closure_on_case_222():
    space = ProductSpace([range(2), range(2), range(2)])
    gens = natural_alt_copy(space, (0, 1)) + natural_alt_copy(space, (1, 2))
    group = PermGroup(gens, space)
    assert group.order() == len(closure_enumerate(gens))


def test_membership_sifting():
    rng = random.Random(3)
    sp = plain_space(6)
    gens = [cyc(sp, (0,), (1,), (2,)), cyc(sp, (2,), (3,), (4,)), cyc(sp, (3,), (4,), (5,))]
    group = PermGroup(gens, sp)
    # random generator words are members
    for _ in range(300):
        w = Perm.identity(sp)
        for _ in range(rng.randint(1, 8)):
            g = rng.choice(gens)
            w = (g if rng.random() < 0.5 else g.inverse()) * w
        assert group.contains(w)
    # odd permutations never are (the generators are even)
    found = 0
    while found < 60:
        p = _random_perm(rng, sp)
        if p.parity() == 1:
            found += 1
            assert not group.contains(p)


def test_contains_full_alt():
    sp = plain_space(5)
    alt5 = [cyc(sp, (0,), (1,), (2,)), cyc(sp, (2,), (3,), (4,)), cyc(sp, (0,), (2,), (4,))]
    assert PermGroup(alt5, sp).contains_full_alt()
    single = [cyc(sp4 := plain_space(4), (0,), (1,), (2,), (3,))]
    assert not PermGroup(single, sp4).contains_full_alt()


def test_product_generation_cases():
    for sizes, expected in (
        ((1, 2, 2), True),
        ((2, 1, 2), False),
        ((2, 2, 2), False),
        ((3, 2, 2), True),
        ((2, 2, 3), True),
        ((3, 2, 3), True),
    ):
        got, want, match = triple_product_alt_check(sizes)
        assert match
        assert got == expected


def test_binary_case_is_affine():
    assert affine_certificate()


def test_hypergraph_rotations():
    conn, full = rotation_hypergraph_check("abc", [("a", "b", "c")])
    assert conn and full
    conn, full = rotation_hypergraph_check("abcd", [("a", "b", "c"), ("b", "c", "d")])
    assert conn and full
    conn, full = rotation_hypergraph_check(
        "abcdef", [("a", "b", "c"), ("c", "d", "e"), ("d", "e", "f")]
    )
    assert conn and full
    conn, _ = rotation_hypergraph_check("abcdef", [("a", "b", "c"), ("d", "e", "f")])
    assert not conn


def test_edgewise_generation():
    assert graph_edge_alt_check("ab", [("a", "b")], {"a": 2, "b": 3})
    assert graph_edge_alt_check("abc", [("a", "b"), ("b", "c")], {"a": 2, "b": 2, "c": 3})
    assert not graph_edge_alt_check("abc", [("a", "b"), ("b", "c")], {"a": 2, "b": 2, "c": 2})


def test_proof_identity_replay():
    results = replay_identity_checks()
    assert len(results) == 3
    assert all(ok for _, ok in results)


def test_three_cycle_count():
    sp = plain_space(4)
    assert len(all_three_cycles(sp)) == 8  # 2 * C(4,3)


def test_orders_match_closure_on_rotation_groups():
    # every group of order <= 1e5 met here is cross-checked against BFS closure
    for verts, edges in (
        ("abcd", [("a", "b", "c"), ("b", "c", "d")]),
        ("abcde", [("a", "b", "c"), ("c", "d", "e")]),
    ):
        sp = ProductSpace([verts])
        gens = []
        for e in edges:
            u, v, w = e
            gens.append(Perm.from_cycles(sp, [((u,), (v,), (w,))]))
            gens.append(Perm.from_cycles(sp, [((u,), (w,), (v,))]))
        assert PermGroup(gens, sp).order() == len(closure_enumerate(gens))
