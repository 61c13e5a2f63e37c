"""Acceptance criteria: ten exact end-to-end checks with runtime budgets.

Run with `pytest tests/test_acceptance.py -v -s` to see one line per
criterion.  Every assertion is exact (no tolerances); the time budgets are
asserted too.
"""

import random
import time

from shiftlab.autos import (
    block_maps_equal,
    compose,
    compose_word,
    controlled_inverse,
    controlled_permutation,
    express_controlled_permutation,
    gate_generators,
    identity_map,
    shift_map,
    swap_permutation,
    symbol_map,
    two_track_identity,
)
from shiftlab.cultures import run_process, validate_culture, verify_stable
from shiftlab.exchange import TrackPermutation, exchange_classes, min_class_size
from shiftlab.geometry import box, lattices_up_to_index
from shiftlab.perms import (
    affine_certificate,
    replay_identity_checks,
    triple_product_alt_check,
)
from shiftlab.periodic import finite_approximation, lef_embed, totally_periodic_2d
from shiftlab.subshifts import (
    ClopenSet,
    Pattern,
    PeriodicConfig,
    clopen_intersect,
    full_shift,
    golden_mean,
    hard_square,
    language,
    monotone_binary,
    no_double_zero,
    pair_config,
    product_spec,
    split_config,
    word_pattern,
)
from shiftlab.verify import _context_oracle, demo_config
from shiftlab.witness import witness_decompose


class Budget:
    def __init__(self, name, limit):
        self.name = name
        self.limit = limit

    def __enter__(self):
        self.t0 = time.monotonic()
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.monotonic() - self.t0
        verdict = "PASS" if exc_type is None else "FAIL"
        print(f"{self.name} {verdict} ({elapsed:.2f}s of {self.limit}s budget)")
        assert elapsed < self.limit, f"{self.name} exceeded its {self.limit}s budget"


def test_a1_figure_window_reproduction():
    with Budget("A1 controlled-swap window", 1.0):
        gm = golden_mean()
        nz = no_double_zero()
        prod = product_spec(gm, nz)
        window = ((0,), (1,))
        pi = swap_permutation(nz, window, [(word_pattern("12"), word_pattern("21"))])
        f = controlled_permutation(prod, ClopenSet.letter(gm, "1"), window, pi)
        x = PeriodicConfig.from_word("000101001000")
        y = PeriodicConfig.from_word("120122101101")
        z = pair_config(x, y)
        assert z.is_valid(prod)
        out = f.apply(z)
        xo, yo = split_config(out)
        assert "".join(xo.value_at((i,)) for i in range(12)) == "000101001000"
        assert "".join(yo.value_at((i,)) for i in range(12)) == "120211201101"


def test_a2_two_copy_generation_table():
    with Budget("A2 product-generation table", 60.0):
        for a in (1, 2, 3):
            for b in (1, 2, 3):
                for c in (1, 2, 3):
                    got, want, match = triple_product_alt_check((a, b, c))
                    assert match, (a, b, c, got, want)
        for sizes in ((4, 2, 2), (2, 2, 4)):
            got, want, match = triple_product_alt_check(sizes)
            assert match and got
        got, want, match = triple_product_alt_check((3, 2, 2))
        assert got and match
        got, want, match = triple_product_alt_check((2, 2, 3))
        assert got and match
        got, want, match = triple_product_alt_check((3, 2, 3))
        assert got and match
        got, want, match = triple_product_alt_check((2, 2, 2))
        assert (not got) and match
        assert affine_certificate()


def test_a3_process_reaches_verified_stability():
    with Budget("A3 process on 50 random tori", 120.0):
        spec, demo = demo_config()
        assert demo.orbit_size() == 30
        res = run_process(spec, demo)
        rep = verify_stable(res.culture, demo)
        assert res.status == "stable" and rep.ok and rep.matches_true_stabilizer
        assert res.culture.colony_count() == 1
        assert len(rep.shape) == 30
        runs = 1
        rng = random.Random(20260809)
        lats = [l for l in lattices_up_to_index(36, 2) if l.index >= 2]
        while runs < 50:
            lat = rng.choice(lats)
            sp = rng.choice([full_shift("01", 2), full_shift("012", 2)])
            x = PeriodicConfig(lat, {r: rng.choice(sp.alphabet.symbols) for r in lat.coset_reps()})
            result = run_process(sp, x)
            assert result.status == "stable", (lat.basis, result.status)
            report = verify_stable(result.culture, x)
            assert report.ok, (lat.basis, report.failures)
            assert report.matches_true_stabilizer
            assert validate_culture(result.culture)
            runs += 1
        assert runs >= 50


def _random_cylinder(rng, spec):
    length = rng.randint(1, 3)
    start = rng.randint(-2, 2)
    cells = [(start + i,) for i in range(length)]
    pats = language(spec, cells)
    return ClopenSet.cylinder(spec, rng.choice(pats))


def _random_letter_perm(rng, syms):
    images = list(syms)
    rng.shuffle(images)
    return TrackPermutation(
        ((0,),),
        {Pattern({(0,): s}): Pattern({(0,): images[i]}) for i, s in enumerate(syms)},
    )


def test_a4_controlled_permutation_calculus():
    with Budget("A4 calculus on 50 random instances", 60.0):
        gm = golden_mean()
        bt = full_shift("abc")
        prod = product_spec(gm, bt)
        window = ((0,),)
        rng = random.Random(4251)
        ident = two_track_identity(prod)
        for _ in range(50):
            U = _random_cylinder(rng, gm)
            V = _random_cylinder(rng, gm)
            p1 = _random_letter_perm(rng, "abc")
            p2 = _random_letter_perm(rng, "abc")
            fU1 = controlled_permutation(prod, U, window, p1)
            fU2 = controlled_permutation(prod, U, window, p2)
            # composition goes through the permutations
            assert block_maps_equal(
                compose(fU1, fU2), controlled_permutation(prod, U, window, p1.compose(p2))
            )
            assert block_maps_equal(compose(fU1, controlled_inverse(fU1)), ident)
            # distinct permutations under a nonempty trigger give distinct maps
            if p1.mapping != p2.mapping:
                assert not block_maps_equal(fU1, fU2)
            # the commutator identity
            fV = controlled_permutation(prod, V, window, p2)
            lhs = compose(
                compose(controlled_inverse(fU1), controlled_inverse(fV)), compose(fU1, fV)
            )
            rhs = controlled_permutation(
                prod,
                clopen_intersect(gm, U, V),
                window,
                p1.commutator(p2),
                check_safety=False,
            )
            assert block_maps_equal(lhs, rhs)


def test_a5_proof_identity_replay():
    with Budget("A5 displayed identities", 1.0):
        results = replay_identity_checks()
        assert len(results) == 3 and all(ok for _, ok in results)


def test_a6_exchange_tables_and_doubling():
    with Budget("A6 exchangeability tables", 30.0):
        for spec in (golden_mean(), no_double_zero()):
            for length in range(1, 5):
                domain = tuple((i,) for i in range(length))
                table = exchange_classes(spec, domain)
                got = {frozenset(c) for c in table.classes}
                assert got == _context_oracle(spec, domain)
        nz = no_double_zero()
        base = ((0,), (1,))
        m = min_class_size(nz, base)
        assert m == 2
        for g in (4, 5, 6):
            doubled = base + ((g,), (g + 1,))
            assert min_class_size(nz, doubled) >= 2 * m
        fs = full_shift("01")
        assert min_class_size(fs, ((0,), (3,))) >= 2 * min_class_size(fs, ((0,),))


def test_a7_periodic_points_and_finite_approximation():
    with Budget("A7 periodic points", 60.0):
        hs = hard_square()
        two_by_two = box((0, 0), (1, 1))
        pats = language(hs, two_by_two)
        assert len(pats) == 7
        for p in pats:
            cfg = totally_periodic_2d(hs, p)
            assert cfg.is_valid(hs)
            assert cfg.lattice.index >= 1
            assert any(cfg.matches(p, g) for g in cfg.lattice.coset_reps())
        fs = full_shift("01", 2)
        fa = finite_approximation(fs, two_by_two)
        realized = set()
        for cfg in fa.configs():
            for g in fa.reps:
                realized.add(cfg.pattern_at(g, fa.domain))
        assert len(realized) == 16
        assert realized == set(language(fs, fa.domain))


def test_a8_local_embedding_of_automorphisms():
    with Budget("A8 local embedding", 60.0):
        fs = full_shift("01", 2)
        ident = identity_map(fs)
        swap = symbol_map(fs, {"0": "1", "1": "0"})
        sh = shift_map(fs, (1, 0))
        shinv = shift_map(fs, (-1, 0))
        maps = [(ident, ident), (swap, swap), (sh, shinv), (shinv, sh)]
        assert len(maps) <= 8
        res = lef_embed(fs, maps)
        assert res.report["injective"]
        assert res.report["inverses_cancel"]
        assert res.report["partial_homomorphism"]
        assert res.report["ok"]
        assert len(res.report["composable_pairs"]) > 0


def test_a9_witness_decomposition_pipeline():
    with Budget("A9 witness decomposition", 300.0):
        mb = monotone_binary()
        trigger = ClopenSet.cylinder(mb, word_pattern("01"))
        wd = witness_decompose(mb, "01", trigger, ("1", "0"), n=5)
        assert wd.report["pairwise_disjoint"]
        assert wd.report["factors_commute"]
        assert wd.report["min_class_size"] >= 5
        assert wd.report["product_equals_controlled_map"]
        assert wd.report["anchored_safety"]
        assert wd.report["periodic_points_agree"]
        assert block_maps_equal(wd.factor_product, wd.controlled_map)


def test_a10_words_over_the_gate_generators():
    with Budget("A10 generator words", 120.0):
        gm = golden_mean()
        bt = full_shift("abc")
        prod = product_spec(gm, bt)
        gens = gate_generators(prod)
        window = ((0,),)
        evens = [("a", "b", "c"), ("b", "c", "a"), ("c", "a", "b")]
        rng = random.Random(1010)
        cylinders = []
        while len(cylinders) < 10:
            length = rng.randint(1, 2)
            start = rng.randint(-2, 2)
            cells = [(start + i,) for i in range(length)]
            pat = rng.choice(language(gm, cells))
            cylinders.append(pat)
        for images in evens:
            pi = TrackPermutation(
                window,
                {
                    Pattern({(0,): s}): Pattern({(0,): images[i]})
                    for i, s in enumerate("abc")
                },
            )
            for pat in cylinders:
                word = express_controlled_permutation(gens, pat, images)
                built = compose_word(gens, word)
                want = controlled_permutation(
                    prod, ClopenSet.cylinder(gm, pat), window, pi, check_safety=False
                )
                assert block_maps_equal(built, want), (images, pat)
