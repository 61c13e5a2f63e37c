from itertools import product

import pytest

from shiftlab.exchange import (
    exchange_classes,
    lmfp_check,
    min_class_size,
    restricted_group_generators,
    restricted_group_order_check,
    table_cycle_perm,
)
from shiftlab.geometry import lattices_up_to_index
from shiftlab.subshifts import (
    PeriodicConfig,
    SpecError,
    full_shift,
    golden_mean,
    language,
    no_double_zero,
    word_pattern,
)

GM = golden_mean()
NZ = no_double_zero()


def words_of(table):
    return [
        ["".join(p[c] for c in sorted(p.domain())) for p in cls] for cls in table.classes
    ]


def test_no00_single_cell_classes():
    table = exchange_classes(NZ, [(0,)])
    assert sorted(map(sorted, words_of(table))) == [["0"], ["1", "2"]]


def test_golden_single_cell_classes():
    table = exchange_classes(GM, [(0,)])
    assert sorted(map(sorted, words_of(table))) == [["0"], ["1"]]


def test_full_shift_single_class():
    fs = full_shift("01")
    table = exchange_classes(fs, [(0,), (1,)])
    assert len(table.classes) == 1
    assert table.min_class_size() == 4


def test_no00_pair_classes():
    table = exchange_classes(NZ, [(0,), (1,)])
    assert sorted(map(sorted, words_of(table))) == [
        ["01", "02"],
        ["10", "20"],
        ["11", "12", "21", "22"],
    ]


def test_classes_partition_language():
    for spec in (GM, NZ):
        for length in (1, 2, 3):
            domain = [(i,) for i in range(length)]
            table = exchange_classes(spec, domain)
            flat = [p for cls in table.classes for p in cls]
            assert sorted(flat, key=lambda p: p.items) == sorted(
                language(spec, domain), key=lambda p: p.items
            )


def test_min_class_sizes():
    fs = full_shift("01")
    assert min_class_size(fs, [(0,)]) == 2
    assert min_class_size(fs, [(0,), (1,)]) == 4
    assert min_class_size(NZ, [(0,)]) == 1
    # far-apart cells behave as a product of the single-cell partitions
    assert min_class_size(NZ, [(0,), (3,)]) == 1


def test_domain_contract_rejects_close_intervals():
    from shiftlab.subshifts import sft

    no_triple = sft("01", [word_pattern("111")])  # window 3
    with pytest.raises(SpecError):
        exchange_classes(no_triple, [(0,), (2,)])  # single-cell gap < window - 1
    table = exchange_classes(no_triple, [(0,), (3,)])  # two-cell gap is fine
    assert sum(len(c) for c in table.classes) == 4


def test_product_inequality_across_far_intervals():
    # class sizes multiply across far-apart interval unions
    for spec in (GM, NZ):
        m1 = min_class_size(spec, [(0,), (1,)])
        m2 = min_class_size(spec, [(0,), (1,), (4,), (5,)])
        assert m2 >= m1 * m1


def test_doubling_on_classes_of_size_two():
    m1 = min_class_size(NZ, [(0,), (1,)])
    assert m1 == 2
    assert min_class_size(NZ, [(0,), (1,), (4,), (5,)]) >= 2 * m1


def test_lmfp_examples():
    assert lmfp_check(full_shift("01"), 2) == (True, ((0,),))
    ok, witness = lmfp_check(NZ, 3)
    assert ok and witness == ((0,), (1,))
    assert lmfp_check(GM, 4) == (False, None)


def test_lmfp_golden_flips_at_window_five():
    ok, witness = lmfp_check(GM, 5)
    assert ok and len(witness) == 5


def test_swapping_class_members_preserves_validity():
    # swap a same-class pattern at every occurrence of the domain inside a
    # small-period point; the result must stay in the language
    domain = [(0,), (1,)]
    table = exchange_classes(NZ, domain)
    for lat in lattices_up_to_index(5, 1):
        reps = lat.coset_reps()
        if len({lat.reduce(c) for c in domain}) != len(domain):
            continue
        for fill in product(NZ.alphabet.symbols, repeat=len(reps)):
            cfg = PeriodicConfig(lat, dict(zip(reps, fill)))
            if not cfg.is_valid(NZ):
                continue
            current = cfg.pattern_at((0,), domain)
            for q in table.class_of(current):
                swapped = dict(cfg.values)
                for c, s in q.items:
                    swapped[lat.reduce(c)] = s
                assert PeriodicConfig(lat, swapped).is_valid(NZ)


def test_restricted_generators_small_classes():
    table = exchange_classes(GM, [(0,)])  # classes {0}, {1}: nothing to move
    assert restricted_group_generators(table, even_only=True) == []
    nz_table = exchange_classes(NZ, [(0,)])  # one class of size 2
    assert restricted_group_generators(nz_table, even_only=True) == []
    full3 = exchange_classes(full_shift("abc"), [(0,)])
    gens = restricted_group_generators(full3, even_only=True)
    assert len(gens) == 2  # both orientations of the single 3-cycle
    ok, expected, got = restricted_group_order_check(full3, even_only=True)
    assert ok and expected == 3 == got


def test_restricted_group_orders_no00_pair():
    table = exchange_classes(NZ, [(0,), (1,)])
    ok, expected, got = restricted_group_order_check(table, even_only=True)
    assert ok and expected == 12 and got == 12  # 1 * 1 * (4!/2)
    ok, expected, got = restricted_group_order_check(table, even_only=False)
    assert ok and expected == 96 and got == 96  # 2 * 2 * 4!


def test_track_permutation_respects_classes():
    table = exchange_classes(NZ, [(0,), (1,)])
    good = table_cycle_perm(table, [(word_pattern("12"), word_pattern("21"))])
    assert good.respects(table)
    bad = table_cycle_perm(table, [(word_pattern("01"), word_pattern("10"))])
    assert not bad.respects(table)
    assert good.parity_in_class(table.class_of(word_pattern("12"))) == 1
