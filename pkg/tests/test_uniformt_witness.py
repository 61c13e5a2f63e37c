import pytest

from shiftlab.cultures import Culture, process_step
from shiftlab.geometry import ball, default_gens
from shiftlab.subshifts import (
    ClopenSet,
    Pattern,
    PeriodicConfig,
    SpecError,
    full_shift,
    golden_mean,
    monotone_binary,
    word_pattern,
)
from shiftlab.uniformt import (
    UniformProcessParams,
    WindowCulture,
    find_uniform_t,
    preprocess_window,
    schedule_triples,
)
from shiftlab.witness import recode_to_letter, witness_decompose

MB = monotone_binary()
JUMP = ClopenSet.cylinder(MB, word_pattern("01"))


def test_uniform_t_zero_after_preprocessing():
    res = find_uniform_t(MB, JUMP, [(0,), (1,)], n=1, r=0, cap=20)
    assert res.status == "ok" and res.t == 0


def test_uniform_t_reaches_target_two():
    res = find_uniform_t(MB, JUMP, [(0,), (1,)], n=2, r=0, cap=30)
    assert res.status == "ok" and res.t is not None


def test_uniform_t_precondition_periodic_point():
    fs = full_shift("01")
    res = find_uniform_t(fs, ClopenSet.letter(fs, "1"), [(0,), (1,)], n=1, r=0, cap=5)
    assert res.status == "precondition"


def test_uniform_t_precondition_unsafe_window():
    # two overlapping translates of the jump cylinder: aperiodic but unsafe
    overlap = ClopenSet.from_patterns(
        MB, [word_pattern("01"), word_pattern("01", start=1)]
    )
    res = find_uniform_t(MB, overlap, [(0,), (1,)], n=1, r=0, cap=5)
    assert res.status == "precondition" and "safe" in res.detail


def test_non_interval_window_rejected():
    with pytest.raises(SpecError):
        find_uniform_t(MB, JUMP, [(0,), (2,)], n=1, r=0, cap=5)


def test_params_require_interval_window():
    with pytest.raises(SpecError):
        UniformProcessParams(((0,), (2,)))


def test_tracked_simulation_matches_torus_on_periodic_word():
    # a certified window colony must equal the true colony of the infinite
    # process; on a periodic word the torus engine provides the truth
    gm = golden_mean()
    x = PeriodicConfig.from_word("0010")
    radius = 14
    cells = {i: x.value_at((i,)) for i in range(-radius, radius + 1)}
    win = WindowCulture(-radius, radius, cells)
    params = UniformProcessParams(((0,),))
    preprocess_window(win, gm, ClopenSet(()), params)
    culture = Culture.discrete(x.lattice)
    gens = default_gens(1)
    for k, h, r, p_key in schedule_triples(gm, 40):
        from shiftlab.uniformt import _tracked_cardinality, _tracked_pattern

        _tracked_cardinality(win, k, h)
        _tracked_pattern(win, gm, h, r, p_key)
        pat = Pattern(dict(zip(ball(r, gens), [gm.alphabet.symbols[i] for i in p_key])))
        culture, _, _ = process_step(culture, gm, x, (k, (h,), pat))
        for cell in range(-2, 3):
            if cell in win.owner:
                brain, a, b = win.colony[win.owner[cell]]
                cid, tbrain = culture.colony_of_cell((cell,))
                col = culture.colonies[cid]
                true_cells = sorted(tbrain[0] + o[0] for _, o in col.cells)
                assert list(range(a, b + 1)) == true_cells
                assert (brain,) == tbrain


def test_recode_to_letter_structure():
    recoded, letter, width = recode_to_letter(MB, JUMP)
    assert width == 2 and letter == "01"
    assert set(recoded.alphabet.symbols) == {"00", "01", "11"}
    from shiftlab.subshifts import language

    pairs = {
        (p[(0,)], p[(1,)]) for p in language(recoded, [(0,), (1,)])
    }
    assert pairs == {("00", "00"), ("00", "01"), ("01", "11"), ("11", "11")}


def test_recode_single_letter_is_identity():
    gm = golden_mean()
    spec2, letter, width = recode_to_letter(gm, ClopenSet.letter(gm, "1"))
    assert spec2 is gm and letter == "1" and width == 1


def test_witness_decomposition_fixture():
    wd = witness_decompose(MB, "01", JUMP, ("1", "0"), n=5)
    assert wd.report["ok"]
    assert wd.report["min_class_size"] >= 5
    assert wd.report["pairwise_disjoint"]
    assert wd.report["factors_commute"]
    assert wd.report["product_equals_controlled_map"]
    assert wd.report["anchored_safety"]
    assert wd.report["periodic_points_agree"]
    assert all(len(e.shape) >= 3 for e in wd.entries)
    assert all(e.marks for e in wd.entries)


def test_witness_empty_trigger():
    wd = witness_decompose(MB, "01", ClopenSet(()), ("1", "0"), n=5)
    assert wd.entries == []


def test_witness_rejects_periodic_trigger():
    fs = full_shift("01")
    with pytest.raises(SpecError):
        witness_decompose(fs, "01", ClopenSet.letter(fs, "1"), ("1", "0"), n=5)


def test_witness_factors_are_even_on_their_classes():
    # applying a transposition at one position of a binary pattern block is
    # an even permutation whenever the block has at least two cells
    wd = witness_decompose(MB, "01", JUMP, ("1", "0"), n=5)
    for e in wd.entries:
        weight = 2 ** (len(e.shape) - 1)
        assert weight % 2 == 0


def test_tracked_simulation_matches_torus_on_more_words():
    import random

    from shiftlab.cultures import Culture, process_step
    from shiftlab.subshifts import Pattern, PeriodicConfig, full_shift
    from shiftlab.uniformt import _tracked_cardinality, _tracked_pattern

    rng = random.Random(2026)
    fs3 = full_shift("012")
    params = UniformProcessParams(((0,),))
    gens = default_gens(1)
    for _ in range(4):
        period = rng.randint(3, 6)
        word = [rng.choice("012") for _ in range(period)]
        x = PeriodicConfig.from_word(word)
        radius = 16
        cells = {i: x.value_at((i,)) for i in range(-radius, radius + 1)}
        win = WindowCulture(-radius, radius, cells)
        preprocess_window(win, fs3, ClopenSet(()), params)
        culture = Culture.discrete(x.lattice)
        for k, h, r, p_key in schedule_triples(fs3, 25):
            _tracked_cardinality(win, k, h)
            _tracked_pattern(win, fs3, h, r, p_key)
            pat = Pattern(dict(zip(ball(r, gens), [fs3.alphabet.symbols[i] for i in p_key])))
            culture, _, _ = process_step(culture, fs3, x, (k, (h,), pat))
            for cell in range(-2, 3):
                if cell in win.owner:
                    brain, a, b = win.colony[win.owner[cell]]
                    cid, tbrain = culture.colony_of_cell((cell,))
                    col = culture.colonies[cid]
                    true_cells = sorted(tbrain[0] + o[0] for _, o in col.cells)
                    assert list(range(a, b + 1)) == true_cells
                    assert (brain,) == tbrain
