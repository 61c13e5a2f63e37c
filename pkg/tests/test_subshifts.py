import json
import random
from itertools import product

import pytest

from shiftlab.geometry import Lattice, box, lattices_up_to_index
from shiftlab.subshifts import (
    ClopenSet,
    Pattern,
    PeriodicConfig,
    SpecError,
    clopen_complement,
    clopen_equal,
    clopen_intersect,
    clopen_is_empty,
    clopen_translate,
    clopen_union,
    even_shift,
    extendable,
    full_shift,
    golden_mean,
    hard_square,
    language,
    no_double_zero,
    parse_spec,
    product_spec,
    safe_check,
    small_orbit_clopen,
    word_pattern,
)

GM = golden_mean()
NZ = no_double_zero()


# -- parsing ---------------------------------------------------------------


def test_parse_golden_mean_document():
    doc = {
        "kind": "sft",
        "dimension": 1,
        "alphabet": ["0", "1"],
        "forbidden": [{"cells": [{"pos": [0], "sym": "1"}, {"pos": [1], "sym": "1"}]}],
    }
    spec = parse_spec(json.dumps(doc))
    assert spec.kind == "sft" and spec.dimension == 1
    assert len(language(spec, [(0,), (1,)])) == 3


def test_parse_no00_document():
    doc = {
        "kind": "sft",
        "dimension": 1,
        "alphabet": ["0", "1", "2"],
        "forbidden": [{"cells": [{"pos": [0], "sym": "0"}, {"pos": [1], "sym": "0"}]}],
    }
    spec = parse_spec(doc)
    assert tuple(spec.alphabet) == ("0", "1", "2")


def test_parse_unknown_symbol_rejected():
    doc = {
        "kind": "sft",
        "dimension": 1,
        "alphabet": ["0", "1"],
        "forbidden": [{"cells": [{"pos": [0], "sym": "x"}]}],
    }
    with pytest.raises(SpecError):
        parse_spec(doc)


def test_parse_sofic_dead_states_rejected():
    doc = {
        "kind": "sofic",
        "dimension": 1,
        "alphabet": ["a"],
        "presentation": {"states": ["p", "q"], "edges": [{"from": "p", "to": "q", "label": "a"}]},
    }
    with pytest.raises(SpecError):
        parse_spec(doc)


def test_spec_json_round_trip():
    for spec in (GM, NZ, even_shift(), hard_square(), product_spec(GM, NZ)):
        again = parse_spec(spec.to_json())
        assert again.to_json() == spec.to_json()


# -- language ----------------------------------------------------------------


def fib(n):
    a, b = 1, 1
    for _ in range(n):
        a, b = b, a + b
    return a


def test_golden_mean_counts_match_brute_force():
    # oracle: enumerate all binary words and keep those without 11; for the
    # golden mean shift every locally allowed word extends (pad with zeros)
    for n in range(1, 11):
        brute = [w for w in product("01", repeat=n) if "11" not in "".join(w)]
        assert len(language(GM, [(i,) for i in range(n)])) == len(brute) == fib(n + 1)


def test_language_examples():
    words = {"".join(p[(i,)] for i in range(2)) for p in language(GM, [(0,), (1,)])}
    assert words == {"00", "01", "10"}
    assert len(language(full_shift("01", 2), box((0, 0), (1, 1)))) == 16
    hs = hard_square()
    pairs = {"".join(p[c] for c in ((0, 0), (1, 0))) for p in language(hs, [(0, 0), (1, 0)])}
    assert pairs == {"00", "01", "10"}


def test_extendable_examples():
    assert not extendable(GM, word_pattern("11"))
    assert extendable(GM, word_pattern("101"))
    assert extendable(GM, Pattern({}))


def test_extendable_monotone_under_restriction():
    rng = random.Random(5)
    cells = [(i,) for i in range(6)]
    for _ in range(40):
        p = Pattern({c: rng.choice("01") for c in cells if rng.random() < 0.7})
        if extendable(GM, p):
            sub = Pattern({c: s for c, s in p.items if rng.random() < 0.5})
            assert extendable(GM, sub)


def test_gapped_domain_language():
    pats = language(GM, [(0,), (2,)])
    assert len(pats) == 4  # both cells free once 11 cannot be forced


# -- clopen algebra -----------------------------------------------------------


def test_safe_example_golden_mean():
    U = ClopenSet.letter(GM, "1")
    shifted = clopen_translate(U, (1,))
    assert clopen_is_empty(GM, clopen_intersect(GM, U, shifted))
    assert safe_check(GM, U, [(0,), (1,)])


def test_safety_fails_on_full_shift():
    fs = full_shift("01")
    U = ClopenSet.letter(fs, "1")
    assert not safe_check(fs, U, [(0,), (1,)])
    assert safe_check(fs, U, [(0,)])


def test_clopen_idempotent_and_cover():
    U = ClopenSet.letter(GM, "1")
    assert clopen_equal(GM, clopen_intersect(GM, U, U), U)
    fs = full_shift("01")
    whole = clopen_union(fs, ClopenSet.letter(fs, "0"), ClopenSet.letter(fs, "1"))
    assert clopen_is_empty(fs, clopen_complement(fs, whole))


def periodic_points(spec, max_index):
    for lat in lattices_up_to_index(max_index, spec.dimension):
        reps = lat.coset_reps()
        for fill in product(spec.alphabet.symbols, repeat=len(reps)):
            cfg = PeriodicConfig(lat, dict(zip(reps, fill)))
            if cfg.is_valid(spec):
                yield cfg


def test_boolean_laws_by_point_membership():
    rng = random.Random(9)
    pts = list(periodic_points(GM, 4))
    cylinders = [word_pattern(w, start=s) for w in ("0", "1", "00", "01", "10") for s in (-1, 0, 1)]
    for _ in range(100):
        A = ClopenSet.from_patterns(GM, [rng.choice(cylinders)])
        B = ClopenSet.from_patterns(GM, [rng.choice(cylinders)])
        inter = clopen_intersect(GM, A, B)
        union = clopen_union(GM, A, B)
        comp = clopen_complement(GM, A)
        for x in pts:
            a = x.in_clopen(A, (0,))
            b = x.in_clopen(B, (0,))
            assert x.in_clopen(inter, (0,)) == (a and b)
            assert x.in_clopen(union, (0,)) == (a or b)
            assert x.in_clopen(comp, (0,)) == (not a)


def test_translate_matches_point_action():
    # occurrence of gC at h iff occurrence of C at h - g ... verified on points
    U = ClopenSet.letter(GM, "1")
    shifted = clopen_translate(U, (1,))
    for x in periodic_points(GM, 3):
        for h in range(-2, 3):
            assert x.in_clopen(shifted, (h,)) == x.in_clopen(U, (h - 1,))


# -- periodic configs and small orbits ---------------------------------------


def test_periodic_config_validity():
    assert PeriodicConfig.from_word("01").is_valid(GM)
    assert not PeriodicConfig.from_word("11").is_valid(GM)
    ev = even_shift()
    assert PeriodicConfig.from_word("100").is_valid(ev)
    assert not PeriodicConfig.from_word("10").is_valid(ev)
    assert not PeriodicConfig.from_word("1000").is_valid(ev)


def test_small_orbit_examples():
    fs = full_shift("01")
    test1 = small_orbit_clopen(fs, 1)
    const = PeriodicConfig.from_word("0")
    assert test1.accepts(const)
    x = PeriodicConfig.from_word("01")
    assert not small_orbit_clopen(fs, 1).accepts(x)
    assert small_orbit_clopen(fs, 2).accepts(x)


def test_small_orbit_30():
    rows = ["010011", "200110", "101012", "002111", "020001"]
    cfg = PeriodicConfig.from_rows(rows)
    spec = full_shift("012", 2)
    assert cfg.orbit_size() == 30
    assert not small_orbit_clopen(spec, 29).accepts(cfg)
    assert small_orbit_clopen(spec, 30).accepts(cfg)


def test_stabilizer_of_striped_config():
    x = PeriodicConfig.from_word("010")
    assert x.stabilizer() == Lattice(((3,),))
    y = PeriodicConfig(Lattice(((4,),)), {(0,): "0", (1,): "1", (2,): "0", (3,): "1"})
    assert y.stabilizer() == Lattice(((2,),))


def test_2d_language_matches_brute_force():
    # oracle: an assignment is a language pattern iff no forbidden pattern
    # matches inside it (the unused symbol 0 pads any locally allowed
    # assignment to a full plane configuration)
    hs = hard_square()
    for w, h in ((2, 2), (3, 2), (2, 3)):
        cells = box((0, 0), (w - 1, h - 1))
        brute = set()
        for vals in product("01", repeat=len(cells)):
            pat = Pattern(dict(zip(cells, vals)))
            ok = True
            for (x, y) in cells:
                if pat.get((x, y)) == "1" and (
                    pat.get((x + 1, y)) == "1" or pat.get((x, y + 1)) == "1"
                ):
                    ok = False
            if ok:
                brute.add(pat)
        assert set(language(hs, cells)) == brute


def test_2d_extendable_requires_padding_certificate():
    # checkerboard-forcing SFT uses every symbol in its forbidden patterns,
    # so plane extendability cannot be certified by padding
    forb = [
        Pattern({(0, 0): "0", (1, 0): "0"}),
        Pattern({(0, 0): "1", (1, 0): "1"}),
        Pattern({(0, 0): "0", (0, 1): "0"}),
        Pattern({(0, 0): "1", (0, 1): "1"}),
    ]
    from shiftlab.subshifts import BudgetError, SubshiftSpec

    checker = SubshiftSpec("sft", 2, ("0", "1"), forbidden=forb, budget=100)
    with pytest.raises(BudgetError):
        language(checker, box((0, 0), (4, 4)))
