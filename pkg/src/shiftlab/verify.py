"""Named verification suites behind the CLI: each check returns a claim
string (self-contained statement of what was computed) and a verdict."""

from __future__ import annotations

import random

from .autos import (
    compose,
    controlled_inverse,
    controlled_permutation,
    swap_permutation,
    block_maps_equal,
    two_track_identity,
)
from .cultures import run_process, validate_culture, verify_stable
from .exchange import exchange_classes, min_class_size
from .geometry import box
from .perms import (
    affine_certificate,
    graph_edge_alt_check,
    replay_identity_checks,
    rotation_hypergraph_check,
    triple_product_alt_check,
)
from .periodic import (
    find_synchronizing_word,
    finite_approximation,
    lef_embed,
    totally_periodic_2d,
)
from .subshifts import (
    ClopenSet,
    Pattern,
    PeriodicConfig,
    even_shift,
    full_shift,
    golden_mean,
    hard_square,
    language,
    no_double_zero,
    pair_config,
    product_spec,
    split_config,
    word_pattern,
)


def _check(name, claim, ok):
    return {"name": name, "claim": claim, "ok": bool(ok)}


def suite_permlemmas():
    checks = []
    cases = [(a, b, c) for a in (1, 2, 3) for b in (1, 2, 3) for c in (1, 2, 3)]
    cases += [(4, 2, 2), (2, 2, 4)]
    for sizes in cases:
        got, want, match = triple_product_alt_check(sizes)
        entry = _check(
            "two-copies-%d%d%d" % sizes,
            f"natural Alt copies on {sizes} generate the full alternating group iff predicted ({want})",
            match,
        )
        entry["sizes"] = list(sizes)
        entry["generates"] = got
        entry["predicted"] = want
        checks.append(entry)
    checks.append(
        _check(
            "binary-affinity",
            "on 2x2x2 every generated permutation is affine over the 3-bit space",
            affine_certificate(),
        )
    )
    for name, ok in replay_identity_checks():
        checks.append(_check("identity-replay", name, ok))
    conn, full = rotation_hypergraph_check("abc", [("a", "b", "c")])
    checks.append(_check("hypergraph-single-edge", "one 3-edge generates Alt(3)", conn and full))
    conn, full = rotation_hypergraph_check("abcd", [("a", "b", "c"), ("b", "c", "d")])
    checks.append(_check("hypergraph-two-edges", "two overlapping 3-edges generate Alt(4)", conn and full))
    conn, full = rotation_hypergraph_check("abcdef", [("a", "b", "c"), ("c", "d", "e"), ("d", "e", "f")])
    checks.append(_check("hypergraph-path", "a path of 3-edges on 6 nodes generates Alt(6)", conn and full))
    checks.append(
        _check(
            "edgewise-2-3",
            "edge-wise Alt copies on a 2-node path with sizes (2,3) generate the full Alt",
            graph_edge_alt_check("ab", [("a", "b")], {"a": 2, "b": 3}),
        )
    )
    checks.append(
        _check(
            "edgewise-2-2-3",
            "edge-wise Alt copies on a 3-path with sizes (2,2,3) generate the full Alt",
            graph_edge_alt_check("abc", [("a", "b"), ("b", "c")], {"a": 2, "b": 2, "c": 3}),
        )
    )
    checks.append(
        _check(
            "edgewise-2-2-2",
            "edge-wise Alt copies on a 3-path with all sizes 2 do not generate the full Alt",
            not graph_edge_alt_check("abc", [("a", "b"), ("b", "c")], {"a": 2, "b": 2, "c": 2}),
        )
    )
    return checks


FIGURE_TOP_IN = "000101001000"
FIGURE_BOT_IN = "120122101101"
FIGURE_BOT_OUT = "120211201101"


def figure_fixture():
    gm = golden_mean()
    nz = no_double_zero()
    prod = product_spec(gm, nz)
    window = ((0,), (1,))
    pi = swap_permutation(nz, window, [(word_pattern("12"), word_pattern("21"))])
    f = controlled_permutation(prod, ClopenSet.letter(gm, "1"), window, pi)
    return prod, f


def suite_fupi(seed=11, instances=50):
    checks = []
    prod, f = figure_fixture()
    x = PeriodicConfig.from_word(FIGURE_TOP_IN)
    y = PeriodicConfig.from_word(FIGURE_BOT_IN)
    out = f.apply(pair_config(x, y))
    xo, yo = split_config(out)
    got = "".join(yo.value_at((i,)) for i in range(12))
    top = "".join(xo.value_at((i,)) for i in range(12))
    checks.append(
        _check(
            "two-track-window",
            "applying the controlled swap to the 12-periodic window reproduces the expected bottom track",
            got == FIGURE_BOT_OUT and top == FIGURE_TOP_IN,
        )
    )
    gm = golden_mean()
    bt = full_shift("abc")
    prod2 = product_spec(gm, bt)
    rng = random.Random(seed)
    window = ((0,),)
    syms = ("a", "b", "c")
    triggers = [
        ClopenSet.letter(gm, "0"),
        ClopenSet.letter(gm, "1"),
        ClopenSet.cylinder(gm, word_pattern("01")),
        ClopenSet.cylinder(gm, word_pattern("10")),
        ClopenSet.cylinder(gm, word_pattern("00")),
    ]
    hom = inj = comm = True
    for _ in range(instances):
        U = rng.choice(triggers)
        V = rng.choice(triggers)
        p1 = _random_letter_perm(rng, syms)
        p2 = _random_letter_perm(rng, syms)
        fU = controlled_permutation(prod2, U, window, p1)
        fU2 = controlled_permutation(prod2, U, window, p2)
        rhs = controlled_permutation(prod2, U, window, p1.compose(p2))
        hom &= block_maps_equal(compose(fU, fU2), rhs)
        inv = controlled_inverse(fU)
        hom &= block_maps_equal(compose(fU, inv), two_track_identity(prod2))
        if not p1.is_identity() and not U.is_empty():
            idm = two_track_identity(prod2)
            inj &= not block_maps_equal(fU, idm)
        fV = controlled_permutation(prod2, V, window, p2)
        lhs = compose(compose(controlled_inverse(fU), controlled_inverse(fV)), compose(fU, fV))
        from .subshifts import clopen_intersect

        crhs = controlled_permutation(
            prod2, clopen_intersect(gm, U, V), window, p1.commutator(p2), check_safety=False
        )
        comm &= block_maps_equal(lhs, crhs)
    checks.append(_check("composition-law", "controlled permutations compose through their permutations", hom))
    checks.append(_check("nontrivial-injective", "a nontrivial permutation under a nonempty trigger is never the identity map", inj))
    checks.append(
        _check(
            "commutator-identity",
            "the commutator of two controlled permutations is controlled by the trigger intersection and the permutation commutator",
            comm,
        )
    )
    return checks


def _random_letter_perm(rng, syms):
    from .exchange import TrackPermutation

    images = list(syms)
    rng.shuffle(images)
    mapping = {
        Pattern({(0,): s}): Pattern({(0,): images[i]}) for i, s in enumerate(syms)
    }
    return TrackPermutation(((0,),), mapping)


def demo_config():
    rows = ["010011", "200110", "101012", "002111", "020001"]
    return full_shift("012", 2), PeriodicConfig.from_rows(rows)


def suite_process(seed=7, runs=12, max_index=36):
    checks = []
    spec, x = demo_config()
    res = run_process(spec, x)
    rep = verify_stable(res.culture, x)
    checks.append(
        _check(
            "demo-6x5",
            "the 6x5 three-symbol demo stabilizes to one brain per torus with a connected 30-cell colony",
            res.status == "stable"
            and res.culture.colony_count() == 1
            and rep.ok
            and rep.matches_true_stabilizer,
        )
    )
    checks.append(_check("demo-axioms", "the stable demo culture satisfies the six culture axioms", validate_culture(res.culture)))
    from .geometry import lattices_up_to_index

    rng = random.Random(seed)
    lats = [l for l in lattices_up_to_index(max_index, 2) if l.index >= 2]
    all_ok = True
    for _ in range(runs):
        lat = rng.choice(lats)
        sp = rng.choice([full_shift("01", 2), full_shift("012", 2)])
        vals = {r: rng.choice(sp.alphabet.symbols) for r in lat.coset_reps()}
        cfg = PeriodicConfig(lat, vals)
        r2 = run_process(sp, cfg)
        v2 = verify_stable(r2.culture, cfg)
        all_ok &= r2.status == "stable" and v2.ok and v2.matches_true_stabilizer and validate_culture(r2.culture)
    checks.append(
        _check(
            "random-tori",
            f"{runs} random periodic configurations stabilize with brains on the true stabilizer coset",
            all_ok,
        )
    )
    return checks


def _context_oracle(spec, domain, extra=2):
    """Brute-force exchangeability oracle: enumerate every flanking/gap word
    of width window+extra outright and compare membership of the assembled
    words in the exhaustively enumerated extendable-word set."""
    from itertools import product as iproduct

    from .subshifts import _words_1d

    (m,) = spec.window()
    cells = sorted(c[0] for c in domain)
    runs = []
    start = prev = cells[0]
    for c in cells[1:]:
        if c == prev + 1:
            prev = c
        else:
            runs.append((start, prev))
            start = prev = c
    runs.append((start, prev))
    gaps = [s2 - e1 - 1 for (_, e1), (s2, _) in zip(runs, runs[1:])]
    width = m + extra
    syms = spec.alphabet.symbols
    pats = language(spec, domain)
    total = 2 * width + sum(gaps) + sum(e - s + 1 for s, e in runs)
    ext_words = frozenset(_words_1d(spec, total))

    def ext_sig(p):
        sig = []
        for u in iproduct(syms, repeat=width):
            for v in iproduct(syms, repeat=width):
                for mids in iproduct(*[list(iproduct(syms, repeat=g)) for g in gaps]):
                    word = list(u)
                    for i, (s, e) in enumerate(runs):
                        word.extend(p[(c,)] for c in range(s, e + 1))
                        if i < len(mids):
                            word.extend(mids[i])
                    word.extend(v)
                    sig.append(tuple(word) in ext_words)
        return tuple(sig)

    groups = {}
    for p in pats:
        groups.setdefault(ext_sig(p), []).append(p)
    return {frozenset(g) for g in groups.values()}


def suite_exchange():
    checks = []
    for name, spec in (("golden-mean", golden_mean()), ("no-00", no_double_zero())):
        ok = True
        for length in range(1, 5):
            domain = tuple((i,) for i in range(length))
            table = exchange_classes(spec, domain)
            got = {frozenset(c) for c in table.classes}
            want = _context_oracle(spec, domain)
            ok &= got == want
        checks.append(
            _check(
                f"classes-vs-oracle-{name}",
                "interval class tables match the brute-force context oracle up to length 4",
                ok,
            )
        )
    nz = no_double_zero()
    m_single = min_class_size(nz, ((0,), (1,)))
    m_double = min_class_size(nz, ((0,), (1,), (4,), (5,)))
    checks.append(
        _check(
            "doubling",
            "the minimal class size at least doubles on a disjoint far translate of a domain with classes of size >= 2",
            m_single >= 2 and m_double >= 2 * m_single,
        )
    )
    fs = full_shift("01")
    checks.append(
        _check(
            "doubling-full",
            "full-shift minimal class sizes are powers of the alphabet size",
            min_class_size(fs, ((0,),)) == 2 and min_class_size(fs, ((0,), (2,))) == 4,
        )
    )
    return checks


def suite_periodic():
    checks = []
    hs = hard_square()
    good = True
    for p in language(hs, box((0, 0), (1, 1))):
        cfg = totally_periodic_2d(hs, p)
        good &= cfg.is_valid(hs) and any(cfg.matches(p, g) for g in cfg.lattice.coset_reps())
    checks.append(
        _check(
            "hard-square-2x2",
            "every extendable 2x2 hard-square pattern embeds in a verified totally periodic point",
            good,
        )
    )
    fa = finite_approximation(full_shift("01", 2), box((0, 0), (1, 1)))
    pats = set()
    for cfg in fa.configs():
        for g in fa.reps:
            pats.add(cfg.pattern_at(g, fa.domain))
    checks.append(
        _check(
            "finite-approx-full-2x2",
            "the finite approximation of the binary plane at the 2x2 box realizes exactly the 16 patterns",
            len(set(language(full_shift("01", 2), fa.domain))) == 16 and pats == set(fa.patterns) and len(fa.patterns) == 16,
        )
    )
    checks.append(
        _check(
            "sync-even-shift",
            "the even shift has a one-letter synchronizing word",
            find_synchronizing_word(even_shift(), 3) == ("1",),
        )
    )
    return checks


def suite_lef():
    from .autos import identity_map, shift_map, symbol_map

    checks = []
    fs2 = full_shift("01", 2)
    ident = identity_map(fs2)
    swap = symbol_map(fs2, {"0": "1", "1": "0"})
    sh = shift_map(fs2, (1, 0))
    shinv = shift_map(fs2, (-1, 0))
    res = lef_embed(fs2, [(ident, ident), (swap, swap), (sh, shinv), (shinv, sh)])
    checks.append(
        _check(
            "lef-full-shift",
            "four automorphisms of the binary plane embed injectively into the symmetric group of a finite model, respecting all composable pairs",
            res.report["ok"],
        )
    )
    return checks


SUITES = {
    "permlemmas": suite_permlemmas,
    "fupi": suite_fupi,
    "process": suite_process,
    "exchange": suite_exchange,
    "periodic": suite_periodic,
    "lef": suite_lef,
}


def run_suite(name):
    if name == "all":
        checks = []
        for key in ("permlemmas", "fupi", "process", "exchange", "periodic", "lef"):
            for c in SUITES[key]():
                c = dict(c)
                c["suite"] = key
                checks.append(c)
        return checks
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}")
    checks = []
    for c in SUITES[name]():
        c = dict(c)
        c["suite"] = name
        checks.append(c)
    return checks
