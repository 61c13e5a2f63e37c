"""Decomposition of a controlled flip into commuting simply-supported factors.

Given a 1D subshift X, a full bottom track over B, a letter cylinder U on X
with no totally periodic points, and a bottom permutation, the controlled
map f (apply the permutation under every occurrence of U) factors as a
commuting product of maps f_i, one per colony profile (shape, marked cells)
reachable after t certified process steps.  Each f_i acts only under the
brain-anchored clopen set of its profile, its rewrite regions are the
pairwise disjoint colonies, and the group it generates sits inside the
alternating group on the bottom patterns of the shape.  The point of the
construction is that the factors live in arbitrarily large simple groups
while their product is the fixed map f.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iproduct

from .autos import TwoTrackMap, _two_track_equal, compose, two_track_identity
from .geometry import point_key
from .subshifts import (
    ClopenSet,
    Pattern,
    PeriodicConfig,
    SpecError,
    SubshiftSpec,
    language,
    pair_config,
    product_spec,
    safe_check,
)
from .uniformt import (
    UniformProcessParams,
    WindowCulture,
    find_uniform_t,
    preprocess_window,
    schedule_triples,
)


def recode_to_letter(spec, clopen):
    """Higher-block recode making a single-cylinder clopen set a letter.

    Returns (recoded spec, letter symbol, block width).  The recoded
    alphabet is the set of width-w words of the language; two letters may
    sit next to each other when they overlap consistently and their joint
    word is in the language.
    """
    if len(clopen.cylinders) != 1:
        raise SpecError("recoding expects a single cylinder")
    (cyl,) = clopen.cylinders
    cells = sorted(c[0] for c in cyl.domain())
    if cells != list(range(cells[0], cells[-1] + 1)):
        raise SpecError("recoding expects an interval cylinder")
    w = len(cells)
    word = tuple(cyl[(c,)] for c in cells)
    if w == 1:
        return spec, word[0], 1
    blocks = tuple("".join(p[(i,)] for i in range(w)) for p in language(spec, [(i,) for i in range(w)]))
    letter = "".join(word)
    if letter not in blocks:
        raise SpecError("cylinder word is not in the language")
    long_words = {
        "".join(p[(i,)] for i in range(w + 1)) for p in language(spec, [(i,) for i in range(w + 1)])
    }
    forbidden = []
    for u in blocks:
        for v in blocks:
            if u[1:] != v[:-1] or (u + v[-1]) not in long_words:
                forbidden.append(Pattern({(0,): u, (1,): v}))
    recoded = SubshiftSpec("sft", 1, tuple(blocks), forbidden=forbidden)
    return recoded, letter, w


@dataclass
class WitnessEntry:
    shape: tuple  # brain-relative colony cells
    marks: tuple  # brain-relative positions carrying the trigger letter
    clopen: ClopenSet  # brain-anchored window cylinders selecting the profile
    class_size: int  # bottom patterns on the shape (one exchange class: full track)
    factor: object  # the TwoTrackMap f_i


@dataclass
class WitnessDecomposition:
    product: object  # the product subshift the maps act on
    letter: str
    steps: int
    window_radius: int
    entries: list
    controlled_map: object  # f
    factor_product: object  # composition of all factors
    report: dict


def witness_decompose(
    spec,
    b_symbols,
    clopen,
    perm_images,
    n,
    steps=None,
    cap=60,
    periodic_bound=5,
    verify_index_bound=4,
):
    """Build and verify the factor decomposition; see the module docstring.

    perm_images: images of the bottom alphabet under the applied permutation
    (for a binary track the only nontrivial choice is the flip, whose action
    on one position of a shape of size >= 2 is even).
    """
    if spec.dimension != 1:
        raise SpecError("the decomposition pipeline is 1D")
    b_symbols = tuple(b_symbols)
    if clopen.is_empty():
        prod = product_spec(spec, _full(b_symbols))
        ident = two_track_identity(prod)
        return WitnessDecomposition(prod, "", steps or 0, 0, [], ident, ident, {"empty": True})
    recoded, letter, width = recode_to_letter(spec, clopen)
    trigger = ClopenSet.letter(recoded, letter)
    params = UniformProcessParams(((0,),))
    res = find_uniform_t(recoded, trigger, [(0,)], n=n, r=0, cap=cap, params=params, periodic_bound=periodic_bound)
    if res.status == "precondition":
        raise SpecError(f"decomposition precondition failed: {res.detail}")
    if res.status != "ok":
        raise SpecError(f"no certified step count within the cap: {res.detail}")
    t = res.t if steps is None else steps
    if steps is not None and steps < res.t:
        raise SpecError("requested step count below the certified one")
    radius = res.window_radius
    prod = product_spec(recoded, _full(b_symbols))

    # classify every window word by the certified profile of the center cell;
    # the rule tables are keyed in the maps' canonical cell order
    window = tuple(sorted(((i,) for i in range(-radius, radius + 1)), key=point_key))
    words = language(recoded, window)
    classes = {}
    table = {}
    for p in words:
        cells = {c[0]: p[c] for c in window}
        win = WindowCulture(-radius, radius, cells)
        preprocess_window(win, recoded, trigger, params)
        for k, h, r, pk in schedule_triples(recoded, t):
            from .uniformt import _tracked_cardinality, _tracked_pattern

            _tracked_cardinality(win, k, h)
            _tracked_pattern(win, recoded, h, r, pk)
        key = tuple(p[c] for c in window)
        if 0 in win.owner:
            brain, a, b = win.colony[win.owner[0]]
            shape = tuple((c - brain,) for c in range(a, b + 1))
            marks = tuple((c - brain,) for c in range(a, b + 1) if cells[c] == letter)
            if marks:
                profile = (shape, marks)
                table[key] = (profile, (-brain,))
                classes.setdefault(profile, {"words": [], "anchored": []})
                classes[profile]["words"].append(p)
                if brain == 0:
                    classes[profile]["anchored"].append(p)
            else:
                table[key] = None
        else:
            if cells[0] == letter:
                raise SpecError("an occurrence escaped certification; enlarge the window")
            table[key] = None

    flip = {s: perm_images[i] for i, s in enumerate(b_symbols)}
    if sorted(flip.values()) != sorted(b_symbols):
        raise SpecError("bottom permutation images are not a permutation")

    def make_factor(profile):
        def rule(tv, bv, profile=profile):
            info = table.get(tuple(tv))
            if info is not None and info[0] == profile and info[1] in profile[1]:
                return flip[bv[0]]
            return bv[0]

        return TwoTrackMap(prod, window, ((0,),), rule, label=f"factor{profile[0]}")

    entries = []
    for profile in sorted(classes, key=lambda pr: (len(pr[0]), pr)):
        shape, marks = profile
        anchored = classes[profile]["anchored"]
        vset = ClopenSet(tuple(sorted(anchored, key=lambda q: q.items)))
        size = len(b_symbols) ** len(shape)
        entries.append(WitnessEntry(shape, marks, vset, size, make_factor(profile)))

    floor = max(n, 5)
    small = [e for e in entries if e.class_size < floor]
    if small:
        raise SpecError(
            f"a factor's pattern class has size {small[0].class_size} < {floor}; "
            "the simple-group floor requires at least max(n, 5)"
        )
    if _perm_parity_images(perm_images, b_symbols) == 1:
        odd = [e for e in entries if (len(b_symbols) ** (len(e.shape) - 1)) % 2 == 1]
        if odd:
            raise SpecError("an odd permutation on an odd-weight shape leaves the alternating group")

    center_ix = window.index((0,))

    def f_rule(tv, bv):
        return flip[bv[0]] if tv[center_ix] == letter else bv[0]

    controlled = TwoTrackMap(prod, window, ((0,),), f_rule, label="controlled-flip")

    prod_map = two_track_identity(prod)
    for e in entries:
        prod_map = compose(e.factor, prod_map)

    report = {}
    report["factors"] = len(entries)
    report["profiles"] = [
        {"shape": [list(c) for c in e.shape], "marks": [list(c) for c in e.marks], "class_size": e.class_size}
        for e in entries
    ]
    report["pairwise_disjoint"] = _pairwise_disjoint(entries)
    report["factors_commute"] = all(
        _two_track_equal(compose(a.factor, b.factor), compose(b.factor, a.factor))
        for i, a in enumerate(entries)
        for b in entries[i + 1 :]
    )
    report["product_equals_controlled_map"] = _two_track_equal(prod_map, controlled)
    report["anchored_safety"] = all(
        safe_check(recoded, e.clopen, [c for c in e.shape]) for e in entries
    )
    report["periodic_points_agree"] = _check_on_periodic_points(
        recoded, b_symbols, prod, controlled, prod_map, entries, verify_index_bound
    )
    report["min_class_size"] = min((e.class_size for e in entries), default=0)
    report["certified_steps"] = t
    ok = all(
        report[k]
        for k in (
            "pairwise_disjoint",
            "factors_commute",
            "product_equals_controlled_map",
            "anchored_safety",
            "periodic_points_agree",
        )
    )
    report["ok"] = ok
    if not ok:
        raise SpecError(f"decomposition verification failed: {report}")
    return WitnessDecomposition(prod, letter, t, radius, entries, controlled, prod_map, report)


def _full(symbols):
    from .subshifts import full_shift

    return full_shift(symbols, 1)


def _perm_parity_images(images, symbols):
    idx = {s: i for i, s in enumerate(symbols)}
    seen = set()
    parity = 0
    for i in range(len(symbols)):
        if i in seen:
            continue
        j, clen = i, 0
        while j not in seen:
            seen.add(j)
            j = idx[images[j]]
            clen += 1
        parity ^= (clen - 1) % 2
    return parity


def _pairwise_disjoint(entries):
    seen = set()
    for e in entries:
        for p in e.clopen.cylinders:
            if p in seen:
                return False
            seen.add(p)
    return True


def _check_on_periodic_points(recoded, b_symbols, prod, controlled, prod_map, entries, bound):
    """Apply the controlled map and the factor product to every valid
    product point of small period and compare images; also checks that the
    factor product is order-independent on those points."""
    from .geometry import lattices_up_to_index

    reversed_map = two_track_identity(prod)
    for e in reversed(entries):
        reversed_map = compose(e.factor, reversed_map)
    for lat in lattices_up_to_index(bound, 1):
        reps = lat.coset_reps()
        for xs in iproduct(recoded.alphabet.symbols, repeat=len(reps)):
            x = PeriodicConfig(lat, dict(zip(reps, xs)))
            if not x.is_valid(recoded):
                continue
            for ys in iproduct(b_symbols, repeat=len(reps)):
                y = PeriodicConfig(lat, dict(zip(reps, ys)))
                z = pair_config(x, y)
                a = controlled.apply(z)
                b = prod_map.apply(z)
                c = reversed_map.apply(z)
                if a != b or b != c:
                    return False
    return True
