"""Block maps on subshifts and the controlled-permutation calculus.

Two families of maps:

- single-track maps on a plain subshift (local rule over a finite
  neighborhood), used by the finite-approximation / local-embedding pipeline;
- two-track maps on a product subshift X x Y.  Every two-track map in this
  package preserves the top track (the control track); its local rule reads
  the top symbols on `top_cells` and the bottom symbols on `bottom_cells` and
  emits the bottom symbol at the origin.  Keeping the two supports separate
  is what makes equality checks exact *and* cheap: on a product, a pair of
  track patterns is realizable iff each track's pattern is, so equality just
  enumerates the two track languages over the union supports.

Controlled permutations: given a clopen trigger U on the top track, a finite
window S safe for U, and a permutation pi of the bottom language on S, the
map rewrites the bottom pattern under every occurrence of the trigger by pi
and does nothing elsewhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iproduct

from .exchange import TrackPermutation, exchange_classes
from .geometry import add, neg, norm1, origin, point_key, sub
from .subshifts import (
    BudgetError,
    ClopenSet,
    Pattern,
    PeriodicConfig,
    SpecError,
    extendable,
    language,
    pair_config,
    safe_check,
    split_config,
)


class BlockMap:
    """Single-track sliding block code with a tracked neighborhood."""

    is_two_track = False

    def __init__(self, domain, codomain, cells, rule, label=""):
        self.domain = domain
        self.codomain = codomain
        self.cells = tuple(sorted((tuple(c) for c in cells), key=point_key))
        self._rule = rule
        self._cache = {}
        self.label = label

    @property
    def radius(self):
        return max((norm1(c) for c in self.cells), default=0)

    def local(self, vals):
        vals = tuple(vals)
        out = self._cache.get(vals)
        if out is None:
            out = self._rule(vals)
            self._cache[vals] = out
        return out

    def apply(self, config):
        out = {}
        for c in config.values:
            vals = tuple(config.value_at(add(u, c)) for u in self.cells)
            out[c] = self.local(vals)
        result = PeriodicConfig(config.lattice, out)
        if not result.is_valid(self.codomain):
            raise SpecError("block map image is not valid in the codomain")
        return result

    def table(self):
        rows = []
        for p in language(self.domain, self.cells):
            vals = tuple(p[c] for c in self.cells)
            rows.append((vals, self.local(vals)))
        return tuple(sorted(rows))

    def to_json(self):
        return {
            "cells": [list(c) for c in self.cells],
            "rows": [{"in": list(v), "out": o} for v, o in self.table()],
        }


def identity_map(spec):
    d = spec.dimension
    return BlockMap(spec, spec, (origin(d),), lambda vals: vals[0], label="id")


def symbol_map(spec, mapping, codomain=None):
    """Cellwise symbol substitution."""
    d = spec.dimension
    return BlockMap(
        spec,
        codomain or spec,
        (origin(d),),
        lambda vals: mapping.get(vals[0], vals[0]),
        label="symbol-map",
    )


def shift_map(spec, h):
    """The translation by h as a block map (out at g = in at h + g)."""
    h = tuple(h)
    return BlockMap(spec, spec, (h,), lambda vals: vals[0], label=f"shift{h}")


def compose(f, g):
    """f after g (exact: the new rule substitutes g's outputs into f)."""
    if f.is_two_track != g.is_two_track:
        raise SpecError("cannot compose single-track with two-track maps")
    if f.is_two_track:
        return _compose_two_track(f, g)
    cells = sorted({add(u, v) for u in f.cells for v in g.cells}, key=point_key)
    index = {c: i for i, c in enumerate(cells)}
    layout = [[index[add(v, u)] for v in g.cells] for u in f.cells]

    def rule(vals):
        inter = tuple(g.local(tuple(vals[i] for i in row)) for row in layout)
        return f.local(inter)

    return BlockMap(g.domain, f.codomain, cells, rule, label=f"({f.label})o({g.label})")


def block_maps_equal(f, g):
    """Complete equality criterion: local rules agree on the domain language
    over the combined neighborhood."""
    if f.is_two_track != g.is_two_track:
        raise SpecError("cannot compare single-track with two-track maps")
    if f.domain.to_json() != g.domain.to_json():
        raise SpecError("block maps live on different subshifts")
    if f.is_two_track:
        return _two_track_equal(f, g)
    cells = tuple(sorted(set(f.cells) | set(g.cells), key=point_key))
    fi = [cells.index(c) for c in f.cells]
    gi = [cells.index(c) for c in g.cells]
    for p in language(f.domain, cells):
        vals = tuple(p[c] for c in cells)
        if f.local(tuple(vals[i] for i in fi)) != g.local(tuple(vals[i] for i in gi)):
            return False
    return True


class TwoTrackMap:
    """Top-preserving block map on a product subshift X x Y."""

    is_two_track = True

    def __init__(self, domain, top_cells, bottom_cells, rule, label=""):
        if not domain.is_product():
            raise SpecError("two-track maps need a product domain")
        self.domain = domain
        self.codomain = domain
        self.top_cells = tuple(sorted((tuple(c) for c in top_cells), key=point_key))
        self.bottom_cells = tuple(sorted((tuple(c) for c in bottom_cells), key=point_key))
        self._rule = rule
        self._cache = {}
        self.label = label

    @property
    def cells(self):
        merged = set(self.top_cells) | set(self.bottom_cells) | {origin(self.domain.dimension)}
        return tuple(sorted(merged, key=point_key))

    @property
    def radius(self):
        return max((norm1(c) for c in self.cells), default=0)

    def bottom_local(self, top_vals, bottom_vals):
        key = (tuple(top_vals), tuple(bottom_vals))
        out = self._cache.get(key)
        if out is None:
            out = self._rule(key[0], key[1])
            self._cache[key] = out
        return out

    def apply(self, config):
        x, y = split_config(config)
        out = {}
        for c in config.values:
            tv = tuple(x.value_at(add(u, c)) for u in self.top_cells)
            bv = tuple(y.value_at(add(u, c)) for u in self.bottom_cells)
            out[c] = (x.values[c], self.bottom_local(tv, bv))
        result = PeriodicConfig(config.lattice, out)
        if not result.is_valid(self.domain):
            raise SpecError("two-track image is not valid in the product subshift")
        return result

    def table(self):
        xs = language(self.domain.factors[0], self.top_cells) if self.top_cells else (Pattern({}),)
        ys = language(self.domain.factors[1], self.bottom_cells) if self.bottom_cells else (Pattern({}),)
        rows = []
        for p in xs:
            tv = tuple(p[c] for c in self.top_cells)
            for q in ys:
                bv = tuple(q[c] for c in self.bottom_cells)
                rows.append((tv, bv, self.bottom_local(tv, bv)))
        return tuple(sorted(rows))

    def to_json(self):
        return {
            "top_cells": [list(c) for c in self.top_cells],
            "bottom_cells": [list(c) for c in self.bottom_cells],
            "rows": [{"top": list(t), "bottom": list(b), "out": o} for t, b, o in self.table()],
        }


def two_track_identity(domain):
    d = domain.dimension
    return TwoTrackMap(domain, (), (origin(d),), lambda tv, bv: bv[0], label="id")


def _compose_two_track(f, g):
    if f.domain.to_json() != g.domain.to_json():
        raise SpecError("block maps live on different subshifts")
    top = set(f.top_cells)
    for u in f.bottom_cells:
        top.update(add(v, u) for v in g.top_cells)
    bottom = {add(v, u) for u in f.bottom_cells for v in g.bottom_cells}
    top = tuple(sorted(top, key=point_key))
    bottom = tuple(sorted(bottom, key=point_key))
    t_index = {c: i for i, c in enumerate(top)}
    b_index = {c: i for i, c in enumerate(bottom)}
    f_top_ix = [t_index[c] for c in f.top_cells]
    inner = []
    for u in f.bottom_cells:
        inner.append(
            (
                [t_index[add(v, u)] for v in g.top_cells],
                [b_index[add(v, u)] for v in g.bottom_cells],
            )
        )

    def rule(tv, bv):
        mid = tuple(
            g.bottom_local(tuple(tv[i] for i in tix), tuple(bv[i] for i in bix))
            for tix, bix in inner
        )
        return f.bottom_local(tuple(tv[i] for i in f_top_ix), mid)

    return TwoTrackMap(f.domain, top, bottom, rule, label=f"({f.label})o({g.label})")


def _two_track_equal(f, g):
    top = tuple(sorted(set(f.top_cells) | set(g.top_cells), key=point_key))
    bottom = tuple(sorted(set(f.bottom_cells) | set(g.bottom_cells), key=point_key))
    fti = [top.index(c) for c in f.top_cells]
    gti = [top.index(c) for c in g.top_cells]
    fbi = [bottom.index(c) for c in f.bottom_cells]
    gbi = [bottom.index(c) for c in g.bottom_cells]
    x_spec, y_spec = f.domain.factors
    xs = language(x_spec, top) if top else (Pattern({}),)
    ys = language(y_spec, bottom) if bottom else (Pattern({}),)
    if len(xs) * len(ys) > f.domain.budget:
        raise BudgetError("two-track equality enumeration exceeds budget")
    for p in xs:
        tv = tuple(p[c] for c in top)
        ftv = tuple(tv[i] for i in fti)
        gtv = tuple(tv[i] for i in gti)
        for q in ys:
            bv = tuple(q[c] for c in bottom)
            if f.bottom_local(ftv, tuple(bv[i] for i in fbi)) != g.bottom_local(
                gtv, tuple(bv[i] for i in gbi)
            ):
                return False
    return True


# -- controlled permutations ---------------------------------------------


def controlled_permutation(product, trigger, window, perm, check_safety=True):
    """Map on X x Y applying `perm` to the bottom pattern on `window` under
    every occurrence of the clopen `trigger` on the top track.

    `window` must contain the origin and be safe for the trigger, so rewrite
    regions of distinct occurrences never overlap.  When Y is not a full
    shift, `perm` must stabilize the exchangeability classes of Y|window.
    """
    x_spec, y_spec = product.factors
    window = tuple(sorted((tuple(s) for s in window), key=point_key))
    d = product.dimension
    if origin(d) not in window:
        raise SpecError("window must contain the origin")
    if check_safety and not safe_check(x_spec, trigger, window):
        raise SpecError("window is not safe for the trigger clopen set")
    if isinstance(perm, dict):
        perm = TrackPermutation(window, perm)
    if tuple(perm.domain) != window:
        raise SpecError("permutation domain differs from the window")
    if y_spec.kind != "full":
        table = exchange_classes(y_spec, window)
        if not perm.respects(table):
            raise SpecError("permutation does not preserve exchangeability classes")
    else:
        for p in perm.mapping:
            if not extendable(y_spec, p):
                raise SpecError("permutation moves a pattern outside the language")

    top_cells = {origin(d)}
    tests = []
    for s in window:
        cyl_tests = []
        for cyl in trigger.cylinders:
            cyl_tests.append(tuple((sub(c, s), sym) for c, sym in cyl.items))
            top_cells.update(sub(c, s) for c in cyl.domain())
        tests.append((s, cyl_tests))
    top_cells = tuple(sorted(top_cells, key=point_key))
    bottom_cells = tuple(
        sorted({sub(sp, s) for s in window for sp in window} | {origin(d)}, key=point_key)
    )
    t_index = {c: i for i, c in enumerate(top_cells)}
    b_index = {c: i for i, c in enumerate(bottom_cells)}
    compiled = []
    for s, cyl_tests in tests:
        ct = [tuple((t_index[c], sym) for c, sym in test) for test in cyl_tests]
        b_in = [b_index[sub(sp, s)] for sp in window]
        compiled.append((s, ct, b_in))

    def rule(tv, bv):
        for s, cyl_tests, b_in in compiled:
            if any(all(tv[i] == sym for i, sym in test) for test in cyl_tests):
                pat = Pattern({window[k]: bv[i] for k, i in enumerate(b_in)})
                image = perm(pat)
                return image[s]
        return bv[b_index[origin(d)]]

    bm = TwoTrackMap(product, top_cells, bottom_cells, rule, label="controlled-perm")
    bm.control = (trigger, window, perm)
    return bm


def controlled_inverse(bm):
    trigger, window, perm = bm.control
    return controlled_permutation(bm.domain, trigger, window, perm.inverse(), check_safety=False)


@dataclass(frozen=True)
class TrackDecomposition:
    """Explicit bijection from a track alphabet onto a product of two factors."""

    symbols: tuple
    sizes: tuple  # (m, n)
    table: tuple  # tuple of ((s, (i, j)))

    @classmethod
    def from_sizes(cls, symbols, m, n):
        symbols = tuple(symbols)
        if m * n != len(symbols):
            raise SpecError("factor sizes must multiply to the alphabet size")
        table = tuple((s, (k // n, k % n)) for k, s in enumerate(symbols))
        return cls(symbols, (m, n), table)

    def split(self, s):
        for sym, pair in self.table:
            if sym == s:
                return pair
        raise KeyError(s)

    def join(self, pair):
        for sym, p in self.table:
            if p == tuple(pair):
                return sym
        raise KeyError(pair)


def decomposition_classes(size):
    """Ordered factor-size pairs (m, n) with m*n = size and a moving factor."""
    return tuple((m, size // m) for m in range(1, size + 1) if size % m == 0 and size // m >= 2)


def partial_shift(product, decomposition, h):
    """Shift the second factor of the bottom-track decomposition by h."""
    h = tuple(h)
    d = product.dimension
    z = origin(d)

    if h == z:
        return two_track_identity(product)
    if decomposition.sizes[0] == 1:
        # the fixed factor is trivial: the whole track shifts, and the rule
        # reads a single cell (keeps composed supports from inflating)
        def rule1(tv, bv):
            return bv[0]

        bm = TwoTrackMap(product, (), (h,), rule1, label=f"pshift{decomposition.sizes}{h}")
        bm.pshift = (decomposition, h)
        return bm
    cells = tuple(sorted((z, h), key=point_key))
    i0, ih = cells.index(z), cells.index(h)

    def rule(tv, bv):
        y0, _ = decomposition.split(bv[i0])
        _, z_h = decomposition.split(bv[ih])
        return decomposition.join((y0, z_h))

    bm = TwoTrackMap(product, (), cells, rule, label=f"pshift{decomposition.sizes}{h}")
    bm.pshift = (decomposition, h)
    return bm


def full_track_shift(product, h):
    """Shift the whole bottom track by h (the trivial decomposition)."""
    h = tuple(h)
    d = product.dimension
    if h == origin(d):
        return two_track_identity(product)
    bm = TwoTrackMap(product, (), (h,), lambda tv, bv: bv[0], label=f"bshift{h}")
    b_syms = product.factors[1].alphabet.symbols
    bm.pshift = (TrackDecomposition.from_sizes(b_syms, 1, len(b_syms)), h)
    return bm


# -- the finitely generated gate group -----------------------------------


@dataclass
class GateGenerators:
    """Finitely many generators: partial shifts for each decomposition class
    of the bottom alphabet, and every single-letter controlled permutation."""

    product: object
    partial_shifts: dict  # (m, n, h) -> TwoTrackMap
    letter_perms: dict  # (letter, perm_images) -> TwoTrackMap
    extra: tuple

    def all_maps(self):
        out = list(self.partial_shifts.values()) + list(self.letter_perms.values())
        return out + list(self.extra)


def gate_generators(product, include_extra=()):
    x_spec, y_spec = product.factors
    b_syms = y_spec.alphabet.symbols
    if y_spec.kind != "full":
        raise SpecError("the gate group needs a full bottom track")
    if len(b_syms) < 3:
        raise SpecError("bottom alphabet needs at least 3 symbols")
    d = product.dimension
    units = []
    for i in range(d):
        e = tuple(1 if j == i else 0 for j in range(d))
        units.extend([e, neg(e)])
    shifts = {}
    for m, n in decomposition_classes(len(b_syms)):
        dec = TrackDecomposition.from_sizes(b_syms, m, n)
        for h in units:
            shifts[(m, n, h)] = partial_shift(product, dec, h)
    letters = {}
    window = (origin(d),)
    for a in x_spec.alphabet.symbols:
        trigger = ClopenSet.letter(x_spec, a)
        for images in _all_perms(b_syms):
            mapping = {
                Pattern({origin(d): s}): Pattern({origin(d): images[i]})
                for i, s in enumerate(b_syms)
            }
            bm = controlled_permutation(product, trigger, window, mapping)
            letters[(a, images)] = bm
    return GateGenerators(product, shifts, letters, tuple(include_extra))


def _all_perms(symbols):
    from itertools import permutations

    return [tuple(p) for p in permutations(symbols)]


# -- words over the gate generators ---------------------------------------


@dataclass(frozen=True)
class GateToken:
    """One letter of a word over the gate generators: a partial shift
    ('pshift', (m, n), h) or a letter permutation ('letter', a, images),
    raised to exponent +-1."""

    kind: str
    data: tuple
    exponent: int

    def inverse(self):
        return GateToken(self.kind, self.data, -self.exponent)


def token_map(gens, token):
    if token.kind == "pshift":
        (m, n), h = token.data
        base = gens.partial_shifts[(m, n, h if token.exponent == 1 else neg(h))]
        return base
    a, images = token.data
    if token.exponent == 1:
        return gens.letter_perms[(a, images)]
    inv = tuple_inverse(images, gens.product.factors[1].alphabet.symbols)
    return gens.letter_perms[(a, inv)]


def tuple_inverse(images, symbols):
    inv = [None] * len(symbols)
    for i, s in enumerate(symbols):
        inv[symbols.index(images[i])] = s
    return tuple(inv)


def compose_word(gens, tokens):
    """Compose a word left-to-right as a function product: tokens[0] is the
    outermost (applied last)."""
    out = two_track_identity(gens.product)
    for token in reversed(tokens):
        out = compose(token_map(gens, token), out)
    return out


def _invert_word(tokens):
    return [t.inverse() for t in reversed(tokens)]


def _commutator_word(w1, w2):
    return _invert_word(w1) + _invert_word(w2) + list(w1) + list(w2)


def _perm_compose(a, b, symbols):
    """images of (a after b) as tuples over symbols."""
    ia = {s: a[i] for i, s in enumerate(symbols)}
    return tuple(ia[b[i]] for i, s in enumerate(symbols))


def _perm_commutator(a, b, symbols):
    inv_a = tuple_inverse(a, symbols)
    inv_b = tuple_inverse(b, symbols)
    return _perm_compose(_perm_compose(inv_a, inv_b, symbols), _perm_compose(a, b, symbols), symbols)


def _perm_parity(images, symbols):
    idx = {s: i for i, s in enumerate(symbols)}
    seen = set()
    parity = 0
    for i in range(len(symbols)):
        if i in seen:
            continue
        j = i
        clen = 0
        while j not in seen:
            seen.add(j)
            j = idx[images[j]]
            clen += 1
        parity ^= (clen - 1) % 2
    return parity


def commutator_expressions(symbols, max_factors=3):
    """Express every even permutation as a product of commutators [alpha,
    beta] with alpha even and beta arbitrary; bounded BFS, smallest first."""
    evens = [p for p in _all_perms(symbols) if _perm_parity(p, symbols) == 0]
    alls = _all_perms(symbols)
    singles = []
    for a in evens:
        for b in alls:
            singles.append((_perm_commutator(a, b, symbols), (a, b)))
    ident = tuple(symbols)
    found = {ident: []}
    frontier = [(ident, [])]
    for _ in range(max_factors):
        nxt = []
        for cur, word in frontier:
            for val, pair in singles:
                new = _perm_compose(val, cur, symbols)
                if new not in found:
                    found[new] = word + [pair]
                    nxt.append((new, word + [pair]))
        frontier = nxt
        if len(found) == len(evens):
            break
    missing = [p for p in evens if p not in found]
    if missing:
        raise SpecError("commutator search bound too small for this alphabet")
    return found


def express_controlled_permutation(gens, pattern, images, max_factors=3):
    """Word over the gate generators whose product is the controlled
    permutation with trigger [pattern] and the even bottom permutation given
    by `images`.  Returns (tokens, composed map); composition is verified
    against the directly built map by the caller or tests."""
    x_spec, y_spec = gens.product.factors
    symbols = y_spec.alphabet.symbols
    if _perm_parity(images, symbols) != 0 and len(pattern) > 1:
        raise SpecError("multi-cell triggers need an even permutation")
    cells = pattern.domain()
    if len(cells) == 0:
        raise SpecError("empty trigger pattern")
    if len(cells) == 1:
        (g,) = cells
        a = pattern[g]
        word = [GateToken("letter", (a, images), 1)]
        d = gens.product.dimension
        if g != origin(d):
            # conjugate by full-track shifts to move the trigger cell
            shift_tokens = _unit_shift_word(gens, neg(g))
            word = _invert_word(shift_tokens) + word + shift_tokens
        return word
    # split off the last cell and use nested commutators
    cells_sorted = sorted(cells, key=point_key)
    g = cells_sorted[-1]
    rest = Pattern({c: pattern[c] for c in cells_sorted[:-1]})
    last = Pattern({g: pattern[g]})
    exprs = commutator_expressions(symbols, max_factors=max_factors)
    word = []
    for alpha, beta in exprs[tuple(images)]:
        w1 = express_controlled_permutation(gens, rest, alpha, max_factors=max_factors)
        w2 = express_controlled_permutation(gens, last, beta, max_factors=max_factors)
        word.extend(_commutator_word(w1, w2))
    return word


def _unit_shift_word(gens, h):
    """Tokens whose product is the full-track shift by h."""
    d = gens.product.dimension
    b_size = len(gens.product.factors[1].alphabet.symbols)
    tokens = []
    for i in range(d):
        unit = tuple(1 if j == i else 0 for j in range(d))
        count = h[i]
        step = unit if count > 0 else neg(unit)
        for _ in range(abs(count)):
            tokens.append(GateToken("pshift", ((1, b_size), step), 1))
    return tokens


# -- convenience builders used by fixtures and tests ----------------------


def swap_permutation(spec, window, pairs):
    """TrackPermutation swapping the given pattern pairs, fixing the rest."""
    pats = language(spec, window)
    mapping = {p: p for p in pats}
    for a, b in pairs:
        mapping[a] = b
        mapping[b] = a
    return TrackPermutation(window, mapping)


def apply_to_pair(bm, x, y):
    out = bm.apply(pair_config(x, y))
    return split_config(out)
