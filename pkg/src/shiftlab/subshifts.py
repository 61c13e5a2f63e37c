"""Subshift specifications and exact pattern-language machinery.

Kinds: full shifts, SFTs (d = 1 or 2), sofic shifts (d = 1, labeled graph
presentation), and direct products (kept as two tracks; symbols of a product
are pairs).  The language / extendability engine is exact:

- d = 1: transfer-graph reachability on a bi-essential graph.
- d = 2, box domains: column transfer graphs for the height-h strip, plus a
  padding certificate (a symbol that occurs in no forbidden pattern) that
  upgrades strip extendability to plane extendability.  Domains or alphabets
  that exceed the configured budget raise BudgetError; nothing is silently
  approximated.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import product as iproduct

from .geometry import (
    Lattice,
    add,
    box,
    lattice_from_generators,
    lattices_up_to_index,
    origin,
    point_key,
    sub,
)

DEFAULT_BUDGET = 300_000


class BudgetError(Exception):
    """Raised when an exact computation would exceed the configured budget."""


class SpecError(Exception):
    """Raised on malformed subshift documents or invalid inputs."""


@dataclass(frozen=True)
class Alphabet:
    symbols: tuple

    def __post_init__(self):
        if len(set(self.symbols)) != len(self.symbols):
            raise SpecError("duplicate symbols in alphabet")
        if len(self.symbols) < 1:
            raise SpecError("alphabet needs at least one symbol")

    def index(self, sym):
        return self.symbols.index(sym)

    def __len__(self):
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)


class Pattern:
    """Finite map from points to symbols; hashable, immutable."""

    __slots__ = ("items", "_hash")

    def __init__(self, cells):
        if isinstance(cells, dict):
            items = cells.items()
        else:
            items = cells
        self.items = tuple(sorted(((tuple(p), s) for p, s in items), key=lambda it: point_key(it[0])))
        seen = set()
        for p, _ in self.items:
            if p in seen:
                raise SpecError("pattern assigns a cell twice")
            seen.add(p)
        self._hash = hash(self.items)

    @property
    def cells(self):
        return dict(self.items)

    def domain(self):
        return tuple(p for p, _ in self.items)

    def __len__(self):
        return len(self.items)

    def __getitem__(self, p):
        for q, s in self.items:
            if q == p:
                return s
        raise KeyError(p)

    def get(self, p, default=None):
        for q, s in self.items:
            if q == p:
                return s
        return default

    def translate(self, g):
        """The pattern of g + x restricted appropriately: cells move to d - g."""
        return Pattern([(sub(p, g), s) for p, s in self.items])

    def restrict(self, domain):
        dom = set(tuple(p) for p in domain)
        return Pattern([(p, s) for p, s in self.items if p in dom])

    def union(self, other):
        """Disjoint-domain union of two patterns."""
        mine = dict(self.items)
        for p, s in other.items:
            if p in mine and mine[p] != s:
                raise SpecError("patterns disagree on a shared cell")
            mine[p] = s
        return Pattern(mine)

    def __eq__(self, other):
        return isinstance(other, Pattern) and self.items == other.items

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return "Pattern(%s)" % (dict(self.items),)

    def to_json(self):
        return {"cells": [{"pos": list(p), "sym": _sym_to_json(s)} for p, s in self.items]}

    @classmethod
    def from_json(cls, doc):
        return cls([(tuple(c["pos"]), _sym_from_json(c["sym"])) for c in doc["cells"]])


def _sym_to_json(sym):
    if isinstance(sym, tuple):
        return list(_sym_to_json(s) for s in sym)
    return sym


def _sym_from_json(doc):
    if isinstance(doc, list):
        return tuple(_sym_from_json(s) for s in doc)
    return doc


def word_pattern(word, start=0):
    """1D pattern for a word laid out at consecutive cells from start."""
    return Pattern([((start + i,), s) for i, s in enumerate(word)])


class SubshiftSpec:
    """A subshift specification; see the module docstring for kinds."""

    def __init__(self, kind, dimension, alphabet, forbidden=(), presentation=None, factors=None, budget=DEFAULT_BUDGET):
        if kind not in ("full", "sft", "sofic", "product"):
            raise SpecError(f"unknown kind {kind!r}")
        if dimension not in (1, 2):
            raise SpecError("dimension must be 1 or 2")
        self.kind = kind
        self.dimension = dimension
        self.budget = budget
        if kind == "product":
            x, y = factors
            if x.dimension != y.dimension:
                raise SpecError("product factors must share dimension")
            self.factors = (x, y)
            self.alphabet = Alphabet(tuple(iproduct(x.alphabet.symbols, y.alphabet.symbols)))
            self.forbidden = ()
            self.presentation = None
        else:
            self.factors = None
            self.alphabet = alphabet if isinstance(alphabet, Alphabet) else Alphabet(tuple(alphabet))
            self.forbidden = tuple(sorted(set(forbidden), key=lambda p: p.items))
            for p in self.forbidden:
                if len(p) == 0:
                    raise SpecError("forbidden patterns must have nonempty domain")
                for cell, s in p.items:
                    if len(cell) != dimension:
                        raise SpecError("forbidden pattern dimension mismatch")
                    if s not in self.alphabet.symbols:
                        raise SpecError(f"forbidden pattern uses unknown symbol {s!r}")
            if kind == "sofic":
                if dimension != 1:
                    raise SpecError("sofic presentations are 1D only")
                self.presentation = _trim_presentation(presentation, self.alphabet)
            else:
                self.presentation = None
        self._lang_cache = {}
        self._graph_cache = {}

    # -- conveniences -------------------------------------------------

    def is_product(self):
        return self.kind == "product"

    def window(self):
        """Max span of forbidden patterns in each coordinate (at least 1)."""
        spans = [1] * self.dimension
        for p in self.forbidden:
            dom = p.domain()
            for i in range(self.dimension):
                vals = [c[i] for c in dom]
                spans[i] = max(spans[i], max(vals) - min(vals) + 1)
        return tuple(spans)

    def locally_allowed(self, pat):
        """No forbidden pattern matches anywhere inside pat's domain."""
        cells = dict(pat.items)
        for f in self.forbidden:
            fdom = f.domain()
            # candidate offsets: align first forbidden cell with each cell
            anchor = fdom[0]
            for c in cells:
                off = sub(c, anchor)
                if all(cells.get(add(d, off)) == s for d, s in f.items):
                    return False
        return True

    def to_json(self):
        doc = {"kind": self.kind, "dimension": self.dimension}
        if self.kind == "product":
            doc["factors"] = [f.to_json() for f in self.factors]
        else:
            doc["alphabet"] = [_sym_to_json(s) for s in self.alphabet.symbols]
            if self.kind == "sft":
                doc["forbidden"] = [p.to_json() for p in self.forbidden]
            if self.kind == "sofic":
                states, edges = self.presentation
                doc["presentation"] = {
                    "states": list(states),
                    "edges": [{"from": a, "to": b, "label": l} for a, b, l in edges],
                }
        return doc

    def __repr__(self):
        return f"SubshiftSpec({self.kind}, d={self.dimension}, |A|={len(self.alphabet)})"


def _trim_presentation(presentation, alphabet):
    if presentation is None:
        raise SpecError("sofic spec needs a presentation")
    states, edges = presentation
    states = tuple(states)
    edges = tuple((a, b, l) for a, b, l in edges)
    for _, _, l in edges:
        if l not in alphabet.symbols:
            raise SpecError(f"edge label {l!r} not in alphabet")
    while True:
        has_out = {a for a, _, _ in edges}
        has_in = {b for _, b, _ in edges}
        keep = [s for s in states if s in has_out and s in has_in]
        new_edges = tuple(e for e in edges if e[0] in keep and e[1] in keep)
        if len(keep) == len(states) and len(new_edges) == len(edges):
            break
        states, edges = tuple(keep), new_edges
    if not states:
        raise SpecError("sofic presentation has no bi-infinite paths (dead states)")
    return (states, edges)


# -- constructors -----------------------------------------------------


def full_shift(symbols, dimension=1):
    return SubshiftSpec("full", dimension, Alphabet(tuple(symbols)))


def sft(symbols, forbidden, dimension=1):
    return SubshiftSpec("sft", dimension, Alphabet(tuple(symbols)), forbidden=forbidden)


def golden_mean():
    """Binary shift forbidding the word 11."""
    return sft("01", [word_pattern("11")])


def no_double_zero():
    """Shift over {0,1,2} forbidding the word 00."""
    return sft("012", [word_pattern("00")])


def monotone_binary():
    """Binary shift forbidding the word 10 (points look like 0...01...1)."""
    return sft("01", [word_pattern("10")])


def even_shift():
    """Sofic shift: between consecutive 1s there are evenly many 0s."""
    states = ("E", "O")
    edges = (("E", "E", "1"), ("E", "O", "0"), ("O", "E", "0"))
    return SubshiftSpec("sofic", 1, Alphabet(("0", "1")), presentation=(states, edges))


def hard_square():
    """Binary Z^2 shift forbidding adjacent 1s (horizontally or vertically)."""
    forb = [
        Pattern({(0, 0): "1", (1, 0): "1"}),
        Pattern({(0, 0): "1", (0, 1): "1"}),
    ]
    return SubshiftSpec("sft", 2, Alphabet(("0", "1")), forbidden=forb)


def no_adjacent_twos():
    """{0,1,2} on Z^2, no two 2s horizontally or vertically adjacent."""
    forb = [
        Pattern({(0, 0): "2", (1, 0): "2"}),
        Pattern({(0, 0): "2", (0, 1): "2"}),
    ]
    return SubshiftSpec("sft", 2, Alphabet(("0", "1", "2")), forbidden=forb)


def product_spec(x, y):
    return SubshiftSpec("product", x.dimension, None, factors=(x, y))


def parse_spec(document):
    """Validate and construct a SubshiftSpec from a JSON document (or string)."""
    if isinstance(document, str):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as e:
            raise SpecError(f"invalid JSON: {e}") from e
    if not isinstance(document, dict):
        raise SpecError("spec document must be an object")
    kind = document.get("kind")
    dim = document.get("dimension")
    if kind == "product":
        factors = document.get("factors")
        if not isinstance(factors, list) or len(factors) != 2:
            raise SpecError("product spec needs exactly two factors")
        return product_spec(parse_spec(factors[0]), parse_spec(factors[1]))
    symbols = document.get("alphabet")
    if not isinstance(symbols, list) or len(symbols) < 1:
        raise SpecError("alphabet must be a nonempty list")
    alphabet = Alphabet(tuple(_sym_from_json(s) for s in symbols))
    if kind == "full":
        return SubshiftSpec("full", dim, alphabet)
    if kind == "sft":
        forb = [Pattern.from_json(p) for p in document.get("forbidden", [])]
        return SubshiftSpec("sft", dim, alphabet, forbidden=forb)
    if kind == "sofic":
        pres = document.get("presentation")
        if not isinstance(pres, dict):
            raise SpecError("sofic spec needs a presentation")
        states = tuple(pres.get("states", ()))
        edges = tuple((e["from"], e["to"], e["label"]) for e in pres.get("edges", ()))
        return SubshiftSpec("sofic", dim, alphabet, presentation=(states, edges))
    raise SpecError(f"unknown kind {kind!r}")


# -- 1D transfer graph -------------------------------------------------


class TransferGraph:
    """Bi-essential de Bruijn-style graph for a 1D SFT (or full shift).

    States are locally-allowed words of length window-1; edges append one
    symbol.  After trimming, every state and edge lies on a bi-infinite path.
    """

    def __init__(self, spec):
        (m,) = spec.window()
        self.m = m
        syms = spec.alphabet.symbols
        if len(syms) ** max(m - 1, 0) > spec.budget:
            raise BudgetError("transfer graph state space exceeds budget")
        if m == 1:
            states = {()}
            allowed = [s for s in syms if spec.locally_allowed(word_pattern((s,)))]
            edges = {((), s): () for s in allowed}
        else:
            states = set()
            for w in iproduct(syms, repeat=m - 1):
                if spec.locally_allowed(word_pattern(w)):
                    states.add(w)
            edges = {}
            for u in states:
                for s in syms:
                    w = u + (s,)
                    if spec.locally_allowed(word_pattern(w)):
                        v = w[1:]
                        if v in states:
                            edges[(u, s)] = v
        self.states, self.edges = _trim_graph(states, edges)
        # one-sided survivors for context computations
        self.left_extendable = _one_sided(states, edges, incoming=True)
        self.right_extendable = _one_sided(states, edges, incoming=False)

    def successors(self, u):
        out = []
        for (a, s), b in self.edges.items():
            if a == u:
                out.append((s, b))
        return out


def _trim_graph(states, edges):
    states = set(states)
    edges = dict(edges)
    while True:
        has_out = {a for (a, _s) in edges}
        has_in = set(edges.values())
        keep = {s for s in states if s in has_out and s in has_in}
        new_edges = {k: v for k, v in edges.items() if k[0] in keep and v in keep}
        if keep == states and len(new_edges) == len(edges):
            return states, edges
        states, edges = keep, new_edges


def _one_sided(states, edges, incoming):
    """States surviving iterated removal of (in|out)-degree-0 states."""
    states = set(states)
    edges = dict(edges)
    while True:
        if incoming:
            ok = set(edges.values())
        else:
            ok = {a for (a, _s) in edges}
        keep = states & ok
        new_edges = {k: v for k, v in edges.items() if k[0] in keep and v in keep}
        if keep == states:
            return states
        states, edges = keep, new_edges


def _graph_for(spec):
    if "1d" not in spec._graph_cache:
        spec._graph_cache["1d"] = TransferGraph(spec)
    return spec._graph_cache["1d"]


def _words_1d(spec, length):
    """All extendable words of the given length, sorted; exact."""
    key = ("w", length)
    if key in spec._lang_cache:
        return spec._lang_cache[key]
    if spec.kind == "sofic":
        out = _words_sofic(spec, length)
    else:
        g = _graph_for(spec)
        m = g.m
        if length == 0:
            out = (() ,) if g.states else ()
        elif length <= m - 1:
            out = tuple(sorted({u[:length] for u in g.states}))
        else:
            acc = []
            for u in sorted(g.states):
                _extend_words(g, u, u, length - (m - 1), acc)
            out = tuple(sorted(set(acc)))
    if len(out) > spec.budget:
        raise BudgetError("language size exceeds budget")
    spec._lang_cache[key] = out
    return out


def _extend_words(g, word, state, remaining, acc):
    if remaining == 0:
        acc.append(word)
        return
    for s, v in sorted(g.successors(state)):
        _extend_words(g, word + (s,), v, remaining - 1, acc)


def _words_sofic(spec, length):
    states, edges = spec.presentation
    by_state = {}
    for a, b, l in edges:
        by_state.setdefault(a, []).append((l, b))
    full = frozenset(states)
    out = []

    def go(word, active):
        if len(word) == length:
            out.append(word)
            return
        nexts = {}
        for st in active:
            for l, b in by_state.get(st, ()):
                nexts.setdefault(l, set()).add(b)
        for l in sorted(nexts):
            go(word + (l,), frozenset(nexts[l]))

    go((), full)
    return tuple(sorted(set(out)))


# -- 2D strip machinery -------------------------------------------------


class StripGraph:
    """Transfer graph over height-h columns of a 2D SFT (or full shift)."""

    def __init__(self, spec, height):
        w, _ = spec.window()
        syms = spec.alphabet.symbols
        if len(syms) ** height > spec.budget:
            raise BudgetError("strip column alphabet exceeds budget")
        cols = [c for c in iproduct(syms, repeat=height) if spec.locally_allowed(_col_pattern((c,)))]
        self.width = w
        self.height = height
        if w == 1:
            states = {()}
            edges = {((), c): () for c in cols}
        else:
            if len(cols) ** (w - 1) > spec.budget:
                raise BudgetError("strip state space exceeds budget")
            states = set()
            for u in iproduct(cols, repeat=w - 1):
                if spec.locally_allowed(_col_pattern(u)):
                    states.add(u)
            edges = {}
            for u in states:
                for c in cols:
                    word = u + (c,)
                    if spec.locally_allowed(_col_pattern(word)):
                        v = word[1:]
                        if v in states:
                            edges[(u, c)] = v
        self.states, self.edges = _trim_graph(states, edges)

    def successors(self, u):
        return [(c, v) for (a, c), v in self.edges.items() if a == u]


def _col_pattern(cols):
    cells = {}
    for i, col in enumerate(cols):
        for j, s in enumerate(col):
            cells[(i, j)] = s
    return Pattern(cells)


def _strip_graph_for(spec, height):
    key = ("strip", height)
    if key not in spec._graph_cache:
        spec._graph_cache[key] = StripGraph(spec, height)
    return spec._graph_cache[key]


def padding_symbol(spec):
    """A symbol occurring in no forbidden pattern, or None.

    Filling any partial configuration's complement with such a symbol never
    creates a forbidden pattern, so strip extendability certifies plane
    extendability.
    """
    used = set()
    for p in spec.forbidden:
        used.update(s for _, s in p.items)
    for s in spec.alphabet.symbols:
        if s not in used:
            return s
    return None


def _box_words_2d(spec, width, height):
    key = ("box", width, height)
    if key in spec._lang_cache:
        return spec._lang_cache[key]
    if padding_symbol(spec) is None:
        raise BudgetError("cannot certify plane extendability for this SFT (no padding symbol)")
    g = _strip_graph_for(spec, height)
    w = g.width
    if width == 0:
        out = ((),) if g.states else ()
    elif width <= w - 1:
        out = tuple(sorted({u[:width] for u in g.states}))
    else:
        acc = []
        for u in sorted(g.states):
            _extend_words(g, u, u, width - (w - 1), acc)
        out = tuple(sorted(set(acc)))
    if len(out) > spec.budget:
        raise BudgetError("language size exceeds budget")
    spec._lang_cache[key] = out
    return out


# -- public language / extendability -----------------------------------


def language(spec, domain):
    """Exactly the patterns with the given domain occurring in points of spec."""
    domain = tuple(sorted((tuple(p) for p in domain), key=point_key))
    if not domain:
        return (Pattern({}),)
    key = ("dom", domain)
    if key in spec._lang_cache:
        return spec._lang_cache[key]
    if spec.is_product():
        xpats = language(spec.factors[0], domain)
        ypats = language(spec.factors[1], domain)
        if len(xpats) * len(ypats) > spec.budget:
            raise BudgetError("product language exceeds budget")
        out = tuple(
            Pattern({c: (p[c], q[c]) for c in domain}) for p in xpats for q in ypats
        )
        spec._lang_cache[key] = out
        return out
    if spec.kind == "full":
        if len(spec.alphabet) ** len(domain) > spec.budget:
            raise BudgetError("language size exceeds budget")
        out = tuple(
            Pattern(dict(zip(domain, vals)))
            for vals in iproduct(spec.alphabet.symbols, repeat=len(domain))
        )
        out = tuple(sorted(out, key=lambda p: p.items))
        spec._lang_cache[key] = out
        return out
    if spec.dimension == 1:
        lo = min(c[0] for c in domain)
        hi = max(c[0] for c in domain)
        words = _words_1d(spec, hi - lo + 1)
        pats = {Pattern({c: w[c[0] - lo] for c in domain}) for w in words}
    else:
        los = tuple(min(c[i] for c in domain) for i in range(2))
        his = tuple(max(c[i] for c in domain) for i in range(2))
        width, height = his[0] - los[0] + 1, his[1] - los[1] + 1
        words = _box_words_2d(spec, width, height)
        pats = {Pattern({c: w[c[0] - los[0]][c[1] - los[1]] for c in domain}) for w in words}
    out = tuple(sorted(pats, key=lambda p: p.items))
    spec._lang_cache[key] = out
    return out


def extendable(spec, pat):
    """Does some point of the subshift restrict to pat?

    1D: a state-set walk over the pattern's hull with free cells (exact, no
    enumeration).  2D: with a padding symbol, any locally allowed pattern
    extends by filling the complement with it; without one, fall back to
    (budget-capped) language membership.
    """
    if len(pat) == 0:
        return True
    if spec.is_product():
        x = Pattern({c: s[0] for c, s in pat.items})
        y = Pattern({c: s[1] for c, s in pat.items})
        return extendable(spec.factors[0], x) and extendable(spec.factors[1], y)
    for _, s in pat.items:
        if s not in spec.alphabet.symbols:
            return False
    if spec.kind == "full":
        return True
    if spec.dimension == 1:
        return _extendable_1d(spec, pat)
    if padding_symbol(spec) is not None:
        return spec.locally_allowed(pat)
    dom = pat.domain()
    return pat in set(language(spec, dom))


def _extendable_1d(spec, pat):
    fixed = {c[0]: s for c, s in pat.items}
    lo, hi = min(fixed), max(fixed)
    syms = spec.alphabet.symbols
    if spec.kind == "sofic":
        states, edges = spec.presentation
        by_state = {}
        for a, b, l in edges:
            by_state.setdefault(a, []).append((l, b))
        active = set(states)
        for i in range(lo, hi + 1):
            want = fixed.get(i)
            active = {
                b
                for st in active
                for (l, b) in by_state.get(st, ())
                if want is None or l == want
            }
            if not active:
                return False
        return True
    g = _graph_for(spec)
    active = set(g.states)
    for i in range(lo, hi + 1):
        want = fixed.get(i)
        nxt = set()
        for u in active:
            for s in syms if want is None else (want,):
                v = g.edges.get((u, s))
                if v is not None:
                    nxt.add(v)
        active = nxt
        if not active:
            return False
    return True


# -- clopen sets --------------------------------------------------------


@dataclass(frozen=True)
class ClopenSet:
    """Finite union of cylinders [p] inside an ambient subshift."""

    cylinders: tuple

    @classmethod
    def from_patterns(cls, spec, patterns):
        kept = tuple(sorted({p for p in patterns if extendable(spec, p)}, key=lambda p: p.items))
        return cls(kept)

    @classmethod
    def cylinder(cls, spec, pattern):
        return cls.from_patterns(spec, [pattern])

    @classmethod
    def letter(cls, spec, symbol):
        d = spec.dimension
        return cls.from_patterns(spec, [Pattern({origin(d): symbol})])

    def domain(self):
        cells = set()
        for p in self.cylinders:
            cells.update(p.domain())
        return tuple(sorted(cells, key=point_key))

    def is_empty(self):
        return not self.cylinders

    def to_json(self):
        return {"cylinders": [p.to_json() for p in self.cylinders]}

    @classmethod
    def from_json(cls, spec, doc):
        return cls.from_patterns(spec, [Pattern.from_json(p) for p in doc["cylinders"]])


def clopen_refine(spec, cl, domain):
    """The set of full-domain patterns whose cylinders union to cl."""
    domain = tuple(sorted(set(tuple(p) for p in domain).union(cl.domain()), key=point_key))
    out = set()
    for q in language(spec, domain):
        for p in cl.cylinders:
            if all(q[c] == s for c, s in p.items):
                out.add(q)
                break
    return domain, out


def clopen_intersect(spec, a, b):
    dom = tuple(set(a.domain()) | set(b.domain()))
    dom, pa = clopen_refine(spec, a, dom)
    _, pb = clopen_refine(spec, b, dom)
    return ClopenSet.from_patterns(spec, pa & pb)


def clopen_union(spec, a, b):
    dom = tuple(set(a.domain()) | set(b.domain()))
    dom, pa = clopen_refine(spec, a, dom)
    _, pb = clopen_refine(spec, b, dom)
    return ClopenSet.from_patterns(spec, pa | pb)


def clopen_complement(spec, a):
    dom = a.domain()
    if not dom:
        dom = (origin(spec.dimension),)
    dom, pa = clopen_refine(spec, a, dom)
    rest = set(language(spec, dom)) - pa
    return ClopenSet.from_patterns(spec, rest)


def clopen_translate(cl, g):
    """The clopen set gC: x is in gC iff C occurs at -g ... i.e. cylinders move to domain D - g."""
    return ClopenSet(tuple(sorted((p.translate(g) for p in cl.cylinders), key=lambda p: p.items)))


def clopen_is_empty(spec, cl):
    return ClopenSet.from_patterns(spec, cl.cylinders).is_empty()


def clopen_disjoint(spec, a, b):
    return clopen_intersect(spec, a, b).is_empty()


def clopen_equal(spec, a, b):
    dom = tuple(set(a.domain()) | set(b.domain()))
    if not dom:
        return a.is_empty() == b.is_empty()
    dom, pa = clopen_refine(spec, a, dom)
    _, pb = clopen_refine(spec, b, dom)
    return pa == pb


def safe_check(spec, cl, s_set):
    """Is the finite set S safe for the clopen set: distinct translates of C
    never overlap, i.e. tC and C are disjoint for t in (S - S) minus 0."""
    s_pts = [tuple(p) for p in s_set]
    diffs = {sub(a, b) for a in s_pts for b in s_pts} - {origin(spec.dimension)}
    for t in sorted(diffs, key=point_key):
        if not clopen_disjoint(spec, clopen_translate(cl, t), cl):
            return False
    return True


# -- periodic configurations --------------------------------------------


class PeriodicConfig:
    """Totally periodic configuration: a lattice and values on its cosets."""

    def __init__(self, lattice, values):
        self.lattice = lattice
        vals = {}
        for g, s in values.items():
            vals[lattice.reduce(tuple(g))] = s
        if len(vals) != lattice.index:
            raise SpecError("values must cover every coset exactly once")
        self.values = vals

    @classmethod
    def from_word(cls, word):
        """1D config of period len(word) spelling the word from cell 0."""
        return cls(Lattice(((len(word),),)), {(i,): s for i, s in enumerate(word)})

    @classmethod
    def from_rows(cls, rows):
        """2D config on a width x height torus; rows[j][i] is the value at (i, j)."""
        h = len(rows)
        w = len(rows[0])
        lat = Lattice(((w, 0), (0, h)))
        return cls(lat, {(i, j): rows[j][i] for j in range(h) for i in range(w)})

    def value_at(self, g):
        return self.values[self.lattice.reduce(tuple(g))]

    def translate(self, g):
        """The configuration g . x (the value at h becomes the old value at h + g)."""
        return PeriodicConfig(self.lattice, {c: self.value_at(add(c, g)) for c in self.values})

    def pattern_at(self, g, domain):
        return Pattern({d: self.value_at(add(d, g)) for d in domain})

    def matches(self, pat, g):
        return all(self.value_at(add(d, g)) == s for d, s in pat.items)

    def in_clopen(self, cl, g):
        """Does the clopen set occur at g (is gx in C)?"""
        return any(self.matches(p, g) for p in cl.cylinders)

    def occurrences(self, cl):
        return tuple(c for c in sorted(self.values, key=point_key) if self.in_clopen(cl, c))

    def stabilizer(self):
        """The full stabilizer lattice (contains self.lattice)."""
        fixers = list(self.lattice.generators())
        for v in self.lattice.coset_reps():
            if v == origin(self.lattice.dim):
                continue
            if all(self.value_at(add(c, v)) == self.values[c] for c in self.values):
                fixers.append(v)
        return lattice_from_generators(fixers, self.lattice.dim)

    def orbit_size(self):
        return self.stabilizer().index

    def separation_radius(self, gens):
        """Smallest r such that distinct translates differ within the r-ball."""
        from .geometry import ball as _ball

        reps = [c for c in self.lattice.coset_reps()]
        r = 0
        while True:
            B = _ball(r, gens)
            views = {}
            collision = False
            for c in reps:
                key = tuple(self.value_at(add(c, b)) for b in B)
                if key in views:
                    other = views[key]
                    # same view: genuinely equal translates are fine
                    if not all(self.value_at(add(g, c)) == self.value_at(add(g, other)) for g in reps):
                        collision = True
                        break
                else:
                    views[key] = c
            if not collision:
                return r
            r += 1

    def is_valid(self, spec):
        """Is the induced configuration a point of the subshift?"""
        if spec.is_product():
            x = PeriodicConfig(self.lattice, {c: s[0] for c, s in self.values.items()})
            y = PeriodicConfig(self.lattice, {c: s[1] for c, s in self.values.items()})
            return x.is_valid(spec.factors[0]) and y.is_valid(spec.factors[1])
        for s in self.values.values():
            if s not in spec.alphabet.symbols:
                return False
        if spec.kind == "full":
            return True
        if spec.kind == "sft":
            for c in self.values:
                for f in spec.forbidden:
                    if self.matches(f, c):
                        return False
            return True
        # sofic: the periodic word must label a cycle in the presentation
        n = self.lattice.index
        word = tuple(self.value_at((i,)) for i in range(n))
        states, edges = spec.presentation
        rel = {(a, a) for a in states}
        reach = {}
        for a, b, l in edges:
            reach.setdefault(l, set()).add((a, b))
        for s in word:
            step = reach.get(s, set())
            rel = {(a, c) for (a, b) in rel for (b2, c) in step if b == b2}
            if not rel:
                return False
        # need a cycle in the relation rel (viewed as a digraph on states)
        cur = rel
        for _ in range(len(states)):
            if any(a == b for a, b in cur):
                return True
            cur = {(a, c) for (a, b) in cur for (b2, c) in rel if b == b2}
        return False

    def to_json(self):
        return {
            "basis": [list(r) for r in self.lattice.basis],
            "values": [
                {"pos": list(c), "sym": _sym_to_json(self.values[c])}
                for c in sorted(self.values, key=point_key)
            ],
        }

    @classmethod
    def from_json(cls, doc):
        lat = Lattice(tuple(tuple(r) for r in doc["basis"]))
        return cls(lat, {tuple(v["pos"]): _sym_from_json(v["sym"]) for v in doc["values"]})

    def __eq__(self, other):
        return (
            isinstance(other, PeriodicConfig)
            and self.lattice == other.lattice
            and self.values == other.values
        )

    def __hash__(self):
        return hash((self.lattice, tuple(sorted(self.values.items()))))

    def __repr__(self):
        return f"PeriodicConfig(index={self.lattice.index})"


def pair_config(x, y):
    """Zip two configurations on the same lattice into a product-track config."""
    if x.lattice != y.lattice:
        raise SpecError("tracks must share the period lattice")
    return PeriodicConfig(x.lattice, {c: (x.values[c], y.values[c]) for c in x.values})


def split_config(z):
    x = PeriodicConfig(z.lattice, {c: s[0] for c, s in z.values.items()})
    y = PeriodicConfig(z.lattice, {c: s[1] for c, s in z.values.items()})
    return x, y


# -- small-orbit decision procedure --------------------------------------


@dataclass(frozen=True)
class SmallOrbitTest:
    """Decision data for "orbit size at most n": the finitely many lattices
    of index <= n; a configuration has orbit <= n iff it is periodic under
    one of them.  window_radius bounds the cells any single test inspects."""

    n: int
    dimension: int
    lattices: tuple

    @property
    def window_radius(self):
        r = 0
        for lat in self.lattices:
            for g in lat.generators():
                r = max(r, sum(abs(v) for v in g))
        return r

    def accepts(self, config):
        for lat in self.lattices:
            gens = lat.generators()
            if all(
                config.value_at(add(c, v)) == config.values[c]
                for v in gens
                for c in config.values
            ):
                return True
        return False


def small_orbit_clopen(spec, n):
    if n < 1:
        raise SpecError("orbit bound must be >= 1")
    return SmallOrbitTest(n, spec.dimension, tuple(lattices_up_to_index(n, spec.dimension)))


def clopen_has_totally_periodic_point(spec, cl, max_index):
    """Search for a totally periodic point lying in the clopen set.

    Returns a witness PeriodicConfig or None.  Exhaustive over period
    lattices of index <= max_index (bounded search, not a disproof).
    """
    d = spec.dimension
    for lat in lattices_up_to_index(max_index, d):
        if len(spec.alphabet) ** lat.index > spec.budget:
            continue
        reps = lat.coset_reps()
        for fill in iproduct(spec.alphabet.symbols, repeat=len(reps)):
            cfg = PeriodicConfig(lat, dict(zip(reps, fill)))
            if cfg.is_valid(spec) and cfg.in_clopen(cl, origin(d)):
                return cfg
    return None
