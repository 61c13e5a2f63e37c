"""Exchangeability of patterns on a 1D subshift and the restricted
permutation groups it induces.

Two patterns with the same finite domain are exchangeable when swapping one
for the other inside any configuration never creates a forbidden pattern.
For a window-m SFT this only depends on the m-1 cells flanking each interval
of the domain, so the equivalence is computed exactly by enumerating flanking
words (left/right ones filtered by one-sided extendability) and comparing
local validity of the assembled words.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iproduct

from .perms import Perm, PermGroup, ProductSpace
from .subshifts import BudgetError, Pattern, SpecError, language, _graph_for


def _intervals(domain):
    cells = sorted({c[0] for c in domain})
    if [c for c in domain if len(c) != 1]:
        raise SpecError("exchangeability domains are 1D")
    runs = []
    start = prev = cells[0]
    for c in cells[1:]:
        if c == prev + 1:
            prev = c
        else:
            runs.append((start, prev))
            start = prev = c
    runs.append((start, prev))
    return tuple(runs)


@dataclass(frozen=True)
class ExchangeabilityTable:
    """Partition of language(Y, D) into maximal exchangeable sets."""

    domain: tuple
    classes: tuple  # tuple of tuples of Patterns

    def class_of(self, pattern):
        for cls in self.classes:
            if pattern in cls:
                return cls
        raise KeyError(pattern)

    def min_class_size(self):
        return min(len(c) for c in self.classes)

    def all_patterns(self):
        return tuple(p for cls in self.classes for p in cls)

    def to_json(self):
        return {
            "domain": [list(c) for c in self.domain],
            "classes": [[p.to_json() for p in cls] for cls in self.classes],
        }


def exchange_classes(spec, domain):
    """Exchangeability classes of the patterns on the given domain.

    The domain must be a union of integer intervals whose pairwise gaps have
    at least window-1 cells; anything else is rejected rather than
    approximated.
    """
    if spec.dimension != 1:
        raise SpecError("exchangeability is implemented for 1D subshifts")
    if spec.kind not in ("full", "sft"):
        raise SpecError("exchangeability needs an SFT or full shift")
    domain = tuple(sorted(tuple(c) for c in domain))
    pats = language(spec, domain)
    (m,) = spec.window()
    if spec.kind == "full" or m == 1:
        return ExchangeabilityTable(domain, (tuple(pats),))
    runs = _intervals(domain)
    for (s1, e1), (s2, e2) in zip(runs, runs[1:]):
        if s2 - e1 - 1 < m - 1:
            raise SpecError("domain intervals closer than the SFT window allow")
    g = _graph_for(spec)
    lefts = sorted(g.left_extendable)
    rights = sorted(g.right_extendable)
    syms = spec.alphabet.symbols
    gaps = [s2 - e1 - 1 for (s1, e1), (s2, e2) in zip(runs, runs[1:])]
    total = len(lefts) * len(rights)
    for gp in gaps:
        total *= len(syms) ** gp
    if total > spec.budget:
        raise BudgetError("context enumeration exceeds budget")
    gap_words = [list(iproduct(syms, repeat=gp)) for gp in gaps]

    def signature(pat):
        sig = []
        for u in lefts:
            for v in rights:
                for mids in iproduct(*gap_words):
                    word = list(u)
                    for i, (s, e) in enumerate(runs):
                        word.extend(pat[(c,)] for c in range(s, e + 1))
                        if i < len(mids):
                            word.extend(mids[i])
                    word.extend(v)
                    from .subshifts import word_pattern

                    sig.append(spec.locally_allowed(word_pattern(word)))
        return tuple(sig)

    groups = {}
    for p in pats:
        groups.setdefault(signature(p), []).append(p)
    classes = tuple(tuple(sorted(cls, key=lambda p: p.items)) for cls in groups.values())
    classes = tuple(sorted(classes, key=lambda cls: cls[0].items))
    return ExchangeabilityTable(domain, classes)


def min_class_size(spec, domain):
    return exchange_classes(spec, domain).min_class_size()


def lmfp_check(spec, max_window):
    """Search interval domains [0, L) for one where every class has size >= 2.

    Returns (True, domain) on the first witness, else (False, None).  A False
    is a bounded-search result, not a disproof.
    """
    for length in range(1, max_window + 1):
        domain = tuple((i,) for i in range(length))
        if min_class_size(spec, domain) >= 2:
            return True, domain
    return False, None


class TrackPermutation:
    """Permutation of language(Y, S) given as an explicit pattern mapping."""

    def __init__(self, domain, mapping):
        self.domain = tuple(sorted(tuple(c) for c in domain))
        self.mapping = dict(mapping)
        srcs = set(self.mapping)
        dsts = set(self.mapping.values())
        if srcs != dsts:
            raise SpecError("mapping is not a permutation")

    @classmethod
    def identity(cls, spec, domain):
        pats = language(spec, domain)
        return cls(domain, {p: p for p in pats})

    @classmethod
    def from_cycles(cls, spec, domain, cycles):
        pats = language(spec, domain)
        mapping = {p: p for p in pats}
        for cyc in cycles:
            for i, p in enumerate(cyc):
                if p not in mapping:
                    raise SpecError("cycle pattern not in the language")
                mapping[p] = cyc[(i + 1) % len(cyc)]
        return cls(domain, mapping)

    def __call__(self, pattern):
        return self.mapping[pattern]

    def inverse(self):
        return TrackPermutation(self.domain, {v: k for k, v in self.mapping.items()})

    def compose(self, other):
        """self after other."""
        return TrackPermutation(self.domain, {k: self.mapping[v] for k, v in other.mapping.items()})

    def commutator(self, other):
        return self.inverse().compose(other.inverse()).compose(self).compose(other)

    def is_identity(self):
        return all(k == v for k, v in self.mapping.items())

    def respects(self, table):
        """Does the permutation stabilize every exchangeability class?"""
        for cls in table.classes:
            members = set(cls)
            for p in members:
                if self.mapping.get(p, p) not in members:
                    return False
        return True

    def parity_in_class(self, cls):
        members = sorted(cls, key=lambda p: p.items)
        idx = {p: i for i, p in enumerate(members)}
        images = [idx[self.mapping.get(p, p)] for p in members]
        space = ProductSpace([range(len(members))])
        return Perm(space, images).parity()

    def is_even_per_class(self, table):
        return all(self.parity_in_class(cls) == 0 for cls in table.classes)

    def __eq__(self, other):
        return (
            isinstance(other, TrackPermutation)
            and self.domain == other.domain
            and self.mapping == other.mapping
        )

    def __repr__(self):
        moved = {k: v for k, v in self.mapping.items() if k != v}
        return f"TrackPermutation({len(moved)} moved of {len(self.mapping)})"


def restricted_group_generators(table, even_only):
    """Generators of the group of class-preserving permutations.

    even_only: all 3-cycles inside each class (generating the product of the
    per-class alternating groups); otherwise also one transposition per class
    of size >= 2 (generating the product of the symmetric groups).
    """
    gens = []
    for cls in table.classes:
        members = list(cls)
        if len(members) >= 3:
            for i in range(len(members) - 2):
                for j in range(i + 1, len(members) - 1):
                    for k in range(j + 1, len(members)):
                        a, b, c = members[i], members[j], members[k]
                        gens.append(table_cycle_perm(table, [(a, b, c)]))
                        gens.append(table_cycle_perm(table, [(a, c, b)]))
        if not even_only and len(members) >= 2:
            gens.append(table_cycle_perm(table, [(members[0], members[1])]))
    return gens


def table_cycle_perm(table, cycles):
    """TrackPermutation given by cycles of patterns, fixing everything else."""
    mapping = {p: p for p in table.all_patterns()}
    for cyc in cycles:
        for i, p in enumerate(cyc):
            mapping[p] = cyc[(i + 1) % len(cyc)]
    return TrackPermutation(table.domain, mapping)


def restricted_group_order_check(table, even_only):
    """Build the generated group and compare its order to the product of the
    per-class factorials (halved per class when even_only)."""
    gens = restricted_group_generators(table, even_only)
    pats = table.all_patterns()
    space = ProductSpace([range(len(pats))])
    idx = {p: i for i, p in enumerate(pats)}
    perms = []
    for tp in gens:
        images = [idx[tp.mapping.get(p, p)] for p in pats]
        perms.append(Perm(space, images))
    expected = 1
    for cls in table.classes:
        f = 1
        for i in range(2, len(cls) + 1):
            f *= i
        expected *= max(1, f // 2) if even_only else f
    if not perms:
        return expected == 1, expected, 1
    order = PermGroup(perms, space).order()
    return order == expected, expected, order
