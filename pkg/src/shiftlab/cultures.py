"""The colony-merging process on periodic configurations.

A culture is a partition of the group into finite colonies, one brain cell
per colony.  On a torus (Z^d modulo a finite-index lattice) the process is
simulated exactly: each colony class is stored with its brain's canonical
position and the integer offsets of its cells, so colony shapes, sizes and
touching are those of the true Z^d process, not of its quotient.

Each step of the process is indexed by a triple (k, h, p):

  substep 1 (cardinality): every brain whose colony has exactly k cells
  fuses into the colony of the cell h away, provided that colony is strictly
  larger and the two touch;

  substep 2 (pattern): every brain whose local pattern on the r-ball equals
  p fuses into the brain h away, provided that cell is a brain with a
  strictly larger pattern in the pattern order and the colonies touch.

run_process follows the deterministic stage schedule but jumps between
firing slots: from the current schedule position it computes, per firing
parameter family, the literal next slot, executes the earliest one, and
stops at the first provably stable culture.  Skipped slots are no-ops, so
the trace equals the literal slot-by-slot run restricted to firing steps.
"""

from __future__ import annotations

from dataclasses import dataclass

from .geometry import (
    GenSet,
    add,
    ball,
    connected as connected_set,
    default_gens,
    lattice_from_generators,
    neg,
    norm1,
    origin,
    point_key,
    sub,
)
from .subshifts import SpecError, safe_check


class Diverged(Exception):
    """A colony's lift met one of its own lattice translates."""


class MergeError(Exception):
    """A merge batch violates the good-merge hypotheses."""


@dataclass(frozen=True)
class Colony:
    brain: tuple  # canonical residue of the brain cell
    cells: tuple  # tuple of (residue, offset) pairs; offset of the brain is 0

    @property
    def size(self):
        return len(self.cells)

    def offsets(self):
        return tuple(o for _, o in self.cells)

    def lift(self):
        """Cell positions of the canonical copy in Z^d."""
        return tuple(add(self.brain, o) for _, o in self.cells)

    def cellmap(self):
        return dict(self.cells)


class Culture:
    """Value-semantics culture on a torus; merges return new cultures."""

    def __init__(self, lattice, colonies):
        self.lattice = lattice
        self.colonies = dict(colonies)  # id -> Colony
        self.cell_class = {}
        for cid, col in self.colonies.items():
            for r, o in col.cells:
                if r in self.cell_class:
                    raise SpecError("colonies overlap")
                self.cell_class[r] = cid
        if len(self.cell_class) != lattice.index:
            raise SpecError("colonies must partition the torus")
        for cid, col in self.colonies.items():
            for r, o in col.cells:
                if lattice.reduce(add(col.brain, o)) != r:
                    raise Diverged("colony offsets are inconsistent with the lattice")

    @classmethod
    def discrete(cls, lattice):
        d = lattice.dim
        cols = {}
        for i, r in enumerate(lattice.coset_reps()):
            cols[i] = Colony(r, ((r, origin(d)),))
        return cls(lattice, cols)

    def brains(self):
        return tuple(sorted((c.brain for c in self.colonies.values()), key=point_key))

    def colony_of_cell(self, g):
        """Colony id and translate offset containing the Z^d cell g."""
        r = self.lattice.reduce(g)
        cid = self.cell_class[r]
        col = self.colonies[cid]
        o = col.cellmap()[r]
        # the containing translate has its brain at g - o
        return cid, sub(g, o)

    def shapes(self):
        return {cid: tuple(sorted(c.offsets(), key=point_key)) for cid, c in self.colonies.items()}

    def colony_count(self):
        return len(self.colonies)

    def to_json(self):
        cells = []
        for r in sorted(self.cell_class, key=point_key):
            cid = self.cell_class[r]
            col = self.colonies[cid]
            cells.append(
                {
                    "pos": list(r),
                    "colony": list(col.brain),
                    "brain": r == col.brain,
                    "offset": list(col.cellmap()[r]),
                }
            )
        shapes = {
            ",".join(map(str, col.brain)): [list(o) for o in sorted(col.offsets(), key=point_key)]
            for col in self.colonies.values()
        }
        return {"basis": [list(row) for row in self.lattice.basis], "cells": cells, "shapes": shapes}


def validate_culture(culture, gens=None):
    """Check the six coding axioms of a culture on its torus.

    The code of a culture assigns each cell a brain bit and the relative
    shape of its colony; the axioms say: finitely many shapes (automatic on
    a torus); every shape contains 0; the shapes are symmetric and
    transitive as a relation; every colony sees a brain; a brain sees no
    second brain.
    """
    lat = culture.lattice
    shapes = {}
    brain_bit = {}
    for cid, col in culture.colonies.items():
        cm = col.cellmap()
        offs = set(cm.values())
        for r, o in col.cells:
            shapes[r] = {sub(o2, o) for o2 in offs}
            brain_bit[r] = r == col.brain
    for r, y in shapes.items():
        if origin(lat.dim) not in y:
            return False
        for h in y:
            r2 = lat.reduce(add(r, h))
            if neg(h) not in shapes[r2]:
                return False
            for k in shapes[r2]:
                if add(k, h) not in y:
                    return False
        if not any(brain_bit[lat.reduce(add(r, h))] and _same_colony(culture, r, h) for h in y):
            return False
        if brain_bit[r]:
            for h in y:
                if h != origin(lat.dim) and brain_bit[lat.reduce(add(r, h))] and _same_colony(culture, r, h):
                    return False
    return True


def _same_colony(culture, r, h):
    """Is the cell at offset h from r in the colony of r (in Z^d, not mod L)?"""
    cid, tbrain = culture.colony_of_cell(r)
    col = culture.colonies[cid]
    o = col.cellmap()[r]
    return add(o, h) in set(col.offsets())


@dataclass(frozen=True)
class MergeBatch:
    """Pairs (absorbed colony id, absorbing colony id)."""

    pairs: tuple


def good_merge(culture, batch):
    """Execute a batch of fusions; the hypotheses that make the transitive
    closure well behaved are checked: an absorbing colony is never absorbed,
    no colony is absorbed twice, every pair touches."""
    absorbed = [a for a, _ in batch.pairs]
    absorbing = {b for _, b in batch.pairs}
    for a, b in batch.pairs:
        if a == b:
            raise MergeError(f"colony {a} paired with itself")
        if a in absorbing:
            raise MergeError(f"colony {a} both absorbed and absorbing")
    if len(set(absorbed)) != len(absorbed):
        dup = next(a for a in absorbed if absorbed.count(a) > 1)
        raise MergeError(f"colony {dup} absorbed twice")
    gens = default_gens(culture.lattice.dim)
    assignments = []
    for a, b in batch.pairs:
        placement = _touch_placement(culture, a, b, gens)
        if placement is None:
            raise MergeError(f"colonies {a} and {b} do not touch")
        assignments.append((a, b, placement))
    return _execute_merges(culture, assignments)


def _touch_placement(culture, a, b, gens):
    """Smallest brain position of a translate of colony b touching colony a."""
    ca = culture.colonies[a]
    candidates = set()
    for _, oa in ca.cells:
        pa = add(ca.brain, oa)
        for s in gens.points:
            q = add(pa, s)
            cid, tbrain = culture.colony_of_cell(q)
            if cid == b:
                candidates.add(tbrain)
    if not candidates:
        return None
    return min(candidates, key=point_key)


def _execute_merges(culture, assignments):
    """assignments: (absorbed id, target id, target translate brain position).

    The absorbed colony's canonical copy fused into the translate of the
    target whose brain sits at the given Z^d position; each absorbed cell at
    brain_a + o therefore lands at offset (brain_a + o) - tbrain from the
    target's brain.  Everything is rebased to the target's canonical copy.
    """
    by_target = {}
    consumed = set()
    for a, b, tbrain in assignments:
        by_target.setdefault(b, []).append((a, tbrain))
        consumed.add(a)
    new_colonies = {}
    for cid, col in culture.colonies.items():
        if cid in consumed:
            continue
        if cid in by_target:
            cells = dict(col.cells)
            for a, tbrain in by_target[cid]:
                col_a = culture.colonies[a]
                delta = sub(col_a.brain, tbrain)
                for r, o in col_a.cells:
                    if r in cells:
                        raise Diverged("merged colony wraps the torus")
                    cells[r] = add(delta, o)
            col = Colony(col.brain, tuple(sorted(cells.items(), key=lambda it: point_key(it[0]))))
        new_colonies[cid] = col
    return Culture(culture.lattice, new_colonies)


# -- pattern order and views ----------------------------------------------


def pattern_order_key(spec, gens, pattern):
    """Canonical total order on r-ball patterns: symbols by alphabet order,
    cells by (word length, coordinate lexicographic)."""
    cells = pattern.domain()
    r = max((norm1(c) for c in cells), default=0)
    if cells != ball(r, gens):
        raise SpecError("pattern domain must be a ball around the origin")
    return r, tuple(spec.alphabet.index(pattern[c]) for c in ball(r, gens))


def _view(spec, x, cell, r, gens):
    return tuple(spec.alphabet.index(x.value_at(add(cell, b))) for b in ball(r, gens))


# -- substeps --------------------------------------------------------------


def _touches(cells_a, cells_b, gens):
    sa = set(cells_a)
    for c in cells_b:
        for s in gens.points:
            if add(c, s) in sa:
                return True
    return False


def _substep_cardinality(culture, k, h, gens):
    """All simultaneous cardinality fusions for (k, h); returns assignments."""
    assignments = []
    for cid in sorted(culture.colonies, key=lambda c: point_key(culture.colonies[c].brain)):
        col = culture.colonies[cid]
        if col.size != k:
            continue
        target = add(col.brain, h)
        tid, tbrain = culture.colony_of_cell(target)
        tcol = culture.colonies[tid]
        if tid == cid and tbrain == col.brain:
            continue
        if tcol.size <= k:
            continue
        tcells = tuple(add(tbrain, o) for o in tcol.offsets())
        if _touches(col.lift(), tcells, gens):
            assignments.append((cid, tid, tbrain))
    return assignments


def _substep_pattern(culture, spec, x, h, r, p_key, gens):
    """All simultaneous pattern fusions for (h, p); returns assignments."""
    assignments = []
    for cid in sorted(culture.colonies, key=lambda c: point_key(culture.colonies[c].brain)):
        col = culture.colonies[cid]
        if _view(spec, x, col.brain, r, gens) != p_key:
            continue
        target = add(col.brain, h)
        tid, tbrain = culture.colony_of_cell(target)
        tcol = culture.colonies[tid]
        if target != tbrain:
            continue  # the landing cell must itself be a brain
        if tid == cid and tbrain == col.brain:
            continue
        if _view(spec, x, tcol.brain, r, gens) <= p_key:
            continue
        tcells = tuple(add(tbrain, o) for o in tcol.offsets())
        if _touches(col.lift(), tcells, gens):
            assignments.append((cid, tid, tbrain))
    return assignments


def _run_step(culture, spec, x, k, h, r, p_key, gens):
    """Both substeps of one triple; returns the new culture and the fusion
    records as (absorbed brain, target translate brain) pairs."""
    card = _substep_cardinality(culture, k, h, gens)
    card_rec = [(culture.colonies[a].brain, tbrain) for a, _t, tbrain in card]
    if card:
        culture = _execute_merges(culture, card)
    pat = _substep_pattern(culture, spec, x, h, r, p_key, gens)
    pat_rec = [(culture.colonies[a].brain, tbrain) for a, _t, tbrain in pat]
    if pat:
        culture = _execute_merges(culture, pat)
    return culture, card_rec, pat_rec


def process_step(culture, spec, x, triple, gens=None):
    """One step (both substeps) for the triple (k, h, p); returns the new
    culture and the records of fusions that fired."""
    gens = gens or default_gens(culture.lattice.dim)
    k, h, pattern = triple
    r, p_key = pattern_order_key(spec, gens, pattern)
    return _run_step(culture, spec, x, k, tuple(h), r, p_key, gens)


@dataclass(frozen=True)
class TripleSchedule:
    """Deterministic stage schedule.

    Stage s runs k = 1..s, then h over ball(s) in sorted order, then r =
    0..s with every r-ball pattern of the ambient language in pattern order.
    Every triple recurs in all later stages, so each is attempted infinitely
    often.  A slot is (stage, k, h-key, r, p-key); the helpers below compute
    the first slot of a triple family strictly after a given slot, which is
    what lets run_process skip provably idle slots without reordering."""

    gens: GenSet
    stage_cap: int = 10_000

    def key(self, k, h, r, p_key):
        s0 = max(k, norm1(h), r, 1)
        return (s0, k, point_key(h), r, p_key)


def _min_view_key(spec, gens, r):
    """Pattern-order minimum of the language on the r-ball."""
    cells = ball(r, gens)
    partial = {}
    out = []
    from .subshifts import Pattern as _P, extendable as _ext

    for c in cells:
        for idx, s in enumerate(spec.alphabet.symbols):
            partial[c] = s
            if _ext(spec, _P(partial)):
                out.append(idx)
                break
            del partial[c]
        else:
            raise SpecError("empty language on the ball")
    return tuple(out)


def _next_view_key(spec, gens, r, p_key):
    """Pattern-order successor of p_key in the language on the r-ball, or
    None when p_key is the maximum."""
    cells = ball(r, gens)
    syms = spec.alphabet.symbols
    from .subshifts import Pattern as _P, extendable as _ext

    for i in range(len(cells) - 1, -1, -1):
        prefix = {cells[j]: syms[p_key[j]] for j in range(i)}
        for idx in range(p_key[i] + 1, len(syms)):
            prefix[cells[i]] = syms[idx]
            if _ext(spec, _P(prefix)):
                # complete minimally
                out = list(p_key[:i]) + [idx]
                partial = dict(prefix)
                for j in range(i + 1, len(cells)):
                    for idx2, s in enumerate(syms):
                        partial[cells[j]] = s
                        if _ext(spec, _P(partial)):
                            out.append(idx2)
                            break
                        del partial[cells[j]]
                return tuple(out)
        prefix.pop(cells[i], None)
    return None


def _slot_after_pattern(spec, gens, pos, k, kh):
    """First slot of the (k, h) block strictly after pos, inside pos's
    stage; pos is known to sit inside that block."""
    stage, _k, _kh, r, p = pos
    succ = _next_view_key(spec, gens, r, p)
    if succ is not None:
        return (stage, k, kh, r, succ)
    if r + 1 <= stage:
        return (stage, k, kh, r + 1, _min_view_key(spec, gens, r + 1))
    return None


def _next_slot_cardinality(spec, gens, pos, k, h):
    """First schedule slot at or after pos whose step runs substep one with
    parameters (k, h)."""
    kh = point_key(h)
    m = max(k, norm1(h), 1)
    min0 = _min_view_key(spec, gens, 0)
    if pos is None:
        return (m, k, kh, 0, min0)
    stage = pos[0]
    if stage >= m:
        if (k, kh) > (pos[1], pos[2]):
            return (stage, k, kh, 0, min0)
        if (k, kh) == (pos[1], pos[2]):
            nxt = _slot_after_pattern(spec, gens, pos, k, kh)
            if nxt is not None:
                return nxt
    return (max(m, stage + 1), k, kh, 0, min0)


def _next_slot_pattern(spec, gens, pos, h, r, p_key):
    """First schedule slot at or after pos whose step runs substep two with
    parameters (h, r, p)."""
    kh = point_key(h)
    m = max(1, norm1(h), r)
    if pos is None:
        return (m, 1, kh, r, p_key)
    stage = pos[0]
    if stage >= m:
        for k in range(1, stage + 1):
            cand = (stage, k, kh, r, p_key)
            if cand > pos:
                return cand
    return (max(m, stage + 1), 1, kh, r, p_key)


@dataclass
class ProcessResult:
    culture: object
    status: str  # stable | diverged | budget
    trace: list
    steps: int

    def trace_json(self):
        return {"status": self.status, "steps": self.steps, "events": self.trace}


def _candidates(culture, spec, x, gens, sep_radius, extra_radii=None):
    """All parameter families whose substep fires on the current culture.

    Covers every firing triple: a firing cardinality merge needs a brain g
    with |colony(g)| = k and h + g inside a larger touching colony, so (k, h)
    is found by scanning cells of touching larger colonies; a firing pattern
    merge needs touching colonies whose brains see different patterns at some
    radius, found from the touching-pair scan and the separation radius.
    Returns ("card", k, h) and ("pat", h, r, p_key) entries.
    """
    lat = culture.lattice
    extra_radii = extra_radii or set()
    out = []
    # touching colony-translate pairs via the adjacency scan
    pair_seen = set()
    pairs = []
    for cid in culture.colonies:
        col = culture.colonies[cid]
        for p in col.lift():
            for s in gens.nonzero():
                q = add(p, s)
                oid, obrain = culture.colony_of_cell(q)
                if oid == cid and obrain == col.brain:
                    continue
                key = (cid, oid, obrain)
                if key not in pair_seen:
                    pair_seen.add(key)
                    pairs.append((cid, oid, obrain))
    for cid, oid, obrain in pairs:
        col = culture.colonies[cid]
        ocol = culture.colonies[oid]
        # cardinality candidates: col absorbed into the translate of ocol
        if ocol.size > col.size:
            k = col.size
            for o in ocol.offsets():
                h = sub(add(obrain, o), col.brain)
                out.append(("card", k, h))
        # pattern candidates between the two brains; beyond the separation
        # radius the comparison is decided at a fixed cell, so only radii up
        # to max(|h|, separation) plus the current slot's radius can host the
        # earliest firing slot
        if oid == cid:
            continue  # translates of one colony share the brain's view
        g, g2 = col.brain, obrain
        h = sub(g2, g)
        bound = max(1, norm1(h), sep_radius)
        radii = set(range(0, bound + 1)) | extra_radii
        for r in sorted(radii):
            va = _view(spec, x, g, r, gens)
            vb = _view(spec, x, culture.colonies[oid].brain, r, gens)
            if va == vb:
                continue
            if va < vb:
                out.append(("pat", h, r, va))
            else:
                out.append(("pat", neg(h), r, vb))
    return out


def run_process(spec, x, preprocessing=None, schedule=None, budget="auto", gens=None):
    """Run the process from the discrete culture (after optional
    preprocessing) until provably stable, diverged, or out of budget.

    Stability is certified by the absence of firing triples: all touching
    colony pairs have equal sizes and their brains see the same pattern up
    to the orbit separation radius, which bounds every radius and offset a
    later triple could use.
    """
    if gens is None:
        gens = schedule.gens if schedule else default_gens(x.lattice.dim)
    schedule = schedule or TripleSchedule(gens)
    if preprocessing is None:
        culture = Culture.discrete(x.lattice)
    elif isinstance(preprocessing, Culture):
        culture = preprocessing
    else:
        kind = preprocessing[0]
        if kind == "s_merge":
            culture = s_merge_preprocess(spec, x, preprocessing[1], preprocessing[2], gens=gens)
        elif kind == "positive_scount":
            culture = positive_scount_preprocess(spec, x, preprocessing[1], preprocessing[2], gens=gens)
        else:
            raise SpecError(f"unknown preprocessing {kind!r}")
    sep = x.separation_radius(gens)
    max_steps = x.lattice.index if budget == "auto" else int(budget)
    trace = []
    steps = 0
    status = "stable"
    pos = None
    while True:
        extra = set() if pos is None else {pos[3], pos[3] + 1}
        try:
            cands = _candidates(culture, spec, x, gens, sep, extra)
        except Diverged:
            status = "diverged"
            break
        if not cands:
            status = "stable"
            break
        if steps >= max_steps:
            status = "budget"
            break
        slots = []
        for cand in cands:
            if cand[0] == "card":
                _kind, k, h = cand
                slots.append(_next_slot_cardinality(spec, gens, pos, k, h))
            else:
                _kind, h, r, p_key = cand
                slots.append(_next_slot_pattern(spec, gens, pos, h, r, p_key))
        slot = min(slots)
        stage, k, kh, r, p_key = slot
        h = kh[1]
        try:
            culture, card_rec, pat_rec = _run_step(culture, spec, x, k, h, r, p_key, gens)
        except Diverged:
            status = "diverged"
            break
        pos = slot
        steps += 1
        trace.append(
            {
                "stage": stage,
                "k": k,
                "h": list(h),
                "r": r,
                "pattern": list(p_key),
                "cardinality": [[list(a), list(b)] for a, b in card_rec],
                "pattern_merges": [[list(a), list(b)] for a, b in pat_rec],
            }
        )
    return ProcessResult(culture, status, trace, steps)


# -- preprocessing ----------------------------------------------------------


def s_merge_preprocess(spec, x, clopen, s_set, gens=None):
    """Culture after merging S + g into the colony of g at every occurrence
    g of the clopen set, brains kept at the occurrences; everything else
    stays a singleton.  Requires S safe for the clopen set and 0 in S."""
    gens = gens or default_gens(x.lattice.dim)
    lat = x.lattice
    d = lat.dim
    s_pts = tuple(sorted((tuple(s) for s in s_set), key=point_key))
    if origin(d) not in s_pts:
        raise SpecError("the merge window must contain the origin")
    if not safe_check(spec, clopen, s_pts):
        raise SpecError("the window is not safe for the clopen set")
    occurrences = x.occurrences(clopen)
    taken = {}
    for g in occurrences:
        for s in s_pts:
            r = lat.reduce(add(s, g))
            if r in taken:
                raise Diverged("safe-merge windows overlap on the torus")
            taken[r] = (g, s)
    colonies = {}
    cid = 0
    for g in occurrences:
        cells = tuple(sorted(((lat.reduce(add(s, g)), s) for s in s_pts), key=lambda it: point_key(it[0])))
        colonies[cid] = Colony(g, cells)
        cid += 1
    for r in lat.coset_reps():
        if r not in taken:
            colonies[cid] = Colony(r, ((r, origin(d)),))
            cid += 1
    return Culture(lat, colonies)


def positive_scount_preprocess(spec, x, clopen, s_set, gens=None, max_stages=64):
    """Preprocessing giving every colony a positive S-count: safe merges at
    the clopen set's occurrences, then greedy absorption at cells whose
    recoded symbol (the pattern at the separation radius) beats all cells at
    S - S offsets, then cardinality-only stages until no singleton remains.

    Requires that no nontrivial period of x lies in S - S (otherwise the
    greedy has unresolvable ties) and that S is safe for the clopen set.
    """
    gens = gens or default_gens(x.lattice.dim)
    lat = x.lattice
    d = lat.dim
    s_pts = tuple(sorted((tuple(s) for s in s_set), key=point_key))
    if origin(d) not in s_pts:
        raise SpecError("the merge window must contain the origin")
    if len(s_pts) == 1:
        return Culture.discrete(lat)
    diffs = sorted({sub(a, b) for a in s_pts for b in s_pts} - {origin(d)}, key=point_key)
    stab = x.stabilizer()
    for t in diffs:
        if stab.contains(t):
            raise SpecError("input has a period inside S - S")
    culture = s_merge_preprocess(spec, x, clopen, s_pts, gens=gens)
    rho = x.separation_radius(gens)
    merged = {r for r, cid in culture.cell_class.items() if culture.colonies[cid].size > 1}
    views = {r: _view(spec, x, r, rho, gens) for r in lat.coset_reps()}
    # greedy absorption in descending view order; strict local maxima only
    new_colonies = dict(culture.colonies)
    next_id = max(new_colonies) + 1 if new_colonies else 0
    for value in sorted(set(views.values()), reverse=True):
        for r in sorted((r for r, v in views.items() if v == value), key=point_key):
            if any(views[lat.reduce(add(r, t))] >= value for t in diffs):
                continue
            window = [lat.reduce(add(s, r)) for s in s_pts]
            if any(w in merged for w in window):
                continue
            # absorb the singletons of S + r into a colony with brain r
            drop = []
            for cid, col in new_colonies.items():
                if col.size == 1 and col.brain in window:
                    drop.append(cid)
            cells = tuple(sorted(((lat.reduce(add(s, r)), s) for s in s_pts), key=lambda it: point_key(it[0])))
            for cid in drop:
                del new_colonies[cid]
            new_colonies[next_id] = Colony(r, cells)
            next_id += 1
            merged.update(window)
    culture = Culture(lat, new_colonies)
    # cardinality stages until no singleton colony remains
    for stage in range(1, max_stages + 1):
        if all(c.size > 1 for c in culture.colonies.values()):
            break
        for k in range(1, stage + 1):
            for h in ball(stage, gens):
                merges = _substep_cardinality(culture, k, h, gens)
                if merges:
                    culture = _execute_merges(culture, merges)
    if any(c.size == 1 for c in culture.colonies.values()):
        raise SpecError("preprocessing failed to absorb every singleton")
    for col in culture.colonies.values():
        if s_count(col.lift(), s_pts) < 1:
            raise SpecError("preprocessing produced a colony without the window")
    return culture


def s_count(cells, s_set):
    """Number of positions whose whole S-translate fits inside the set."""
    cells = set(tuple(c) for c in cells)
    s_pts = [tuple(s) for s in s_set]
    candidates = {sub(c, s) for c in cells for s in s_pts}
    return sum(1 for g in candidates if all(add(s, g) in cells for s in s_pts))


# -- stability verification -------------------------------------------------


@dataclass
class StableReport:
    ok: bool
    failures: list
    brain_lattice: object
    colony_size: int
    shape: tuple
    matches_true_stabilizer: bool

    def to_json(self):
        return {
            "ok": self.ok,
            "failures": self.failures,
            "brain_lattice": [list(r) for r in self.brain_lattice.basis] if self.brain_lattice else None,
            "colony_size": self.colony_size,
            "shape": [list(o) for o in self.shape],
            "matches_true_stabilizer": self.matches_true_stabilizer,
        }


def verify_stable(culture, x, gens=None):
    """Check the structure of a stable culture: brains form one coset of a
    lattice K whose index is the colony size, all colonies share a single
    connected shape R of coset representatives, and x is K-periodic; also
    reports whether K is exactly the stabilizer of x."""
    gens = gens or default_gens(x.lattice.dim)
    lat = x.lattice
    failures = []
    brains = culture.brains()
    b0 = brains[0]
    try:
        K = lattice_from_generators(
            list(lat.generators()) + [sub(b, b0) for b in brains[1:]], lat.dim
        )
    except ValueError:
        K = lat
        failures.append("brain differences do not span a finite-index lattice")
    expected = lat.index // K.index
    if len(brains) != expected:
        failures.append("brains are not a single coset of the brain lattice")
    else:
        coset = {lat.reduce(add(b0, kg)) for kg in _k_elements(K, lat)}
        if set(brains) != coset:
            failures.append("brains are not a single coset of the brain lattice")
    sizes = {col.size for col in culture.colonies.values()}
    size = max(sizes)
    if sizes != {K.index}:
        failures.append("colony sizes differ from the brain lattice index")
    shapes = {tuple(sorted(col.offsets(), key=point_key)) for col in culture.colonies.values()}
    shape = sorted(shapes)[0]
    if len(shapes) != 1:
        failures.append("colonies carry more than one shape")
    if not connected_set(shape, gens):
        failures.append("the colony shape is not connected")
    reduced = {K.reduce(o) for o in shape}
    if len(reduced) != len(shape) or len(shape) != K.index:
        failures.append("the colony shape is not a set of coset representatives")
    for kg in K.generators():
        if any(x.value_at(add(c, kg)) != x.values[c] for c in x.values):
            failures.append("x is not periodic under the brain lattice")
            break
    matches = K == x.stabilizer()
    return StableReport(not failures, failures, K, size, shape, matches)


def _k_elements(K, lat):
    """Elements of K covering all K-cosets inside the torus of lat."""
    out = []
    if lat.dim == 1:
        (n,) = lat.basis[0]
        (k,) = K.basis[0]
        for i in range(0, n, k):
            out.append((i,))
        return out
    (a, b), (_, c) = lat.basis
    for i in range(-a * c, a * c + 1):
        for j in range(-a * c, a * c + 1):
            g = (i, j)
            if K.contains(g):
                out.append(g)
    return out
