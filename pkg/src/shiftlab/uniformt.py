"""Uniform growth certification for the process on 1D subshifts.

The process is run on finite words with explicit unknown-boundary tracking:
cells outside the window (and cells whose preprocessing cannot be decided
from the window) are unknown, and a colony's state is reported only while
every datum a step's decision needs is inside the certified region.  What a
certified colony reports is therefore exactly what the infinite process
produces on every extension of the word.

Because merging only ever grows colonies and the window count of a set is
superadditive under disjoint unions, a certified count at time t0 is a valid
lower bound at every later time; the search below uses this monotonicity.
"""

from __future__ import annotations

from dataclasses import dataclass

from .geometry import ball, default_gens
from .subshifts import (
    SpecError,
    clopen_has_totally_periodic_point,
    language,
    safe_check,
)
from .cultures import s_count


@dataclass(frozen=True)
class UniformProcessParams:
    """Deterministic parameters of the tracked process variant: the merge
    window S (an integer interval containing 0), the greedy recoding radius,
    and the number of cardinality-only preprocessing stages."""

    s_cells: tuple
    greedy_radius: int = 1
    greedy_stages: int = 2

    def __post_init__(self):
        cells = tuple(sorted(c[0] for c in self.s_cells))
        if not cells or 0 not in cells:
            raise SpecError("merge window must contain 0")
        if cells != tuple(range(cells[0], cells[-1] + 1)):
            raise SpecError("window tracking needs an interval merge window")
        object.__setattr__(self, "s_cells", tuple((c,) for c in cells))

    def span(self):
        return self.s_cells[0][0], self.s_cells[-1][0]


class WindowCulture:
    """Tracked culture on a word window; colonies are certified intervals."""

    def __init__(self, lo, hi, symbols):
        self.lo = lo
        self.hi = hi
        self.symbols = dict(symbols)  # cell -> symbol, on [lo, hi]
        self.unknown = set()
        self.colony = {}  # id -> (brain, clo, chi)
        self.owner = {}  # cell -> id

    def is_unknown(self, c):
        return c < self.lo or c > self.hi or c in self.unknown

    def degrade(self, cid):
        brain, clo, chi = self.colony.pop(cid)
        for c in range(clo, chi + 1):
            del self.owner[c]
            self.unknown.add(c)

    def add_colony(self, brain, clo, chi):
        cid = (clo, chi, brain)
        self.colony[cid] = (brain, clo, chi)
        for c in range(clo, chi + 1):
            self.owner[c] = cid
        return cid

    def unknown_run_adjacent(self, clo, chi):
        """Maximal unknown runs touching the interval [clo, chi]; as spans
        (lo, hi) where hi may be +inf / lo -inf at window edges (None)."""
        runs = []
        c = clo - 1
        if self.is_unknown(c):
            left = c
            while self.is_unknown(left - 1) and left - 1 >= self.lo:
                left -= 1
            if left == self.lo or left - 1 < self.lo:
                left = None  # extends beyond the window
            runs.append((left, c))
        c = chi + 1
        if self.is_unknown(c):
            right = c
            while self.is_unknown(right + 1) and right + 1 <= self.hi:
                right += 1
            if right == self.hi or right + 1 > self.hi:
                right = None
            runs.append((c, right))
        return runs


def _match_clopen(win, clopen, g):
    """Does the clopen set occur at g?  True / False / None (undecidable)."""
    best = False
    for cyl in clopen.cylinders:
        status = True
        for c, sym in cyl.items:
            cell = c[0] + g
            if cell < win.lo or cell > win.hi:
                status = None
                break
            if win.symbols[cell] != sym:
                status = False
                break
        if status is True:
            return True
        if status is None:
            best = None
    return best


def _view_key(win, spec, g, r):
    """Index tuple of the r-ball pattern at g, or None if it leaves the window."""
    out = []
    for b in ball(r, default_gens(1)):
        cell = g + b[0]
        if cell < win.lo or cell > win.hi:
            return None
        out.append(spec.alphabet.index(win.symbols[cell]))
    return tuple(out)


def _partial_view_cmp(win, spec, g, r, p_key):
    """Compare the (possibly window-clipped) view at g against p_key in the
    pattern order; returns '<', '=', '>' or None when undecidable."""
    cells = ball(r, default_gens(1))
    for i, b in enumerate(cells):
        cell = g + b[0]
        if cell < win.lo or cell > win.hi:
            return None
        v = spec.alphabet.index(win.symbols[cell])
        if v != p_key[i]:
            return "<" if v < p_key[i] else ">"
    return "="


def preprocess_window(win, spec, clopen, params):
    """Tracked preprocessing: safe merges at occurrences, greedy absorption
    at strict local view-maxima, then the cardinality-only stages."""
    s_lo, s_hi = params.span()
    s_len = s_hi - s_lo + 1
    diffs = sorted(
        {a[0] - b[0] for a in params.s_cells for b in params.s_cells} - {0}
    )
    # occurrences: cells outside the window may also host merges reaching in
    merged = {}
    for g in range(win.lo - s_hi, win.hi - s_lo + 1):
        if g < win.lo or g > win.hi:
            status = None
        else:
            status = _match_clopen(win, clopen, g) if clopen.cylinders else False
        span = range(g + s_lo, g + s_hi + 1)
        if status is True:
            for c in span:
                if c < win.lo or c > win.hi:
                    # merge window leaves the word: the colony is uncertain
                    status = None
                    break
        if status is True:
            for c in span:
                if c in merged:
                    raise SpecError("unsafe merge windows overlap")
                merged[c] = g
        elif status is None:
            for c in span:
                if win.lo <= c <= win.hi:
                    win.unknown.add(c)
    for c in list(merged):
        if c in win.unknown:
            # an uncertain neighbouring merge makes this colony uncertain too
            g = merged[c]
            for c2 in range(g + s_lo, g + s_hi + 1):
                win.unknown.add(c2)
                merged.pop(c2, None)
    by_brain = {}
    for c, g in merged.items():
        by_brain.setdefault(g, []).append(c)
    for g, cells in by_brain.items():
        win.add_colony(g, min(cells), max(cells))
    if s_len == 1:
        for c in range(win.lo, win.hi + 1):
            if c not in win.owner and c not in win.unknown:
                win.add_colony(c, c, c)
        return win
    # greedy: strict local maxima of the radius-rho views absorb S + g
    rho = params.greedy_radius
    views = {}
    for g in range(win.lo, win.hi + 1):
        views[g] = _view_key(win, spec, g, rho)
    # cells whose own view is unknown might absorb at an unknown turn; only
    # an already-merged cell in their span rules the absorption out
    maybe_mergers = [g for g in range(win.lo - s_hi, win.hi - s_lo + 1) if g < win.lo or g > win.hi or views[g] is None]
    for g in maybe_mergers:
        span = [c for c in range(g + s_lo, g + s_hi + 1)]
        if any(win.lo <= c <= win.hi and c in win.owner for c in span):
            continue
        for c in span:
            if win.lo <= c <= win.hi:
                win.unknown.add(c)
    status = {}
    for c in range(win.lo, win.hi + 1):
        if c in win.unknown:
            status[c] = None
        elif c in win.owner:
            status[c] = True
        else:
            status[c] = False
    known_values = sorted({v for v in views.values() if v is not None}, reverse=True)
    for value in known_values:
        for g in (g for g in range(win.lo, win.hi + 1) if views[g] == value):
            verdict = True
            for t in diffs:
                other = views.get(g + t)
                if other is None:
                    verdict = None
                    break
                if other >= value:
                    verdict = False
                    break
            if verdict is False:
                continue
            span = list(range(g + s_lo, g + s_hi + 1))
            stats = [status.get(c) if win.lo <= c <= win.hi else None for c in span]
            if any(s is True for s in stats):
                continue  # a previously merged cell blocks the absorption
            if verdict is None or any(s is None for s in stats):
                for c in span:
                    if win.lo <= c <= win.hi:
                        win.unknown.add(c)
                        status[c] = None
                continue
            win.add_colony(g, span[0], span[-1])
            for c in span:
                status[c] = True
    for c in range(win.lo, win.hi + 1):
        if c not in win.owner and c not in win.unknown:
            win.add_colony(c, c, c)
    # cardinality-only stages
    for stage in range(1, params.greedy_stages + 1):
        for k in range(1, stage + 1):
            for h in ball(stage, default_gens(1)):
                _tracked_cardinality(win, k, h[0])
    return win


def _tracked_cardinality(win, k, h):
    fires = []
    degraded = set()
    for cid, (g, a, b) in list(win.colony.items()):
        size = b - a + 1
        if size == k:
            t = g + h
            if a <= t <= b:
                pass
            elif win.is_unknown(t):
                if win.is_unknown(a - 1) or win.is_unknown(b + 1):
                    degraded.add(cid)
            else:
                did = win.owner[t]
                dg, da, db = win.colony[did]
                if did != cid and (db - da + 1) > k and (da <= b + 1 and db >= a - 1):
                    fires.append((cid, did))
        if size > k:
            for run_lo, run_hi in win.unknown_run_adjacent(a, b):
                lo_eff = run_lo if run_lo is not None else -10**9
                hi_eff = run_hi if run_hi is not None else 10**9
                if lo_eff <= b - h and hi_eff >= a - h and (hi_eff - lo_eff + 1) >= k:
                    degraded.add(cid)
                    break
    _resolve(win, fires, degraded)


def _tracked_pattern(win, spec, h, r, p_key):
    fires = []
    degraded = set()
    for cid, (g, a, b) in list(win.colony.items()):
        cmp = _partial_view_cmp(win, spec, g, r, p_key)
        if cmp is None:
            degraded.add(cid)
        elif cmp == "=":
            t = g + h
            if a <= t <= b:
                pass
            elif win.is_unknown(t):
                if win.is_unknown(a - 1) or win.is_unknown(b + 1):
                    degraded.add(cid)
            else:
                did = win.owner[t]
                dg, da, db = win.colony[did]
                if did != cid and t == dg and (da <= b + 1 and db >= a - 1):
                    tcmp = _partial_view_cmp(win, spec, t, r, p_key)
                    if tcmp is None:
                        degraded.add(cid)
                    elif tcmp == ">":
                        fires.append((cid, did))
        # reception: the only cell that could fuse into this colony's brain
        q = g - h
        if win.is_unknown(q) and not (a <= q <= b):
            if cmp in (">", None):
                for run_lo, run_hi in win.unknown_run_adjacent(a, b):
                    lo_eff = run_lo if run_lo is not None else -10**9
                    hi_eff = run_hi if run_hi is not None else 10**9
                    if lo_eff <= q <= hi_eff:
                        degraded.add(cid)
                        break
    _resolve(win, fires, degraded)


def _resolve(win, fires, degraded):
    # fusions into a degraded target make the absorbed colony uncertain too
    changed = True
    while changed:
        changed = False
        for cid, did in fires:
            if did in degraded and cid not in degraded:
                degraded.add(cid)
                changed = True
    for cid in degraded:
        if cid in win.colony:
            win.degrade(cid)
    by_target = {}
    for cid, did in fires:
        if cid in degraded or did in degraded:
            continue
        by_target.setdefault(did, []).append(cid)
    for did, cids in by_target.items():
        dg, da, db = win.colony[did]
        lo, hi = da, db
        for cid in cids:
            _g, a, b = win.colony.pop(cid)
            lo, hi = min(lo, a), max(hi, b)
        win.colony[did] = (dg, lo, hi)
        for c in range(lo, hi + 1):
            win.owner[c] = did


def schedule_triples(spec, max_count):
    """The first triples of the deterministic stage schedule, in order."""
    gens = default_gens(1)
    out = []
    stage = 1
    while len(out) < max_count:
        for k in range(1, stage + 1):
            for h in ball(stage, gens):
                for r in range(0, stage + 1):
                    pats = sorted(
                        tuple(spec.alphabet.index(p[c]) for c in ball(r, gens))
                        for p in language(spec, ball(r, gens))
                    )
                    for p_key in pats:
                        out.append((k, h[0], r, p_key))
                        if len(out) >= max_count:
                            return out
        stage += 1
    return out


def run_window(spec, word_cells, clopen, params, steps):
    """Tracked preprocessing plus the first `steps` schedule triples on a
    word given as a dict cell -> symbol; returns the WindowCulture history
    after each step (index 0 = after preprocessing)."""
    lo, hi = min(word_cells), max(word_cells)
    win = WindowCulture(lo, hi, word_cells)
    preprocess_window(win, spec, clopen, params)
    history = [snapshot(win)]
    for k, h, r, p_key in schedule_triples(spec, steps):
        _tracked_cardinality(win, k, h)
        _tracked_pattern(win, spec, h, r, p_key)
        history.append(snapshot(win))
    return win, history


def snapshot(win):
    return {
        "colonies": dict(win.colony),
        "unknown": set(win.unknown),
    }


@dataclass
class UniformTResult:
    status: str  # ok | timeout | precondition
    t: int | None
    window_radius: int | None
    detail: str = ""


def find_uniform_t(spec, clopen, s_cells, n, r, cap, params=None, max_radius=80, periodic_bound=6):
    """Smallest t <= cap such that after preprocessing plus t schedule
    triples, every occurrence of the clopen set within distance r of the
    center of any certified window word has its merge window inside its
    colony and a window count of at least n."""
    if spec.dimension != 1:
        raise SpecError("uniform growth certification is 1D")
    if params is None:
        params = UniformProcessParams(tuple(tuple(c) for c in s_cells))
    witness = clopen_has_totally_periodic_point(spec, clopen, periodic_bound)
    if witness is not None:
        return UniformTResult("precondition", None, None, "clopen set contains a totally periodic point")
    if not safe_check(spec, clopen, [c for c in params.s_cells]):
        return UniformTResult("precondition", None, None, "merge window is not safe for the clopen set")
    s_pts = [c for c in params.s_cells]
    s_lo, s_hi = params.span()
    radius = 8 + (s_hi - s_lo) + 2 * params.greedy_radius + r
    while radius <= max_radius:
        cells = [(i,) for i in range(-radius, radius + 1)]
        words = language(spec, cells)
        needed_t = 0
        all_certified = True
        for w in words:
            centers = [g for g in range(-r, r + 1) if _occurs_at(w, clopen, g)]
            if not _occurs_at(w, clopen, 0):
                continue
            word_cells = {c[0]: w[c] for c in cells}
            win = WindowCulture(-radius, radius, word_cells)
            preprocess_window(win, spec, clopen, params)
            t_word = _first_good_time(win, spec, centers, s_pts, n, cap)
            if t_word is None:
                return UniformTResult("timeout", None, radius, "count did not reach the target within the step cap")
            if t_word == "grow":
                all_certified = False
                break
            needed_t = max(needed_t, t_word)
        if all_certified:
            return UniformTResult("ok", needed_t, radius)
        radius += max(4, radius // 2)
    return UniformTResult("timeout", None, None, "window growth exhausted")


def _occurs_at(pattern, clopen, g):
    for cyl in clopen.cylinders:
        if all(pattern.get((c[0] + g,)) == sym for c, sym in cyl.items):
            return True
    return False


def _first_good_time(win, spec, centers, s_pts, n, cap):
    """Earliest step count at which every listed occurrence is certified
    with its merge window inside the colony and count >= n; 'grow' when
    certification is lost before that, None when the cap runs out."""

    def check():
        good = True
        for g in centers:
            if win.is_unknown(g) or g not in win.owner:
                return "grow"
            _b, a, b = win.colony[win.owner[g]]
            cells = list(range(a, b + 1))
            full = all(a <= g + s[0] <= b for s in s_pts)
            if not full or s_count(((c,) for c in cells), s_pts) < n:
                good = False
        return good

    status = check()
    if status is True:
        return 0
    if status == "grow":
        return "grow"
    triples = schedule_triples(spec, cap)
    for i, (k, h, r, p_key) in enumerate(triples, start=1):
        _tracked_cardinality(win, k, h)
        _tracked_pattern(win, spec, h, r, p_key)
        status = check()
        if status is True:
            return i
        if status == "grow":
            return "grow"
    return None
