"""Move-graph distances and certified lower bounds.

``distance`` searches the move graph over canonical states with a chord-count
cap.  Plain mode weights every elementary move 1 and runs a bidirectional
breadth-first search.  Equivalence-class mode counts only surgeries and
boundary surgeries; disk and null component additions and eliminations are
free, realized as a 0-1 search with a deque.

The graph is infinite (disk additions), so a capped search never claims
exactness: ``exact`` is false whenever any frontier generated a state above
the cap, even if a path was found, since a shorter path might pass through
capped states.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from math import ceil
from typing import Callable, Optional

from .disk import Subsurface, adjusted_chi, minimal_connected_pairs
from .errors import CapTooSmall
from .moves import FREE_KINDS, Move, find_move_between, successors

PLAIN = "plain"
EQCLASS = "eqclass"


@dataclass
class DistanceResult:
    value: Optional[int]
    exact: bool
    witness: Optional[list]
    mode: str

    def to_json(self, with_witness=True):
        out = {"value": self.value, "exact": self.exact, "mode": self.mode}
        out["witness"] = (
            [m.to_json() for m in self.witness] if with_witness and self.witness is not None else None
        )
        return out


class SuccessorCache:
    """Shared memo of successor sets, keyed by state and cap."""

    def __init__(self):
        self._store = {}

    def get(self, sub, max_chords):
        key = (sub.key(), max_chords)
        hit = self._store.get(key)
        if hit is None:
            hit = successors(sub, max_chords=max_chords)
            self._store[key] = hit
        return hit


def default_cap(a: Subsurface, b: Subsurface) -> int:
    return max(len(a.chords), len(b.chords)) + 2


def distance(a: Subsurface, b: Subsurface, mode: str = PLAIN,
             max_chords: Optional[int] = None,
             cache: Optional[SuccessorCache] = None,
             want_witness: bool = True) -> DistanceResult:
    if a.disk != b.disk:
        raise CapTooSmall("states live on different marked disks")
    if max_chords is None:
        max_chords = default_cap(a, b)
    if len(a.chords) > max_chords or len(b.chords) > max_chords:
        raise CapTooSmall(
            f"input has more than {max_chords} chords; raise the cap")
    if cache is None:
        cache = SuccessorCache()
    if mode == PLAIN:
        return _plain_bidirectional(a, b, max_chords, cache, want_witness)
    if mode == EQCLASS:
        return _eqclass_01(a, b, max_chords, cache, want_witness)
    raise ValueError(f"unknown mode {mode!r}")


def _plain_bidirectional(a, b, cap, cache, want_witness):
    if a == b:
        return DistanceResult(0, True, [] if want_witness else None, PLAIN)
    dist_a = {a: 0}
    dist_b = {b: 0}
    parent_a = {}
    parent_b = {}
    frontier_a = [a]
    frontier_b = [b]
    level_a = level_b = 0
    capped = False
    best = None
    meet = None

    def expand(frontier, dist, parent, other_dist):
        nonlocal capped, best, meet
        new_frontier = []
        base = dist[frontier[0]]
        for s in frontier:
            succ = cache.get(s, cap)
            if succ.capped:
                capped = True
            for move, t in succ:
                if t in dist:
                    continue
                dist[t] = base + 1
                parent[t] = (s, move)
                new_frontier.append(t)
                if t in other_dist:
                    total = dist[t] + other_dist[t]
                    if best is None or total < best:
                        best = total
                        meet = t
        return new_frontier

    while frontier_a and frontier_b:
        if best is not None and best <= level_a + level_b:
            break
        if len(frontier_a) <= len(frontier_b):
            frontier_a = expand(frontier_a, dist_a, parent_a, dist_b)
            level_a += 1
        else:
            frontier_b = expand(frontier_b, dist_b, parent_b, dist_a)
            level_b += 1
    if best is None:
        return DistanceResult(None, not capped, None, PLAIN)
    witness = _stitch(a, b, meet, parent_a, parent_b) if want_witness else None
    return DistanceResult(best, not capped, witness, PLAIN)


def _stitch(a, b, meet, parent_a, parent_b):
    moves = []
    s = meet
    while s != a:
        prev, move = parent_a[s]
        moves.append(move)
        s = prev
    moves.reverse()
    s = meet
    while s != b:
        nxt, _ = parent_b[s]
        moves.append(find_move_between(s, nxt))
        s = nxt
    return moves


def _eqclass_01(a, b, cap, cache, want_witness):
    dist = {a: 0}
    parent = {}
    dq = deque([a])
    capped = False
    while dq:
        s = dq.popleft()
        if s == b:
            break
        d = dist[s]
        succ = cache.get(s, cap)
        if succ.capped:
            capped = True
        for move, t in succ:
            w = 0 if move.kind in FREE_KINDS else 1
            if t not in dist or d + w < dist[t]:
                dist[t] = d + w
                parent[t] = (s, move)
                if w == 0:
                    dq.appendleft(t)
                else:
                    dq.append(t)
    if b not in dist:
        return DistanceResult(None, not capped, None, EQCLASS)
    witness = None
    if want_witness:
        witness = []
        s = b
        while s != a:
            prev, move = parent[s]
            witness.append(move)
            s = prev
        witness.reverse()
    return DistanceResult(dist[b], not capped, witness, EQCLASS)


def _frac_ceil(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def certified_lower_bound(a: Subsurface, b: Subsurface) -> int:
    """A sound lower bound for the plain move distance.

    Combines the one-move Lipschitz bound on the adjusted Euler
    characteristic with the erosion bound on minimal connected pairs: one
    move discards at most six pairs from either side's set M.
    """
    chi_gap = abs(adjusted_chi(a) - adjusted_chi(b))
    ma = minimal_connected_pairs(a).all_pairs
    mb = minimal_connected_pairs(b).all_pairs
    common = len(ma & mb)
    return max(
        _frac_ceil(chi_gap),
        _frac_ceil(Fraction(len(ma) - common, 6)),
        _frac_ceil(Fraction(len(mb) - common, 6)),
    )
