"""Exhaustive enumeration of subsurfaces and embedded pairs.

The canonical encoding is a complete isotopy invariant, so enumerating
isotopy classes amounts to enumerating, for each chord count up to the cap,
the distributions of endpoints over edges, the non-crossing perfect
matchings of the resulting boundary word, and the color bit.  The order is
deterministic.

Paired modes realize the combined three-colored diagrams: every region of a
combined diagram is in the first subsurface, in the second, or in neither,
and the color flips in exactly one coordinate across each chord.  The second
diagram is placed inside the complementary (or, for nested pairs, the
interior) regions of the first; a sub-region adjacent to a chord of the
first subsurface must stay outside the second one, which is the
combinatorial form of disjointness of closed representatives.
"""

from __future__ import annotations

from typing import Iterator, Optional

from .disk import (
    MarkedDisk,
    Subsurface,
    chord_is_essential,
    is_essential,
)


def compositions(total: int, parts: int) -> Iterator[tuple]:
    """All tuples of ``parts`` nonnegative integers summing to ``total``."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def noncrossing_matchings(points: int) -> Iterator[tuple]:
    """Non-crossing perfect matchings of linearly ordered points.

    Yields tuples of index pairs (i, j) with i < j; Catalan(points/2) many.
    """
    if points % 2 != 0:
        return

    def rec(positions):
        if not positions:
            yield ()
            return
        first = positions[0]
        for k in range(1, len(positions), 2):
            inner = positions[1:k]
            outer = positions[k + 1:]
            for mi in rec(inner):
                for mo in rec(outer):
                    yield ((first, positions[k]),) + mi + mo

    yield from rec(list(range(points)))


def enumerate_subsurfaces(n_points: int, max_chords: int,
                          essential_only: bool = False) -> Iterator[Subsurface]:
    """Each canonical isotopy class exactly once, in a deterministic order."""
    disk = MarkedDisk(n_points)
    for c in range(max_chords + 1):
        if c == 0:
            yield Subsurface(disk, [], False)
            yield Subsurface(disk, [], True)
            continue
        for comp in compositions(2 * c, n_points):
            edge_of = []
            slot_of = []
            for e in range(1, n_points + 1):
                for s in range(comp[e - 1]):
                    edge_of.append(e)
                    slot_of.append(s)
            for matching in noncrossing_matchings(2 * c):
                chords = [
                    ((edge_of[i], slot_of[i]), (edge_of[j], slot_of[j]))
                    for i, j in matching
                ]
                if essential_only and not all(
                    chord_is_essential(disk, ch) for ch in chords
                ):
                    continue
                for base in (False, True):
                    yield Subsurface(disk, chords, base)


def count_subsurfaces(n_points: int, max_chords: int,
                      essential_only: bool = False) -> int:
    return sum(1 for _ in enumerate_subsurfaces(n_points, max_chords, essential_only))


# ---------------------------------------------------------------------------
# Placement of a second subsurface inside host regions
# ---------------------------------------------------------------------------


class _RegionMeta:
    """One host region unfolded for inner placement.

    ``gaps`` lists the region's boundary intervals in boundary order as
    (edge, gap) coordinates; ``separators`` holds, for each interval, what
    the region boundary passes immediately after it: a marked point
    ``('p', i)`` or a chord of the host ``('c', ci)``.  The wrap separator
    after the last interval closes the cycle.
    """

    __slots__ = ("rid", "gaps", "separators")

    def __init__(self, host, reg):
        diag = host.diagram
        n_events = len(diag.events)
        ts = sorted(reg.intervals)
        self.rid = reg.rid
        self.gaps = [diag.interval_gap[t] for t in ts]
        self.separators = []
        for t in ts:
            ev = diag.events[(t + 1) % n_events]
            if ev[0] == "p":
                self.separators.append(("p", ev[1]))
            else:
                self.separators.append(("c", ev[1]))


def _region_layouts(meta: _RegionMeta, max_chords: int):
    """Chord layouts with admissible base color bits for one host region.

    A layout is a non-crossing matching on endpoint positions distributed
    over the region's intervals, together with the color bit of the
    outermost sub-region (the one at the region's first boundary corner).
    Sub-regions adjacent to host chords must stay outside the inner
    subsurface; if the forced bits conflict, the layout is discarded.
    Yields (endpoints, matching, base_bit, point_bits) where point_bits maps
    marked points on this region's boundary to inner membership.
    """
    m = len(meta.gaps)
    for c in range(max_chords + 1):
        for comp in compositions(2 * c, m):
            # mini-word: endpoint q lives in interval iv_of[q]
            iv_of = []
            for gi in range(m):
                iv_of.extend([gi] * comp[gi])
            # cumulative endpoint count through interval gi
            cum = [0] * (m + 1)
            for gi in range(m):
                cum[gi + 1] = cum[gi] + comp[gi]
            for matching in noncrossing_matchings(2 * c):
                depth = _gap_depths(2 * c, matching)
                forced = None
                ok = True
                for gi in range(m):
                    kind, _ = meta.separators[gi]
                    if kind != "c":
                        continue
                    # separator after interval gi sits in mini-gap cum[gi+1]
                    need = depth[cum[gi + 1]] % 2  # base bit making it False
                    if forced is None:
                        forced = need
                    elif forced != need:
                        ok = False
                        break
                if not ok:
                    continue
                bases = (False, True) if forced is None else (bool(forced),)
                for base in bases:
                    point_bits = {}
                    for gi in range(m):
                        kind, val = meta.separators[gi]
                        if kind == "p":
                            point_bits[val] = bool(
                                base ^ (depth[cum[gi + 1]] % 2 == 1)
                            )
                    yield comp, matching, base, point_bits


def _gap_depths(points: int, matching) -> list:
    """Nesting depth of each of the ``points + 1`` linear gaps."""
    open_at = [0] * (points + 1)
    for i, j in matching:
        open_at[i + 1] += 1
        open_at[j + 1] -= 1
    depth = [0] * (points + 1)
    d = 0
    for g in range(1, points + 1):
        d += open_at[g]
        depth[g] = d
    return depth


def place_inside(host: Subsurface, host_color: bool, max_chords: int,
                 essential_only: bool = False) -> Iterator[Subsurface]:
    """All subsurfaces embedded in the ``host_color`` regions of ``host``.

    The result and the host have disjoint closed representatives: inner
    chords end strictly inside the host's gaps and no inner region touches a
    host chord.  With ``host`` empty and ``host_color`` False this recovers
    the plain enumeration.
    """
    diag = host.diagram
    metas = [
        _RegionMeta(host, reg) for reg in diag.regions if reg.color == host_color
    ]
    x1_in_host_rid = diag.point_region[1]

    def rec(mi, budget):
        if mi == len(metas):
            yield []
            return
        meta = metas[mi]
        for comp, matching, base, point_bits in _region_layouts(meta, budget):
            used = sum(comp) // 2
            for rest in rec(mi + 1, budget - used):
                yield [(meta, comp, matching, base, point_bits)] + rest

    for assignment in rec(0, max_chords):
        markers = []  # (edge, gap_index, within_gap_index) per endpoint
        pair_of = []
        x1_bit = False
        for meta, comp, matching, base, point_bits in assignment:
            offset = len(markers)
            k_in_gap = {}
            for gi, gap in enumerate(meta.gaps):
                for _ in range(comp[gi]):
                    k = k_in_gap.get(gap, 0)
                    k_in_gap[gap] = k + 1
                    markers.append((gap[0], gap[1], k))
            for i, j in matching:
                pair_of.append((offset + i, offset + j))
            if 1 in point_bits:
                x1_bit = point_bits[1]
        # Per-edge ordinal slots respecting the (gap, within-gap) order.
        order = sorted(range(len(markers)), key=lambda t: markers[t])
        slot = {}
        counters = {}
        for t in order:
            e = markers[t][0]
            slot[t] = (e, counters.get(e, 0))
            counters[e] = counters.get(e, 0) + 1
        chords = [(slot[i], slot[j]) for i, j in pair_of]
        inner = Subsurface(host.disk, chords, x1_bit)
        if essential_only and not is_essential(inner):
            continue
        yield inner


def disjoint_pairs(n_points: int, cap_a: int, cap_b: int,
                   essential_only: bool = True):
    """Embedded-disjoint pairs of subsurfaces (three-colored diagrams)."""
    for a in enumerate_subsurfaces(n_points, cap_a, essential_only):
        for b in place_inside(a, False, cap_b, essential_only):
            yield a, b


def nested_pairs(n_points: int, cap_outer: int, cap_inner: int,
                 essential_only: bool = False):
    """Pairs (inner, outer) with the inner subsurface embedded in the outer."""
    for outer in enumerate_subsurfaces(n_points, cap_outer, essential_only):
        for inner in place_inside(outer, True, cap_inner, essential_only):
            yield inner, outer
