"""Marked disks and chord-diagram subsurfaces.

A marked disk is a closed disk with an even number N = 2n of marked points
``x_1, ..., x_N`` on its boundary, in counterclockwise cyclic order.  The
boundary arc between ``x_i`` and ``x_{i+1}`` is the edge ``e_i`` (indices
cyclic, so ``e_N`` joins ``x_N`` to ``x_1``).

An isotopy class of subsurfaces of the marked disk is encoded by

- a non-crossing perfect matching of endpoints placed on the edges (the
  chords, i.e. the interior boundary of the subsurface), where each endpoint
  is an (edge, slot) pair and slots number the endpoints of one edge
  ``0..k-1`` in counterclockwise order, and
- one color bit recording whether ``x_1`` lies in the subsurface.

Region colors are derived: the color flips exactly when crossing a chord.
This data is a complete isotopy invariant: an isotopy fixing the marked
points preserves the per-edge endpoint order and the matching, and
conversely equal encodings give isotopic subsurfaces.

The chords cut the disk into ``#chords + 1`` regions, each a disk.  The
connected components of the subsurface are exactly the regions colored IN
(two IN regions are never adjacent, since colors alternate across chords).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Optional, Sequence

from .errors import (
    CrossingMatching,
    EndpointOnMarkedPoint,
    InvalidChordData,
    OddStep,
)

Endpoint = tuple  # (edge, slot), 1-based edge
Chord = tuple  # (Endpoint, Endpoint)


@dataclass(frozen=True)
class MarkedDisk:
    """The pair (D, P): a disk with ``point_count`` marked boundary points.

    ``rotation_step`` is the step of the canonical rotation homeomorphism g,
    which shifts marked points by two in the direction of the orientation.
    """

    point_count: int
    rotation_step: int = 2

    def __post_init__(self):
        if self.point_count < 2 or self.point_count % 2 != 0:
            raise InvalidChordData(
                f"point count must be even and >= 2, got {self.point_count}"
            )

    @property
    def edge_count(self) -> int:
        return self.point_count

    def edges(self) -> range:
        return range(1, self.point_count + 1)


class Subsurface:
    """A canonical chord-diagram encoding of a subsurface isotopy class.

    Construction normalizes arbitrary raw chord data: slots are relabeled
    ``0..k-1`` per edge preserving order, chords are stored sorted by the
    boundary position of their first endpoint, and the matching is checked
    to be non-crossing.  Use :func:`canonicalize` for the documented entry
    point accepting loose input.
    """

    __slots__ = ("disk", "chords", "base_in", "_key", "_diag")

    def __init__(self, disk: MarkedDisk, chords: Iterable[Chord], base_in: bool):
        self.disk = disk
        self.base_in = bool(base_in)
        self.chords = _normalize_chords(disk, chords)
        self._key = (disk.point_count, self.chords, self.base_in)
        self._diag = None
        _validate_noncrossing(disk, self.chords)

    # -- identity ---------------------------------------------------------

    def key(self):
        return self._key

    def __eq__(self, other):
        return isinstance(other, Subsurface) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        name = "IN" if self.base_in else "OUT"
        return f"Subsurface(N={self.disk.point_count}, chords={list(self.chords)}, x1={name})"

    # -- derived structure --------------------------------------------------

    @property
    def diagram(self) -> "_Diagram":
        if self._diag is None:
            self._diag = _Diagram(self)
        return self._diag

    def chord_count(self) -> int:
        return len(self.chords)

    def point_memberships(self) -> tuple:
        """Membership flag of each marked point, index 0 holding x_1."""
        return self.diagram.point_in

    def is_empty(self) -> bool:
        return not self.chords and not self.base_in

    def is_full(self) -> bool:
        return not self.chords and self.base_in

    def to_json(self) -> dict:
        return {
            "N": self.disk.point_count,
            "chords": [[list(a), list(b)] for a, b in self.chords],
            "x1_in": self.base_in,
        }

    @staticmethod
    def from_json(data: dict) -> "Subsurface":
        disk = MarkedDisk(int(data["N"]))
        chords = [((int(a[0]), a[1]), (int(b[0]), b[1])) for a, b in data["chords"]]
        return canonicalize(disk, chords, bool(data["x1_in"]))


def canonicalize(disk: MarkedDisk, chords: Iterable[Chord], x1_in: bool) -> Subsurface:
    """Normalize raw chord data into the unique canonical representative.

    Slots may be arbitrary integers (ordinals, relabeled preserving order) or
    fractional positions in the open interval (0, 1); a fractional position of
    exactly 0 or 1 would put the endpoint on a marked point and is rejected.
    Idempotent: canonicalizing a canonical subsurface returns an equal value.
    """
    return Subsurface(disk, chords, x1_in)


def _normalize_chords(disk: MarkedDisk, chords: Iterable[Chord]) -> tuple:
    raw = [tuple(map(tuple, ch)) for ch in chords]
    per_edge = {}
    for ci, (a, b) in enumerate(raw):
        for e, s in (a, b):
            if not isinstance(e, int) or not 1 <= e <= disk.edge_count:
                raise InvalidChordData(f"edge index {e!r} out of range")
            if isinstance(s, float):
                if not 0.0 < s < 1.0:
                    raise EndpointOnMarkedPoint(
                        f"fractional position {s} on edge {e} hits a marked point"
                    )
            elif not isinstance(s, int):
                raise InvalidChordData(f"slot {s!r} is not a number")
            per_edge.setdefault(e, []).append((s, ci))
    # Per-edge relabeling 0..k-1, preserving the given order.
    slot_map = {}
    for e, entries in per_edge.items():
        entries.sort(key=lambda t: t[0])
        for new_slot, (s, ci) in enumerate(entries):
            if new_slot + 1 < len(entries) and entries[new_slot + 1][0] == s:
                raise InvalidChordData(f"duplicate slot {s} on edge {e}")
            slot_map.setdefault((e, s), new_slot)
    out = []
    for a, b in raw:
        a2 = (a[0], slot_map[(a[0], a[1])])
        b2 = (b[0], slot_map[(b[0], b[1])])
        pa, pb = _pos(disk, a2), _pos(disk, b2)
        if pa == pb:
            raise InvalidChordData("chord with coincident endpoints")
        out.append(((a2, b2) if pa < pb else (b2, a2)))
    out.sort(key=lambda ch: (_pos(disk, ch[0]), _pos(disk, ch[1])))
    return tuple(out)


def _pos(disk: MarkedDisk, endpoint: Endpoint) -> tuple:
    """Linear boundary position of an endpoint, cutting the circle at x_1."""
    e, s = endpoint
    return (e, s)


def _validate_noncrossing(disk: MarkedDisk, chords: tuple) -> None:
    # Classic balanced scan of the linear word cut at x_1 (no chord spans x_1).
    opens = {}
    events = []
    for ci, (a, b) in enumerate(chords):
        events.append((_pos(disk, a), ci))
        events.append((_pos(disk, b), ci))
    events.sort()
    stack = []
    seen = set()
    for _, ci in events:
        if ci not in seen:
            seen.add(ci)
            stack.append(ci)
        else:
            if not stack or stack[-1] != ci:
                raise CrossingMatching(f"chords {stack[-1] if stack else '?'} and {ci} cross")
            stack.pop()
    del opens


class _Region:
    """One complementary region of the chord system."""

    __slots__ = (
        "rid", "own_chord", "depth", "color", "intervals", "child_chords",
        "marked", "edges",
    )

    def __init__(self, rid, own_chord, depth, color):
        self.rid = rid
        self.own_chord = own_chord  # chord index bounding from outside, None for root
        self.depth = depth
        self.color = color
        self.intervals = []
        self.child_chords = []
        self.marked = []
        self.edges = set()

    def boundary_chords(self) -> list:
        out = list(self.child_chords)
        if self.own_chord is not None:
            out.append(self.own_chord)
        return out

    def __repr__(self):
        return (f"Region({self.rid}, own={self.own_chord}, depth={self.depth},"
                f" color={'IN' if self.color else 'OUT'}, edges={sorted(self.edges)})")


class _Diagram:
    """Derived region structure of a canonical subsurface.

    Events are the marked points and chord endpoints in boundary traversal
    order, starting at x_1.  Interval ``t`` runs from event ``t`` to event
    ``t+1`` (cyclically); it lies inside the edge of its left event.  The
    stack scan identifies, for each interval, the innermost enclosing chord;
    regions correspond to those keys (root key None), so there are exactly
    ``#chords + 1`` regions.
    """

    __slots__ = (
        "sub", "events", "interval_region", "regions", "point_region",
        "point_in", "components", "chord_parent", "chord_inner",
        "gap_interval", "interval_gap", "event_index",
    )

    def __init__(self, sub: Subsurface):
        self.sub = sub
        disk = sub.disk
        n = disk.point_count
        endpoint_chord = {}
        for ci, (a, b) in enumerate(sub.chords):
            endpoint_chord[a] = ci
            endpoint_chord[b] = ci
        per_edge = [[] for _ in range(n + 1)]
        for (e, s), ci in endpoint_chord.items():
            per_edge[e].append((s, ci))
        for e in range(1, n + 1):
            per_edge[e].sort()

        events = []  # ('p', i) or ('e', chord_index, endpoint)
        for i in range(1, n + 1):
            events.append(("p", i))
            for s, ci in per_edge[i]:
                events.append(("e", ci, (i, s)))
        self.events = events
        self.event_index = {ev: t for t, ev in enumerate(events)}

        # Stack scan.  x_1 is event 0; no chord encloses the interval before
        # it, so the linear scan agrees with the cyclic structure.
        region_of_key = {}
        regions = []
        chord_parent = {}
        chord_inner = {}

        def get_region(key, depth):
            if key not in region_of_key:
                color = sub.base_in ^ (depth % 2 == 1)
                reg = _Region(len(regions), key, depth, color)
                region_of_key[key] = reg
                regions.append(reg)
            return region_of_key[key]

        stack = []
        opened = set()
        interval_region = []
        for t, ev in enumerate(events):
            if ev[0] == "e":
                ci = ev[1]
                if ci not in opened:
                    opened.add(ci)
                    chord_parent[ci] = stack[-1] if stack else None
                    stack.append(ci)
                else:
                    stack.pop()
            key = stack[-1] if stack else None
            reg = get_region(key, len(stack))
            interval_region.append(reg.rid)
            edge = ev[1] if ev[0] == "p" else ev[2][0]
            reg.intervals.append(t)
            reg.edges.add(edge)
        self.interval_region = interval_region
        self.regions = regions

        for ci in range(len(sub.chords)):
            parent_key = chord_parent[ci]
            chord_parent[ci] = region_of_key[parent_key].rid
            chord_inner[ci] = region_of_key[ci].rid
            regions[chord_parent[ci]].child_chords.append(ci)
        self.chord_parent = chord_parent
        self.chord_inner = chord_inner

        # Marked point memberships: x_i sits between interval t-1 and t where
        # t is its event index; both sides have the same region.
        point_region = {}
        point_in = []
        for i in range(1, n + 1):
            t = self.event_index[("p", i)]
            rid = interval_region[t - 1] if t > 0 else interval_region[len(events) - 1]
            point_region[i] = rid
            regions[rid].marked.append(i)
            point_in.append(regions[rid].color)
        self.point_region = point_region
        self.point_in = tuple(point_in)

        self.components = tuple(r.rid for r in regions if r.color)

        # Gap coordinates: gap (e, g) is the boundary arc of edge e between
        # slot g-1 and slot g (g = 0 after x_e, g = k after the last slot).
        gap_interval = {}
        for i in range(1, n + 1):
            t = self.event_index[("p", i)]
            gap_interval[(i, 0)] = t
            for s, ci in per_edge[i]:
                gap_interval[(i, s + 1)] = self.event_index[("e", ci, (i, s))]
        self.gap_interval = gap_interval
        self.interval_gap = {t: g for g, t in gap_interval.items()}

    # -- helpers ----------------------------------------------------------

    def region_of_gap(self, gap) -> int:
        return self.interval_region[self.gap_interval[gap]]

    def edge_slot_count(self, e: int) -> int:
        count = 0
        for a, b in self.sub.chords:
            count += (a[0] == e) + (b[0] == e)
        return count

    def component_index(self, rid: int) -> int:
        return self.components.index(rid)

    def region_edges(self, rid: int) -> frozenset:
        return frozenset(self.regions[rid].edges)


# ---------------------------------------------------------------------------
# Basic operations
# ---------------------------------------------------------------------------


def complement(sub: Subsurface) -> Subsurface:
    """The closure of the complement: same chords, opposite color bit."""
    return Subsurface(sub.disk, sub.chords, not sub.base_in)


def _chord_span_points(disk: MarkedDisk, chord: Chord) -> frozenset:
    """Marked points on the span side (the side not containing x_1)."""
    (e1, _), (e2, _) = chord
    # Traversal order: x_i precedes edge i's endpoints.  The span of a chord
    # from edge e1 to edge e2 (positions sorted) covers x_{e1+1}, ..., x_{e2}.
    return frozenset(range(e1 + 1, e2 + 1))


def chord_is_essential(disk: MarkedDisk, chord: Chord) -> bool:
    """A chord is essential iff both complementary sides hold >= 2 points."""
    inside = len(_chord_span_points(disk, chord))
    return inside >= 2 and disk.point_count - inside >= 2


def essential_part(sub: Subsurface) -> Subsurface:
    """Delete all inessential chords, merging each cut-off disk into the
    region outside it (the outside color wins).

    A chord is inessential iff one side holds at most one marked point; such
    a chord never covers a complete edge, so edge supports of the surviving
    components are unchanged.  The new membership of a marked point flips
    once for each deleted chord whose minor side contains it.  For the
    degenerate N=2 tie (both sides inessential) the span side is collapsed.
    """
    disk = sub.disk
    keep = []
    minor_spans = []  # (span points, span side is minor)
    for ch in sub.chords:
        span = _chord_span_points(disk, ch)
        inside, outside = len(span), disk.point_count - len(span)
        if inside >= 2 and outside >= 2:
            keep.append(ch)
        elif inside <= outside:
            minor_spans.append((span, True))
        else:
            minor_spans.append((span, False))
    if not minor_spans:
        return sub
    flips_x1 = sum(1 for span, span_minor in minor_spans if not span_minor)
    new_base = sub.base_in ^ (flips_x1 % 2 == 1)
    return Subsurface(disk, keep, new_base)


def is_essential(sub: Subsurface) -> bool:
    return all(chord_is_essential(sub.disk, ch) for ch in sub.chords)


def adjusted_chi(sub: Subsurface) -> Fraction:
    """The adjusted Euler characteristic of the subsurface.

    Evaluates the essential part: every component of a disk subsurface is a
    disk, so its Euler characteristic is its component count, from which a
    quarter of (interior-boundary endpoints on the circle plus marked points
    inside) is subtracted.  Exact rational with denominator dividing 4.
    """
    ess = essential_part(sub)
    diag = ess.diagram
    comp = len(diag.components)
    marked_in = sum(1 for flag in diag.point_in if flag)
    return Fraction(comp) - Fraction(2 * len(ess.chords) + marked_in, 4)


def component_is_rectangular(sub: Subsurface, rid: int) -> bool:
    """A component is rectangular iff it meets 4 special boundary points."""
    reg = sub.diagram.regions[rid]
    return 2 * len(reg.boundary_chords()) + len(reg.marked) == 4


def hat(sub: Subsurface) -> Subsurface:
    """The hat normal form: essential part with parallel chord pairs erased.

    Chords are isotopic iff they induce the same marked-point bipartition;
    within an essential diagram an isotopy family occupies consecutive slots
    on its two edges, and consecutive family members cobound an empty
    rectangle which is a null component of the subsurface or its complement.
    Eliminating pairs (outermost first) reduces each family mod 2; which
    representative survives does not matter after slot relabeling, and no
    marked point changes membership since the erased strips contain none.
    Rectangular components cut off by a single essential chord are retained:
    removing them would delete one essential arc, which a null component
    elimination does not do.
    """
    ess = essential_part(sub)
    families = {}
    for ch in ess.chords:
        families.setdefault(_chord_span_points(ess.disk, ch), []).append(ch)
    keep = []
    for span, members in families.items():
        if len(members) % 2 == 1:
            # members are nested; keep the outermost (smallest first position)
            keep.append(min(members, key=lambda ch: _pos(ess.disk, ch[0])))
    return Subsurface(ess.disk, keep, ess.base_in)


def rotate(sub: Subsurface, steps: int) -> Subsurface:
    """Rotate by an even number of marked-point steps: x_i -> x_{i+steps}."""
    if steps % 2 != 0:
        raise OddStep(f"rotation step must be even, got {steps}")
    disk = sub.disk
    n = disk.point_count
    k = steps % n
    chords = [
        (((a[0] - 1 + k) % n + 1, a[1]), ((b[0] - 1 + k) % n + 1, b[1]))
        for a, b in sub.chords
    ]
    # New membership of x_1 is the old membership of x_{1-k}.
    src = (1 - k - 1) % n
    new_base = sub.point_memberships()[src]
    return Subsurface(disk, chords, new_base)


def restrict(sub: Subsurface, component_rids: Iterable[int]) -> Subsurface:
    """The subsurface formed by a subset of connected components.

    Keeps exactly the chords bounding the chosen IN regions; everything else
    becomes OUT.  Chosen regions keep their full boundary, and distinct IN
    regions share no chord, so the result is well defined.
    """
    diag = sub.diagram
    chosen = set(component_rids)
    for rid in chosen:
        if not diag.regions[rid].color:
            raise InvalidChordData(f"region {rid} is not a component of the subsurface")
    chords = set()
    for rid in chosen:
        chords.update(diag.regions[rid].boundary_chords())
    base = diag.point_region[1] in chosen
    return Subsurface(sub.disk, [sub.chords[ci] for ci in sorted(chords)], base)


# ---------------------------------------------------------------------------
# Minimal connected pairs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ComponentPairs:
    """Edge support and minimal connected pairs of one component."""

    edge_support: frozenset
    pairs: frozenset


@dataclass(frozen=True)
class ConnectivityProfile:
    """Per-component minimal connected pairs and their union M."""

    components: tuple
    all_pairs: frozenset

    def to_json(self) -> dict:
        return {
            "components": [
                {
                    "edge_support": sorted(c.edge_support),
                    "pairs": sorted(map(list, c.pairs)),
                }
                for c in self.components
            ],
            "all_pairs": sorted(map(list, self.all_pairs)),
        }


def _is_connected_pair(i: int, j: int, n: int, support: frozenset) -> bool:
    return (
        i in support and j in support and j - i >= 3 and i + (n - j) >= 3
    )


@lru_cache(maxsize=65536)
def _pairs_for_support(n: int, support: frozenset) -> frozenset:
    """Minimal connected pairs of a connected component with this support.

    A pair (i, j) of edges met by the component, at cyclic distance >= 3, is
    minimal if no connected pair shares an endpoint with it and nests inside
    the interval (i, j), or no connected pair shares an endpoint with it and
    nests inside the complementary cyclic interval (j, i).  The complementary
    clause is evaluated cyclically, mirroring the inner one; see the notes in
    the repository for why the evaluation must be rotation-symmetric.
    """
    sup = sorted(support)
    out = []
    for ai in range(len(sup)):
        for bi in range(ai + 1, len(sup)):
            i, j = sup[ai], sup[bi]
            if not (j - i >= 3 and i + (n - j) >= 3):
                continue
            inner_ok = True
            for k in range(i + 1, j):
                if _is_connected_pair(i, k, n, support) or _is_connected_pair(
                    k, j, n, support
                ):
                    inner_ok = False
                    break
            if inner_ok:
                out.append((i, j))
                continue
            outer_ok = True
            for k in list(range(1, i)) + list(range(j + 1, n + 1)):
                a, b = min(k, i), max(k, i)
                c, d = min(j, k), max(j, k)
                if _is_connected_pair(a, b, n, support) or _is_connected_pair(
                    c, d, n, support
                ):
                    outer_ok = False
                    break
            if outer_ok:
                out.append((i, j))
    return frozenset(out)


def minimal_connected_pairs(sub: Subsurface) -> ConnectivityProfile:
    """Minimal connected pairs per component, and their union M."""
    diag = sub.diagram
    n = sub.disk.point_count
    comps = []
    union = set()
    for rid in diag.components:
        support = frozenset(diag.regions[rid].edges)
        pairs = _pairs_for_support(n, support)
        comps.append(ComponentPairs(support, pairs))
        union.update(pairs)
    return ConnectivityProfile(tuple(comps), frozenset(union))
