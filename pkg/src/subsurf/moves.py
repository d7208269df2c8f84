"""The eight elementary moves on chord-diagram subsurfaces.

Move kinds and their location data:

- ``Surgery1 (a, b)``: surgery along an arc joining two distinct chords of
  one complementary region.  Both endpoints of the arc lie on chords.
- ``Surgery2 (c, (e, g))``: surgery along an arc from chord ``c`` to gap
  ``g`` of edge ``e`` (one endpoint on a chord, one on the circle).
- ``BdrySurgery1 ((e, g))``: surgery along the boundary arc between the
  endpoints at slots ``g-1`` and ``g`` of edge ``e``, merging two chords.
  Inverse of a type 2 surgery.
- ``BdrySurgery2 (i, take)``: slide the chord endpoint adjacent to marked
  point ``x_i`` across it (``take='after'`` moves the first endpoint of
  ``e_i`` back onto ``e_{i-1}``, ``take='before'`` the reverse direction).
- ``DiskAdd ('blister', (e, g))`` / ``DiskAdd ('around', i)``: add a single
  inessential chord cutting off an empty disk, or a disk holding ``x_i``.
- ``DiskElim (c, side)``: remove an inessential chord whose cut-off side
  (``'inner'`` or ``'outer'``) is a bare disk with at most one marked point;
  the outside color wins.
- ``NullAdd ((e1,g1), (e2,g2))``: add a parallel chord pair cobounding an
  empty rectangle (a band along an arc with both endpoints on the circle).
- ``NullElim (a, b)``: remove a parallel pair whose strip region is empty.

Arcs between two points of one chord are not enumerated: smoothing them
creates a closed curve component, and closed curves on a disk are always
inessential and outside this model.  Since every complementary region is a
disk and gaps contain no boundary items, arcs with both endpoints on one gap
admit a single isotopy class, so no same-side split descriptor is ever
needed; the JSON field ``split`` is emitted as null.

``apply_move`` optionally reports a :class:`MoveEffect` tracking each
connected component across the step (a move touches at most two components:
split, merge, create, destroy, or carry).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .disk import MarkedDisk, Subsurface, _pos
from .errors import InvalidMove

SURGERY_KINDS = ("Surgery1", "Surgery2", "BdrySurgery1", "BdrySurgery2")
FREE_KINDS = ("DiskAdd", "DiskElim", "NullAdd", "NullElim")
MOVE_KINDS = SURGERY_KINDS + FREE_KINDS


@dataclass(frozen=True)
class Move:
    kind: str
    data: tuple

    def is_free(self) -> bool:
        return self.kind in FREE_KINDS

    def to_json(self, sub: Optional[Subsurface] = None) -> dict:
        positions = _data_to_positions(self.kind, self.data)
        region = None
        if sub is not None:
            region = acting_region(sub, self)
        return {"kind": self.kind, "region": region, "positions": positions,
                "split": None}

    @staticmethod
    def from_json(obj: dict) -> "Move":
        return Move(obj["kind"], _positions_to_data(obj["kind"], obj["positions"]))


def _data_to_positions(kind, data):
    if kind == "Surgery1":
        return [data[0], data[1]]
    if kind == "Surgery2":
        return [data[0], list(data[1])]
    if kind == "BdrySurgery1":
        return [list(data[0])]
    if kind == "BdrySurgery2":
        return [data[0], data[1]]
    if kind == "DiskAdd":
        return [data[0], list(data[1]) if data[0] == "blister" else data[1]]
    if kind == "DiskElim":
        return [data[0], data[1]]
    if kind == "NullAdd":
        return [list(data[0]), list(data[1])]
    if kind == "NullElim":
        return [data[0], data[1]]
    raise InvalidMove(f"unknown move kind {kind}")


def _positions_to_data(kind, positions):
    if kind == "Surgery1":
        return (positions[0], positions[1])
    if kind == "Surgery2":
        return (positions[0], tuple(positions[1]))
    if kind == "BdrySurgery1":
        return (tuple(positions[0]),)
    if kind == "BdrySurgery2":
        return (positions[0], positions[1])
    if kind == "DiskAdd":
        if positions[0] == "blister":
            return ("blister", tuple(positions[1]))
        return ("around", positions[1])
    if kind == "DiskElim":
        return (positions[0], positions[1])
    if kind == "NullAdd":
        return (tuple(positions[0]), tuple(positions[1]))
    if kind == "NullElim":
        return (positions[0], positions[1])
    raise InvalidMove(f"unknown move kind {kind}")


@dataclass(frozen=True)
class MoveEffect:
    """Component correspondence across one move.

    ``mapping`` sends each component (region id in the old state) to the
    sorted tuple of component region ids in the new state it flows into; an
    empty tuple marks a destroyed component.  ``created`` lists new
    components with no ancestor.
    """

    mapping: tuple  # ((old_rid, (new_rid, ...)), ...)
    created: tuple

    def as_dict(self):
        return dict(self.mapping)


class SuccessorSet:
    """Moves available from a state, with results exceeding a cap excluded."""

    __slots__ = ("pairs", "capped")

    def __init__(self, pairs, capped):
        self.pairs = pairs
        self.capped = capped

    def __iter__(self):
        return iter(self.pairs)

    def __len__(self):
        return len(self.pairs)


# ---------------------------------------------------------------------------
# Token-level editing
# ---------------------------------------------------------------------------
#
# A state is unfolded into per-edge token lists plus a pairing; a move edits
# tokens (delete / insert / rewire) and the result is folded back into a
# canonical Subsurface.  Token identity survives edits, which yields the
# interval anchors used to track components.


def _tokens(sub: Subsurface):
    disk = sub.disk
    edges = {e: [] for e in disk.edges()}
    for ci, (a, b) in enumerate(sub.chords):
        for end, (e, s) in enumerate((a, b)):
            edges[e].append((s, ("o", ci, end)))
    pair = {}
    for ci in range(len(sub.chords)):
        pair[("o", ci, 0)] = ("o", ci, 1)
        pair[("o", ci, 1)] = ("o", ci, 0)
    for e in edges:
        edges[e].sort(key=lambda t: t[0])
        edges[e] = [uid for _, uid in edges[e]]
    return edges, pair


def _fold(disk, edges, pair, base_in):
    pos = {}
    for e in disk.edges():
        for s, uid in enumerate(edges[e]):
            pos[uid] = (e, s)
    chords = []
    seen = set()
    for uid, vid in pair.items():
        if uid in seen:
            continue
        seen.add(uid)
        seen.add(vid)
        chords.append((pos[uid], pos[vid]))
    return Subsurface(disk, chords, base_in), pos


def _linkey(endpoint_or_gap, is_gap):
    e, x = endpoint_or_gap
    return (e, x - 0.5) if is_gap else (e, x)


class _Edit:
    """One move unfolded into token edits plus effect bookkeeping."""

    def __init__(self, sub):
        self.sub = sub
        self.edges, self.pair = _tokens(sub)
        self.deleted = set()
        self.inserted = []
        self.flips = set()  # marked points whose membership flips
        self.exclude_events = set()  # old events whose following interval flips
        self.patch_after = []  # inserted uids whose following new interval
        # extends the acting region's image
        self._fresh = 0

    def fresh(self):
        self._fresh += 1
        return ("n", self._fresh)

    def insert(self, e, index, uid):
        self.edges[e].insert(index, uid)
        self.inserted.append(uid)

    def delete(self, uid):
        for e, lst in self.edges.items():
            if uid in lst:
                lst.remove(uid)
                break
        self.deleted.add(uid)
        self.pair.pop(uid, None)

    def rewire(self, uid, vid):
        self.pair[uid] = vid
        self.pair[vid] = uid

    def result(self):
        base = self.sub.base_in ^ (1 in self.flips)
        new_sub, _ = _fold(self.sub.disk, self.edges, self.pair, base)
        return new_sub

    # -- effect -------------------------------------------------------------

    def effect(self, new_sub):
        old_events = _event_uids(self.sub)
        new_events = _event_uids(new_sub, self.edges)
        new_index = {ev: t for t, ev in enumerate(new_events)}
        old_diag = self.sub.diagram
        new_diag = new_sub.diagram
        votes = {}
        for t, ev in enumerate(old_events):
            if ev in self.deleted or ev in self.exclude_events:
                continue
            nt = new_index.get(ev)
            if nt is None:
                continue
            old_rid = old_diag.interval_region[t]
            if not old_diag.regions[old_rid].color:
                continue
            new_rid = new_diag.interval_region[nt]
            if not new_diag.regions[new_rid].color:
                continue
            votes.setdefault(old_rid, set()).add(new_rid)
        for uid, old_rid in self.patch_after:
            if not old_diag.regions[old_rid].color:
                continue
            nt = new_index.get(uid)
            if nt is None:
                continue
            new_rid = new_diag.interval_region[nt]
            if new_diag.regions[new_rid].color:
                votes.setdefault(old_rid, set()).add(new_rid)
        mapping = []
        hit = set()
        for rid in old_diag.components:
            image = tuple(sorted(votes.get(rid, ())))
            hit.update(image)
            mapping.append((rid, image))
        created = tuple(r for r in new_diag.components if r not in hit)
        return MoveEffect(tuple(mapping), created)


def _event_uids(sub, edges=None):
    """Event list as stable identifiers: ('p', i) and endpoint uids."""
    if edges is None:
        edges, _ = _tokens(sub)
    out = []
    for i in range(1, sub.disk.point_count + 1):
        out.append(("p", i))
        out.extend(edges[i])
    return out


# ---------------------------------------------------------------------------
# Applying moves
# ---------------------------------------------------------------------------


def apply_move(sub: Subsurface, move: Move, want_effect: bool = False):
    handler = _APPLIERS.get(move.kind)
    if handler is None:
        raise InvalidMove(f"unknown move kind {move.kind}")
    edit = handler(sub, move.data)
    new_sub = edit.result()
    if want_effect:
        return new_sub, edit.effect(new_sub)
    return new_sub


def _chord_positions(sub, ci):
    a, b = sub.chords[ci]
    return _linkey(a, False), _linkey(b, False)


def _common_region(sub, ca, cb):
    diag = sub.diagram
    for rid in (diag.chord_inner[ca], diag.chord_parent[ca]):
        if ca in diag.regions[rid].boundary_chords() and cb in diag.regions[rid].boundary_chords():
            return rid
    raise InvalidMove(f"chords {ca} and {cb} do not cobound a region")


def _apply_surgery1(sub, data):
    ca, cb = data
    if not (0 <= ca < len(sub.chords) and 0 <= cb < len(sub.chords)) or ca == cb:
        raise InvalidMove(f"bad chord pair {data}")
    _common_region(sub, ca, cb)
    edit = _Edit(sub)
    a1, a2 = ("o", ca, 0), ("o", ca, 1)
    b1, b2 = ("o", cb, 0), ("o", cb, 1)
    pa1, pa2 = _chord_positions(sub, ca)
    pb1, pb2 = _chord_positions(sub, cb)
    if pb1 < pa1:
        (a1, a2, pa1, pa2), (b1, b2, pb1, pb2) = (
            (b1, b2, pb1, pb2), (a1, a2, pa1, pa2))
    if pa1 < pb1 and pb2 < pa2:  # nested, A outer
        edit.rewire(a1, b1)
        edit.rewire(b2, a2)
    elif pa2 < pb1:  # siblings
        edit.rewire(a1, b2)
        edit.rewire(a2, b1)
    else:
        raise InvalidMove("chords are not disjointly placed")  # unreachable
    return edit


def _apply_surgery2(sub, data):
    ci, gap = data
    diag = sub.diagram
    if not 0 <= ci < len(sub.chords):
        raise InvalidMove(f"bad chord {ci}")
    if gap not in diag.gap_interval:
        raise InvalidMove(f"bad gap {gap}")
    rid = diag.region_of_gap(gap)
    if ci not in diag.regions[rid].boundary_chords():
        raise InvalidMove(f"chord {ci} is not on the boundary of gap {gap}'s region")
    edit = _Edit(sub)
    e, g = gap
    u1, u2 = edit.fresh(), edit.fresh()
    edit.insert(e, g, u2)
    edit.insert(e, g, u1)
    a1, a2 = ("o", ci, 0), ("o", ci, 1)
    pa1, pa2 = _chord_positions(sub, ci)
    gp = _linkey(gap, True)
    if pa1 < gp < pa2:  # arc attaches inside the span: disjoint smoothing
        edit.rewire(a1, u1)
        edit.rewire(u2, a2)
    else:  # nested smoothing
        if gp < pa1:
            edit.rewire(u1, a2)
            edit.rewire(u2, a1)
        else:
            edit.rewire(a1, u2)
            edit.rewire(a2, u1)
    edit.patch_after.append((u2, rid))
    return edit


def _apply_bsurgery1(sub, data):
    e, g = data[0]
    edit = _Edit(sub)
    tokens = edit.edges[e]
    if not 1 <= g <= len(tokens) - 1:
        raise InvalidMove(f"gap {g} of edge {e} is not between two endpoints")
    ua, ub = tokens[g - 1], tokens[g]
    if ua[1] == ub[1]:
        raise InvalidMove("endpoints belong to one chord; smoothing would close a curve")
    pa, pb = edit.pair[ua], edit.pair[ub]
    edit.delete(ua)
    edit.delete(ub)
    edit.rewire(pa, pb)
    return edit


def _apply_bsurgery2(sub, data):
    i, take = data
    n = sub.disk.point_count
    edit = _Edit(sub)
    if take == "after":
        e_from, e_to = i, (i - 2) % n + 1
        tokens = edit.edges[e_from]
        if not tokens:
            raise InvalidMove(f"edge {e_from} has no endpoint next to x_{i}")
        uid = tokens[0]
        partner = edit.pair[uid]
        fresh = edit.fresh()
        edit.delete(uid)
        edit.insert(e_to, len(edit.edges[e_to]), fresh)
        edit.rewire(fresh, partner)
        edit.exclude_events.add(("p", i))
    elif take == "before":
        e_from, e_to = (i - 2) % n + 1, i
        tokens = edit.edges[e_from]
        if not tokens:
            raise InvalidMove(f"edge {e_from} has no endpoint next to x_{i}")
        uid = tokens[-1]
        partner = edit.pair[uid]
        fresh = edit.fresh()
        edit.delete(uid)
        edit.insert(e_to, 0, fresh)
        edit.rewire(fresh, partner)
    else:
        raise InvalidMove(f"bad direction {take!r}")
    edit.flips.add(i)
    return edit


def _apply_disk_add(sub, data):
    kind, loc = data
    edit = _Edit(sub)
    if kind == "blister":
        e, g = loc
        if not 0 <= g <= len(edit.edges[e]):
            raise InvalidMove(f"bad gap {loc}")
        u1, u2 = edit.fresh(), edit.fresh()
        edit.insert(e, g, u2)
        edit.insert(e, g, u1)
        edit.rewire(u1, u2)
    elif kind == "around":
        i = loc
        n = sub.disk.point_count
        e_prev = (i - 2) % n + 1
        u1, u2 = edit.fresh(), edit.fresh()
        edit.insert(e_prev, len(edit.edges[e_prev]), u1)
        edit.insert(i, 0, u2)
        edit.rewire(u1, u2)
        edit.flips.add(i)
        edit.exclude_events.add(("p", i))
    else:
        raise InvalidMove(f"bad disk addition {data}")
    return edit


def _disk_elim_sides(sub, ci):
    """Sides of chord ci eligible for a disk elimination."""
    diag = sub.diagram
    sides = []
    inner = diag.regions[diag.chord_inner[ci]]
    if not inner.child_chords and len(inner.marked) <= 1:
        sides.append(("inner", inner))
    parent = diag.regions[diag.chord_parent[ci]]
    if (parent.own_chord is None and parent.child_chords == [ci]
            and len(parent.marked) <= 1):
        sides.append(("outer", parent))
    return sides


def _apply_disk_elim(sub, data):
    ci, side = data
    if not 0 <= ci < len(sub.chords):
        raise InvalidMove(f"bad chord {ci}")
    eligible = dict((s, reg) for s, reg in _disk_elim_sides(sub, ci))
    if side not in eligible:
        raise InvalidMove(f"side {side!r} of chord {ci} is not a bare disk")
    edit = _Edit(sub)
    edit.delete(("o", ci, 0))
    edit.delete(("o", ci, 1))
    edit.flips.update(eligible[side].marked)
    return edit


def _apply_null_add(sub, data):
    gap1, gap2 = data
    diag = sub.diagram
    for gap in (gap1, gap2):
        if gap not in diag.gap_interval:
            raise InvalidMove(f"bad gap {gap}")
    rid = diag.region_of_gap(gap1)
    if diag.region_of_gap(gap2) != rid:
        raise InvalidMove("gaps lie in different regions")
    edit = _Edit(sub)
    if gap1 == gap2:
        e, g = gap1
        us = [edit.fresh() for _ in range(4)]
        for uid in reversed(us):
            edit.insert(e, g, uid)
        edit.rewire(us[0], us[3])
        edit.rewire(us[1], us[2])
        edit.patch_after.append((us[1], rid))
    else:
        if _linkey(gap2, True) < _linkey(gap1, True):
            gap1, gap2 = gap2, gap1
        (e1, g1), (e2, g2) = gap1, gap2
        u1, u2, v1, v2 = (edit.fresh() for _ in range(4))
        if e1 == e2:  # insert the later gap first so indices stay valid
            edit.insert(e2, g2, v2)
            edit.insert(e2, g2, v1)
            edit.insert(e1, g1, u2)
            edit.insert(e1, g1, u1)
        else:
            edit.insert(e1, g1, u2)
            edit.insert(e1, g1, u1)
            edit.insert(e2, g2, v2)
            edit.insert(e2, g2, v1)
        edit.rewire(u1, v2)
        edit.rewire(u2, v1)
        edit.patch_after.append((u2, rid))
    return edit


def _strip_region(sub, ca, cb):
    """The empty rectangle region between a parallel pair, or None."""
    diag = sub.diagram
    for outer, inner in ((ca, cb), (cb, ca)):
        reg = diag.regions[diag.chord_inner[outer]]
        if reg.child_chords == [inner] and not reg.marked:
            return reg
    return None


def _apply_null_elim(sub, data):
    ca, cb = data
    if not (0 <= ca < len(sub.chords) and 0 <= cb < len(sub.chords)) or ca == cb:
        raise InvalidMove(f"bad chord pair {data}")
    if _strip_region(sub, ca, cb) is None:
        raise InvalidMove(f"chords {ca}, {cb} do not cobound an empty rectangle")
    edit = _Edit(sub)
    for ci in (ca, cb):
        edit.delete(("o", ci, 0))
        edit.delete(("o", ci, 1))
    return edit


_APPLIERS = {
    "Surgery1": _apply_surgery1,
    "Surgery2": _apply_surgery2,
    "BdrySurgery1": _apply_bsurgery1,
    "BdrySurgery2": _apply_bsurgery2,
    "DiskAdd": _apply_disk_add,
    "DiskElim": _apply_disk_elim,
    "NullAdd": _apply_null_add,
    "NullElim": _apply_null_elim,
}


# ---------------------------------------------------------------------------
# Enumeration
# ---------------------------------------------------------------------------


def acting_region(sub: Subsurface, move: Move) -> Optional[int]:
    """Region id the move's arc or disk lives in (informational)."""
    diag = sub.diagram
    k, d = move.kind, move.data
    if k == "Surgery1":
        return _common_region(sub, *d)
    if k == "Surgery2":
        return diag.region_of_gap(d[1])
    if k == "BdrySurgery1":
        e, g = d[0]
        return diag.region_of_gap((e, g))
    if k == "BdrySurgery2":
        i = d[0]
        return diag.point_region[i]
    if k == "DiskAdd":
        return diag.region_of_gap(d[1]) if d[0] == "blister" else diag.point_region[d[1]]
    if k == "DiskElim":
        ci, side = d
        return diag.chord_inner[ci] if side == "inner" else diag.chord_parent[ci]
    if k == "NullAdd":
        return diag.region_of_gap(d[0])
    if k == "NullElim":
        reg = _strip_region(sub, *d)
        return reg.rid if reg is not None else None
    return None


def enumerate_moves(sub: Subsurface):
    """Every elementary move available on this state, up to isotopy."""
    diag = sub.diagram
    n = sub.disk.point_count
    moves = []
    for reg in diag.regions:
        bchords = sorted(reg.boundary_chords())
        gaps = sorted(diag.interval_gap[t] for t in reg.intervals)
        for ai in range(len(bchords)):
            for bi in range(ai + 1, len(bchords)):
                moves.append(Move("Surgery1", (bchords[ai], bchords[bi])))
        for ci in bchords:
            for gap in gaps:
                moves.append(Move("Surgery2", (ci, gap)))
        for ai in range(len(gaps)):
            for bi in range(ai, len(gaps)):
                moves.append(Move("NullAdd", (gaps[ai], gaps[bi])))
        for gap in gaps:
            moves.append(Move("DiskAdd", ("blister", gap)))
        if (reg.own_chord is not None and not reg.child_chords
                and len(reg.marked) <= 1):
            moves.append(Move("DiskElim", (reg.own_chord, "inner")))
        if (reg.own_chord is None and len(reg.child_chords) == 1
                and len(reg.marked) <= 1):
            moves.append(Move("DiskElim", (reg.child_chords[0], "outer")))
        if (reg.own_chord is not None and len(reg.child_chords) == 1
                and not reg.marked):
            pair = tuple(sorted((reg.own_chord, reg.child_chords[0])))
            moves.append(Move("NullElim", pair))
    for i in range(1, n + 1):
        moves.append(Move("DiskAdd", ("around", i)))
    edges, pairmap = _tokens(sub)
    for e in range(1, n + 1):
        tokens = edges[e]
        for g in range(1, len(tokens)):
            if tokens[g - 1][1] != tokens[g][1]:
                moves.append(Move("BdrySurgery1", ((e, g),)))
    for i in range(1, n + 1):
        e_prev = (i - 2) % n + 1
        if edges[i]:
            moves.append(Move("BdrySurgery2", (i, "after")))
        if edges[e_prev]:
            moves.append(Move("BdrySurgery2", (i, "before")))
    return moves


def successors(sub: Subsurface, max_chords: Optional[int] = None,
               want_effects: bool = False) -> SuccessorSet:
    """All (move, result) pairs, canonicalized; capped results are excluded."""
    pairs = []
    capped = 0
    for move in enumerate_moves(sub):
        if want_effects:
            new_sub, effect = apply_move(sub, move, want_effect=True)
        else:
            new_sub, effect = apply_move(sub, move), None
        if max_chords is not None and len(new_sub.chords) > max_chords:
            capped += 1
            continue
        pairs.append((move, new_sub, effect) if want_effects else (move, new_sub))
    return SuccessorSet(pairs, capped)


def find_move_between(a: Subsurface, b: Subsurface) -> Move:
    """Some move turning state ``a`` into state ``b`` (for witness stitching)."""
    for move, result in successors(a, max_chords=None):
        if result == b:
            return move
    raise InvalidMove("states are not related by one elementary move")
