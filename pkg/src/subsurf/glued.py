"""Surgeries on glued subsurfaces along normal arcs, and path decomposition.

A glued move is a surgery along an arc in normal position with respect to
the gluing multicurve, described piecewise: each segment runs through one
piece between two attachments, which are a chord, a knot-edge gap (an
endpoint of the arc on the surface boundary), or a crossing of a gluing arc
at a stated gap.  Consecutive segments share a crossing under the
orientation-reversing arc identification.  Normality requires that no
segment enters and leaves one gluing arc at the same gap (a bigon).

Applying the surgery decomposes into piece moves:

- each segment becomes one move on its piece: a type 1 surgery
  (chord-to-chord), a type 2 surgery (chord to piece boundary), or a null
  component addition (both attachments on the piece boundary, which covers
  knot gaps and crossings alike);
- smoothing at the arc's true endpoints can leave the pieces out of minimal
  position with the gluing multicurve; normalization sweeps the resulting
  bigons and half-bigons.  A maximal bigon chain (a snake of trivial
  crossings) costs a single type 1 boundary surgery in its terminal piece,
  all other steps being free null component or disk eliminations; a half
  bigon costs one type 2 boundary surgery in the neighboring piece.

The equivalence-class length of all piece moves for one glued move is at
most six: at most two counted surgeries from the segments plus at most four
counted boundary surgeries from the sweep, one per corner at the smoothed
ends.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .disk import Subsurface, chord_is_essential, is_essential
from .errors import InvalidMove, NonMinimalPiece, NonNormalArc, ReplayFailure
from .moves import Move, SURGERY_KINDS, apply_move
from .paths import DiscretePath
from .seifert import GluedSubsurface, Piece, TorusKnotComplex

Attach = tuple  # ('chord', ci) | ('knot', edge, gap) | ('cross', edge, gap)


@dataclass(frozen=True)
class Segment:
    piece: Piece
    start: Attach
    end: Attach

    def to_json(self):
        return {"piece": list(self.piece), "start": list(self.start),
                "end": list(self.end)}

    @staticmethod
    def from_json(obj):
        return Segment(tuple(obj["piece"]), tuple(obj["start"]), tuple(obj["end"]))


@dataclass(frozen=True)
class NormalArc:
    segments: tuple

    def to_json(self):
        return {"segments": [s.to_json() for s in self.segments]}

    @staticmethod
    def from_json(obj):
        return NormalArc(tuple(Segment.from_json(s) for s in obj["segments"]))


def _attach_region(sub: Subsurface, cx: TorusKnotComplex, piece, attach):
    """Region ids of the piece diagram adjacent to an attachment."""
    diag = sub.diagram
    kind = attach[0]
    if kind == "chord":
        ci = attach[1]
        if not 0 <= ci < len(sub.chords):
            raise NonNormalArc(f"no chord {ci} in piece {piece}")
        return {diag.chord_inner[ci], diag.chord_parent[ci]}
    _, edge, gap = attach
    if kind == "knot" and edge % 2 != 0:
        raise NonNormalArc(f"edge {edge} of {piece} is not a knot edge")
    if kind == "cross" and edge % 2 != 1:
        raise NonNormalArc(f"edge {edge} of {piece} is not a gluing arc side")
    if (edge, gap) not in diag.gap_interval:
        raise NonNormalArc(f"no gap {gap} on edge {edge} of {piece}")
    return {diag.region_of_gap((edge, gap))}


def _gap_color(sub: Subsurface, edge, gap):
    diag = sub.diagram
    return diag.regions[diag.region_of_gap((edge, gap))].color


def validate_arc(glued: GluedSubsurface, arc: NormalArc) -> bool:
    """Check structure, normality and a consistent side; returns the side."""
    cx = glued.complex
    segs = arc.segments
    if not segs:
        raise NonNormalArc("empty arc")
    if segs[0].start[0] == "cross":
        raise NonNormalArc("arc starts at a crossing")
    if segs[-1].end[0] == "cross":
        raise NonNormalArc("arc ends at a crossing")
    side = None
    for t, seg in enumerate(segs):
        sub = glued.pieces[seg.piece]
        if t > 0 and seg.start[0] != "cross":
            raise NonNormalArc("interior segment must start at a crossing")
        if t < len(segs) - 1 and seg.end[0] != "cross":
            raise NonNormalArc("interior segment must end at a crossing")
        regions = _attach_region(sub, cx, seg.piece, seg.start) & \
            _attach_region(sub, cx, seg.piece, seg.end)
        if not regions:
            raise NonNormalArc(
                f"segment {t} attachments do not share a region of {seg.piece}")
        rid = min(regions)
        color = sub.diagram.regions[rid].color
        if side is None:
            side = color
        elif side != color:
            raise NonNormalArc("segments lie on both sides of the subsurface")
        if (seg.start[0] == "cross" and seg.end[0] == "cross"
                and seg.start[1] == seg.end[1] and seg.start[2] == seg.end[2]):
            raise NonNormalArc("segment returns through the gap it entered (bigon)")
        if seg.start == seg.end and seg.start[0] == "knot":
            raise NonNormalArc("both endpoints in one knot gap are ambiguous")
        if t < len(segs) - 1:
            nxt = segs[t + 1]
            _, a_edge, gap = seg.end
            other, other_edge = cx.neighbor(seg.piece, a_edge)
            if nxt.piece != other:
                raise NonNormalArc(f"segment {t + 1} is not in the neighbor piece")
            k = sub.diagram.edge_slot_count(a_edge)
            expect = ("cross", other_edge, k - gap)
            if nxt.start != expect:
                raise NonNormalArc(
                    f"segment {t + 1} must start at {expect}, got {nxt.start}")
            if _gap_color(glued.pieces[other], other_edge, k - gap) != side:
                raise NonNormalArc("crossing gap colors disagree across the arc")
    both_chord = segs[0].start[0] == "chord" and segs[-1].end[0] == "chord"
    if both_chord and len(segs) == 1 and segs[0].start == segs[0].end:
        raise NonNormalArc("surgery along one chord would close a curve")
    if (len(segs) > 1 and both_chord and segs[0].piece == segs[-1].piece
            and segs[0].start[1] == segs[-1].end[1]):
        raise NonNormalArc("both endpoints on one piece chord are ambiguous")
    return side


class _PieceDriver:
    """Tracks one piece's state and translates original coordinates."""

    def __init__(self, sub: Subsurface):
        self.start = sub
        self.state = sub
        self.moves: List[Move] = []
        self.ins: Dict[int, List[int]] = {}  # edge -> original gaps inserted at

    def current_gap(self, edge, gap):
        shift = sum(2 for g in self.ins.get(edge, ()) if g < gap)
        return gap + shift

    def current_slot(self, edge, slot):
        shift = sum(2 for g in self.ins.get(edge, ()) if g <= slot)
        return slot + shift

    def note_insert(self, edge, gap):
        self.ins.setdefault(edge, []).append(gap)

    def chord_index(self, endpoint):
        """Current index of the chord with the given current endpoint."""
        for ci, (a, b) in enumerate(self.state.chords):
            if a == endpoint or b == endpoint:
                return ci
        raise InvalidMove(f"no chord at {endpoint}")

    def play(self, move: Move):
        self.moves.append(move)
        self.state = apply_move(self.state, move)


def _original_chord_endpoint(driver, start_sub, ci):
    """A current endpoint of what was chord ci in the original state."""
    a, b = start_sub.chords[ci]
    return (a[0], driver.current_slot(a[0], a[1]))


def apply_glued_move(glued: GluedSubsurface, arc: NormalArc):
    """Surger a glued subsurface along a normal arc.

    Returns (new_glued, piece_moves) where piece_moves maps each piece to
    the move sequence realizing the step on that piece; replaying them from
    the old piece states yields the new ones.  Raises NonMinimalPiece when
    the smoothed subsurface is inessential on the glued surface.
    """
    validate_arc(glued, arc)
    cx = glued.complex
    drivers = {pc: _PieceDriver(sub) for pc, sub in glued.pieces.items()}

    # -- segment insertions --------------------------------------------------
    for seg in arc.segments:
        drv = drivers[seg.piece]
        start_sub = glued.pieces[seg.piece]
        ports = []
        for attach in (seg.start, seg.end):
            kind = attach[0]
            if kind == "chord":
                ports.append(("chord", _original_chord_endpoint(
                    drv, start_sub, attach[1])))
            else:
                _, edge, gap = attach
                ports.append(("gap", (edge, drv.current_gap(edge, gap))))
        kinds = tuple(p[0] for p in ports)
        if kinds == ("chord", "chord"):
            ca = drv.chord_index(ports[0][1])
            cb = drv.chord_index(ports[1][1])
            drv.play(Move("Surgery1", tuple(sorted((ca, cb)))))
        elif "chord" in kinds:
            which = kinds.index("chord")
            ci = drv.chord_index(ports[which][1])
            gap = ports[1 - which][1]
            drv.play(Move("Surgery2", (ci, gap)))
        else:
            g1, g2 = sorted((ports[0][1], ports[1][1]))
            drv.play(Move("NullAdd", (g1, g2)))
        for attach in (seg.start, seg.end):
            if attach[0] != "chord":
                drv.note_insert(attach[1], attach[2])

    # -- normalization sweeps --------------------------------------------------
    _normalize(cx, drivers)

    new_pieces = {pc: drv.state for pc, drv in drivers.items()}
    try:
        new_glued = GluedSubsurface(cx, new_pieces)
    except NonMinimalPiece:
        raise
    return new_glued, {pc: drv.moves for pc, drv in drivers.items()}


def _trivial_alpha_chords(sub: Subsurface):
    """Chords with both endpoints adjacent on one gluing-arc edge."""
    out = []
    for ci, (a, b) in enumerate(sub.chords):
        if a[0] == b[0] and a[0] % 2 == 1 and abs(a[1] - b[1]) == 1:
            out.append(ci)
    return out


def _half_bigon_chords(sub: Subsurface):
    """Chords cutting off exactly one marked point, adjacently.

    Returns (ci, point, alpha_endpoint, side) tuples: the cut-off side holds
    the single marked point and no other endpoints, and exactly one of the
    chord's endpoints lies on a gluing-arc edge next to the arc's end.
    """
    diag = sub.diagram
    out = []
    for ci, (a, b) in enumerate(sub.chords):
        for side_name, rid in (("inner", diag.chord_inner[ci]),
                               ("outer", diag.chord_parent[ci])):
            reg = diag.regions[rid]
            if side_name == "inner":
                bare = not reg.child_chords
            else:
                bare = reg.own_chord is None and reg.child_chords == [ci]
            if not bare or len(reg.marked) != 1:
                continue
            alpha_end = a if a[0] % 2 == 1 else (b if b[0] % 2 == 1 else None)
            if alpha_end is None:
                continue
            out.append((ci, reg.marked[0], alpha_end, side_name))
    return out


def _mirror_slot(cx, drivers, piece, edge, slot):
    # the count is read off the neighbor, which has not shed these crossings
    other, other_edge = cx.neighbor(piece, edge)
    k = drivers[other].state.diagram.edge_slot_count(other_edge)
    return other, other_edge, k - 1 - slot


def _chord_at(sub: Subsurface, endpoint):
    for ci, (a, b) in enumerate(sub.chords):
        if a == endpoint or b == endpoint:
            return ci
    raise InvalidMove(f"no endpoint {endpoint}")


def _other_end(sub, ci, endpoint):
    a, b = sub.chords[ci]
    return b if a == endpoint else a


def _normalize(cx, drivers):
    guard = 0
    while True:
        guard += 1
        if guard > 10000:
            raise InvalidMove("normalization did not terminate")
        progressed = False
        for piece, drv in drivers.items():
            triv = _trivial_alpha_chords(drv.state)
            if triv:
                _sweep_bigon(cx, drivers, piece, triv[0])
                progressed = True
                break
        if progressed:
            continue
        for piece, drv in drivers.items():
            halves = _half_bigon_chords(drv.state)
            if halves:
                _slide_half_bigon(cx, drivers, piece, halves[0])
                progressed = True
                break
        if not progressed:
            return


def _sweep_bigon(cx, drivers, piece, ci):
    """Eliminate a maximal bigon chain starting from a trivial chord.

    Walks the snake: the trivial chord's two crossings match a chord pair in
    the neighbor; when joining that pair would create another trivial chord
    the pair is erased as a null component and the walk continues across the
    next arc, so the single counted boundary surgery lands in the terminal
    piece.
    """
    drv = drivers[piece]
    a, b = drv.state.chords[ci]
    edge = a[0]
    slots = sorted((a[1], b[1]))
    side = "inner" if not drv.state.diagram.regions[
        drv.state.diagram.chord_inner[ci]].child_chords else "outer"
    drv.play(Move("DiskElim", (ci, side)))

    cur_piece, cur_edge, cur_slots = piece, edge, slots
    while True:
        other, other_edge, hi = _mirror_slot(
            cx, drivers, cur_piece, cur_edge, cur_slots[0])
        lo = hi - 1
        odrv = drivers[other]
        osub = odrv.state
        # note: mirror computed against the state before this side sheds its
        # crossings; both sides still agree here.
        e1 = (other_edge, lo)
        e2 = (other_edge, hi)
        c1 = _chord_at(osub, e1)
        c2 = _chord_at(osub, e2)
        if c1 == c2:
            # facing trivial chord: the closed curve vanishes entirely
            side2 = "inner" if not osub.diagram.regions[
                osub.diagram.chord_inner[c1]].child_chords else "outer"
            odrv.play(Move("DiskElim", (c1, side2)))
            return
        f1 = _other_end(osub, c1, e1)
        f2 = _other_end(osub, c2, e2)
        chain = (
            f1[0] == f2[0] and f1[0] % 2 == 1 and abs(f1[1] - f2[1]) == 1
        )
        if chain:
            odrv.play(Move("NullElim", tuple(sorted((c1, c2)))))
            cur_piece, cur_edge, cur_slots = other, f1[0], sorted((f1[1], f2[1]))
            continue
        odrv.play(Move("BdrySurgery1", ((other_edge, hi),)))
        return


def _slide_half_bigon(cx, drivers, piece, item):
    ci, point, alpha_end, side = item
    drv = drivers[piece]
    sub = drv.state
    edge, slot = alpha_end
    k = sub.diagram.edge_slot_count(edge)
    if slot not in (0, k - 1):
        raise InvalidMove("half bigon crossing is not at the arc end")
    other, other_edge, mslot = _mirror_slot(cx, drivers, piece, edge, slot)
    drv.play(Move("DiskElim", (ci, side)))
    odrv = drivers[other]
    if mslot == 0:
        odrv.play(Move("BdrySurgery2", (other_edge, "after")))
    else:
        n = odrv.state.disk.point_count
        odrv.play(Move("BdrySurgery2", (other_edge % n + 1, "before")))


# ---------------------------------------------------------------------------
# Glued paths and decomposition
# ---------------------------------------------------------------------------


class GluedPath:
    """Glued subsurfaces joined by surgeries along normal arcs."""

    def __init__(self, states, moves):
        if len(states) != len(moves) + 1:
            raise ReplayFailure("need exactly one more state than moves")
        self.states = list(states)
        self.moves = list(moves)
        for t, arc in enumerate(self.moves):
            result, _ = apply_glued_move(self.states[t], arc)
            if result != self.states[t + 1]:
                raise ReplayFailure(f"glued move {t} does not replay")

    @staticmethod
    def from_moves(start, arcs):
        states = [start]
        for arc in arcs:
            nxt, _ = apply_glued_move(states[-1], arc)
            states.append(nxt)
        return GluedPath(states, arcs)

    def length(self):
        return len(self.moves)

    def to_json(self):
        return {
            "p": self.states[0].complex.p,
            "q": self.states[0].complex.q,
            "states": [s.to_json() for s in self.states],
            "moves": [a.to_json() for a in self.moves],
        }


def decompose_path(path: GluedPath):
    """Per-piece discrete paths realizing a glued path, with the 6x bound.

    Returns a dict with the piece paths, the summed equivalence-class
    length, the per-step boundary indices into each piece path, and the
    reassembly states; callers check ``eq_length_sum <= 6 * length`` and
    that the boundary states reassemble to the stored glued states.
    """
    cx = path.states[0].complex
    piece_moves = {pc: [] for pc in cx.pieces()}
    boundaries = {pc: [0] for pc in cx.pieces()}
    for t, arc in enumerate(path.moves):
        _, moves = apply_glued_move(path.states[t], arc)
        for pc in cx.pieces():
            piece_moves[pc].extend(moves[pc])
            boundaries[pc].append(len(piece_moves[pc]))
    piece_paths = {}
    for pc in cx.pieces():
        piece_paths[pc] = DiscretePath.from_moves(
            path.states[0].pieces[pc], piece_moves[pc])
    eq_sum = sum(p.eq_length() for p in piece_paths.values())
    return {
        "piece_paths": piece_paths,
        "eq_length_sum": eq_sum,
        "length": path.length(),
        "boundaries": boundaries,
    }


def reassembly_ok(path: GluedPath, decomposition) -> bool:
    """Per-step piece states must equal the stored glued states' pieces."""
    cx = path.states[0].complex
    for t in range(len(path.states)):
        for pc in cx.pieces():
            idx = decomposition["boundaries"][pc][t]
            got = decomposition["piece_paths"][pc].states[idx]
            if got != path.states[t].pieces[pc]:
                return False
    return True
