"""CW model of torus-knot Seifert surfaces and glued subsurfaces.

The fiber surface of the (p, q) torus knot carries a CW structure with two
families of 2-cells, ``U_1..U_p`` and ``V_1..V_q``, every ``U_i`` glued to
every ``V_j`` along a single 1-cell ``alpha_{i,j}``, and the monodromy acting
cellularly by ``U_i -> U_{i+1}``, ``V_j -> V_{j+1}``,
``alpha_{i,j} -> alpha_{i+1,j+1}`` (indices cyclic).  Each piece is a marked
disk whose boundary alternates alpha sides and knot arcs, so ``U_i`` carries
``2q`` marked points and ``V_j`` carries ``2p``.

Piece disks are labeled equivariantly: on ``U_i`` the arc ``alpha_{i,j}``
occupies abstract slot ``(j - i) mod q``, so the monodromy is the identity
in piece coordinates except at the wrap-around ``U_p -> U_1`` and
``V_q -> V_1``, which rotate the marked points by ``2p mod 2q`` and
``2q mod 2p`` steps respectively; for q = p + 1 these are rotations by two
marked points, one against and one with the orientation.

Boundary tracing: on ``U_i`` the knot arc after ``alpha_{i,j}`` leads to
``alpha_{i,j+1}``, then the knot continues on ``V_{j+1}`` toward
``alpha_{i+1,j+1}``, so the u-arc orbit (i, j) -> (i+1, j+1) covers all pq
u-arcs when gcd(p, q) = 1: the boundary is a single circle and the genus is
(p-1)(q-1)/2.

A glued subsurface stores one chord-diagram subsurface per piece, in normal
position relative to the alpha multicurve: chord endpoints on an alpha edge
are crossings, which must match the neighboring piece under the
orientation-reversing identification of the arc (slot ``s`` of ``k``
matches slot ``k-1-s``), with equal region colors along each segment
whenever the arc carries at least one crossing.  A crossing-free arc may
have any color pair: unequal sides mean the arc lies on the subsurface
boundary.  Each piece must be essential over its own marked disk, the
combinatorial form of minimal position with the gluing multicurve.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Dict, Iterator, Optional, Tuple

from .disk import MarkedDisk, Subsurface, adjusted_chi, is_essential
from .errors import (
    DegenerateParameters,
    NonMinimalPiece,
    NotCoprime,
    TraceMismatch,
    UnknownCell,
)

Piece = Tuple[str, int]  # ('U', i) or ('V', j), 1-based


class TorusKnotComplex:
    """The CW structure on the Seifert surface of the (p, q) torus knot."""

    def __init__(self, p: int, q: int):
        if p < 2 or q < 2:
            raise DegenerateParameters(f"need p, q >= 2, got ({p}, {q})")
        if gcd(p, q) != 1:
            raise NotCoprime(f"({p}, {q}) are not coprime")
        self.p = p
        self.q = q
        self.u_disk = MarkedDisk(2 * q)
        self.v_disk = MarkedDisk(2 * p)

    # -- cells --------------------------------------------------------------

    def pieces(self) -> Iterator[Piece]:
        for i in range(1, self.p + 1):
            yield ("U", i)
        for j in range(1, self.q + 1):
            yield ("V", j)

    def piece_disk(self, piece: Piece) -> MarkedDisk:
        return self.u_disk if piece[0] == "U" else self.v_disk

    def cells(self) -> Iterator[tuple]:
        yield from (("U", i) for i in range(1, self.p + 1))
        yield from (("V", j) for j in range(1, self.q + 1))
        for i in range(1, self.p + 1):
            for j in range(1, self.q + 1):
                yield ("alpha", i, j)
                yield ("uarc", i, j)
                yield ("varc", i, j)
                yield ("vertex", i, j, 0)
                yield ("vertex", i, j, 1)

    def euler_characteristic(self) -> int:
        vertices = 2 * self.p * self.q
        edges = 3 * self.p * self.q
        faces = self.p + self.q
        return vertices - edges + faces

    def genus(self) -> int:
        return (self.p - 1) * (self.q - 1) // 2

    def boundary_components(self) -> int:
        # trace knot arcs: u-arc (i, j) -> v-arc (i, j+1) -> u-arc (i+1, j+1)
        seen = set()
        count = 0
        for i0 in range(1, self.p + 1):
            for j0 in range(1, self.q + 1):
                if ("u", i0, j0) in seen:
                    continue
                count += 1
                i, j = i0, j0
                while ("u", i, j) not in seen:
                    seen.add(("u", i, j))
                    i = i % self.p + 1
                    j = j % self.q + 1
        return count

    # -- piece-level arc layout ----------------------------------------------

    def arc_slot(self, piece: Piece, other_index: int) -> int:
        """Abstract slot of the alpha arc joining this piece to the other.

        On U_i, arc alpha_{i,j} sits at slot (j - i) mod q; on V_j it sits at
        slot (i - j) mod p.  The alpha side of slot s is edge 2s + 1 of the
        piece disk; edge 2s + 2 is the knot arc following it.
        """
        kind, idx = piece
        if kind == "U":
            return (other_index - idx) % self.q
        return (other_index - idx) % self.p

    def arc_edge(self, piece: Piece, other_index: int) -> int:
        return 2 * self.arc_slot(piece, other_index) + 1

    def arc_of_edge(self, piece: Piece, edge: int) -> Optional[tuple]:
        """The arc (i, j) occupying an odd edge of a piece disk, else None."""
        if edge % 2 == 0:
            return None
        s = (edge - 1) // 2
        kind, idx = piece
        if kind == "U":
            return (idx, (idx + s - 1) % self.q + 1)
        return ((idx + s - 1) % self.p + 1, idx)

    def arcs(self) -> Iterator[tuple]:
        for i in range(1, self.p + 1):
            for j in range(1, self.q + 1):
                yield (i, j)

    def neighbor(self, piece: Piece, edge: int) -> Tuple[Piece, int]:
        """The piece and edge on the far side of an alpha edge."""
        arc = self.arc_of_edge(piece, edge)
        if arc is None:
            raise UnknownCell(f"edge {edge} of {piece} is a knot arc")
        i, j = arc
        if piece[0] == "U":
            other = ("V", j)
        else:
            other = ("U", i)
        return other, self.arc_edge(other, piece[1])

    # -- monodromy ------------------------------------------------------------

    def monodromy_cell(self, cell: tuple) -> tuple:
        kind = cell[0]
        p, q = self.p, self.q
        if kind == "U":
            if not 1 <= cell[1] <= p:
                raise UnknownCell(f"{cell}")
            return ("U", cell[1] % p + 1)
        if kind == "V":
            if not 1 <= cell[1] <= q:
                raise UnknownCell(f"{cell}")
            return ("V", cell[1] % q + 1)
        if kind in ("alpha", "uarc", "varc"):
            _, i, j = cell
            if not (1 <= i <= p and 1 <= j <= q):
                raise UnknownCell(f"{cell}")
            return (kind, i % p + 1, j % q + 1)
        if kind == "vertex":
            _, i, j, end = cell
            if not (1 <= i <= p and 1 <= j <= q and end in (0, 1)):
                raise UnknownCell(f"{cell}")
            return ("vertex", i % p + 1, j % q + 1, end)
        raise UnknownCell(f"{cell}")

    def monodromy_orbits(self) -> dict:
        lengths = {}
        seen = set()
        for cell in self.cells():
            if cell in seen:
                continue
            length = 0
            c = cell
            while c not in seen:
                seen.add(c)
                c = self.monodromy_cell(c)
                length += 1
            lengths.setdefault(cell[0], []).append(length)
        return lengths

    def wrap_rotation(self, kind: str) -> int:
        """Marked-point rotation applied at the wrap-around piece map."""
        if kind == "U":
            return (2 * self.p) % (2 * self.q)
        return (2 * self.q) % (2 * self.p)

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "q": self.q,
            "euler_characteristic": self.euler_characteristic(),
            "genus": self.genus(),
            "boundary_components": self.boundary_components(),
            "u_marked_points": 2 * self.q,
            "v_marked_points": 2 * self.p,
            "wrap_rotation": {"U": self.wrap_rotation("U"), "V": self.wrap_rotation("V")},
        }


def build_complex(p: int, q: int) -> TorusKnotComplex:
    return TorusKnotComplex(p, q)


# ---------------------------------------------------------------------------
# Glued subsurfaces
# ---------------------------------------------------------------------------


def _edge_trace(sub: Subsurface, edge: int):
    """Crossings and segment colors of a piece boundary edge.

    Returns (k, colors) where k is the number of chord endpoints on the edge
    and colors the k+1 region colors of the segments between them, in slot
    order.
    """
    diag = sub.diagram
    k = diag.edge_slot_count(edge)
    colors = []
    for g in range(k + 1):
        rid = diag.interval_region[diag.gap_interval[(edge, g)]]
        colors.append(diag.regions[rid].color)
    return k, tuple(colors)


@dataclass(frozen=True)
class ArcTrace:
    """Crossing count and segment colors of one gluing arc, from the U side."""

    crossings: int
    u_colors: tuple
    v_colors: tuple

    def to_json(self):
        return {
            "crossings": self.crossings,
            "u_colors": list(map(bool, self.u_colors)),
            "v_colors": list(map(bool, self.v_colors)),
        }


class GluedSubsurface:
    """A subsurface of the glued surface, one chord diagram per piece."""

    __slots__ = ("complex", "pieces", "_key")

    def __init__(self, complex: TorusKnotComplex, pieces: Dict[Piece, Subsurface],
                 validate: bool = True):
        self.complex = complex
        self.pieces = dict(pieces)
        for piece in complex.pieces():
            if piece not in self.pieces:
                raise TraceMismatch(f"missing piece {piece}")
            if self.pieces[piece].disk != complex.piece_disk(piece):
                raise TraceMismatch(f"piece {piece} lives on the wrong disk")
        self._key = (
            complex.p, complex.q,
            tuple(self.pieces[pc].key() for pc in complex.pieces()),
        )
        if validate:
            self.validate()

    def key(self):
        return self._key

    def __eq__(self, other):
        return isinstance(other, GluedSubsurface) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"GluedSubsurface(p={self.complex.p}, q={self.complex.q})"

    # -- validation -----------------------------------------------------------

    def validate(self) -> None:
        for piece, sub in self.pieces.items():
            if not is_essential(sub):
                raise NonMinimalPiece(
                    f"piece {piece} has an inessential boundary component")
        for arc in self.complex.arcs():
            self.arc_trace(arc)

    def arc_trace(self, arc: tuple) -> ArcTrace:
        """The matched crossing data of one gluing arc.

        The identification reverses orientation, so the V-side sequence is
        compared against the reversed U-side sequence.  With no crossings the
        two sides are free: unequal colors mean the arc lies on the interior
        boundary of the subsurface.
        """
        i, j = arc
        u_sub = self.pieces[("U", i)]
        v_sub = self.pieces[("V", j)]
        ku, u_colors = _edge_trace(u_sub, self.complex.arc_edge(("U", i), j))
        kv, v_colors = _edge_trace(v_sub, self.complex.arc_edge(("V", j), i))
        if ku != kv:
            raise TraceMismatch(
                f"arc {arc}: U side crosses {ku} times, V side {kv}")
        if ku > 0 and u_colors != tuple(reversed(v_colors)):
            raise TraceMismatch(f"arc {arc}: segment colors disagree")
        return ArcTrace(ku, u_colors, v_colors)

    def traces(self) -> dict:
        return {arc: self.arc_trace(arc) for arc in self.complex.arcs()}

    # -- invariants -----------------------------------------------------------

    def glued_chi(self):
        """Per-piece adjusted Euler characteristics and their sum."""
        per_piece = {pc: adjusted_chi(sub) for pc, sub in self.pieces.items()}
        return per_piece, sum(per_piece.values(), Fraction(0))

    def direct_chi(self) -> Fraction:
        """The glued formula evaluated on the assembled object.

        Euler characteristic via gluing: piece components counted, minus one
        for each component of the both-sided intersection with the arcs;
        boundary crossings are the chord endpoints on knot edges plus two for
        every crossing-free arc lying on the subsurface boundary.
        """
        comp = 0
        for sub in self.pieces.values():
            comp += len(sub.diagram.components)
        both_in = 0
        knot_endpoints = 0
        boundary_arcs = 0
        for arc in self.complex.arcs():
            tr = self.arc_trace(arc)
            if tr.crossings == 0:
                u, v = tr.u_colors[0], tr.v_colors[0]
                if u and v:
                    both_in += 1
                elif u != v:
                    boundary_arcs += 1
            else:
                both_in += sum(1 for c in tr.u_colors if c)
        for piece, sub in self.pieces.items():
            for a, b in sub.chords:
                for e, _ in (a, b):
                    if e % 2 == 0:
                        knot_endpoints += 1
        chi = comp - both_in
        return Fraction(chi) - Fraction(knot_endpoints + 2 * boundary_arcs, 4)

    # -- monodromy ------------------------------------------------------------

    def monodromy(self) -> "GluedSubsurface":
        """Push the subsurface forward through the cellular monodromy."""
        from .disk import rotate

        cx = self.complex
        new_pieces = {}
        for i in range(1, cx.p + 1):
            src = self.pieces[("U", i)]
            if i < cx.p:
                new_pieces[("U", i + 1)] = src
            else:
                new_pieces[("U", 1)] = rotate(src, cx.wrap_rotation("U"))
        for j in range(1, cx.q + 1):
            src = self.pieces[("V", j)]
            if j < cx.q:
                new_pieces[("V", j + 1)] = src
            else:
                new_pieces[("V", 1)] = rotate(src, cx.wrap_rotation("V"))
        return GluedSubsurface(cx, new_pieces)

    def to_json(self) -> dict:
        return {
            "p": self.complex.p,
            "q": self.complex.q,
            "pieces": {
                f"{kind}{idx}": self.pieces[(kind, idx)].to_json()
                for kind, idx in self.complex.pieces()
            },
            "traces": {
                f"alpha_{i}_{j}": self.arc_trace((i, j)).to_json()
                for i, j in self.complex.arcs()
            },
        }


def make_glued(complex: TorusKnotComplex, pieces: Dict[Piece, Subsurface],
               traces: Optional[dict] = None) -> GluedSubsurface:
    """Validate piece data (and optional expected traces) into a glued state."""
    glued = GluedSubsurface(complex, pieces)
    if traces is not None:
        derived = glued.traces()
        for arc, expected in traces.items():
            got = derived[tuple(arc)]
            if int(expected.get("crossings", got.crossings)) != got.crossings:
                raise TraceMismatch(f"arc {arc}: stated trace disagrees with pieces")
    return glued


def empty_glued(cx: TorusKnotComplex) -> GluedSubsurface:
    return GluedSubsurface(cx, {
        pc: Subsurface(cx.piece_disk(pc), [], False) for pc in cx.pieces()
    })


def full_glued(cx: TorusKnotComplex) -> GluedSubsurface:
    return GluedSubsurface(cx, {
        pc: Subsurface(cx.piece_disk(pc), [], True) for pc in cx.pieces()
    })


def single_piece_glued(cx: TorusKnotComplex, piece: Piece) -> GluedSubsurface:
    """The glued subsurface isotopic to one closed 2-cell."""
    pieces = {
        pc: Subsurface(cx.piece_disk(pc), [], pc == piece) for pc in cx.pieces()
    }
    return GluedSubsurface(cx, pieces)
