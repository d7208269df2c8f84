"""Discrete paths of subsurfaces, twistedness, and splitting detection.

A discrete path is a sequence of subsurfaces in which consecutive states
differ by one elementary move (no identity steps exist: every move changes
the isotopy class).  Indices may start below zero, matching the convention
that a path runs from ``Omega_{-l}`` to ``Omega_k``.

Lineage: applying each move yields a correspondence of connected components
(a move touches at most two components: split, merge, create, destroy, or
carry).  The transitive closure of the correspondences partitions all
(state, component) pairs into lineage classes, the combinatorial shadow of
the connected components of the three-dimensional realization of the path.

A path is twisted when rotating its first state by the given step gives its
last state.  Splitting with respect to the rotation asks for an integer
label on every lineage class such that each start-slice component labeled n
is carried by the rotation to an end-slice component labeled n - 1.  The
labels satisfy a system of difference constraints; a solution is a
splitting certificate, and an unsatisfiable constraint cycle (nonzero total
shift) certifies that no splitting exists.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .disk import Subsurface, adjusted_chi, restrict, rotate
from .errors import NotTwisted, ReplayFailure
from .moves import Move, MoveEffect, SURGERY_KINDS, apply_move


class DiscretePath:
    """States joined by elementary moves, with component lineage."""

    def __init__(self, states: Sequence[Subsurface], moves: Sequence[Move],
                 start_index: int = 0):
        if len(states) != len(moves) + 1:
            raise ReplayFailure("need exactly one more state than moves")
        self.states = list(states)
        self.moves = list(moves)
        self.start_index = start_index
        self.effects: List[MoveEffect] = []
        for t, move in enumerate(self.moves):
            result, effect = apply_move(self.states[t], move, want_effect=True)
            if result != self.states[t + 1]:
                raise ReplayFailure(f"move {t} does not replay to the stored state")
            self.effects.append(effect)

    @staticmethod
    def from_moves(start: Subsurface, moves: Sequence[Move],
                   start_index: int = 0) -> "DiscretePath":
        states = [start]
        for move in moves:
            states.append(apply_move(states[-1], move))
        return DiscretePath(states, moves, start_index)

    def __len__(self):
        return len(self.moves)

    @property
    def first(self) -> Subsurface:
        return self.states[0]

    @property
    def last(self) -> Subsurface:
        return self.states[-1]

    def length(self) -> int:
        return len(self.moves)

    def eq_length(self) -> int:
        return sum(1 for m in self.moves if m.kind in SURGERY_KINDS)

    def is_twisted(self, twist: int) -> bool:
        return rotate(self.first, twist) == self.last

    def to_json(self, twist: Optional[int] = None) -> dict:
        out = {
            "start_index": self.start_index,
            "states": [s.to_json() for s in self.states],
            "moves": [m.to_json(self.states[t]) for t, m in enumerate(self.moves)],
        }
        if twist is not None:
            out["twist"] = twist
        return out

    @staticmethod
    def from_json(obj: dict) -> "DiscretePath":
        states = [Subsurface.from_json(s) for s in obj["states"]]
        moves = [Move.from_json(m) for m in obj["moves"]]
        return DiscretePath(states, moves, obj.get("start_index", 0))


def path_metrics(path: DiscretePath, twist: int) -> dict:
    """Length, equivalence-class length and twistedness of a path."""
    return {
        "length": path.length(),
        "eq_length": path.eq_length(),
        "twisted": path.is_twisted(twist),
    }


# ---------------------------------------------------------------------------
# Lineage classes and splitting
# ---------------------------------------------------------------------------


class _ShiftedUnionFind:
    """Union-find with integer potentials: label(a) - label(b) fixed.

    Tracks, for each element, an offset to its representative; merging two
    elements with a required difference either succeeds or reports the
    conflicting pair.
    """

    def __init__(self):
        self.parent = {}
        self.offset = {}  # label(x) - label(parent(x))

    def add(self, x):
        if x not in self.parent:
            self.parent[x] = x
            self.offset[x] = 0

    def find(self, x):
        if self.parent[x] == x:
            return x, 0
        root, off = self.find(self.parent[x])
        self.parent[x] = root
        self.offset[x] += off
        return root, self.offset[x]

    def union(self, a, b, diff):
        """Impose label(a) - label(b) = diff.  True on success."""
        self.add(a)
        self.add(b)
        ra, oa = self.find(a)
        rb, ob = self.find(b)
        if ra == rb:
            return oa - ob == diff
        self.parent[ra] = rb
        self.offset[ra] = diff + ob - oa
        return True


def component_nodes(path: DiscretePath):
    """All (state index, component region id) nodes of a path."""
    for t, state in enumerate(path.states):
        for rid in state.diagram.components:
            yield (t, rid)


def lineage_classes(path: DiscretePath) -> Dict[tuple, int]:
    """Map each (state, component) node to its lineage class id."""
    uf = _ShiftedUnionFind()
    for node in component_nodes(path):
        uf.add(node)
    for t, effect in enumerate(path.effects):
        for old_rid, news in effect.mapping:
            for new_rid in news:
                uf.union((t, old_rid), (t + 1, new_rid), 0)
    labels = {}
    out = {}
    for node in sorted(uf.parent):
        root, _ = uf.find(node)
        if root not in labels:
            labels[root] = len(labels)
        out[node] = labels[root]
    return out


def rotation_component_map(state: Subsurface, twist: int) -> Dict[int, int]:
    """Component region ids of ``state`` to those of ``rotate(state, twist)``.

    Rotation permutes boundary intervals, so a component is tracked through
    the image of any one of its intervals.
    """
    rotated = rotate(state, twist)
    diag = state.diagram
    rdiag = rotated.diagram
    n_events = len(diag.events)
    out = {}
    for rid in diag.components:
        t = diag.regions[rid].intervals[0]
        ev = diag.events[t]
        if ev[0] == "p":
            key = ("p", _shift_point(ev[1], twist, state.disk.point_count))
        else:
            e, s = ev[2]
            key = ("e", _shift_point(e, twist, state.disk.point_count), s)
        nt = _find_event(rdiag, key)
        out[rid] = rdiag.interval_region[nt]
    return out


def _shift_point(i: int, twist: int, n: int) -> int:
    return (i - 1 + twist) % n + 1


def _find_event(diag, key):
    if key[0] == "p":
        return diag.event_index[("p", key[1])]
    _, e, s = key
    for t, ev in enumerate(diag.events):
        if ev[0] == "e" and ev[2] == (e, s):
            return t
    raise KeyError(key)


@dataclass
class SplittingCertificate:
    """Integer labels on lineage classes realizing a splitting."""

    labels: Dict[int, int]
    node_class: Dict[tuple, int]

    def slice_components(self, path: DiscretePath, t: int, parity=None) -> list:
        """Components of states[t] in classes of the given label parity."""
        out = []
        for rid in path.states[t].diagram.components:
            n = self.labels[self.node_class[(t, rid)]]
            if parity is None or n % 2 == parity:
                out.append((rid, n))
        return out

    def slice_family(self, path: DiscretePath, t: int, label: int) -> Subsurface:
        rids = [rid for rid, n in self.slice_components(path, t) if n == label]
        return restrict(path.states[t], rids)

    def to_json(self):
        return {
            "labels": {str(k): v for k, v in sorted(self.labels.items())},
            "classes": [
                {"state": t, "component": rid, "class": c}
                for (t, rid), c in sorted(self.node_class.items())
            ],
        }


@dataclass
class NoSplitting:
    """An unsatisfiable constraint cycle: edge shifts sum to a nonzero value."""

    cycle: list  # [{"component": rid, "to_component": rid2, "shift": 1}, ...]
    shift_sum: int

    def to_json(self):
        return {"cycle": self.cycle, "shift_sum": self.shift_sum}


def find_splitting(path: DiscretePath, twist: int):
    """Search for a splitting of a twisted path with respect to the rotation.

    Returns a :class:`SplittingCertificate` or :class:`NoSplitting`.  The
    boundary constraint couples the start and end slices: the rotation sends
    each start component of the family labeled n onto an end component of
    the family labeled n - 1.
    """
    if not path.is_twisted(twist):
        raise NotTwisted(f"path is not twisted by {twist}")
    node_class = lineage_classes(path)
    last = len(path.states) - 1
    rot_map = rotation_component_map(path.first, twist)

    uf = _ShiftedUnionFind()
    for cls in set(node_class.values()):
        uf.add(("cls", cls))
    constraints = []
    for rid, rid_last in rot_map.items():
        a = ("cls", node_class[(0, rid)])
        b = ("cls", node_class[(last, rid_last)])
        constraints.append((rid, rid_last, a, b))
        if not uf.union(a, b, 1):
            return _extract_cycle(node_class, rot_map, last, (rid, rid_last))
    labels = {}
    for cls in set(node_class.values()):
        root, off = uf.find(("cls", cls))
        labels[cls] = off
    return SplittingCertificate(labels, node_class)


def _extract_cycle(node_class, rot_map, last, failing):
    """Build the unsatisfiable cycle witnessing the failed constraint.

    Constraint edges relate class(0, rid) to class(last, g(rid)) with shift
    one; lineage identifications carry shift zero.  A conflict appears when
    adding an edge between classes already related with a different offset;
    the cycle is the new edge plus a chain of previously added edges.
    """
    # Re-run the union with explicit BFS over the constraint graph.
    graph = {}
    for rid, rid_last in rot_map.items():
        a = node_class[(0, rid)]
        b = node_class[(last, rid_last)]
        graph.setdefault(a, []).append((b, 1, rid, rid_last))
        graph.setdefault(b, []).append((a, -1, rid, rid_last))
    start = node_class[(0, failing[0])]
    target = node_class[(last, failing[1])]
    # find an alternative path start -> target avoiding the failing edge once
    from collections import deque

    parent = {start: None}
    dq = deque([start])
    while dq:
        x = dq.popleft()
        for (y, shift, rid, rid_last) in graph.get(x, ()):  # pragma: no branch
            if (x, y, rid) == (start, target, failing[0]):
                continue
            if y not in parent:
                parent[y] = (x, shift, rid, rid_last)
                dq.append(y)
    cycle = [{
        "edge": "rotation",
        "component": failing[0],
        "to_component": failing[1],
        "shift": 1,
    }]
    total = 1
    x = target
    while x != start:
        px, shift, rid, rid_last = parent[x]
        cycle.append({
            "edge": "rotation",
            "component": rid,
            "to_component": rid_last,
            "shift": -shift,
        })
        total += -shift
        x = px
    return NoSplitting(cycle, total)


def cyclic_obstruction_check(path: DiscretePath, twist: int = 2) -> dict:
    """The explicit-constant cyclic obstruction.

    For a twisted path that splits, the largest adjusted Euler characteristic
    magnitude along the path is bounded by 36 times the equivalence-class
    length.  The constant chains three ingredients: a splitting decomposes
    each slice into even and odd families whose characteristics sum to the
    slice's; the even and odd parts at time zero are disjoint, so the
    rotation bound forces hat-distance at least |chi|/6 between an odd slice
    and its rotated even partner; and each counted move changes the hat form
    by at most three moves, giving |chi| <= 2 * 6 * 3 * eq_length.
    """
    result = find_splitting(path, twist)
    eq_len = path.eq_length()
    max_abs = max(abs(adjusted_chi(s)) for s in path.states)
    out = {
        "eq_length": eq_len,
        "max_abs_chi": max_abs,
        "bound": 36 * eq_len,
    }
    if isinstance(result, NoSplitting):
        out["splits"] = False
        out["verdict"] = "NoSplitting"
        out["no_splitting"] = result.to_json()
        return out
    out["splits"] = True
    out["verdict"] = "Pass" if Fraction(max_abs) <= 36 * eq_len else "Fail"
    out["certificate"] = result.to_json()
    return out
