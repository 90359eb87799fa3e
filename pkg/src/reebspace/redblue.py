"""Regular-segment crossings on the boundary of the singular arrangement.

``red_blue`` finds every contact between a regular (red) segment and the
singular arrangement (blue); ``build_crossing_lists`` orders those contacts
counterclockwise around each face so that consecutive entries delimit the
essential faces hidden inside it.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .arrangement import PlanarArrangement
from .errors import DegeneracyError, TripleIntersectionDegeneracy
from .geometry import RangeSegment, intersect, relative_pseudoangle


@dataclass(frozen=True)
class Crossing:
    """Contact of a red segment with the blue arrangement.

    ``feature`` is ``("edge", h)`` with ``h`` the even half-edge of the blue
    edge crossed in its interior, or ``("vertex", v)`` for a red segment
    starting at arrangement vertex ``v``.  ``param`` is the position along the
    blue source segment (``p`` to ``q``); ``direction`` points along the red
    segment, away from the vertex for vertex contacts.
    """

    red: int
    feature: tuple[str, int]
    point: tuple
    param: Fraction
    direction: tuple

    @property
    def at_vertex(self) -> bool:
        return self.feature[0] == "vertex"


@dataclass(frozen=True)
class BoundaryCrossing:
    """One entry of a face's crossing list, with the loop's direction of travel."""

    crossing: Crossing
    halfedge: int
    motion: tuple

    @property
    def red(self) -> int:
        return self.crossing.red


@dataclass
class BoundaryCrossingList:
    face: int
    entries: list[BoundaryCrossing]
    arc_start: dict[int, int]  # half-edge -> arc just after its origin vertex
    arc_end: dict[int, int]  # half-edge -> arc just before its target vertex

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def reds(self) -> list[int]:
        return [e.red for e in self.entries]

    def canonical_start(self) -> int:
        """Index of the entry with the smallest ``(feature, parameter)`` key."""
        if not self.entries:
            return 0
        keys = [(e.crossing.feature, e.crossing.param, e.red) for e in self.entries]
        return min(range(len(keys)), key=keys.__getitem__)

    def canonical(self) -> list[BoundaryCrossing]:
        k = self.canonical_start()
        return self.entries[k:] + self.entries[:k]


@dataclass(frozen=True)
class EssentialFaceDescriptor:
    """Boundary arc between two consecutive crossings, standing for one essential face."""

    face: int
    arc: int
    before: Optional[BoundaryCrossing]
    after: Optional[BoundaryCrossing]


# -- discovery ------------------------------------------------------------------------


def red_blue(arr: PlanarArrangement, red: Sequence[RangeSegment]) -> list[Crossing]:
    """All contacts between ``red`` segments and the arrangement's segments.

    Red-red intersections are never computed.  Each (red segment, contact
    point) is reported once.  Contacts that the crossing-list model cannot
    represent are genericity violations and raise: a red segment passing
    through an arrangement vertex, or ending in the interior of a blue edge.
    """
    if not red or not arr.segments:
        return []
    rbox = np.array(
        [(float(s.p[0]), float(s.q[0]), float(min(s.p[1], s.q[1])), float(max(s.p[1], s.q[1])))
         for s in red]
    )
    found: dict[tuple, Crossing] = {}
    seg_points = [[arr.points[v] for v in chain] for chain in arr.seg_vertices]
    for b_id, blue in enumerate(arr.segments):
        bx0, bx1 = float(blue.p[0]), float(blue.q[0])
        by0, by1 = float(min(blue.p[1], blue.q[1])), float(max(blue.p[1], blue.q[1]))
        mask = (rbox[:, 0] <= bx1) & (rbox[:, 1] >= bx0) & (rbox[:, 2] <= by1) & (rbox[:, 3] >= by0)
        for r_id in np.flatnonzero(mask):
            r = red[int(r_id)]
            hit = intersect(r.p, r.q, blue.p, blue.q)
            if hit is None:
                continue
            pt, t, u = hit
            key = (r.edge, pt)
            if key in found:
                continue
            v = arr.vertex_index.get(pt)
            red_end = t == 0 or t == 1
            if v is not None:
                if not red_end:
                    raise TripleIntersectionDegeneracy(
                        f"regular segment of edge {r.edge} passes through arrangement vertex {pt}"
                    )
                other = r.q if t == 0 else r.p
                d = (other[0] - pt[0], other[1] - pt[1])
                found[key] = Crossing(r.edge, ("vertex", v), pt, u, d)
            else:
                if red_end:
                    raise DegeneracyError(
                        f"regular segment of edge {r.edge} ends inside singular segment of edge {blue.edge}"
                    )
                k = bisect_left(seg_points[b_id], pt) - 1
                h = arr.seg_halfedges[b_id][k]
                d = (r.q[0] - r.p[0], r.q[1] - r.p[1])
                found[key] = Crossing(r.edge, ("edge", h), pt, u, d)
    return sorted(found.values(), key=lambda c: (c.red, c.point))


# -- ordering ---------------------------------------------------------------------------


def build_crossing_lists(
    arr: PlanarArrangement, crossings: Sequence[Crossing]
) -> dict[int, BoundaryCrossingList]:
    """Circular counterclockwise crossing list of every face.

    Bounded faces are walked along their outer cycle only (holes are expected
    to have been removed).  The unbounded face is walked along all of its
    boundary components.
    """
    on_edge: dict[int, list[Crossing]] = {}
    at_vertex: dict[int, list[Crossing]] = {}
    for c in crossings:
        kind, idx = c.feature
        (on_edge if kind == "edge" else at_vertex).setdefault(idx, []).append(c)
    for lst in on_edge.values():
        lst.sort(key=lambda c: c.param)
        for a, b in zip(lst, lst[1:]):
            if a.param == b.param:
                raise TripleIntersectionDegeneracy(
                    f"regular segments {a.red} and {b.red} cross the same singular segment at one point"
                )

    out = {}
    for face in arr.faces:
        cycles = [face.outer] if face.outer is not None else list(face.holes)
        entries: list[BoundaryCrossing] = []
        arc_start: dict[int, int] = {}
        arc_end: dict[int, int] = {}
        for start in cycles:
            for h in arr.cycle(start):
                entries.extend(_vertex_entries(arr, h, at_vertex))
                arc_start[h] = len(entries)
                entries.extend(_edge_entries(arr, h, on_edge))
                arc_end[h] = len(entries)
        m = len(entries)
        if m:
            arc_start = {h: a % m for h, a in arc_start.items()}
            arc_end = {h: a % m for h, a in arc_end.items()}
        out[face.id] = BoundaryCrossingList(face.id, entries, arc_start, arc_end)
    return out


def _edge_entries(arr, h, on_edge) -> list[BoundaryCrossing]:
    lst = on_edge.get(h & ~1)
    if not lst:
        return []
    if h & 1:
        lst = lst[::-1]
    p, q = arr.points[arr.origin[h]], arr.points[arr.origin[h ^ 1]]
    motion = (q[0] - p[0], q[1] - p[1])
    return [BoundaryCrossing(c, h, motion) for c in lst]


def _vertex_entries(arr, h, at_vertex) -> list[BoundaryCrossing]:
    w = arr.origin[h]
    lst = at_vertex.get(w)
    if not lst:
        return []
    pw = arr.points[w]
    po = arr.points[arr.origin[h ^ 1]]
    pu = arr.points[arr.origin[arr.prev[h]]]
    ox, oy = po[0] - pw[0], po[1] - pw[1]
    limit = relative_pseudoangle(ox, oy, pu[0] - pw[0], pu[1] - pw[1])
    if limit == 0:  # dangling edge: the wedge is everything but the edge itself
        limit = Fraction(4)
    inside = []
    for c in lst:
        a = relative_pseudoangle(ox, oy, c.direction[0], c.direction[1])
        if a == 0 or a == limit:
            raise DegeneracyError(f"regular segment of edge {c.red} runs along a singular segment")
        if a < limit:
            inside.append((a, c))
    # the loop sweeps clockwise around the vertex: from the incoming side to the outgoing one
    inside.sort(key=lambda x: x[0], reverse=True)
    return [BoundaryCrossing(c, h, (c.direction[1], -c.direction[0])) for _, c in inside]


def essential_descriptors(qlist: BoundaryCrossingList) -> list[EssentialFaceDescriptor]:
    """One descriptor per consecutive pair of crossings (a single one when the list is empty)."""
    m = len(qlist.entries)
    if m == 0:
        return [EssentialFaceDescriptor(qlist.face, 0, None, None)]
    return [
        EssentialFaceDescriptor(qlist.face, j, qlist.entries[j - 1], qlist.entries[j])
        for j in range(m)
    ]
