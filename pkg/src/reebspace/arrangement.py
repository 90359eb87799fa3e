"""Exact planar arrangement of line segments as a doubly connected edge list.

Construction: candidate pairs come from a bounding-box sweep (float boxes are
safe because rounding is monotone), every candidate is intersected exactly,
segments are split at their intersection points, and the DCEL is assembled
from the resulting planar graph.  Outgoing half-edges around every vertex
are sorted by an exact pseudo-angle; boundary cycles are traced with the
usual ``next = previous-clockwise`` rule, so every face lies to the left of
its half-edges and outer boundaries run counterclockwise.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional, Sequence

import numpy as np

from .errors import InvalidHandle, OverlapDegeneracy, TimeBudgetExceeded, TripleIntersectionDegeneracy
from .geometry import RangeSegment, format_rational, intersect, pseudoangle


@dataclass
class Face:
    id: int
    outer: Optional[int]  # a half-edge of the outer boundary cycle; None for the unbounded face
    holes: list[int] = field(default_factory=list)  # one half-edge per inner boundary cycle
    unbounded: bool = False


class PlanarArrangement:
    """Vertices, half-edges and faces of a segment arrangement.

    Half-edge ``h`` and ``h ^ 1`` are twins; even ids run along their source
    segment from ``p`` to ``q``.
    """

    def __init__(self):
        self.segments: list = []
        self.points: list[tuple] = []
        self.vertex_index: dict[tuple, int] = {}
        self.vertex_out: list[list[int]] = []
        self.origin: list[int] = []
        self.next: list[int] = []
        self.prev: list[int] = []
        self.face: list[int] = []
        self.segment: list[int] = []
        self.faces: list[Face] = []
        self.seg_vertices: list[list[int]] = []
        self.seg_halfedges: list[list[int]] = []
        self.cycle_id: list[int] = []
        self.cycles: list[list[int]] = []
        self.intersection_count = 0
        self.component_count = 0

    # -- counts -----------------------------------------------------------------

    @property
    def num_vertices(self) -> int:
        return len(self.points)

    @property
    def num_halfedges(self) -> int:
        return len(self.origin)

    @property
    def num_edges(self) -> int:
        return len(self.origin) // 2

    @property
    def num_faces(self) -> int:
        return len(self.faces)

    @property
    def unbounded_face(self) -> int:
        return 0

    def bounded_faces(self) -> list[int]:
        return [f.id for f in self.faces if not f.unbounded]

    # -- half-edge navigation -------------------------------------------------------

    @staticmethod
    def twin(h: int) -> int:
        return h ^ 1

    def target(self, h: int) -> int:
        return self.origin[h ^ 1]

    def forward(self, h: int) -> bool:
        """True when ``h`` runs in the canonical (p to q) direction of its segment."""
        return h % 2 == 0

    def cycle(self, h: int) -> list[int]:
        return self.cycles[self.cycle_id[h]]

    def cycle_points(self, h: int) -> list[tuple]:
        return [self.points[self.origin[g]] for g in self.cycle(h)]

    def segment_edge(self, h: int):
        return self.segments[self.segment[h]]

    def face_polygon(self, f: int) -> list[tuple]:
        face = self._face(f)
        if face.outer is None:
            return []
        return self.cycle_points(face.outer)

    def face_area(self, f: int) -> Fraction:
        """Exact area of a bounded face (outer polygon minus holes)."""
        face = self._face(f)
        if face.unbounded:
            raise ValueError("the unbounded face has no finite area")
        area = signed_area(self.cycle_points(face.outer))
        for h in face.holes:
            area += signed_area(self.cycle_points(h))
        return area

    def _face(self, f: int) -> Face:
        if not isinstance(f, int) or not 0 <= f < len(self.faces):
            raise InvalidHandle(f"no face {f!r}")
        return self.faces[f]

    def to_json(self, scale: int = 1) -> dict:
        """Diagnostic export: vertices, edges as vertex pairs, faces as vertex cycles."""
        s = Fraction(1, scale)
        faces = []
        for face in self.faces:
            rec = {
                "id": face.id,
                "unbounded": face.unbounded,
                "outer": [] if face.outer is None else [self.origin[g] for g in self.cycle(face.outer)],
                "holes": [[self.origin[g] for g in self.cycle(h)] for h in face.holes],
            }
            faces.append(rec)
        return {
            "vertices": [[format_rational(x * s), format_rational(y * s)] for x, y in self.points],
            "edges": [[self.origin[h], self.origin[h + 1], self.segments[self.segment[h]].edge]
                      for h in range(0, len(self.origin), 2)],
            "faces": faces,
        }


def signed_area(poly: Sequence[tuple]) -> Fraction:
    """Shoelace formula; positive for counterclockwise polygons."""
    n = len(poly)
    twice = 0
    for i in range(n):
        x0, y0 = poly[i]
        x1, y1 = poly[(i + 1) % n]
        twice += x0 * y1 - x1 * y0
    return Fraction(twice) / 2


# -- accessors ---------------------------------------------------------------------


def face_of_halfedge(arr: PlanarArrangement, h: int) -> int:
    if not isinstance(h, int) or not 0 <= h < arr.num_halfedges:
        raise InvalidHandle(f"no half-edge {h!r}")
    return arr.face[h]


def halfedges_of_face(arr: PlanarArrangement, f: int) -> list[int]:
    """Outer boundary cycle of a face, counterclockwise; empty for the unbounded face."""
    face = arr._face(f)
    return [] if face.outer is None else list(arr.cycle(face.outer))


def holes_of_face(arr: PlanarArrangement, f: int) -> list[list[int]]:
    """Nested boundary cycles of a face.

    For the unbounded face one boundary component is the normal, connected
    case, so only components beyond the first count as holes.
    """
    face = arr._face(f)
    cycles = [list(arr.cycle(h)) for h in face.holes]
    return cycles[1:] if face.unbounded else cycles


# -- construction -------------------------------------------------------------------


def _as_pairs(segments) -> list:
    out = []
    for s in segments:
        if not isinstance(s, RangeSegment):
            s = RangeSegment(len(out), tuple(s[0]), tuple(s[1]))
        out.append(s)
    return out


def candidate_pairs(segments: Sequence[RangeSegment]) -> Iterator[tuple[int, int]]:
    """Index pairs whose bounding boxes overlap (a superset of intersecting pairs)."""
    n = len(segments)
    if n < 2:
        return
    box = np.array(
        [(float(s.p[0]), float(s.q[0]), float(min(s.p[1], s.q[1])), float(max(s.p[1], s.q[1])))
         for s in segments]
    )
    order = np.argsort(box[:, 0], kind="stable")
    xs = box[order, 0]
    for a in range(n):
        i = int(order[a])
        hi = int(np.searchsorted(xs, box[i, 1], side="right"))
        if hi <= a + 1:
            continue
        cand = order[a + 1 : hi]
        keep = cand[(box[cand, 2] <= box[i, 3]) & (box[cand, 3] >= box[i, 2])]
        for j in keep:
            j = int(j)
            yield (i, j) if i < j else (j, i)


def build_arrangement(segments, deadline: Optional[float] = None) -> PlanarArrangement:
    """Build the exact arrangement of ``segments`` (``RangeSegment`` or point pairs).

    Raises :class:`OverlapDegeneracy` on collinear overlap and
    :class:`TripleIntersectionDegeneracy` when three segments cross at one
    interior point.  ``deadline`` is a ``time.monotonic()`` value after which
    :class:`TimeBudgetExceeded` is raised.
    """
    segs = _as_pairs(segments)
    arr = PlanarArrangement()
    arr.segments = segs
    on_seg: list[set] = [{s.p, s.q} for s in segs]
    interior_hits: dict[tuple, int] = {}
    crossings = 0
    tick = 0
    for i, j in candidate_pairs(segs):
        tick += 1
        if deadline is not None and tick % 2048 == 0 and time.monotonic() > deadline:
            raise TimeBudgetExceeded("arrangement construction exceeded its time budget")
        a, b = segs[i], segs[j]
        hit = intersect(a.p, a.q, b.p, b.q)
        if hit is None:
            continue
        pt, t, u = hit
        a_end = t == 0 or t == 1
        b_end = u == 0 or u == 1
        if a_end and b_end:
            continue
        crossings += 1
        if not a_end:
            on_seg[i].add(pt)
        if not b_end:
            on_seg[j].add(pt)
        if not a_end and not b_end:
            interior_hits[pt] = interior_hits.get(pt, 0) + 1
    arr.intersection_count = crossings
    # more than one proper crossing pair through a point means >= 3 segments
    for pt, pairs in interior_hits.items():
        if pairs > 1:
            raise TripleIntersectionDegeneracy(f"three or more segments cross at {pt}")

    vidx = arr.vertex_index
    for s_id, pts in enumerate(on_seg):
        chain = []
        for pt in sorted(pts):
            v = vidx.get(pt)
            if v is None:
                v = vidx[pt] = len(arr.points)
                arr.points.append(pt)
            chain.append(v)
        arr.seg_vertices.append(chain)

    seen_edges: dict[tuple[int, int], int] = {}
    origin, segment = arr.origin, arr.segment
    for s_id, chain in enumerate(arr.seg_vertices):
        hes = []
        for u, v in zip(chain, chain[1:]):
            key = (u, v) if u < v else (v, u)
            if key in seen_edges:
                raise OverlapDegeneracy(
                    f"segments {segs[seen_edges[key]].edge} and {segs[s_id].edge} overlap"
                )
            seen_edges[key] = s_id
            hes.append(len(origin))
            origin.extend((u, v))
            segment.extend((s_id, s_id))
        arr.seg_halfedges.append(hes)

    _link_halfedges(arr)
    _make_faces(arr)
    V, E, F = arr.num_vertices, arr.num_edges, arr.num_faces
    assert V - E + F == 1 + arr.component_count, "Euler relation violated"
    return arr


def _link_halfedges(arr: PlanarArrangement) -> None:
    pts = arr.points
    nv = len(pts)
    out: list[list[int]] = [[] for _ in range(nv)]
    for h, v in enumerate(arr.origin):
        out[v].append(h)
    pos = [0] * len(arr.origin)
    for v, ring in enumerate(out):
        if len(ring) > 1:
            px, py = pts[v]
            keys = {}
            for h in ring:
                qx, qy = pts[arr.origin[h ^ 1]]
                keys[h] = pseudoangle(qx - px, qy - py)
            ring.sort(key=keys.__getitem__)
        for k, h in enumerate(ring):
            pos[h] = k
    arr.vertex_out = out
    nxt = [0] * len(arr.origin)
    prv = [0] * len(arr.origin)
    for h in range(len(arr.origin)):
        t = h ^ 1
        ring = out[arr.origin[t]]
        g = ring[pos[t] - 1]
        nxt[h] = g
        prv[g] = h
    arr.next, arr.prev = nxt, prv


def _make_faces(arr: PlanarArrangement) -> None:
    n = len(arr.origin)
    cycle_id = [-1] * n
    cycles: list[list[int]] = []
    for h in range(n):
        if cycle_id[h] >= 0:
            continue
        c = []
        g = h
        while cycle_id[g] < 0:
            cycle_id[g] = len(cycles)
            c.append(g)
            g = arr.next[g]
        cycles.append(c)
    arr.cycle_id, arr.cycles = cycle_id, cycles

    faces = [Face(0, None, [], True)]
    cycle_face = [-1] * len(cycles)
    inner = []
    for ci, c in enumerate(cycles):
        if signed_area([arr.points[arr.origin[g]] for g in c]) > 0:
            cycle_face[ci] = len(faces)
            faces.append(Face(len(faces), c[0]))
        else:
            inner.append(ci)
    arr.component_count = len(inner)

    def resolve(ci: int) -> int:
        stack = []
        while cycle_face[ci] < 0:
            stack.append(ci)
            h = _leftward_hit(arr, cycles[ci])
            if h is None:
                target = 0
                break
            ci = cycle_id[h]
        else:
            target = cycle_face[ci]
        for cj in stack:
            cycle_face[cj] = target
        return target

    # leftmost components first makes the recursion in resolve shallow
    for ci in sorted(inner, key=lambda c: min(arr.points[arr.origin[g]] for g in cycles[c])):
        f = resolve(ci)
        faces[f].holes.append(cycles[ci][0])
    face = [0] * n
    for ci, c in enumerate(cycles):
        for g in c:
            face[g] = cycle_face[ci]
    arr.face = face
    arr.faces = faces


def _leftward_hit(arr: PlanarArrangement, cycle: list[int]) -> Optional[int]:
    """Half-edge whose face contains points just left of the cycle's leftmost vertex.

    Returns ``None`` when a horizontal ray to the left meets nothing.
    """
    pts = arr.points
    px, py = min(pts[arr.origin[g]] for g in cycle)
    best_x = None
    best = None  # (kind, payload)
    for h in range(0, len(arr.origin), 2):
        ux, uy = pts[arr.origin[h]]
        vx, vy = pts[arr.origin[h + 1]]
        if (uy > py and vy > py) or (uy < py and vy < py):
            continue
        if uy == vy:
            x = max(ux, vx)
            if x >= px:
                continue
            hit = ("vertex", arr.origin[h] if ux > vx else arr.origin[h + 1])
        elif uy == py:
            x = ux
            if x >= px:
                continue
            hit = ("vertex", arr.origin[h])
        elif vy == py:
            x = vx
            if x >= px:
                continue
            hit = ("vertex", arr.origin[h + 1])
        else:
            x = ux + Fraction(py - uy) * (vx - ux) / (vy - uy)
            if x >= px:
                continue
            hit = ("edge", h)
        if best_x is None or x > best_x:
            best_x, best = x, hit
    if best is None:
        return None
    kind, payload = best
    if kind == "edge":
        h = payload
        ux, uy = pts[arr.origin[h]]
        vx, vy = pts[arr.origin[h + 1]]
        # pick the twin that has the query point on its left
        left = (vx - ux) * (py - uy) - (vy - uy) * (px - ux)
        return h if left > 0 else h + 1
    # vertex hit: the face in the angular wedge containing direction +x
    # No edge at the hit vertex points along +x (it would have been hit first),
    # so +x lies in the wedge from the last ring entry ccw around to the first,
    # which is the face of that last entry.
    return arr.vertex_out[payload][-1]
