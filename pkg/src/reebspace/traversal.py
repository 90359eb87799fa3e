"""Breadth-first traversal of the singular arrangement.

Each face of the singular arrangement is entered once with one fiber graph,
then looped: the point walks just inside the face boundary and crosses only
regular segments, which keeps every fiber-graph component's identity.  The
components seen on the loop are the face's class components.  Crossings of
the boundary into neighbouring faces are evaluated on copies of the loop's
fiber graph and matched against the neighbour's own loop later.
"""

from __future__ import annotations

import logging
from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Optional

from .arrangement import PlanarArrangement
from .errors import DegeneracyError, InconsistentState, LoopClosureViolation
from .fibergraph import FiberGraph
from .geometry import PSEUDO_SINGULAR
from .jacobi import SingularSet, link_partitions
from .mesh import TetMesh
from .redblue import BoundaryCrossingList

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ClassComponent:
    id: int
    face: int
    index: int  # component number within the face, ordered by smallest triangle
    representative: int  # smallest triangle id at the loop's start
    size: int


@dataclass
class TraversalStats:
    faces_looped: int = 0
    regular_crossings: int = 0
    boundary_crossings: int = 0
    peak_retained_graphs: int = 0
    peak_retained_triangles: int = 0

    def as_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass
class SingularCorrespondenceGraph:
    """Class components and their correspondences across arrangement segments."""

    vertices: list[ClassComponent]
    edges: set[tuple[int, int]] = field(default_factory=set)
    # (components on one side, components on the other) for every singular crossing
    gluings: list[tuple[tuple[int, ...], tuple[int, ...]]] = field(default_factory=list)
    stats: TraversalStats = field(default_factory=TraversalStats)

    def components(self) -> list[list[int]]:
        """Connected components as sorted vertex-id lists, ordered by smallest id."""
        parent = list(range(len(self.vertices)))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a, b in self.edges:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
        groups: dict[int, list[int]] = defaultdict(list)
        for v in range(len(self.vertices)):
            groups[find(v)].append(v)
        return sorted(groups.values())


def _upward(mesh: TetMesh, edge: int, tx, ty) -> bool:
    """True when moving along ``(tx, ty)`` goes from the lower to the upper side of ``edge``."""
    a, b = mesh.edges[edge]
    pa, pb = mesh.ipoints[a], mesh.ipoints[b]
    c = (pb[0] - pa[0]) * ty - (pb[1] - pa[1]) * tx
    if c == 0:
        raise DegeneracyError(f"motion parallel to the segment of edge {edge}")
    return c > 0


class _Traversal:
    def __init__(self, mesh, arr, qlists, singular, trace):
        self.mesh = mesh
        self.arr = arr
        self.qlists = qlists
        self.singular = singular
        self.parts = link_partitions(mesh)
        self.trace = trace
        self.looped = [False] * arr.num_faces
        self.discovered = [False] * arr.num_faces
        self.entry: dict[int, tuple[int, FiberGraph]] = {}
        self.pending: dict[int, list] = defaultdict(list)
        self.queue: deque[int] = deque()
        self.vertices: list[ClassComponent] = []
        self.edges: set[tuple[int, int]] = set()
        self.gluings: list = []
        self.stats = TraversalStats()

    def log(self, face, where, ev):
        if self.trace is not None:
            direction = "up" if ev.upward else "down"
            self.trace.append(f"face {face} {where} edge {ev.edge} {direction} {ev.kind} {ev.before}->{ev.after}")

    def account(self, current: Optional[FiberGraph] = None):
        graphs = len(self.entry) + (current is not None)
        tris = sum(len(g) for _, g in self.entry.values()) + (len(current) if current else 0)
        st = self.stats
        st.peak_retained_graphs = max(st.peak_retained_graphs, graphs)
        st.peak_retained_triangles = max(st.peak_retained_triangles, tris)

    def blue_crossing(self, face, h, g, labelmap):
        """Evaluate crossing half-edge ``h`` out of ``face`` on a copy of ``g``."""
        arr = self.arr
        nb = arr.face[h ^ 1]
        seg = arr.segments[arr.segment[h]]
        p, q = arr.points[arr.origin[h]], arr.points[arr.origin[h ^ 1]]
        up = _upward(self.mesh, seg.edge, q[1] - p[1], p[0] - q[0])
        c = g.copy()
        ev = c.cross(self.parts[seg.edge], up, regular=seg.kind == PSEUDO_SINGULAR)
        self.stats.boundary_crossings += 1
        self.log(face, f"boundary->{nb}", ev)
        arc = self.qlists[nb].arc_end[h ^ 1]
        if labelmap is not None:
            todo = self.pending[nb]
            for old, new in ev.corresponds.items():
                todo.append((arc, "corr", min(c.members[new]), labelmap[old]))
            if seg.kind != PSEUDO_SINGULAR and (ev.before or ev.after):
                mine = tuple(labelmap[L] for L in ev.before)
                reps = tuple(min(c.members[L]) for L in ev.after)
                todo.append((arc, "glue", reps, mine))
        if not self.discovered[nb]:
            self.discovered[nb] = True
            self.entry[nb] = (arc, c)
            self.queue.append(nb)

    def start(self):
        arr = self.arr
        U = arr.unbounded_face
        if len(self.qlists[U]):
            raise InconsistentState("a regular segment reaches into the unbounded face")
        self.discovered[U] = self.looped[U] = True
        empty = FiberGraph(self.mesh)
        for start in arr.faces[U].holes:
            for h in arr.cycle(start):
                if arr.face[h ^ 1] != U and not self.discovered[arr.face[h ^ 1]]:
                    self.blue_crossing(U, h, empty, None)
        self.account()

    def run(self):
        self.start()
        while self.queue:
            self.loop_face(self.queue.popleft())
        missing = [f for f in range(self.arr.num_faces) if not self.looped[f]]
        if missing:
            raise InconsistentState(f"faces never reached by the traversal: {missing[:10]}")
        return SingularCorrespondenceGraph(self.vertices, self.edges, self.gluings, self.stats)

    def resolve(self, items, g, labelmap):
        for _, what, payload, other in items:
            if what == "corr":
                if payload not in g.label:
                    raise InconsistentState(f"corresponding triangle {payload} missing from the fiber")
                a, b = labelmap[g.label[payload]], other
                if a != b:
                    self.edges.add((a, b) if a < b else (b, a))
            else:
                here = tuple(sorted({labelmap[g.label[t]] for t in payload}))
                self.gluings.append((here, tuple(sorted(other))))

    def loop_face(self, face: int):
        arr = self.arr
        Q: BoundaryCrossingList = self.qlists[face]
        arc0, g = self.entry.pop(face)
        g.relabel()
        base = len(self.vertices)
        for k, comp in enumerate(g.components()):
            self.vertices.append(ClassComponent(base + k, face, k, min(comp), len(comp)))
        labelmap = {L: base + L for L in g.members}
        start_labels = dict(g.label)
        self.account(g)

        m = len(Q)
        at_arc: dict[int, list[int]] = defaultdict(list)
        for h, a in Q.arc_start.items():
            at_arc[a].append(h)
        waiting: dict[int, list] = defaultdict(list)
        for item in self.pending.pop(face, []):
            waiting[item[0]].append(item)
        done: set[int] = set()
        for step in range(max(m, 1)):
            j = (arc0 + step) % m if m else 0
            self.resolve(waiting.pop(j, []), g, labelmap)
            for h in sorted(at_arc.get(j, ())):
                nb = arr.face[h ^ 1]
                if nb == face:
                    if h >> 1 in done:
                        continue
                    done.add(h >> 1)
                elif self.looped[nb]:
                    continue
                self.blue_crossing(face, h, g, labelmap)
                if nb == face:
                    for item in self.pending.pop(face, []):
                        waiting[item[0]].append(item)
                self.account(g)
            if m:
                self.cross_regular(face, j, g)
        if waiting:
            # correspondences of the face with itself that landed behind the start
            for step in range(m):
                j = (arc0 + step) % m
                self.resolve(waiting.pop(j, []), g, labelmap)
                self.cross_regular(face, j, g)
        if g.label != start_labels:
            raise LoopClosureViolation(f"fiber graph of face {face} changed after a full loop")
        self.looped[face] = True
        self.stats.faces_looped += 1

    def cross_regular(self, face, j, g):
        entry = self.qlists[face].entries[j]
        e = entry.red
        up = _upward(self.mesh, e, *entry.motion)
        ev = g.cross(self.parts[e], up, regular=True)
        self.stats.regular_crossings += 1
        self.log(face, f"arc {j}", ev)


def bfs_traverse(
    arr: PlanarArrangement,
    mesh: TetMesh,
    qlists: dict[int, BoundaryCrossingList],
    singular: Optional[SingularSet] = None,
    trace: Optional[list] = None,
) -> SingularCorrespondenceGraph:
    """Loop every face of the (hole-free) singular arrangement and build its correspondence graph.

    ``trace``, when given, receives one line per crossing.
    """
    for f in arr.faces:
        if not f.unbounded and f.holes:
            raise ValueError(f"face {f.id} has holes; connect nested boundaries first")
    return _Traversal(mesh, arr, qlists, singular, trace).run()


def loop_face(mesh: TetMesh, qlist: BoundaryCrossingList, entry: FiberGraph, arc: int = 0) -> list[FiberGraph]:
    """Fiber graphs at every arc of a face boundary, starting from ``entry`` at ``arc``.

    Standalone version of the loop used by the traversal, for inspection and
    tests.  Raises :class:`LoopClosureViolation` if the circuit does not close.
    """
    parts = link_partitions(mesh)
    g = entry.copy()
    start = dict(g.label)
    m = len(qlist)
    out = [None] * max(m, 1)
    for step in range(max(m, 1)):
        j = (arc + step) % m if m else 0
        out[j] = g.copy()
        if m:
            c = qlist.entries[j]
            g.cross(parts[c.red], _upward(mesh, c.red, *c.motion), regular=True)
    if g.label != start:
        raise LoopClosureViolation("fiber graph changed after a full loop")
    return out
