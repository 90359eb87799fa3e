"""Fiber graph of a point in the range, updated incrementally across segments.

Nodes are the mesh triangles whose image contains the point; two nodes are
adjacent when they bound a common tetrahedron.  Crossing the segment of edge
``ab`` swaps the triangles ``abv`` on one side of the line ``f(a) f(b)`` for
those on the other side.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InconsistentState
from .jacobi import LinkPartition
from .mesh import TetMesh

REGULAR_EVENT = "regular"
CREATED = "created"
DESTROYED = "destroyed"
SPLIT = "split"
MERGED = "merged"
RECONNECTED = "reconnected"


@dataclass
class CrossingEvent:
    edge: int
    upward: bool
    kind: str
    before: list[int]  # labels of the components touched, prior to crossing
    after: list[int]  # labels of the components holding the new triangles
    corresponds: dict[int, int] = field(default_factory=dict)  # old label -> new label

    @property
    def delta(self) -> int:
        return len(self.after) - len(self.before)


class FiberGraph:
    """Active triangles with a component label each."""

    __slots__ = ("mesh", "label", "members", "_fresh")

    def __init__(self, mesh: TetMesh, triangles=()):
        self.mesh = mesh
        self.label: dict[int, int] = {}
        self.members: dict[int, set[int]] = {}
        self._fresh = 0
        if triangles:
            for t in triangles:
                self.label[t] = -1
            self.relabel()

    def copy(self) -> "FiberGraph":
        g = FiberGraph.__new__(FiberGraph)
        g.mesh = self.mesh
        g.label = dict(self.label)
        g.members = {k: set(v) for k, v in self.members.items()}
        g._fresh = self._fresh
        return g

    def __len__(self):
        return len(self.label)

    @property
    def triangles(self) -> frozenset[int]:
        return frozenset(self.label)

    def neighbours(self, t: int):
        mesh, label = self.mesh, self.label
        for tet in mesh.tri_tets[t]:
            for s in mesh.tet_tris[tet]:
                if s != t and s in label:
                    yield s

    def components(self) -> list[frozenset[int]]:
        """Components ordered by smallest triangle id."""
        return sorted((frozenset(m) for m in self.members.values()), key=min)

    def partition(self) -> frozenset[frozenset[int]]:
        return frozenset(frozenset(m) for m in self.members.values())

    def relabel(self) -> None:
        """Recompute components from scratch; labels become 0, 1, ... by smallest triangle."""
        self.members = {}
        seen: set[int] = set()
        k = 0
        for t in sorted(self.label):
            if t in seen:
                continue
            comp = self._flood(t, seen)
            for s in comp:
                self.label[s] = k
            self.members[k] = comp
            k += 1
        self._fresh = k

    def _flood(self, start: int, seen: set[int]) -> set[int]:
        comp = {start}
        seen.add(start)
        stack = [start]
        while stack:
            t = stack.pop()
            for s in self.neighbours(t):
                if s not in seen:
                    seen.add(s)
                    comp.add(s)
                    stack.append(s)
        return comp

    def cross(self, part: LinkPartition, upward: bool, regular: bool = False) -> CrossingEvent:
        """Move the point across the segment of ``part.edge``.

        ``upward`` moves from the lower side of the oriented line to the upper
        side.  With ``regular`` set the removed triangles must lie in a single
        component, which simply trades them for the added ones; otherwise the
        affected components are rebuilt by search.
        """
        removed, added = (part.lower_tris, part.upper_tris) if upward else (part.upper_tris, part.lower_tris)
        label = self.label
        for t in removed:
            if t not in label:
                raise InconsistentState(f"triangle {t} of edge {part.edge} is not in the fiber")
        for t in added:
            if t in label:
                raise InconsistentState(f"triangle {t} of edge {part.edge} is already in the fiber")
        touched = sorted({label[t] for t in removed})
        if regular:
            if len(touched) != 1:
                raise InconsistentState(
                    f"regular edge {part.edge} removes triangles from {len(touched)} components"
                )
            L = touched[0]
            comp = self.members[L]
            for t in removed:
                del label[t]
                comp.discard(t)
            for t in added:
                label[t] = L
                comp.add(t)
            ident = {k: k for k in self.members}
            return CrossingEvent(part.edge, upward, REGULAR_EVENT, [L], [L], ident)

        pool: set[int] = set()
        for L in touched:
            pool |= self.members.pop(L)
        for t in removed:
            del label[t]
            pool.discard(t)
        for t in added:
            label[t] = -1
            pool.add(t)
        seen: set[int] = set()
        new = []
        for t in sorted(pool):
            if t in seen:
                continue
            comp = self._flood(t, seen)
            # a new triangle touching an untouched component drags it in
            for s in comp:
                old = label[s]
                if old >= 0 and old not in touched and old in self.members:
                    self.members.pop(old)
                    touched.append(old)
            L = self._fresh
            self._fresh += 1
            for s in comp:
                label[s] = L
            self.members[L] = comp
            new.append(L)
        touched.sort()
        ident = {k: k for k in self.members if k not in new}
        if not touched:
            kind = CREATED
        elif not new:
            kind = DESTROYED
        elif len(new) > len(touched):
            kind = SPLIT
        elif len(new) < len(touched):
            kind = MERGED
        else:
            kind = RECONNECTED
        return CrossingEvent(part.edge, upward, kind, touched, new, ident)
