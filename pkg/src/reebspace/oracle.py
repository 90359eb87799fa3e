"""Reference Reeb space computation over the full arrangement, and an equivalence check.

This is the direct method: every edge image goes into one arrangement, every
face gets its own fiber computed from scratch, and components of neighbouring
faces are matched by their triangles outside the crossed edge's star.  It
shares the mesh and geometry layers with the main algorithm but none of its
classification, fiber-graph or traversal code, so the two fail independently.
"""

from __future__ import annotations

import time
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import networkx as nx

from .arrangement import build_arrangement
from .errors import DegenerateOrientation, InconsistentState, TimeBudgetExceeded
from .geometry import RangeSegment
from .mesh import TetMesh
from .reeb import ReebSpaceResult, build_sheets


def _edge_sides(mesh: TetMesh):
    """Per edge: (triangles on the left of f(a)->f(b), triangles on the right, singular?)."""
    pts = mesh.ipoints
    link_edges: list[list] = [[] for _ in mesh.edges]
    for tet in mesh.tets:
        for i in range(4):
            for j in range(i + 1, 4):
                rest = [tet[k] for k in range(4) if k != i and k != j]
                link_edges[mesh.edge_index[(tet[i], tet[j])]].append(rest)
    out = []
    for e, (a, b) in enumerate(mesh.edges):
        (ax, ay), (bx, by) = pts[a], pts[b]
        side = {}
        left, right = [], []
        for v, t in mesh.edge_tris[e]:
            vx, vy = pts[v]
            d = (bx - ax) * (vy - ay) - (by - ay) * (vx - ax)
            if d == 0:
                raise DegenerateOrientation(f"vertex {v} is collinear with edge ({a}, {b})")
            side[v] = d > 0
            (left if d > 0 else right).append(t)
        groups = {v: {v} for v in side}
        for u, w in link_edges[e]:
            if side[u] == side[w] and groups[u] is not groups[w]:
                merged = groups[u] | groups[w]
                for x in merged:
                    groups[x] = merged
        counts = {True: 0, False: 0}
        for v, g in groups.items():
            if min(g) == v:
                counts[side[v]] += 1
        singular = not (counts[True] == 1 and counts[False] == 1)
        out.append((frozenset(left), frozenset(right), singular))
    return out


def _components(mesh: TetMesh, active: frozenset) -> list[frozenset]:
    seen = set()
    comps = []
    for t in sorted(active):
        if t in seen:
            continue
        seen.add(t)
        comp = [t]
        queue = deque([t])
        while queue:
            x = queue.popleft()
            for tet in mesh.tri_tets[x]:
                for y in mesh.tet_tris[tet]:
                    if y in active and y not in seen:
                        seen.add(y)
                        comp.append(y)
                        queue.append(y)
        comps.append(frozenset(comp))
    return comps


def full_arrange_and_traverse(mesh: TetMesh, deadline: Optional[float] = None) -> ReebSpaceResult:
    """Sheets from the full arrangement of all edge images.

    ``deadline`` is a ``time.monotonic()`` value; past it the computation
    stops with :class:`TimeBudgetExceeded`.
    """
    t0 = time.perf_counter()
    pts = mesh.ipoints
    sides = _edge_sides(mesh)
    segs = [RangeSegment(e, pts[a], pts[b]) for e, (a, b) in enumerate(mesh.edges)]
    arr = build_arrangement(segs, deadline=deadline)
    t1 = time.perf_counter()

    nf = arr.num_faces
    handled = [False] * nf
    fiber: dict[int, frozenset] = {arr.unbounded_face: frozenset()}
    comp_cache: dict[int, list[frozenset]] = {}
    queue = deque([arr.unbounded_face])
    keys: list[tuple[int, int]] = []
    node: dict[tuple[int, int], int] = {}
    edges: set[tuple[int, int]] = set()
    gluings = []
    peak = 1

    def comps_of(f):
        if f not in comp_cache:
            comp_cache[f] = _components(mesh, fiber[f])
        return comp_cache[f]

    def node_of(f, k):
        key = (f, k)
        if key not in node:
            node[key] = len(keys)
            keys.append(key)
        return node[key]

    while queue:
        if deadline is not None and time.monotonic() > deadline:
            raise TimeBudgetExceeded("full arrangement traversal exceeded its time budget")
        f = queue.popleft()
        active = fiber[f]
        comps = comps_of(f)
        face = arr.faces[f]
        starts = ([face.outer] if face.outer is not None else []) + list(face.holes)
        for start in starts:
            for h in arr.cycle(start):
                nb = arr.face[h ^ 1]
                if handled[nb]:
                    continue
                seg = arr.segments[arr.segment[h]]
                left, right, singular = sides[seg.edge]
                # h has f on its left; decide which side of the edge's oriented line that is
                a, b = mesh.edges[seg.edge]
                p, q = arr.points[arr.origin[h]], arr.points[arr.origin[h ^ 1]]
                ex, ey = pts[b][0] - pts[a][0], pts[b][1] - pts[a][1]
                same = ex * (q[0] - p[0]) + ey * (q[1] - p[1]) > 0
                removed, added = (left, right) if same else (right, left)
                if not removed <= active or added & active:
                    raise InconsistentState(f"crossing edge {seg.edge} out of face {f} is inconsistent")
                new = (active - removed) | added
                if nb == f:
                    raise InconsistentState(f"segment of edge {seg.edge} has face {f} on both sides")
                if nb in fiber:
                    if fiber[nb] != new:
                        raise InconsistentState(f"fiber of face {nb} depends on the path")
                else:
                    fiber[nb] = new
                    queue.append(nb)
                    peak = max(peak, len(fiber))
                ncomps = comps_of(nb)
                star = removed | added
                if singular:
                    mine = [k for k, c in enumerate(comps) if c & star]
                    theirs = [k for k, c in enumerate(ncomps) if c & star]
                    gluings.append((tuple(node_of(f, k) for k in mine), tuple(node_of(nb, k) for k in theirs)))
                by_rest = {}
                for k, c in enumerate(ncomps):
                    if singular and c & star:
                        continue
                    by_rest[c - star] = k
                for k, c in enumerate(comps):
                    if singular and c & star:
                        continue
                    rest = c - star
                    j = by_rest.get(rest)
                    if j is None:
                        raise InconsistentState(f"no counterpart across edge {seg.edge} for a component of face {f}")
                    edges.add((node_of(f, k), node_of(nb, j)))
        for k in range(len(comps)):
            node_of(f, k)
        handled[f] = True
        del fiber[f]
        comp_cache.pop(f, None)
    t2 = time.perf_counter()

    groups = _groups(len(keys), edges)
    s2 = Fraction(1, mesh.scale**2)
    sheets = build_sheets(groups, keys.__getitem__, lambda f: arr.face_area(f) * s2, gluings)
    stats = {
        "N_T": mesh.num_tets,
        "N_e": mesh.num_edges,
        "N_s": sum(1 for s in sides if s[2]),
        "arrangement_faces": nf,
        "arrangement_intersections": arr.intersection_count,
    }
    graph = {"vertices": len(keys), "edges": len(edges), "components": len(groups)}
    return ReebSpaceResult(
        "full",
        sheets,
        graph,
        stats,
        arrangement=arr,
        scale=mesh.scale,
        timings={"arrangement": t1 - t0, "traversal": t2 - t1, "total": time.perf_counter() - t0},
        metadata={"peak_retained_fibers": peak},
    )


def _groups(n: int, edges) -> list[list[int]]:
    g = nx.Graph()
    g.add_nodes_from(range(n))
    g.add_edges_from(edges)
    return sorted(sorted(c) for c in nx.connected_components(g))


@dataclass
class EquivalenceReport:
    equivalent: bool
    reason: str = ""

    def __bool__(self):
        return self.equivalent

    def as_dict(self) -> dict:
        return {"equivalent": self.equivalent, "reason": self.reason}


def _sheet_graph(result: ReebSpaceResult) -> nx.Graph:
    g = nx.Graph()
    for s in result.sheets:
        g.add_node(s.id, area=s.area)
    g.add_edges_from(result.adjacency_pairs())
    return g


def compare(a: ReebSpaceResult, b: ReebSpaceResult) -> EquivalenceReport:
    """Sheet counts, exact area multisets, and area-respecting isomorphism of sheet adjacency."""
    if a.sheet_count != b.sheet_count:
        return EquivalenceReport(False, f"sheet count {a.sheet_count} != {b.sheet_count}")
    for x, y in zip(a.areas(), b.areas()):
        if x != y:
            return EquivalenceReport(False, f"sheet areas differ: {x} != {y}")
    ga, gb = _sheet_graph(a), _sheet_graph(b)
    if ga.number_of_edges() != gb.number_of_edges():
        return EquivalenceReport(
            False, f"adjacency edge count {ga.number_of_edges()} != {gb.number_of_edges()}"
        )
    if not nx.is_isomorphic(ga, gb, node_match=lambda u, v: u["area"] == v["area"]):
        return EquivalenceReport(False, "sheet adjacency graphs are not isomorphic")
    return EquivalenceReport(True, "equivalent")
