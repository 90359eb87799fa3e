"""Edge classification by upper/lower link connectivity, and the singular set."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Optional

from .arrangement import PlanarArrangement, build_arrangement
from .errors import DegenerateOrientation, NoConnectorFound
from .geometry import PSEUDO_SINGULAR, REGULAR, SINGULAR, RangeSegment
from .mesh import TetMesh

DEFINITE = "definite"
INDEFINITE = "indefinite"


@dataclass(frozen=True)
class LinkPartition:
    """Link of edge ``ab`` split by the side of line ``f(a) f(b)`` (with ``a < b``)."""

    edge: int
    upper: tuple[int, ...]
    lower: tuple[int, ...]
    upper_edges: tuple[tuple[int, int], ...]
    lower_edges: tuple[tuple[int, int], ...]
    upper_components: int
    lower_components: int
    upper_tris: tuple[int, ...]
    lower_tris: tuple[int, ...]


@dataclass(frozen=True)
class EdgeClass:
    edge: int
    kind: str  # REGULAR | DEFINITE | INDEFINITE
    upper_components: int
    lower_components: int

    @property
    def singular(self) -> bool:
        return self.kind != REGULAR

    @property
    def simple(self) -> bool:
        """Indefinite edge that splits or merges exactly two components."""
        return (
            self.kind == INDEFINITE
            and max(self.upper_components, self.lower_components) == 2
            and min(self.upper_components, self.lower_components) >= 1
        )


def classify_counts(upper: int, lower: int) -> str:
    if upper == 1 and lower == 1:
        return REGULAR
    if upper == 0 or lower == 0:
        return DEFINITE
    return INDEFINITE


@dataclass
class SingularSet:
    edges: list[int]
    vertices: list[int]
    pseudo: list[int] = field(default_factory=list)

    def kind(self, e: int) -> str:
        if e in self._singular:
            return SINGULAR
        if e in self._pseudo:
            return PSEUDO_SINGULAR
        return REGULAR

    def __post_init__(self):
        self._singular = frozenset(self.edges)
        self._pseudo = frozenset(self.pseudo)

    @property
    def arranged_edges(self) -> list[int]:
        """Edges whose segments go into the singular arrangement."""
        return sorted(self._singular | self._pseudo)

    def is_arranged(self, e: int) -> bool:
        return e in self._singular or e in self._pseudo


def _components(verts, link_edges) -> int:
    if not verts:
        return 0
    parent = {v: v for v in verts}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    count = len(verts)
    for u, v in link_edges:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            count -= 1
    return count


def split_link(mesh: TetMesh, edge: int) -> LinkPartition:
    """Partition the link of ``edge`` into upper and lower parts.

    Raises :class:`DegenerateOrientation` if a link vertex point is collinear
    with the edge's segment.
    """
    mesh._check_edge(edge)
    a, b = mesh.edges[edge]
    pts = mesh.ipoints
    ax, ay = pts[a]
    bx, by = pts[b]
    dx, dy = bx - ax, by - ay
    side = {}
    upper, lower, utri, ltri = [], [], [], []
    for v, t in mesh.edge_tris[edge]:
        vx, vy = pts[v]
        det = dx * (vy - ay) - dy * (vx - ax)
        if det > 0:
            side[v] = 1
            upper.append(v)
            utri.append(t)
        elif det < 0:
            side[v] = -1
            lower.append(v)
            ltri.append(t)
        else:
            raise DegenerateOrientation(
                f"vertex {v} is collinear with edge ({a}, {b}) in the range"
            )
    uedges, ledges = [], []
    for u, v in mesh.edge_link_edges[edge]:
        su = side[u]
        if su == side[v]:
            (uedges if su > 0 else ledges).append((u, v) if u < v else (v, u))
    return LinkPartition(
        edge,
        tuple(upper),
        tuple(lower),
        tuple(uedges),
        tuple(ledges),
        _components(upper, uedges),
        _components(lower, ledges),
        tuple(utri),
        tuple(ltri),
    )


def link_partitions(mesh: TetMesh) -> list[LinkPartition]:
    """All link partitions, computed once per mesh."""
    cached = mesh.__dict__.get("_link_partitions")
    if cached is None:
        cached = [split_link(mesh, e) for e in range(mesh.num_edges)]
        mesh.__dict__["_link_partitions"] = cached
    return cached


def classify_edge(part: LinkPartition) -> EdgeClass:
    return EdgeClass(
        part.edge,
        classify_counts(part.upper_components, part.lower_components),
        part.upper_components,
        part.lower_components,
    )


def classify_all(mesh: TetMesh) -> tuple[list[EdgeClass], SingularSet]:
    classes = [classify_edge(p) for p in link_partitions(mesh)]
    sing = [c.edge for c in classes if c.singular]
    verts = sorted({v for e in sing for v in mesh.edges[e]})
    return classes, SingularSet(sing, verts)


# -- singular arrangement and nested faces -------------------------------------------


def range_segments(mesh: TetMesh, edges, kind_of=None) -> list[RangeSegment]:
    pts = mesh.ipoints
    out = []
    for e in edges:
        a, b = mesh.edges[e]
        kind = kind_of(e) if kind_of else REGULAR
        out.append(RangeSegment(e, pts[a], pts[b], kind))
    return out


def singular_arrangement(mesh: TetMesh, singular: SingularSet) -> PlanarArrangement:
    return build_arrangement(range_segments(mesh, singular.arranged_edges, singular.kind))


@dataclass
class ConnectResult:
    singular: SingularSet
    added: int
    arrangement: PlanarArrangement

    def __iter__(self):
        return iter((self.singular, self.added))


def nested_holes(arr: PlanarArrangement) -> list[tuple[int, int, int]]:
    """``(depth, face, hole half-edge)`` for every hole of a bounded face, deepest first."""
    comp = _vertex_components(arr)
    hole_of: dict[int, int] = {}  # component -> face it is a hole of
    for face in arr.faces:
        for h in face.holes:
            hole_of[comp[arr.origin[h]]] = face.id
    depth: dict[int, int] = {}

    def depth_of(c):
        if c in depth:
            return depth[c]
        f = hole_of[c]
        if arr.faces[f].unbounded:
            d = 0
        else:
            d = depth_of(comp[arr.origin[arr.faces[f].outer]]) + 1
        depth[c] = d
        return d

    out = []
    for face in arr.faces:
        if face.unbounded:
            continue
        for h in face.holes:
            out.append((depth_of(comp[arr.origin[h]]), face.id, h))
    out.sort(key=lambda t: (-t[0], t[1], t[2]))
    return out


def _vertex_components(arr: PlanarArrangement) -> list[int]:
    parent = list(range(arr.num_vertices))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for h in range(0, arr.num_halfedges, 2):
        a, b = find(arr.origin[h]), find(arr.origin[h + 1])
        if a != b:
            parent[a] = b
    return [find(v) for v in range(arr.num_vertices)]


def connect_nested(
    mesh: TetMesh, singular: SingularSet, arrangement: Optional[PlanarArrangement] = None
) -> ConnectResult:
    """Promote regular edges to pseudo-singular until no bounded face has a hole.

    Each round takes the deepest hole, runs a breadth-first search in the
    1-skeleton from vertices mapped onto the enclosing face's outer boundary
    to vertices mapped onto the hole boundary, and marks the regular edges on
    the shortest path.
    """
    arr = arrangement if arrangement is not None else singular_arrangement(mesh, singular)
    pseudo = set(singular.pseudo)
    added = 0
    while True:
        holes = nested_holes(arr)
        if not holes:
            break
        _, f, hole = holes[0]
        outer = arr.faces[f].outer
        src = _mesh_vertices_on(mesh, arr, arr.cycle(outer), singular, pseudo)
        dst = _mesh_vertices_on(mesh, arr, arr.cycle(hole), singular, pseudo)
        path = _shortest_path(mesh, src, dst)
        if path is None:
            raise NoConnectorFound(f"no 1-skeleton path from face {f} boundary to its hole")
        sing = set(singular.edges)
        for u, v in zip(path, path[1:]):
            e = mesh.edge_id(u, v)
            if e not in sing and e not in pseudo:
                pseudo.add(e)
                added += 1
        singular = SingularSet(singular.edges, singular.vertices, sorted(pseudo))
        arr = singular_arrangement(mesh, singular)
    return ConnectResult(singular, added, arr)


def _mesh_vertices_on(mesh, arr, cycle, singular, pseudo) -> list[int]:
    verts = set()
    edges = set(singular.edges) | pseudo
    for e in edges:
        verts.update(mesh.edges[e])
    on_cycle = {arr.origin[g] for g in cycle}
    pts = mesh.ipoints
    return sorted(v for v in verts if arr.vertex_index.get(pts[v]) in on_cycle)


def _shortest_path(mesh: TetMesh, sources, targets) -> Optional[list[int]]:
    targets = set(targets)
    prev = {s: None for s in sources}
    queue = deque(sources)
    nbrs = _neighbours(mesh)
    while queue:
        u = queue.popleft()
        if u in targets:
            path = [u]
            while prev[path[-1]] is not None:
                path.append(prev[path[-1]])
            return path[::-1]
        for w in nbrs[u]:
            if w not in prev:
                prev[w] = u
                queue.append(w)
    return None


def _neighbours(mesh: TetMesh) -> list[list[int]]:
    out = [[] for _ in range(mesh.num_vertices)]
    for a, b in mesh.edges:
        out[a].append(b)
        out[b].append(a)
    return out
