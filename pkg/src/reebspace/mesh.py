"""Tetrahedral meshes carrying a bivariate field, plus the TBF text format."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence, TextIO

from .errors import InvalidMesh, ParseError, UnknownSimplex
from .geometry import RationalPoint, format_exact_decimal, to_fraction

log = logging.getLogger(__name__)

TBF_MAGIC = "tbf 1"


class TetMesh:
    """Immutable tetrahedral complex with values ``(f1, f2)`` at every vertex.

    Field values are exact rationals.  ``ipoints`` holds the same vertex points
    scaled by a common positive denominator (``scale``) so that orientation
    tests run on plain integers.
    """

    def __init__(self, coords: Sequence, values: Sequence, tets: Iterable[Sequence[int]]):
        self.coords = [tuple(float(c) for c in xyz) for xyz in coords]
        self.values = [(to_fraction(a), to_fraction(b)) for a, b in values]
        if len(self.coords) != len(self.values):
            raise InvalidMesh("coordinate and value counts differ")
        n = len(self.values)
        seen = set()
        canon = []
        for t in tets:
            t = tuple(int(i) for i in t)
            if len(t) != 4:
                raise InvalidMesh(f"tetrahedron {t} does not have 4 vertices")
            for i in t:
                if not 0 <= i < n:
                    raise InvalidMesh(f"vertex index {i} out of range [0, {n})")
            s = tuple(sorted(t))
            if len(set(s)) != 4:
                raise InvalidMesh(f"tetrahedron {t} repeats a vertex")
            if s in seen:
                raise InvalidMesh(f"duplicate tetrahedron {t}")
            seen.add(s)
            canon.append(s)
        if not canon:
            raise InvalidMesh("mesh has no tetrahedra")
        self.tets = canon
        self._index()

    # -- indexing -----------------------------------------------------------

    def _index(self):
        tri_index: dict[tuple, int] = {}
        tri_tets: list[list[int]] = []
        tet_tris = []
        for ti, (a, b, c, d) in enumerate(self.tets):
            faces = []
            for tri in ((a, b, c), (a, b, d), (a, c, d), (b, c, d)):
                k = tri_index.get(tri)
                if k is None:
                    k = tri_index[tri] = len(tri_tets)
                    tri_tets.append([])
                tri_tets[k].append(ti)
                if len(tri_tets[k]) > 2:
                    raise InvalidMesh(f"triangle {tri} is shared by more than two tetrahedra")
                faces.append(k)
            tet_tris.append(tuple(faces))
        # renumber triangles in lexicographic order so ids do not depend on tet order
        order = sorted(tri_index)
        remap = {tri_index[t]: i for i, t in enumerate(order)}
        self.triangles = order
        self.tri_index = {t: i for i, t in enumerate(order)}
        self.tri_tets = [None] * len(order)
        for old, tets in enumerate(tri_tets):
            self.tri_tets[remap[old]] = tuple(tets)
        self.tet_tris = [tuple(remap[k] for k in f) for f in tet_tris]

        edges = set()
        for a, b, c in order:
            edges.update(((a, b), (a, c), (b, c)))
        self.edges = sorted(edges)
        self.edge_index = {e: i for i, e in enumerate(self.edges)}
        # edge -> [(opposite vertex, triangle id)]
        self.edge_tris: list[list[tuple[int, int]]] = [[] for _ in self.edges]
        for k, (a, b, c) in enumerate(order):
            ei = self.edge_index
            self.edge_tris[ei[(a, b)]].append((c, k))
            self.edge_tris[ei[(a, c)]].append((b, k))
            self.edge_tris[ei[(b, c)]].append((a, k))
        # edge -> link edges (opposite edge in every incident tet)
        self.edge_link_edges: list[list[tuple[int, int]]] = [[] for _ in self.edges]
        for a, b, c, d in self.tets:
            ei = self.edge_index
            for e, opp in (
                ((a, b), (c, d)),
                ((a, c), (b, d)),
                ((a, d), (b, c)),
                ((b, c), (a, d)),
                ((b, d), (a, c)),
                ((c, d), (a, b)),
            ):
                self.edge_link_edges[ei[e]].append(opp)

        degree_sum = sum(len(t) for t in self.edge_tris)
        assert degree_sum == 3 * len(self.triangles), "edge degree sum must equal 3 N_t"
        boundary = sum(1 for t in self.tri_tets if len(t) == 1)
        if boundary:
            log.debug("mesh has %d boundary triangles (not a closed manifold)", boundary)

    @cached_property
    def scale(self) -> int:
        """Least common denominator of all field values."""
        den = 1
        for a, b in self.values:
            den = math.lcm(den, a.denominator, b.denominator)
        return den

    @cached_property
    def ipoints(self) -> list[tuple[int, int]]:
        s = self.scale
        return [(int(a * s), int(b * s)) for a, b in self.values]

    @cached_property
    def vertex_edges(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in self.values]
        for i, (a, b) in enumerate(self.edges):
            out[a].append(i)
            out[b].append(i)
        return out

    # -- queries --------------------------------------------------------------

    @property
    def num_vertices(self) -> int:
        return len(self.values)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def num_triangles(self) -> int:
        return len(self.triangles)

    @property
    def num_tets(self) -> int:
        return len(self.tets)

    @property
    def boundary_triangle_count(self) -> int:
        return sum(1 for t in self.tri_tets if len(t) == 1)

    @property
    def is_closed(self) -> bool:
        return self.boundary_triangle_count == 0

    def point(self, v: int) -> RationalPoint:
        return RationalPoint(*self.values[v])

    def edge_id(self, a: int, b: int) -> int:
        key = (a, b) if a < b else (b, a)
        try:
            return self.edge_index[key]
        except KeyError:
            raise UnknownSimplex(f"no edge {key}") from None

    def _check_edge(self, e: int) -> int:
        if not isinstance(e, int) or not 0 <= e < len(self.edges):
            raise UnknownSimplex(f"no edge with id {e!r}")
        return e

    def with_values(self, values) -> "TetMesh":
        return TetMesh(self.coords, values, self.tets)

    def __repr__(self):
        return (
            f"TetMesh(V={self.num_vertices}, E={self.num_edges}, "
            f"T={self.num_triangles}, tets={self.num_tets})"
        )


@dataclass(frozen=True)
class EdgeLink:
    vertices: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]


def edge_link(mesh: TetMesh, edge: int) -> EdgeLink:
    """Link of an edge: opposite vertices of its triangles and opposite edges of its tets."""
    mesh._check_edge(edge)
    verts = tuple(sorted(v for v, _ in mesh.edge_tris[edge]))
    edges = tuple(sorted(tuple(sorted(uv)) for uv in mesh.edge_link_edges[edge]))
    return EdgeLink(verts, edges)


def edge_degree(mesh: TetMesh, edge: int) -> int:
    """Number of triangles incident to ``edge``."""
    mesh._check_edge(edge)
    return len(mesh.edge_tris[edge])


# -- TBF text format -------------------------------------------------------------


def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def load_mesh(source: str | TextIO) -> TetMesh:
    """Parse a TBF document (string or text stream)."""
    text = source if isinstance(source, str) else source.read()
    lines = list(_content_lines(text))
    pos = 0

    def take(what):
        nonlocal pos
        if pos >= len(lines):
            raise ParseError(f"unexpected end of input, expected {what}")
        item = lines[pos]
        pos += 1
        return item

    lineno, line = take("header")
    if " ".join(line.split()) != TBF_MAGIC:
        raise ParseError(f"line {lineno}: expected '{TBF_MAGIC}' header, got {line!r}")
    nv = _count(take("vertex count"), "vertices")
    coords, values = [], []
    for _ in range(nv):
        lineno, line = take("vertex line")
        parts = line.split()
        if len(parts) != 5:
            if parts and parts[0] == "tets":
                raise ParseError(f"line {lineno}: declared {nv} vertices but found {len(coords)}")
            raise ParseError(f"line {lineno}: vertex line needs 5 fields, got {len(parts)}")
        try:
            coords.append(tuple(float(p) for p in parts[:3]))
            values.append((to_fraction(parts[3]), to_fraction(parts[4])))
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"line {lineno}: {exc}") from None
    nt = _count(take("tet count"), "tets")
    tets = []
    for _ in range(nt):
        lineno, line = take("tet line")
        parts = line.split()
        if len(parts) != 4:
            raise ParseError(f"line {lineno}: tet line needs 4 indices, got {len(parts)}")
        try:
            tets.append(tuple(int(p) for p in parts))
        except ValueError as exc:
            raise ParseError(f"line {lineno}: {exc}") from None
    if pos != len(lines):
        raise ParseError(f"line {lines[pos][0]}: trailing content after {nt} tets")
    return TetMesh(coords, values, tets)


def _count(item, keyword) -> int:
    lineno, line = item
    parts = line.split()
    if len(parts) != 2 or parts[0] != keyword:
        raise ParseError(f"line {lineno}: expected '{keyword} N', got {line!r}")
    try:
        n = int(parts[1])
    except ValueError:
        raise ParseError(f"line {lineno}: bad count {parts[1]!r}") from None
    if n < 0:
        raise ParseError(f"line {lineno}: negative count")
    return n


def dump_mesh(mesh: TetMesh) -> str:
    """Serialize to TBF.  Field values are written exactly, so loading reproduces them."""
    out = [TBF_MAGIC, f"vertices {mesh.num_vertices}"]
    for (x, y, z), (a, b) in zip(mesh.coords, mesh.values):
        out.append(f"{x!r} {y!r} {z!r} {format_exact_decimal(a)} {format_exact_decimal(b)}")
    out.append(f"tets {mesh.num_tets}")
    out.extend(" ".join(map(str, t)) for t in mesh.tets)
    return "\n".join(out) + "\n"


def read_mesh(path) -> TetMesh:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if text.lstrip().startswith("# vtk DataFile"):
        return load_vtk_legacy(text)
    return load_mesh(text)


def write_mesh(mesh: TetMesh, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dump_mesh(mesh))


# -- legacy VTK importer ----------------------------------------------------------


def load_vtk_legacy(text: str, scalars: tuple[str, str] | None = None) -> TetMesh:
    """Import an ASCII legacy ``UNSTRUCTURED_GRID`` with two point-data scalar arrays.

    Only tetrahedral cells (type 10) are kept.  ``scalars`` names the two
    arrays to use; by default the first two found are taken.
    """
    tokens = text.split()
    lines = text.splitlines()
    if not lines or not lines[0].startswith("# vtk DataFile"):
        raise ParseError("not a legacy VTK file")
    if "ASCII" not in (line.strip() for line in lines[:4]):
        raise ParseError("only ASCII legacy VTK is supported")
    up = [t.upper() for t in tokens]

    def find(word, start=0):
        try:
            return up.index(word, start)
        except ValueError:
            raise ParseError(f"missing {word} section") from None

    i = find("POINTS")
    npts = int(tokens[i + 1])
    vals = tokens[i + 3 : i + 3 + 3 * npts]
    coords = [tuple(float(v) for v in vals[3 * k : 3 * k + 3]) for k in range(npts)]
    i = find("CELLS")
    ncells = int(tokens[i + 1])
    j = i + 3
    cells = []
    for _ in range(ncells):
        m = int(tokens[j])
        cells.append(tuple(int(t) for t in tokens[j + 1 : j + 1 + m]))
        j += m + 1
    i = find("CELL_TYPES", j)
    types = [int(t) for t in tokens[i + 2 : i + 2 + ncells]]
    tets = [c for c, t in zip(cells, types) if t == 10]
    i = find("POINT_DATA", i)
    arrays: dict[str, list[Fraction]] = {}
    k = i + 2
    while k < len(tokens):
        if up[k] == "SCALARS":
            name = tokens[k + 1]
            k += 3
            if k < len(tokens) and tokens[k].isdigit():
                k += 1
            if up[k] == "LOOKUP_TABLE":
                k += 2
            arrays[name] = [to_fraction(t) for t in tokens[k : k + npts]]
            k += npts
        else:
            k += 1
    if scalars is None:
        if len(arrays) < 2:
            raise ParseError("need two point-data scalar arrays")
        scalars = tuple(list(arrays)[:2])
    try:
        f1, f2 = arrays[scalars[0]], arrays[scalars[1]]
    except KeyError as exc:
        raise ParseError(f"scalar array {exc} not found") from None
    return TetMesh(coords, list(zip(f1, f2)), tets)
