"""Sheets of the Reeb space: extraction, adjacency and JSON output."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .arrangement import PlanarArrangement
from .geometry import format_rational
from .traversal import SingularCorrespondenceGraph

FORMAT = "reeb-space/1"


@dataclass
class Sheet:
    id: int
    members: list[int]  # vertex ids of the correspondence graph
    faces: list[tuple[int, int]]  # (face id, component index within the face)
    area: Fraction
    adjacent: list[int] = field(default_factory=list)


@dataclass
class ReebSpaceResult:
    algorithm: str
    sheets: list[Sheet]
    graph: dict  # vertices / edges / components of the correspondence graph
    stats: dict
    arrangement: Optional[PlanarArrangement] = None
    scale: int = 1
    timings: dict = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)
    qlists: Optional[dict] = None  # crossing lists per face (singular algorithm only)
    correspondence: Optional[SingularCorrespondenceGraph] = None

    @property
    def sheet_count(self) -> int:
        return len(self.sheets)

    def areas(self) -> list[Fraction]:
        return sorted(s.area for s in self.sheets)

    def adjacency_pairs(self) -> set[tuple[int, int]]:
        return {(s.id, t) for s in self.sheets for t in s.adjacent if s.id < t}


def build_sheets(
    groups: list[list[int]],
    key_of,
    area_of,
    gluings,
) -> list[Sheet]:
    """Turn vertex groups into sheets with canonical ids and adjacency.

    ``key_of(v)`` gives the ``(face, component)`` pair of vertex ``v`` and
    ``area_of(face)`` that face's area.  Sheets are numbered by their smallest
    ``(face, component)`` pair.
    """
    keyed = sorted(groups, key=lambda g: min(key_of(v) for v in g))
    sheet_of = {}
    sheets = []
    for i, g in enumerate(keyed):
        faces = sorted(key_of(v) for v in g)
        area = sum((area_of(f) for f, _ in faces), Fraction(0))
        sheets.append(Sheet(i, sorted(g), faces, area))
        for v in g:
            sheet_of[v] = i
    for a, b in sheet_adjacency(sheet_of, gluings):
        sheets[a].adjacent.append(b)
        sheets[b].adjacent.append(a)
    for s in sheets:
        s.adjacent.sort()
    return sheets


def sheet_adjacency(sheet_of: dict[int, int], gluings) -> set[tuple[int, int]]:
    """Sheet pairs glued along a singular segment.

    Every singular crossing lists the components it touches on each side;
    all sheets owning one of those components meet along the segment.
    """
    pairs = set()
    for side_a, side_b in gluings:
        ids = sorted({sheet_of[v] for v in (*side_a, *side_b)})
        for i, a in enumerate(ids):
            for b in ids[i + 1 :]:
                pairs.add((a, b))
    return pairs


def extract_sheets(h: SingularCorrespondenceGraph, arr: PlanarArrangement, scale: int = 1) -> list[Sheet]:
    """One sheet per connected component of the singular correspondence graph."""
    s2 = Fraction(1, scale * scale)
    areas: dict[int, Fraction] = {}

    def area_of(f):
        if f not in areas:
            areas[f] = arr.face_area(f) * s2
        return areas[f]

    def key_of(v):
        c = h.vertices[v]
        return (c.face, c.index)

    return build_sheets(h.components(), key_of, area_of, h.gluings)


# -- output ----------------------------------------------------------------------------


def _point(p, scale):
    return [format_rational(Fraction(p[0]) / scale), format_rational(Fraction(p[1]) / scale)]


def to_document(result: ReebSpaceResult, geometry: bool = True, timings: bool = False) -> dict:
    arr, scale = result.arrangement, result.scale
    polys: dict[int, list] = {}
    sheets = []
    for s in result.sheets:
        faces = []
        for f, k in s.faces:
            rec = {"face": f, "component": k}
            if geometry and arr is not None:
                if f not in polys:
                    polys[f] = [_point(p, scale) for p in arr.face_polygon(f)]
                rec["polygon"] = polys[f]
            faces.append(rec)
        sheets.append({"id": s.id, "area": format_rational(s.area), "faces": faces, "adjacent": s.adjacent})
    doc = {
        "format": FORMAT,
        "algorithm": result.algorithm,
        "sheet_count": result.sheet_count,
        "stats": result.stats,
        "correspondence_graph": result.graph,
        "sheets": sheets,
    }
    if result.metadata:
        doc["metadata"] = result.metadata
    if timings:
        doc["timings"] = result.timings
    return doc


def serialize(result: ReebSpaceResult, geometry: bool = True, timings: bool = False) -> str:
    """Deterministic JSON text.  Timings are opt-in because they differ between runs."""
    doc = to_document(result, geometry, timings)
    return json.dumps(doc, indent=1, ensure_ascii=False) + "\n"
