"""Brute-force oracles and instance factories shared by the tests.

Nothing here calls into the geometry kernel's constructions: intersections
use Cramer's rule on fractions and angular order uses a half-plane
comparator, so disagreements point at real bugs.
"""

from __future__ import annotations

import random
from fractions import Fraction
from functools import cmp_to_key

from reebspace.generate import grid_mesh, random_field, sphere_mesh
from reebspace.pipeline import prepare


def line_hit(p1, q1, p2, q2):
    """``None``, ``("point", pt)`` or ``("overlap", None)`` for two closed segments."""
    x1, y1 = map(Fraction, p1)
    x2, y2 = map(Fraction, q1)
    x3, y3 = map(Fraction, p2)
    x4, y4 = map(Fraction, q2)
    a, b = x2 - x1, x3 - x4
    c, d = y2 - y1, y3 - y4
    det = a * d - b * c
    rx, ry = x3 - x1, y3 - y1
    if det == 0:
        if (x2 - x1) * (y3 - y1) - (y2 - y1) * (x3 - x1) != 0:
            return None
        # collinear: project on the longer axis
        key = (lambda p: p[0]) if abs(x2 - x1) + abs(x4 - x3) >= abs(y2 - y1) + abs(y4 - y3) else (lambda p: p[1])
        s1 = sorted([(x1, y1), (x2, y2)], key=key)
        s2 = sorted([(x3, y3), (x4, y4)], key=key)
        lo = max(s1[0], s2[0], key=key)
        hi = min(s1[1], s2[1], key=key)
        if key(lo) > key(hi):
            return None
        if key(lo) == key(hi):
            return ("point", lo)
        return ("overlap", None)
    t = (rx * d - b * ry) / det
    u = (a * ry - c * rx) / det
    if 0 <= t <= 1 and 0 <= u <= 1:
        return ("point", (x1 + t * (x2 - x1), y1 + t * (y2 - y1)))
    return None


def _angle_cmp(a, b):
    def half(v):
        return 0 if (v[1] > 0 or (v[1] == 0 and v[0] > 0)) else 1

    ha, hb = half(a), half(b)
    if ha != hb:
        return ha - hb
    c = a[0] * b[1] - a[1] * b[0]
    return -1 if c > 0 else (1 if c < 0 else 0)


class Degenerate(Exception):
    pass


def brute_arrangement(segments):
    """Vertices, edges and boundary-cycle areas of a segment arrangement, by brute force.

    Raises :class:`Degenerate` on collinear overlap or three segments
    crossing in their interiors at one point.
    """
    segs = [(tuple(map(Fraction, p)), tuple(map(Fraction, q))) for p, q in segments]
    on = [{p, q} for p, q in segs]
    proper: dict = {}
    hits = 0
    for i in range(len(segs)):
        for j in range(i + 1, len(segs)):
            r = line_hit(*segs[i], *segs[j])
            if r is None:
                continue
            if r[0] == "overlap":
                raise Degenerate("overlap")
            pt = r[1]
            end_i = pt in segs[i]
            end_j = pt in segs[j]
            if end_i and end_j:
                continue
            hits += 1
            on[i].add(pt)
            on[j].add(pt)
            if not end_i and not end_j:
                proper[pt] = proper.get(pt, 0) + 1
    if any(c > 1 for c in proper.values()):
        raise Degenerate("triple")
    edges = set()
    for pts in on:
        chain = sorted(pts)
        for u, v in zip(chain, chain[1:]):
            if (u, v) in edges or (v, u) in edges:
                raise Degenerate("overlap")
            edges.add((u, v))
    verts = sorted({p for e in edges for p in e})
    nbr = {v: [] for v in verts}
    for u, v in edges:
        nbr[u].append(v)
        nbr[v].append(u)
    for v, ns in nbr.items():
        ns.sort(key=cmp_to_key(lambda a, b, v=v: _angle_cmp((a[0] - v[0], a[1] - v[1]), (b[0] - v[0], b[1] - v[1]))))
    used = set()
    areas = []
    for u, v in sorted(edges) + sorted((v, u) for u, v in edges):
        if (u, v) in used:
            continue
        cycle = []
        a, b = u, v
        while (a, b) not in used:
            used.add((a, b))
            cycle.append(a)
            ring = nbr[b]
            k = ring.index(a)
            a, b = b, ring[k - 1]  # previous in counterclockwise order = next clockwise
        twice = sum(cycle[i][0] * cycle[(i + 1) % len(cycle)][1] - cycle[(i + 1) % len(cycle)][0] * cycle[i][1]
                    for i in range(len(cycle)))
        areas.append(Fraction(twice, 2))
    return {"V": len(verts), "E": len(edges), "cycle_areas": sorted(areas), "intersections": hits}


def brute_red_blue(red, blue):
    """Set of ``(red index, point)`` contacts between red and blue segments."""
    out = set()
    for i, (p, q) in enumerate(red):
        for b in blue:
            r = line_hit(p, q, *b)
            if r is None:
                continue
            if r[0] == "overlap":
                raise Degenerate("overlap")
            out.add((i, r[1]))
    return out


def brute_fiber(mesh, x) -> frozenset:
    """Triangles whose image strictly contains ``x`` (in scaled integer coordinates)."""
    pts = mesh.ipoints
    out = []
    for k, (a, b, c) in enumerate(mesh.triangles):
        A, B, C = pts[a], pts[b], pts[c]
        s = []
        for P, Q in ((A, B), (B, C), (C, A)):
            s.append((Q[0] - P[0]) * (x[1] - P[1]) - (Q[1] - P[1]) * (x[0] - P[0]))
        if all(v > 0 for v in s) or all(v < 0 for v in s):
            out.append(k)
    return frozenset(out)


def random_grid(seed: int, strength="0.001"):
    """Grid mesh of resolution 2..4 with a random smooth field plus noise, perturbed."""
    n = 2 + seed % 3
    mesh = grid_mesh(n, random_field(seed), noise=0.5, seed=seed)
    return prepare(mesh, seed, strength).mesh


def random_sphere(seed: int):
    rng = random.Random(seed)
    return prepare(sphere_mesh(rng.randint(8, 16), seed), seed, "0.001").mesh


def random_segments(rng: random.Random, n: int, span: int = 40, shared: float = 0.25):
    """Integer segments; some endpoints are reused to produce shared endpoints and chains."""
    pool = []
    segs = []
    while len(segs) < n:
        def point():
            if pool and rng.random() < shared:
                return rng.choice(pool)
            p = (rng.randint(-span, span), rng.randint(-span, span))
            pool.append(p)
            return p

        p, q = point(), point()
        if p != q:
            segs.append((p, q))
    return segs


def inside_polygon(poly, x) -> bool:
    """Even-odd rule; edges walked twice (dangling edges) cancel out."""
    px, py = x
    inside = False
    n = len(poly)
    for i in range(n):
        (ax, ay), (bx, by) = poly[i], poly[(i + 1) % n]
        if (ay > py) != (by > py):
            if px < ax + Fraction(py - ay) * (bx - ax) / (by - ay):
                inside = not inside
    return inside


def locate(arr, x) -> int:
    """Face of ``arr`` containing ``x`` (which must avoid all segments)."""
    for face in arr.faces:
        if face.unbounded:
            continue
        if inside_polygon(arr.cycle_points(face.outer), x) and not any(
            inside_polygon(arr.cycle_points(h), x) for h in face.holes
        ):
            return face.id
    return arr.unbounded_face


EPS = Fraction(1, 10**200)


def nudge(base, d):
    """Point just off ``base`` along ``d``, turned slightly counterclockwise."""
    return (base[0] + EPS * d[0] - EPS * EPS * d[1], base[1] + EPS * d[1] + EPS * EPS * d[0])


def arc_sample(bar, q, j):
    """Point inside face ``q.face`` on boundary arc ``j``, just before entry ``j``."""
    if not len(q):
        h = bar.faces[q.face].outer
        p, r = bar.points[bar.origin[h]], bar.points[bar.origin[h ^ 1]]
        mid = (Fraction(p[0] + r[0]) / 2, Fraction(p[1] + r[1]) / 2)
        return nudge(mid, (r[0] - p[0], r[1] - p[1]))
    e = q.entries[j]
    c = e.crossing
    if c.at_vertex:
        return nudge(c.point, c.direction)
    # just behind the crossing along the half-edge, on its left
    h = e.halfedge
    p, r = bar.points[bar.origin[h]], bar.points[bar.origin[h ^ 1]]
    dx, dy = r[0] - p[0], r[1] - p[1]
    return (c.point[0] - EPS * dx - EPS * EPS * dy, c.point[1] - EPS * dy + EPS * EPS * dx)


def straddle(mesh, e, t, delta=Fraction(1, 10**40)):
    """Points just below and just above the segment of edge ``e`` at parameter ``t``.

    ``None`` when another edge image separates the two points.
    """
    a, b = mesh.edges[e]
    pa, pb = mesh.ipoints[a], mesh.ipoints[b]
    dx, dy = pb[0] - pa[0], pb[1] - pa[1]
    base = (pa[0] + t * dx, pa[1] + t * dy)
    lo = (base[0] + delta * dy, base[1] - delta * dx)
    hi = (base[0] - delta * dy, base[1] + delta * dx)
    pts = mesh.ipoints
    for k, (u, v) in enumerate(mesh.edges):
        if k != e and line_hit(pts[u], pts[v], lo, hi) is not None:
            return None
    return lo, hi


def fiber_components(mesh, triangles) -> frozenset:
    """Connected components of a triangle set, adjacency through shared tetrahedra."""
    tris = set(triangles)
    tet_of: dict = {}
    for t in tris:
        for tet in mesh.tri_tets[t]:
            tet_of.setdefault(tet, []).append(t)
    parent = {t: t for t in tris}

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for group in tet_of.values():
        for s in group[1:]:
            parent[find(s)] = find(group[0])
    out: dict = {}
    for t in tris:
        out.setdefault(find(t), set()).add(t)
    return frozenset(frozenset(c) for c in out.values())
