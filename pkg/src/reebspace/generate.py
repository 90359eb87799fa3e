"""Synthetic meshes: structured grids, a two-armed slot, closed 3-spheres and the toy fan."""

from __future__ import annotations

import itertools
import math
from typing import Callable

import numpy as np
from scipy.spatial import ConvexHull

from .mesh import TetMesh

# smooth bivariate fields on the unit cube; z is tilted in so the map is generic
FIELDS: dict[str, Callable] = {
    "linear": lambda x, y, z: (x + 0.37 * z, y + 0.23 * z),
    "quadratic": lambda x, y, z: (
        x + 0.37 * z + 0.6 * (y - 0.5) ** 2,
        y + 0.23 * z - 0.5 * (x - 0.4) * (z - 0.6),
    ),
    "saddle": lambda x, y, z: (
        x + 0.31 * z,
        (x - 0.5) ** 2 - (y - 0.5) ** 2 + 0.8 * (z - 0.45) ** 2 + 0.17 * y,
    ),
    # fibers run along x, so they cross both arms of the two-component mesh
    "slot": lambda x, y, z: (y + 0.05 * x + 0.2 * z, z - 0.07 * y),
    "waves": lambda x, y, z: (
        x + 0.29 * z + 0.15 * math.sin(5.1 * y + 1.3 * z),
        y + 0.21 * z + 0.15 * math.cos(4.3 * x - 0.7 * z),
    ),
}

DECIMALS = 9


def _quantize(v: float) -> str:
    return f"{v:.{DECIMALS}f}"


def random_field(seed: int) -> Callable:
    """Random quadratic pair with seeded coefficients."""
    rng = np.random.default_rng(seed)
    c = rng.normal(size=(2, 10))
    c[0, 1] += 1.0  # keep a dominant linear part so images are not folded flat
    c[1, 2] += 1.0

    def field(x, y, z):
        m = np.array([1, x, y, z, x * x, y * y, z * z, x * y, y * z, x * z])
        a, b = c @ m
        return float(a), float(b)

    return field


def freudenthal_tets(n: int, index) -> list[tuple[int, int, int, int]]:
    """Six tetrahedra per cube, all sharing the cube's main diagonal."""
    tets = []
    steps = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    for i, j, k in itertools.product(range(n - 1), repeat=3):
        for perm in itertools.permutations(range(3)):
            p = [i, j, k]
            verts = [index(*p)]
            for axis in perm:
                p = [p[d] + steps[axis][d] for d in range(3)]
                verts.append(index(*p))
            tets.append(tuple(verts))
    return tets


def grid_mesh(n: int, field: str | Callable = "quadratic", noise: float = 0.0, seed: int = 0) -> TetMesh:
    """``n**3`` vertices on the unit cube, six tets per cell, values quantized to fixed decimals."""
    if n < 2:
        raise ValueError("grid resolution must be at least 2")
    fn = FIELDS[field] if isinstance(field, str) else field
    rng = np.random.default_rng(seed)
    h = 1.0 / (n - 1)

    def index(i, j, k):
        return i + n * (j + n * k)

    coords, values = [], []
    for k, j, i in itertools.product(range(n), repeat=3):
        x, y, z = i * h, j * h, k * h
        a, b = fn(x, y, z)
        if noise:
            da, db = rng.uniform(-noise, noise, size=2)
            a, b = a + da * h, b + db * h
        coords.append((x, y, z))
        values.append((_quantize(a), _quantize(b)))
    return TetMesh(coords, values, freudenthal_tets(n, index))


def two_component_mesh(n: int = 5, field: str | Callable = "slot", noise: float = 0.0, seed: int = 0) -> TetMesh:
    """Grid with a slot cut out of the middle, leaving a U shape with two arms.

    Projected along the arms, fibers over the arms have two components that
    join over the base.
    """
    if n < 4:
        raise ValueError("two-component mesh needs n >= 4")
    full = grid_mesh(n, field, noise, seed)
    lo, hi = n // 3, n - 1 - n // 3

    def removed(cell):
        i, j, k = cell
        return lo <= i < hi and j >= lo

    keep = []
    for t in full.tets:
        cell = tuple(min(full.coords[v][d] for v in t) for d in range(3))
        ijk = tuple(int(round(c * (n - 1))) for c in cell)
        if not removed(ijk):
            keep.append(t)
    used = sorted({v for t in keep for v in t})
    remap = {v: i for i, v in enumerate(used)}
    return TetMesh(
        [full.coords[v] for v in used],
        [full.values[v] for v in used],
        [tuple(remap[v] for v in t) for t in keep],
    )


def sphere_mesh(n: int = 12, seed: int = 0, noise: float = 0.3) -> TetMesh:
    """Closed triangulated 3-sphere: boundary of the convex hull of points on S^3 in R^4.

    The field is a generic linear projection of R^4 plus seeded noise, so
    every vertex carries an independent random perturbation.
    """
    rng = np.random.default_rng(seed)
    p = rng.normal(size=(n, 4))
    p /= np.linalg.norm(p, axis=1, keepdims=True)
    hull = ConvexHull(p)
    proj = rng.normal(size=(4, 2))
    vals = p @ proj + rng.uniform(-noise, noise, size=(n, 2))
    tets = sorted(tuple(sorted(int(v) for v in s)) for s in hull.simplices)
    return TetMesh(
        [tuple(float(c) for c in row[:3]) for row in p],
        [(_quantize(a), _quantize(b)) for a, b in vals],
        tets,
    )


# The toy fan: tets {a, b, v_i, v_i+1} around the edge ab.  Integer vertex
# points chosen so that ab is indefinite with upper link {v1, v5}, av1 and bv5
# are definite, the singular arrangement has four bounded faces, and f(v1v2),
# f(v4v5) are disjoint chords of one face.
T7_POINTS = [("5", "5"), ("4", "-9"), ("9", "4"), ("-3", "1"), ("-7", "6"), ("-9", "0"), ("9", "-9")]
T7_TETS = [(0, 1, 2, 3), (0, 1, 3, 4), (0, 1, 4, 5), (0, 1, 5, 6)]


def toy_mesh() -> TetMesh:
    coords = [(0.0, 0.0, 0.0), (0.0, 0.0, 1.0)] + [
        (math.cos(t), math.sin(t), 0.5) for t in np.linspace(0.0, math.pi, 5)
    ]
    return TetMesh(coords, T7_POINTS, T7_TETS)


# Three tets around ab whose only indefinite edge is simple; two sheets.
SPLIT_FAN_POINTS = [("4", "-6"), ("3", "0"), ("1", "4"), ("5", "3"), ("4", "-4"), ("3", "-6")]
SPLIT_FAN_TETS = [(0, 1, 2, 3), (0, 1, 3, 4), (0, 1, 4, 5)]


def split_fan_mesh() -> TetMesh:
    coords = [(0.0, 0.0, 0.0), (0.0, 0.0, 1.0)] + [
        (math.cos(t), math.sin(t), 0.5) for t in np.linspace(0.0, math.pi, 4)
    ]
    return TetMesh(coords, SPLIT_FAN_POINTS, SPLIT_FAN_TETS)
