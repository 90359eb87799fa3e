"""Exact 2D geometry kernel.

All predicates and constructions are evaluated in exact rational arithmetic.
Inputs may be ``int`` or :class:`fractions.Fraction`; the mesh layer hands in
integer coordinates (vertex points scaled by a common denominator) so that
the hot predicates never allocate fractions.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .errors import OverlapDegeneracy

log = logging.getLogger(__name__)

Number = int | Fraction

#: PRNG used by :func:`perturb`, recorded in every output document.
PRNG_NAME = "numpy.PCG64/uniform-open"


class RationalPoint(NamedTuple):
    x: Fraction
    y: Fraction

    @classmethod
    def of(cls, x, y) -> "RationalPoint":
        return cls(to_fraction(x), to_fraction(y))

    def __str__(self):
        return f"({format_rational(self.x)}, {format_rational(self.y)})"


REGULAR = "regular"
SINGULAR = "singular"
PSEUDO_SINGULAR = "pseudo-singular"


@dataclass(frozen=True)
class RangeSegment:
    """Image of a mesh edge; ``p`` is the lexicographically smaller endpoint."""

    edge: int
    p: tuple
    q: tuple
    kind: str = REGULAR

    def __post_init__(self):
        if tuple(self.p) == tuple(self.q):
            raise OverlapDegeneracy(f"segment of edge {self.edge} has coincident endpoints")
        if tuple(self.q) < tuple(self.p):
            p, q = self.q, self.p
            object.__setattr__(self, "p", p)
            object.__setattr__(self, "q", q)


def to_fraction(value) -> Fraction:
    """Exact rational value of an int, float, Fraction or decimal/``p/q`` string."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, float):
        if value != value or value in (float("inf"), float("-inf")):
            raise ValueError(f"non-finite value {value!r}")
        return Fraction(value)
    return Fraction(value)


def format_rational(value: Number) -> str:
    """``numerator/denominator`` string (denominator omitted when it is 1)."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def format_exact_decimal(value: Number) -> str:
    """Shortest exact decimal expansion, or ``p/q`` if the expansion does not terminate."""
    value = Fraction(value)
    den = value.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return format_rational(value)
    digits = max(twos, fives)
    scaled = value.numerator * 10**digits // value.denominator
    sign = "-" if scaled < 0 else ""
    text = str(abs(scaled)).rjust(digits + 1, "0")
    if digits == 0:
        return sign + text
    return f"{sign}{text[:-digits]}.{text[-digits:]}"


# -- predicates ---------------------------------------------------------------


def cross(ax: Number, ay: Number, bx: Number, by: Number) -> Number:
    return ax * by - ay * bx


def orient2d(p: Sequence[Number], q: Sequence[Number], r: Sequence[Number]) -> int:
    """Sign of the determinant of ``(q - p, r - p)``: +1 counterclockwise, -1 clockwise, 0 collinear."""
    det = (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
    return (det > 0) - (det < 0)


def pseudoangle(dx: Number, dy: Number) -> Fraction:
    """Exact, strictly monotone stand-in for ``atan2(dy, dx)`` mapped to ``[0, 4)``."""
    s = abs(dx) + abs(dy)
    if s == 0:
        raise ValueError("zero direction has no angle")
    if dy >= 0:
        return 1 - Fraction(dx) / s
    return 3 + Fraction(dx) / s


def relative_pseudoangle(ox: Number, oy: Number, dx: Number, dy: Number) -> Fraction:
    """Counterclockwise pseudo-angle of ``d`` measured from reference direction ``o``."""
    return pseudoangle(ox * dx + oy * dy, ox * dy - oy * dx)


# -- constructions --------------------------------------------------------------


def intersect(p1, q1, p2, q2):
    """Intersect closed segments ``p1q1`` and ``p2q2``.

    Returns ``None`` when disjoint, otherwise ``(point, t, u)`` where ``point``
    is the unique common point and ``t``/``u`` its parameters along each
    segment.  Endpoint objects are returned unchanged when the contact is at
    an endpoint, so integer endpoints stay integers.

    Raises :class:`OverlapDegeneracy` for collinear overlap of positive length.
    """
    d1x = q1[0] - p1[0]
    d1y = q1[1] - p1[1]
    d2x = q2[0] - p2[0]
    d2y = q2[1] - p2[1]
    ex = p2[0] - p1[0]
    ey = p2[1] - p1[1]
    den = d1x * d2y - d1y * d2x
    if den == 0:
        if ex * d1y - ey * d1x != 0:
            return None
        return _collinear_contact(p1, q1, p2, q2, d1x, d1y)
    tn = ex * d2y - ey * d2x
    un = ex * d1y - ey * d1x
    if den < 0:
        den, tn, un = -den, -tn, -un
    if tn < 0 or tn > den or un < 0 or un > den:
        return None
    if tn == 0:
        point = p1
    elif tn == den:
        point = q1
    elif un == 0:
        point = p2
    elif un == den:
        point = q2
    else:
        t = Fraction(tn, den)
        point = (p1[0] + t * d1x, p1[1] + t * d1y)
    return tuple(point), Fraction(tn, den), Fraction(un, den)


def _collinear_contact(p1, q1, p2, q2, dx, dy):
    norm = dx * dx + dy * dy
    a = Fraction((p2[0] - p1[0]) * dx + (p2[1] - p1[1]) * dy, norm)
    b = Fraction((q2[0] - p1[0]) * dx + (q2[1] - p1[1]) * dy, norm)
    lo, hi = min(a, b), max(a, b)
    if hi < 0 or lo > 1:
        return None
    if hi == 0:
        pt, t = p1, Fraction(0)
    elif lo == 1:
        pt, t = q1, Fraction(1)
    else:
        raise OverlapDegeneracy(f"collinear overlap between {p1}-{q1} and {p2}-{q2}")
    u = Fraction(0) if tuple(pt) == tuple(p2) else Fraction(1)
    return tuple(pt), t, u


def segment_intersection(s1, s2) -> Optional[RationalPoint]:
    """Unique common point of two closed segments, or ``None`` when disjoint."""
    a = (s1.p, s1.q) if isinstance(s1, RangeSegment) else s1
    b = (s2.p, s2.q) if isinstance(s2, RangeSegment) else s2
    hit = intersect(a[0], a[1], b[0], b[1])
    if hit is None:
        return None
    return RationalPoint.of(*hit[0])


# -- genericity -------------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    kind: str  # "coincident" | "collinear" | "overlap" | "triple-intersection"
    items: tuple

    def __str__(self):
        return f"{self.kind} {self.items}"


def find_coincident(points: Sequence) -> list[Violation]:
    seen: dict = {}
    out = []
    for i, p in enumerate(points):
        key = (p[0], p[1])
        if key in seen:
            out.append(Violation("coincident", (seen[key], i)))
        else:
            seen[key] = i
    return out


def find_collinear(points: Sequence, limit: Optional[int] = None) -> list[Violation]:
    """Every collinear triple of (pairwise distinct) points.

    A floating-point angular sort around each point nominates candidate
    pairs; every candidate is then decided by the exact predicate, so the
    report is exact.  The float filter only has to be conservative, which the
    per-pair error bound below guarantees.
    """
    n = len(points)
    if n < 3:
        return []
    P = np.array([[float(p[0]), float(p[1])] for p in points], dtype=float)
    mag = np.abs(P).max(axis=1)
    eps = np.finfo(float).eps
    found: list[Violation] = []
    for i in range(n - 2):
        D = P[i + 1 :] - P[i]
        dist = np.hypot(D[:, 0], D[:, 1])
        with np.errstate(divide="ignore"):
            err = 16 * eps * (mag[i + 1 :] + mag[i] + 1e-300) / dist
        err[~np.isfinite(err)] = np.inf
        ang = np.mod(np.arctan2(D[:, 1], D[:, 0]), np.pi)
        order = np.argsort(ang, kind="stable")
        a = ang[order]
        e = err[order]
        m = len(a)
        close = np.diff(a) <= (e[:-1] + e[1:] + 1e-300)
        groups = _runs(close, m)
        if m > 1 and (a[0] + np.pi - a[-1]) <= e[0] + e[-1]:
            groups.append([0, m - 1])
        pi = points[i]
        for g in groups:
            idx = sorted(int(order[k]) + i + 1 for k in g)
            for x in range(len(idx)):
                for y in range(x + 1, len(idx)):
                    j, k = idx[x], idx[y]
                    if orient2d(pi, points[j], points[k]) == 0:
                        found.append(Violation("collinear", (i, j, k)))
                        if limit is not None and len(found) >= limit:
                            return found
    return sorted(set(found), key=lambda v: v.items)


def _runs(close, m) -> list[list[int]]:
    groups = []
    if m < 2:
        return groups
    starts = np.flatnonzero(close)
    if len(starts) == 0:
        return groups
    current = [int(starts[0]), int(starts[0]) + 1]
    for s in starts[1:]:
        s = int(s)
        if s == current[-1]:
            current.append(s + 1)
        else:
            groups.append(current)
            current = [s, s + 1]
    groups.append(current)
    return groups


def genericity_check(mesh, limit: Optional[int] = None) -> list[Violation]:
    """Report coincident vertex points and collinear vertex-point triples.

    Triple interior intersections of segments are detected (and raised) by
    the arrangement builder, where they are actually observable.
    """
    pts = mesh.ipoints
    out = find_coincident(pts)
    if limit is not None and len(out) >= limit:
        return out[:limit]
    if out:
        # drop duplicates so the collinearity scan sees distinct points only
        dup = {v.items[1] for v in out}
        keep = [i for i in range(len(pts)) if i not in dup]
        sub = find_collinear([pts[i] for i in keep], None if limit is None else limit - len(out))
        out += [Violation("collinear", tuple(keep[j] for j in v.items)) for v in sub]
    else:
        out += find_collinear(pts, None if limit is None else limit - len(out))
    return out


# -- perturbation -------------------------------------------------------------------


def perturbation_offsets(n: int, seed: int, strength: float) -> np.ndarray:
    """``(n, 2)`` uniform offsets in the open interval ``(-strength, strength)``."""
    if not strength > 0:
        raise ValueError("perturbation strength must be positive")
    rng = np.random.Generator(np.random.PCG64(int(seed) & 0xFFFFFFFFFFFFFFFF))
    out = rng.uniform(-strength, strength, size=(n, 2))
    # uniform() samples [low, high); redraw the (practically impossible) closed end
    while np.any(out == -strength):
        bad = out == -strength
        out[bad] = rng.uniform(-strength, strength, size=int(bad.sum()))
    return out


def perturb(mesh, seed: int, strength):
    """Copy of ``mesh`` with deterministic pseudo-random offsets added to ``f1`` and ``f2``.

    Offsets are double-precision samples; the addition itself is exact, so the
    perturbed values are exact rationals with terminating decimal expansions.
    """
    offsets = perturbation_offsets(mesh.num_vertices, seed, float(strength))
    values = [
        (f1 + Fraction(float(o[0])), f2 + Fraction(float(o[1])))
        for (f1, f2), o in zip(mesh.values, offsets)
    ]
    return mesh.with_values(values)
