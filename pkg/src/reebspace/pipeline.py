"""End-to-end computation: perturbation, genericity, the three stages, statistics."""

from __future__ import annotations

import logging
import time
import tracemalloc
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .errors import CapExceeded, DegeneracyError
from .geometry import PRNG_NAME, format_exact_decimal, format_rational, genericity_check, perturb, to_fraction
from .jacobi import classify_all, connect_nested, range_segments, singular_arrangement
from .mesh import TetMesh
from .oracle import compare, full_arrange_and_traverse
from .redblue import build_crossing_lists, red_blue
from .reeb import ReebSpaceResult, extract_sheets
from .traversal import bfs_traverse

log = logging.getLogger(__name__)

ALGORITHMS = ("singular", "full")


@dataclass
class RunConfig:
    input: Optional[str] = None
    output: Optional[str] = None
    seed: int = 0
    perturb: Fraction = Fraction(0)
    algorithm: str = "singular"
    verbosity: int = 0
    trace: bool = False
    cap: int = 50_000
    timings: bool = False

    def __post_init__(self):
        self.perturb = to_fraction(self.perturb)
        if self.perturb < 0:
            raise ValueError("perturbation strength must be >= 0")
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}")
        self.seed = int(self.seed)


@dataclass
class Prepared:
    mesh: TetMesh
    metadata: dict
    timings: dict = field(default_factory=dict)


def prepare(mesh: TetMesh, seed: int = 0, strength=0) -> Prepared:
    """Perturb (when ``strength > 0``) and reject non-generic inputs."""
    strength = to_fraction(strength)
    t0 = time.perf_counter()
    if strength > 0:
        mesh = perturb(mesh, seed, strength)
    t1 = time.perf_counter()
    violations = genericity_check(mesh, limit=5)
    if violations:
        listed = "; ".join(str(v) for v in violations)
        raise DegeneracyError(f"input is not generic: {listed}")
    meta = {"seed": seed, "perturbation": format_exact_decimal(strength), "prng": PRNG_NAME}
    return Prepared(mesh, meta, {"perturb": t1 - t0, "genericity": time.perf_counter() - t1})


def singular_reeb_space(mesh: TetMesh, trace: Optional[list] = None) -> ReebSpaceResult:
    """Reeb space sheets via the singular arrangement (input assumed generic)."""
    tm = {}
    t = time.perf_counter()
    classes, singular = classify_all(mesh)
    tm["classify"] = time.perf_counter() - t

    t = time.perf_counter()
    arr = singular_arrangement(mesh, singular)
    conn = connect_nested(mesh, singular, arr)
    singular, arr = conn.singular, conn.arrangement
    tm["arrangement"] = time.perf_counter() - t

    t = time.perf_counter()
    red = range_segments(mesh, [e for e in range(mesh.num_edges) if not singular.is_arranged(e)])
    crossings = red_blue(arr, red)
    qlists = build_crossing_lists(arr, crossings)
    tm["red_blue"] = time.perf_counter() - t

    t = time.perf_counter()
    h = bfs_traverse(arr, mesh, qlists, singular, trace)
    tm["traversal"] = time.perf_counter() - t

    t = time.perf_counter()
    sheets = extract_sheets(h, arr, mesh.scale)
    tm["sheets"] = time.perf_counter() - t

    qsizes = [len(qlists[f]) for f in arr.bounded_faces()]
    n_s = len(singular.edges)
    stats = {
        "N_T": mesh.num_tets,
        "N_e": mesh.num_edges,
        "N_s": n_s,
        "singular_fraction": format_rational(Fraction(n_s, mesh.num_edges)),
        "definite": sum(1 for c in classes if c.kind == "definite"),
        "indefinite": sum(1 for c in classes if c.kind == "indefinite"),
        "pseudo_singular": conn.added,
        "k_s": arr.intersection_count,
        "k_r": len(crossings),
        "bounded_faces": len(qsizes),
        "q_total": sum(qsizes),
        "q_max": max(qsizes, default=0),
        "class_components": len(h.vertices),
        "peak_retained_graphs": h.stats.peak_retained_graphs,
    }
    graph = {"vertices": len(h.vertices), "edges": len(h.edges), "components": len(sheets)}
    return ReebSpaceResult(
        "singular", sheets, graph, stats, arrangement=arr, scale=mesh.scale, timings=tm,
        qlists=qlists, correspondence=h,
    )


def compute(mesh: TetMesh, algorithm: str = "singular", trace=None, deadline=None) -> ReebSpaceResult:
    if algorithm == "singular":
        return singular_reeb_space(mesh, trace)
    if algorithm == "full":
        return full_arrange_and_traverse(mesh, deadline=deadline)
    raise ValueError(f"unknown algorithm {algorithm!r}")


def run(mesh: TetMesh, config: RunConfig, trace=None) -> ReebSpaceResult:
    t0 = time.perf_counter()
    prep = prepare(mesh, config.seed, config.perturb)
    result = compute(prep.mesh, config.algorithm, trace)
    result.metadata = {**prep.metadata, **result.metadata}
    result.timings = {**prep.timings, **result.timings, "total": time.perf_counter() - t0}
    result.timings["peak_memory_kb"] = peak_memory_kb()
    return result


def check_cap(mesh: TetMesh, cap: int) -> None:
    if mesh.num_tets > cap:
        raise CapExceeded(f"{mesh.num_tets} tetrahedra exceed the oracle cap of {cap}")


def verify(mesh: TetMesh, config: RunConfig) -> dict:
    check_cap(mesh, config.cap)
    prep = prepare(mesh, config.seed, config.perturb)
    a = singular_reeb_space(prep.mesh)
    b = full_arrange_and_traverse(prep.mesh)
    report = compare(b, a)
    return {
        **report.as_dict(),
        "singular": {"sheet_count": a.sheet_count, "areas": [format_rational(x) for x in a.areas()],
                     "correspondence_vertices": a.graph["vertices"]},
        "full": {"sheet_count": b.sheet_count, "areas": [format_rational(x) for x in b.areas()],
                 "correspondence_vertices": b.graph["vertices"]},
        "metadata": prep.metadata,
    }


def statistics(mesh: TetMesh, config: RunConfig) -> dict:
    """Stats report; fields are present even when the run aborts on a degeneracy."""
    out = {
        "N_T": mesh.num_tets,
        "N_e": mesh.num_edges,
        "N_s": None,
        "singular_fraction": None,
        "k_s": None,
        "k_r": None,
        "pseudo_singular": None,
        "timings": {},
        "peak_memory_kb": None,
        "status": "ok",
    }
    t0 = time.perf_counter()
    try:
        result = run(mesh, config)
    except DegeneracyError as exc:
        out["status"] = "degenerate"
        out["error"] = str(exc)
        try:
            _, singular = classify_all(mesh)
            out["N_s"] = len(singular.edges)
            out["singular_fraction"] = format_rational(Fraction(len(singular.edges), mesh.num_edges))
        except DegeneracyError:
            pass
    else:
        out.update(result.stats)
        out["timings"] = result.timings
        if result.algorithm == "singular":
            out["q_sizes"] = {str(f): len(q) for f, q in sorted(result.qlists.items()) if len(q)}
    out["timings"].setdefault("total", time.perf_counter() - t0)
    out["peak_memory_kb"] = peak_memory_kb()
    return out


def peak_memory_kb() -> Optional[int]:
    """Peak resident set size of this process, an estimate.

    Falls back to the allocator's traced peak where process accounting is
    unavailable, and to ``None`` when neither source exists.
    """
    try:
        import resource
    except ImportError:
        if tracemalloc.is_tracing():
            return tracemalloc.get_traced_memory()[1] // 1024
        return None
    return int(resource.getrusage(resource.RUSAGE_SELF).ru_maxrss)
