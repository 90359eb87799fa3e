"""Command-line interface.

Subcommands: ``compute``, ``verify``, ``generate``, ``stats`` and ``report``.
Defaults for ``--seed``, ``--perturb``, ``--algorithm`` and ``--cap`` can be
set through ``REEBSPACE_SEED``, ``REEBSPACE_PERTURB``, ``REEBSPACE_ALGORITHM``
and ``REEBSPACE_CAP``; explicit flags win.

Exit codes: 0 success, 1 other error, 2 usage, 3 unreadable or invalid
input, 4 degenerate input (perturb and retry), 5 oracle size cap exceeded,
6 results not equivalent, 7 internal consistency failure, 8 no connector
path for a nested boundary, 9 time budget exceeded.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
from pathlib import Path

from . import generate as gen
from .errors import DegeneracyError, NotEquivalent, ReebSpaceError
from .mesh import dump_mesh, read_mesh
from .oracle import compare, full_arrange_and_traverse
from .pipeline import ALGORITHMS, RunConfig, check_cap, prepare, run, statistics, verify
from .reeb import serialize

ENV_PREFIX = "REEBSPACE_"


def _env(name, default):
    return os.environ.get(ENV_PREFIX + name.upper(), default)


def _write(text: str, path) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _dump(doc) -> str:
    return json.dumps(doc, indent=1, ensure_ascii=False) + "\n"


def _config(args) -> RunConfig:
    return RunConfig(
        input=args.input,
        output=getattr(args, "output", None),
        seed=args.seed,
        perturb=args.perturb,
        algorithm=getattr(args, "algorithm", "singular"),
        verbosity=args.verbose,
        trace=getattr(args, "trace", False),
        cap=getattr(args, "cap", 50_000),
    )


def cmd_compute(args) -> int:
    config = _config(args)
    mesh = read_mesh(config.input)
    trace = [] if config.trace else None
    result = run(mesh, config, trace)
    if trace is not None:
        for line in trace:
            print(line, file=sys.stderr)
    _write(serialize(result, timings=args.stats), config.output)
    if args.verify:
        check_cap(mesh, config.cap)
        other = "full" if config.algorithm == "singular" else "singular"
        config.algorithm = other
        report = compare(result, run(mesh, config))
        print(_dump(report.as_dict()), end="", file=sys.stderr)
        if not report:
            raise NotEquivalent(report.reason)
    return 0


def cmd_verify(args) -> int:
    config = _config(args)
    report = verify(read_mesh(config.input), config)
    _write(_dump(report), config.output)
    return 0 if report["equivalent"] else NotEquivalent.exit_code


def cmd_stats(args) -> int:
    """The report is written even when the run aborts, with the fields it could not fill set to null."""
    config = _config(args)
    report = statistics(read_mesh(config.input), config)
    _write(_dump(report), config.output)
    return 0 if report["status"] == "ok" else DegeneracyError.exit_code


def cmd_generate(args) -> int:
    if args.kind == "grid":
        mesh = gen.grid_mesh(args.n, args.field or "quadratic", args.noise, args.seed)
    elif args.kind == "two-component":
        mesh = gen.two_component_mesh(args.n, args.field or "slot", args.noise, args.seed)
    elif args.kind == "sphere":
        mesh = gen.sphere_mesh(args.n, args.seed, args.noise or 0.3)
    elif args.kind == "toy":
        mesh = gen.toy_mesh()
    else:
        mesh = gen.split_fan_mesh()
    _write(dump_mesh(mesh), args.output)
    return 0


def cmd_report(args) -> int:
    """Result JSON, a tab-separated sheet table and PNG figures in one directory."""
    from .plotting import save_figures  # matplotlib is only needed here

    config = _config(args)
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    mesh = read_mesh(config.input)
    result = run(mesh, config)
    (out / "reeb_space.json").write_text(serialize(result), encoding="utf-8")
    (out / "stats.json").write_text(_dump({**result.stats, "timings": result.timings}), encoding="utf-8")
    with open(out / "sheets.tsv", "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, delimiter="\t", lineterminator="\n")
        w.writerow(["sheet", "area", "area_float", "faces", "adjacent"])
        for s in result.sheets:
            w.writerow([s.id, f"{s.area.numerator}/{s.area.denominator}", f"{float(s.area):.9g}",
                        len(s.faces), ",".join(map(str, s.adjacent))])
    prepared = prepare(mesh, config.seed, config.perturb).mesh if args.regular or args.verify else None
    paths = save_figures(result, out, prepared if args.regular else None)
    if args.verify:
        check_cap(mesh, config.cap)
        full = full_arrange_and_traverse(prepared)
        (out / "equivalence.json").write_text(_dump(compare(full, result).as_dict()), encoding="utf-8")
    for p in [out / "reeb_space.json", out / "stats.json", out / "sheets.tsv", *paths]:
        print(p)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="reebspace", description="Reeb spaces of bivariate PL maps on tet meshes.")
    p.add_argument("-v", "--verbose", action="count", default=0)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, algorithm=True):
        sp.add_argument("--input", "-i", required=True, help="TBF or legacy VTK mesh")
        sp.add_argument("--output", "-o", default=None, help="output file (default: stdout)")
        sp.add_argument("--seed", type=int, default=int(_env("seed", 0)))
        sp.add_argument("--perturb", default=_env("perturb", "0"), metavar="STRENGTH",
                        help="uniform perturbation strength for f1 and f2 (0 disables)")
        if algorithm:
            sp.add_argument("--algorithm", choices=ALGORITHMS, default=_env("algorithm", "singular"))
        sp.add_argument("--cap", type=int, default=int(_env("cap", 50_000)), metavar="TETS",
                        help="largest mesh handed to the full-arrangement oracle")

    sp = sub.add_parser("compute", help="compute the Reeb space and write JSON")
    common(sp)
    sp.add_argument("--verify", action="store_true", help="also run the other algorithm and compare")
    sp.add_argument("--trace", action="store_true", help="log every crossing to stderr")
    sp.add_argument("--stats", action="store_true", help="add timings and peak memory to the output")
    sp.set_defaults(func=cmd_compute)

    sp = sub.add_parser("verify", help="compare the singular algorithm against the full oracle")
    common(sp, algorithm=False)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("stats", help="mesh and run statistics")
    common(sp)
    sp.set_defaults(func=cmd_stats)

    sp = sub.add_parser("report", help="JSON, TSV and PNG figures in a directory")
    common(sp)
    sp.add_argument("--outdir", required=True)
    sp.add_argument("--verify", action="store_true")
    sp.add_argument("--regular", action="store_true", help="draw regular segments in the arrangement figure")
    sp.set_defaults(func=cmd_report)

    sp = sub.add_parser("generate", help="write a synthetic mesh")
    sp.add_argument("--kind", choices=("grid", "two-component", "sphere", "toy", "split-fan"), default="grid")
    sp.add_argument("--n", type=int, default=4, help="grid resolution, or point count for sphere")
    sp.add_argument("--field", choices=sorted(gen.FIELDS), default=None,
                    help="named field (default: quadratic for grids, slot for two-component)")
    sp.add_argument("--noise", type=float, default=0.0, help="noise amplitude in units of the grid spacing")
    sp.add_argument("--seed", type=int, default=int(_env("seed", 0)))
    sp.add_argument("--output", "-o", default=None)
    sp.set_defaults(func=cmd_generate)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ReebSpaceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3 if isinstance(exc, OSError) else 1


if __name__ == "__main__":
    sys.exit(main())
