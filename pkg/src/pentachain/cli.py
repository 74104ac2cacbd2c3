"""Command-line interface.

Subcommands: ``invariant`` (full pipeline on one triangulation),
``verify`` (chain/acyclicity/pentagon/independence/walk suites),
``pachner`` (seeded random walk, optionally writing the result),
``pentagon`` (five-point identity suites alone) and ``dump-chain``
(diffable matrix dump).

Exit codes are stable: 0 success, 2 parse error (also argparse usage
errors), 3 gluing validation error, 4 degenerate geometry after retries,
5 non-acyclic complex, 6 invariance violation during verification.

Reports are reproducible byte for byte for fixed (input, seed, version):
``--json`` output carries no timing; the human format prints wall time on
a separate final line.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

from . import __version__
from .chain import build_chain, check_acyclic, dump_chain, verify_chain
from .errors import (
    DegenerateGeometryError,
    InvarianceError,
    MoveError,
    NotAcyclicError,
    ParseError,
    PentachainError,
    ValidationError,
)
from .exact import format_rational
from .geometry import assign_geometry, edge_values, parse_geometry, subseed
from .library import load_builtin
from .pachner import random_walk, walk_states
from .pentagon import FivePointConfig, solve_flat_lambda, verify_pentagon, verify_vector_identities
from .torsion import invariant, select_partition, tau
from .triangulation import Triangulation

EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_DEGENERATE = 4
EXIT_NOT_ACYCLIC = 5
EXIT_INVARIANCE = 6

_EXIT_CODES = (
    (ParseError, EXIT_PARSE),
    (MoveError, EXIT_VALIDATION),
    (ValidationError, EXIT_VALIDATION),
    (DegenerateGeometryError, EXIT_DEGENERATE),
    (NotAcyclicError, EXIT_NOT_ACYCLIC),
    (InvarianceError, EXIT_INVARIANCE),
)


def _load_input(args) -> tuple[str, Triangulation]:
    if args.builtin:
        return args.builtin, load_builtin(args.builtin)
    return args.file, Triangulation.from_file(args.file)


def _geometry_override(args, tri):
    if getattr(args, "geometry", None):
        with open(args.geometry, "r", encoding="utf-8") as handle:
            return parse_geometry(handle.read(), tri)
    return None


def _render(report: dict, as_json: bool, elapsed: float) -> str:
    if as_json:
        return json.dumps(report, sort_keys=True, indent=2)
    lines = []
    for key, value in report.items():
        lines.append(f"{key}: {value}")
    lines.append(f"time: {elapsed * 1000:.1f} ms")
    return "\n".join(lines)


def _fr(value: Fraction) -> str:
    return format_rational(value)


def _invariant_report(name: str, result) -> dict:
    return {
        "command": "invariant",
        "version": __version__,
        "input": name,
        "seed": result.seed,
        "f_vector": list(result.f_vector),
        "ranks": list(result.ranks),
        "acyclic": True,
        "tau": _fr(result.tau),
        "face_product": _fr(result.face_product),
        "vertex_count": result.vertex_count,
        "invariant": _fr(result.invariant),
        "abs_invariant": _fr(result.abs_invariant),
    }


def cmd_invariant(args) -> tuple[dict, int]:
    name, tri = _load_input(args)
    result = invariant(
        tri,
        seed=args.seed,
        max_retries=args.retries,
        geometry=_geometry_override(args, tri),
    )
    return _invariant_report(name, result), 0


def cmd_verify(args) -> tuple[dict, int]:
    report: dict = {"command": "verify", "version": __version__, "seed": args.seed}
    checks: dict = {}
    report["checks"] = checks

    pentagon_total = 0
    for i in range(args.samples):
        cfg = FivePointConfig.random(subseed(args.seed, "pentagon", i))
        lhs, rhs, equal = verify_pentagon(cfg)
        if not equal:
            raise InvarianceError(
                f"pentagon identity failed at sample {i}: {lhs} != {rhs}"
            )
        pentagon_total += 1
    checks["pentagon"] = f"pass ({pentagon_total} samples)"

    if args.pentagon_only:
        report["input"] = None
        return report, 0

    name, tri = _load_input(args)
    report["input"] = name
    report["f_vector"] = list(tri.f_vector())

    geometry = _geometry_override(args, tri)
    base = invariant(tri, seed=args.seed, max_retries=args.retries, geometry=geometry)
    report["ranks"] = list(base.ranks)
    report["acyclic"] = True
    report["tau"] = _fr(base.tau)
    report["abs_invariant"] = _fr(base.abs_invariant)

    for i in range(args.chain_seeds):
        g = assign_geometry(tri, subseed(args.seed, "chain", i), args.retries)
        c = build_chain(tri, g, verify=False)
        ok, witness = verify_chain(c)
        if not ok:
            raise InvarianceError(f"chain property failed at geometry seed {i}: {witness}")
        if not check_acyclic(c).acyclic:
            raise NotAcyclicError(check_acyclic(c).ranks, check_acyclic(c).expected)
    checks["chain"] = f"pass ({args.chain_seeds} geometry seeds)"
    checks["acyclic"] = f"pass ({args.chain_seeds} geometry seeds)"

    taus = set()
    g = assign_geometry(tri, subseed(args.seed, "partition-geom"), args.retries)
    c = build_chain(tri, g, verify=False)
    for i in range(args.partition_seeds):
        p = select_partition(c, subseed(args.seed, "partition", i))
        taus.add(abs(tau(c, p)))
    if len(taus) != 1:
        raise InvarianceError(f"|tau| depends on the partition: {sorted(taus)}")
    checks["partition_independence"] = f"pass ({args.partition_seeds} partitions)"

    values = set()
    for i in range(args.geometry_seeds):
        r = invariant(tri, seed=subseed(args.seed, "geom", i), max_retries=args.retries)
        values.add(r.abs_invariant)
    if len(values) != 1:
        raise InvarianceError(f"invariant depends on the geometry: {sorted(values)}")
    checks["geometry_independence"] = f"pass ({args.geometry_seeds} geometries)"

    expected = base.abs_invariant
    for w in range(args.walks):
        walk_seed = subseed(args.seed, "walk", w)
        step = 0
        for site, state in walk_states(tri, args.steps, walk_seed, args.max_tets):
            step += 1
            if step % args.check_every and step != args.steps:
                continue
            r = invariant(state, seed=subseed(walk_seed, "step", step), max_retries=args.retries)
            if r.abs_invariant != expected:
                raise InvarianceError(
                    f"invariant changed along walk {w} (seed {walk_seed}) at step "
                    f"{step} ({site.kind}): {r.abs_invariant} != {expected}"
                )
    checks["pachner_walks"] = f"pass ({args.walks} walks x {args.steps} steps)"
    return report, 0


def cmd_pachner(args) -> tuple[dict, int]:
    name, tri = _load_input(args)
    end = random_walk(tri, args.steps, args.seed, args.max_tets)
    report = {
        "command": "pachner",
        "version": __version__,
        "input": name,
        "seed": args.seed,
        "steps": args.steps,
        "f_vector_before": list(tri.f_vector()),
        "f_vector_after": list(end.f_vector()),
    }
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(end.to_text())
        report["out"] = args.out
    else:
        report["triangulation"] = end.to_text().splitlines()
    return report, 0


def cmd_pentagon(args) -> tuple[dict, int]:
    import random as _random

    failures = 0
    for i in range(args.samples):
        cfg = FivePointConfig.random(subseed(args.seed, "pentagon", i))
        _, _, equal = verify_pentagon(cfg)
        if not equal:
            failures += 1
    rng = _random.Random(subseed(args.seed, "points"))
    point_checks = 0
    for _ in range(args.samples):
        pts = {
            lab: (Fraction(rng.randint(-20, 20), rng.randint(1, 7)),
                  Fraction(rng.randint(-20, 20), rng.randint(1, 7)))
            for lab in ("A", "B", "C", "D", "E")
        }
        try:
            if not verify_vector_identities(pts):
                failures += 1
            point_checks += 1
        except DegenerateGeometryError:
            continue
    if failures:
        raise InvarianceError(f"{failures} pentagon checks failed")
    report = {
        "command": "pentagon",
        "version": __version__,
        "seed": args.seed,
        "samples": args.samples,
        "pentagon_identity": "pass",
        "vector_identities": f"pass ({point_checks} nondegenerate configurations)",
    }
    return report, 0


def cmd_dump_chain(args) -> tuple[dict, int]:
    name, tri = _load_input(args)
    geometry = _geometry_override(args, tri)
    if geometry is None:
        geometry = assign_geometry(tri, subseed(args.seed, "geometry"), args.retries)
    else:
        edge_values(tri, geometry)
    c = build_chain(tri, geometry)
    sys.stdout.write(dump_chain(c))
    return {}, 0


def _add_input_flags(parser, required=True):
    group = parser.add_mutually_exclusive_group(required=required)
    group.add_argument("--builtin", choices=("s3", "rp3"), help="built-in triangulation")
    group.add_argument("--file", help="triangulation file path")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pentachain",
        description="Exact torsion invariant of closed oriented 3-manifold triangulations.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("invariant", help="compute the manifold invariant")
    _add_input_flags(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--retries", type=int, default=100)
    p.add_argument("--geometry", help="explicit geometry file (overrides sampling)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_invariant)

    p = sub.add_parser("verify", help="run the verification suites")
    _add_input_flags(p, required=False)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--retries", type=int, default=100)
    p.add_argument("--geometry", help="explicit geometry file")
    p.add_argument("--walks", type=int, default=5)
    p.add_argument("--steps", type=int, default=20)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--chain-seeds", type=int, default=8)
    p.add_argument("--partition-seeds", type=int, default=10)
    p.add_argument("--geometry-seeds", type=int, default=10)
    p.add_argument("--max-tets", type=int, default=12)
    p.add_argument("--check-every", type=int, default=5,
                   help="verify the invariant every N walk steps (and at the end)")
    p.add_argument("--pentagon-only", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("pachner", help="run a random bistellar walk")
    _add_input_flags(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--steps", type=int, default=20)
    p.add_argument("--max-tets", type=int, default=12)
    p.add_argument("--out", help="write the resulting triangulation here")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_pachner)

    p = sub.add_parser("pentagon", help="five-point identity suites")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_pentagon)

    p = sub.add_parser("dump-chain", help="dump the five matrices, one entry per line")
    _add_input_flags(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--retries", type=int, default=100)
    p.add_argument("--geometry", help="explicit geometry file")
    p.set_defaults(func=cmd_dump_chain)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "pentagon_only", False) is False and args.subcommand == "verify":
        if not (args.builtin or args.file):
            parser.error("verify needs --builtin or --file unless --pentagon-only is given")
    started = time.perf_counter()
    try:
        report, code = args.func(args)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except PentachainError as exc:
        for klass, code in _EXIT_CODES:
            if isinstance(exc, klass):
                print(f"error: {exc}", file=sys.stderr)
                return code
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if report:
        print(_render(report, getattr(args, "json", False), time.perf_counter() - started))
    return code


if __name__ == "__main__":
    sys.exit(main())
