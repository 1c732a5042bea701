"""Command-line front end.

Every emitted report embeds a manifest (subcommand, inputs, seed, config
echo, artifact version); wall time is logged to stderr so identical
seeds and inputs rerun to byte-identical report files.  Exit codes:
0 success, 1 a named check or verification target failed, 2 bad input.
"""

import argparse
import sys
import time
from fractions import Fraction

from . import __version__, schubert
from .centers import center_point, classify
from .cloud import OrthoFrame, WeightedPointCloud
from .depth import (
    depth_of_measure,
    depth_region,
    halfspace_mass,
    thresholds,
    tukey_depth,
)
from .errors import DomainError
from .generators import FAMILIES, generate_cloud
from .serialize import dump_json, frac_str, load_json, parse_frac
from .simplex import VertexTuple, delta_of_vertices, witness_vertices
from .transversal import SearchConfig, search, verify

CHECKS = ("main-obstruction", "power2free", "heights", "whitney")


def _manifest(args, subcommand, inputs=(), seed=None, config=None):
    return {
        "subcommand": subcommand,
        "inputs": list(inputs),
        "seed": seed,
        "config": config or {},
        "version": __version__,
    }


def _emit(report, args):
    text = dump_json(report)
    if getattr(args, "output", None):
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _write_tsv(path, header, rows):
    with open(path, "w") as fh:
        fh.write("\t".join(header) + "\n")
        for row in rows:
            fh.write("\t".join(str(x) for x in row) + "\n")


def _load_cloud(path):
    if path.endswith(".tsv"):
        with open(path) as fh:
            return WeightedPointCloud.from_tsv(fh.read())
    return WeightedPointCloud.from_dict(load_json(path))


def _parse_point(text):
    return tuple(parse_frac(c) for c in text.split(","))


def cmd_bounds(args):
    n_min = schubert.min_dimension(args.m, args.n)
    rado, improved = thresholds(args.n)
    report = {
        "manifest": _manifest(args, "bounds"),
        "m": args.m,
        "n": args.n,
        "N_min": n_min,
        "rado_threshold": frac_str(rado),
        "improved_threshold": frac_str(improved),
    }
    if args.format == "tsv":
        sys.stdout.write("m\tn\tN_min\trado\timproved\n")
        sys.stdout.write(
            "%d\t%d\t%d\t%s\t%s\n" % (args.m, args.n, n_min, frac_str(rado), frac_str(improved))
        )
    else:
        _emit(report, args)
    return 0


def _run_named_check(args):
    name = args.check
    if name == "main-obstruction":
        result = schubert.obstruction_main(args.m or 1, args.n)
        return result, result["ok"]
    if name == "power2free":
        result = schubert.obstruction_power2free(args.m or 1, args.n)
        return result, result["ok"]
    ctx = schubert.GrassmannContext(args.n, args.codim)
    if name == "heights":
        height = schubert.height_w1(ctx)
        ok = height >= ctx.codim
        details = {"check": "heights", "n": ctx.n, "codim": ctx.codim, "height_w1": height,
                   "lower_bound": ctx.codim, "ok": ok}
        if ctx.n == 1:
            details["expected"] = ctx.ambient - 1
            ok = ok and height == ctx.ambient - 1
        elif ctx.n == 2:
            s = 1
            while 2 ** s < ctx.ambient:
                s += 1
            details["expected"] = 2 ** s - 2
            ok = ok and height == 2 ** s - 2
        details["ok"] = ok
        return details, ok
    # whitney
    defects = []
    for d in range(1, ctx.n + ctx.codim + 1):
        defect = schubert.whitney_defect(ctx, d)
        if not defect.is_zero():
            defects.append(d)
    details = {"check": "whitney", "n": ctx.n, "codim": ctx.codim,
               "failing_degrees": defects, "ok": not defects}
    return details, not defects


def cmd_schubert(args):
    if args.check:
        if args.check in ("heights", "whitney") and args.codim is None:
            raise DomainError("--codim is required for the %s check" % args.check)
        result, ok = _run_named_check(args)
        report = {"manifest": _manifest(args, "schubert"), "result": result}
        _emit(report, args)
        return 0 if ok else 1
    if args.exponents is None or args.codim is None:
        raise DomainError("need --exponents and --codim (or a named --check)")
    ctx = schubert.GrassmannContext(args.n, args.codim)
    exponents = [int(e) for e in args.exponents.split(",")]
    cls = schubert.monomial(ctx, exponents)
    report = {
        "manifest": _manifest(args, "schubert"),
        "context": {"n": ctx.n, "codim": ctx.codim},
        "exponents": exponents,
        "support": [list(a) for a in cls.sorted_support()],
        "nonvanishing": not cls.is_zero(),
        "degree": cls.degree(),
    }
    if args.format == "tsv":
        sys.stdout.write("cocycle\n")
        for a in cls.sorted_support():
            sys.stdout.write(",".join(str(x) for x in a) + "\n")
    else:
        _emit(report, args)
    return 0


def cmd_depth(args):
    cloud = _load_cloud(args.input)
    report = {"manifest": _manifest(args, "depth", inputs=[args.input]),
              "dim": cloud.dim, "atoms": len(cloud.atoms)}
    if args.point is not None:
        x = _parse_point(args.point)
        dv = tukey_depth(cloud, x)
        report["point"] = [frac_str(c) for c in x]
        report["depth"] = frac_str(dv.value)
        report["exact"] = dv.exact
        if dv.witness_direction is not None:
            report["witness_direction"] = [frac_str(c) for c in dv.witness_direction]
        if args.tsv_out:
            rows = _direction_profile(cloud, x)
            _write_tsv(args.tsv_out, ("angle", "mass"), rows)
    elif args.region is not None:
        tau = parse_frac(args.region)
        region = depth_region(cloud, tau)
        report["region"] = region.to_dict()
        if args.tsv_out:
            _write_tsv(
                args.tsv_out,
                ("x", "y"),
                [(frac_str(x), frac_str(y)) for x, y in region.vertices],
            )
    else:
        dv, point = depth_of_measure(cloud)
        report["depth_of_measure"] = frac_str(dv.value)
        report["deepest_point"] = [frac_str(c) for c in point]
        report["rado_threshold"] = frac_str(thresholds(cloud.dim)[0])
    _emit(report, args)
    return 0


def _direction_profile(cloud, x, count=360):
    import math

    rows = []
    for k in range(count):
        ang = 2.0 * math.pi * k / count
        v = (Fraction(round(math.cos(ang) * 10 ** 6), 10 ** 6),
             Fraction(round(math.sin(ang) * 10 ** 6), 10 ** 6))
        if all(c == 0 for c in v):
            continue
        level = sum(c * vc for c, vc in zip(x, v))
        rows.append(("%.6f" % ang, frac_str(halfspace_mass(cloud, v, level))))
    return rows


def cmd_center(args):
    cloud = _load_cloud(args.input)
    rep = center_point(cloud, cloud.dim)
    report = {"manifest": _manifest(args, "center", inputs=[args.input])}
    report.update(rep.to_dict())
    _emit(report, args)
    return 0


def cmd_simplex(args):
    report = {"manifest": _manifest(args, "simplex",
                                    inputs=[p for p in (args.input, args.vertices) if p])}
    if args.vertices:
        data = load_json(args.vertices)
        tup = VertexTuple.of(data["vertices"])
        report["vertex_source"] = "file"
    else:
        cloud = _load_cloud(args.input)
        tup = witness_vertices(cloud, force=args.force)
        report["vertex_source"] = "surrogate-sector-barycenter"
    placement = delta_of_vertices(tup)
    report["vertices"] = [list(v) for v in tup.vertices]
    report["placement"] = placement.to_dict()
    _emit(report, args)
    return 0


def cmd_transversal(args):
    clouds = [_load_cloud(p) for p in args.input]
    target = parse_frac(args.target) if args.target else None
    if args.frame:
        frame = OrthoFrame.from_dict(load_json(args.frame))
        rep = verify(frame, clouds, args.n, target=target)
        config_echo = {}
    else:
        config = SearchConfig(
            restarts=args.restarts,
            local_steps=args.local_steps,
            initial_angle=args.angle,
            decay=args.decay,
            master_seed=args.seed,
            target=target,
        )
        rep = search(clouds, args.n, config)
        config_echo = config.to_dict()
    report = {
        "manifest": _manifest(args, "transversal", inputs=list(args.input),
                              seed=args.seed, config=config_echo),
    }
    report.update(rep.to_dict())
    if args.tsv_out:
        _write_tsv(
            args.tsv_out,
            ("restart", "objective", "success"),
            [(i, obj, int(s)) for i, obj, s in rep.trajectory],
        )
    _emit(report, args)
    return 0 if rep.success else 1


def cmd_gen(args):
    cloud = generate_cloud(
        args.family,
        seed=args.seed,
        atoms=args.atoms,
        dim=args.dim,
        ambient=args.ambient,
        denominator=args.denominator,
        weight_mode=args.weights,
        spread=args.spread,
        rotate=not args.no_rotate,
    )
    if args.out and args.out.endswith(".tsv"):
        with open(args.out, "w") as fh:
            fh.write(cloud.to_tsv())
    else:
        body = {"manifest": _manifest(args, "gen", seed=args.seed,
                                      config={"family": args.family}),
                **cloud.to_dict()}
        text = dump_json(body)
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    if args.classify:
        label = classify(cloud, cloud.dim) if cloud.dim <= 2 else "n/a"
        sys.stderr.write("classification: %s\n" % label)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="centertrans",
        description="Exact depth geometry, Schubert obstruction checks, and "
        "deep-projection search.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bounds", help="dimension bound and depth thresholds")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--format", choices=("json", "tsv"), default="json")
    p.add_argument("--output")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("schubert", help="monomial supports and named checks")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--codim", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--exponents", help="comma-separated e1,...,en for w1^e1...wn^en")
    p.add_argument("--check", choices=CHECKS)
    p.add_argument("--format", choices=("json", "tsv"), default="json")
    p.add_argument("--output")
    p.set_defaults(func=cmd_schubert)

    p = sub.add_parser("depth", help="point depth, depth of measure, regions")
    p.add_argument("--input", required=True)
    p.add_argument("--point", help="comma-separated rational coordinates")
    p.add_argument("--region", help="level tau as a rational")
    p.add_argument("--tsv-out")
    p.add_argument("--output")
    p.set_defaults(func=cmd_depth)

    p = sub.add_parser("center", help="classification and associated point")
    p.add_argument("--input", required=True)
    p.add_argument("--output")
    p.set_defaults(func=cmd_center)

    p = sub.add_parser("simplex", help="canonical regular simplex pipeline")
    p.add_argument("--input", help="cloud file (sector-barycenter surrogate)")
    p.add_argument("--vertices", help="vertex tuple json file")
    p.add_argument("--force", action="store_true",
                   help="build the surrogate even for sufficient depth")
    p.add_argument("--output")
    p.set_defaults(func=cmd_simplex)

    p = sub.add_parser("transversal", help="search or verify deep projections")
    p.add_argument("--input", nargs="+", required=True)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--frame", help="verify this frame instead of searching")
    p.add_argument("--restarts", type=int, default=60)
    p.add_argument("--local-steps", type=int, default=40)
    p.add_argument("--angle", type=float, default=0.6)
    p.add_argument("--decay", type=float, default=0.7)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--target", help="depth target as a rational (default improved bound)")
    p.add_argument("--tsv-out")
    p.add_argument("--output")
    p.set_defaults(func=cmd_transversal)

    p = sub.add_parser("gen", help="deterministic instance files")
    p.add_argument("--family", choices=FAMILIES, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--atoms", type=int, default=12)
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--ambient", type=int)
    p.add_argument("--denominator", type=int, default=10000)
    p.add_argument("--weights", choices=("equal", "random"), default="equal")
    p.add_argument("--spread", type=float, default=0.05)
    p.add_argument("--no-rotate", action="store_true")
    p.add_argument("--classify", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    started = time.perf_counter()
    try:
        code = args.func(args)
    except (DomainError, OSError, KeyError) as exc:
        sys.stderr.write("error: %s\n" % exc)
        return 2
    finally:
        sys.stderr.write(
            "[centertrans] %s finished in %.3f s\n"
            % (args.command, time.perf_counter() - started)
        )
    return code


if __name__ == "__main__":
    sys.exit(main())
