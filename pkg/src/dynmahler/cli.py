"""Command-line front end.

Every subcommand reads polynomials in the JSON schema of
:mod:`dynmahler.polyio` (inline or from a file), prints its result to
stdout and, when ``--out`` is given, writes the result file together with a
run manifest ``<out>.manifest.json`` (or the path given by ``--manifest``).

Exit codes: 0 on success, 1 on domain errors (root finding, degree caps,
non-convergence), 2 on usage errors and malformed input.

Seeding: one master seed (``--seed``, default 0) feeds
``numpy.random.SeedSequence``; variable ``i`` of a Monte Carlo run uses the
``i``-th spawned child.  Rerunning a manifest's config reproduces the
output files byte for byte.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import __version__
from .dynamics import classify_cycle, is_preperiodic_exact, is_preperiodic_numeric, periodic_points
from .errors import DynMahlerError, SchemaError
from .kronecker import FactorSpec, certify_zero_bivariate, certify_zero_univariate
from .measure import (
    DEFAULT_BURN_IN,
    boyd_lawton_sequence,
    mahler_circle,
    mahler_mc,
    mahler_nested,
    mahler_segment,
    mahler_tree,
)
from .multibrot import preper_in_julia
from .poly import AffineMap, MPoly, ZPoly
from .polyio import _load, format_number, parse_number, parse_point, poly_from_json
from .potential import canonical_height, green
from .raster import FIGURES, Mode, RasterConfig, render, write_pgm, write_ppm

# flags whose values may legitimately start with "-" (e.g. "-2:1", "-1.5+0.5i")
_SIGNED_VALUE_FLAGS = {"--re-range", "--im-range", "--window", "--point", "--alpha", "--beta"}


def _jsonable(x):
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, complex):
        return {"re": x.real, "im": x.imag}
    if isinstance(x, Fraction):
        return str(x)
    if hasattr(x, "item"):  # numpy scalars
        return _jsonable(x.item())
    if hasattr(x, "value") and isinstance(getattr(x, "value"), str):  # enums
        return x.value
    return x


def _dump(obj):
    return json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n"


def _map(args):
    if args.f is None:
        raise SchemaError("f", "this command needs --f")
    f = poly_from_json(args.f, field="f")
    if isinstance(f, MPoly):
        raise SchemaError("f", "the map must be univariate")
    return f


def _poly(args):
    if args.poly is None:
        raise SchemaError("poly", "this command needs --poly")
    return poly_from_json(args.poly, field="poly")


# ---------------------------------------------------------------------------
# subcommands; each returns (text for stdout, {path: bytes} to write)
# ---------------------------------------------------------------------------


def cmd_measure(args):
    P = _poly(args)
    m = args.method
    if m == "circle":
        res = mahler_circle(P, grid_n=args.grid)
    elif m == "segment":
        res = mahler_segment(P, args.alpha, args.beta, grid_n=args.grid)
    else:
        f = _map(args)
        if m == "mc":
            res = mahler_mc(f, P, n_samples=args.samples, seed=args.seed, burn_in=args.burn_in)
        elif m == "tree":
            res = mahler_tree(f, P, depth=args.depth)
        else:
            res = mahler_nested(f, P, n_samples=args.samples, seed=args.seed, var=args.var,
                                burn_in=args.burn_in)
    text = _dump(res.to_dict())
    return text, {args.out: text.encode()} if args.out else {}


def cmd_green(args):
    f = _map(args)
    pv = green(f, complex(parse_point(args.point)), max_iter=args.max_iter)
    text = _dump({"value": pv.value, "converged": pv.converged, "iterations_used": pv.iterations_used})
    return text, {args.out: text.encode()} if args.out else {}


def cmd_height(args):
    f = _map(args)
    pt = parse_point(args.point)
    if not isinstance(pt, (int, Fraction)):
        raise SchemaError("point", "canonical heights need a rational point such as 7/3")
    hv = canonical_height(f, pt, target_error=args.target_error)
    text = _dump({"value": hv.value, "error_bound": hv.error_bound, "iterations": hv.iterations})
    return text, {args.out: text.encode()} if args.out else {}


def cmd_preper(args):
    f = _map(args)
    pt = parse_point(args.point)
    if isinstance(f, ZPoly) and f.is_integral() and isinstance(pt, (int, Fraction)):
        v = is_preperiodic_exact(f, pt)
    else:
        v = is_preperiodic_numeric(f, complex(pt), max_iter=args.max_iter)
    text = _dump({"kind": v.kind, "tail": v.tail, "period": v.period,
                  "heuristic": v.heuristic, "reason": v.reason})
    return text, {args.out: text.encode()} if args.out else {}


def _exact_if_integer(z):
    r = complex(round(z.real), round(z.imag))
    if abs(z - r) < 1e-9 and r.imag == 0:
        return int(r.real)
    return z


def cmd_cycles(args):
    f = _map(args)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["point", "multiplier", "class"])
    seen = []
    for z in periodic_points(f, args.period):
        if any(abs(z - s) < 1e-6 * max(1.0, abs(z)) for s in seen):
            continue  # repeated roots of f^n(z) - z
        seen.append(z)
        rep = classify_cycle(f, _exact_if_integer(z), args.period)
        w.writerow([format_number(rep.cycle[0]), format_number(rep.multiplier), rep.cls.value])
    text = buf.getvalue()
    return text, {args.out: text.encode()} if args.out else {}


def load_factor_specs(source):
    """Parse ``{"factors": [{"ftilde": poly|null, "L": {"a", "b"}, "n", "m"}]}``."""
    data = _load(source, "factors")
    items = data.get("factors") if isinstance(data, dict) else data
    if not isinstance(items, list):
        raise SchemaError("factors", "expected a list of factor specs")
    specs = []
    for k, item in enumerate(items):
        where = f"factors[{k}]"
        if not isinstance(item, dict):
            raise SchemaError(where, "expected an object")
        ft = item.get("ftilde")
        ft = None if ft is None else poly_from_json(ft, field=f"{where}.ftilde")
        L = item.get("L", {"a": "1", "b": "0"})
        if not isinstance(L, dict) or "a" not in L:
            raise SchemaError(f"{where}.L", 'expected {"a": ..., "b": ...}')
        a = parse_number(L["a"], f"{where}.L.a")
        b = parse_number(L.get("b", "0"), f"{where}.L.b")
        try:
            n, m = int(item.get("n", 0)), int(item.get("m", 0))
        except (TypeError, ValueError):
            raise SchemaError(where, "n and m must be integers") from None
        specs.append(FactorSpec(ft, AffineMap(a, b), n, m))
    return specs


def cmd_kronecker(args):
    f = _map(args)
    P = _poly(args)
    if isinstance(P, MPoly) and P.nvars == 2:
        specs = load_factor_specs(args.factors) if args.factors else None
        v = certify_zero_bivariate(f, P, specs)
    else:
        if isinstance(P, MPoly):
            if P.nvars != 1:
                raise SchemaError("poly", "kronecker handles one or two variables")
            P = P.to_univariate()
        v = certify_zero_univariate(f, P)
    text = _dump(v.to_dict())
    return text, {args.out: text.encode()} if args.out else {}


def cmd_boyd_lawton(args):
    f = _map(args)
    P = _poly(args)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "estimate", "degree"])
    for n, res in boyd_lawton_sequence(f, P, args.n_max):
        w.writerow([n, repr(res.estimate), res.extra["degree"]])
    text = buf.getvalue()
    return text, {args.out: text.encode()} if args.out else {}


def cmd_classify(args):
    f = _map(args)
    text = _dump(preper_in_julia(f).to_dict())
    return text, {args.out: text.encode()} if args.out else {}


def _range(text, field):
    parts = text.split(":")
    if len(parts) != 2:
        raise SchemaError(field, f"expected lo:hi, got {text!r}")
    try:
        return float(parts[0]), float(parts[1])
    except ValueError:
        raise SchemaError(field, f"expected lo:hi, got {text!r}") from None


def _raster_outputs(img, args):
    files = {}
    if args.out:
        buf = io.BytesIO()
        write_ppm(buf, img.pixels)
        files[args.out] = buf.getvalue()
    if args.pgm:
        buf = io.BytesIO()
        write_pgm(buf, img.counts, img.config.max_iter)
        files[args.pgm] = buf.getvalue()
    black = int((img.pixels == 0).sum())
    text = _dump({"width": img.config.width, "height": img.config.height,
                  "black_pixels": black, "outputs": sorted(files)})
    return text, files


def cmd_multibrot(args):
    re0, re1 = _range(args.re_range, "re-range")
    im0, im1 = _range(args.im_range, "im-range")
    width = args.resolution
    height = max(1, round(width * (im1 - im0) / (re1 - re0)))
    cfg = RasterConfig((re0, re1, im0, im1), width, height, args.max_iter, Mode.MULTIBROT)
    return _raster_outputs(render(args.d, cfg), args)


def cmd_render(args):
    if args.figure:
        if args.figure not in FIGURES:
            raise SchemaError("figure", f"unknown figure {args.figure!r}; choose from {sorted(FIGURES)}")
        target, cfg = FIGURES[args.figure]
    else:
        target = _map(args) if args.mode != "multibrot" else args.d
        parts = args.window.split(":")
        if len(parts) != 4:
            raise SchemaError("window", "expected re_min:re_max:im_min:im_max")
        try:
            window = tuple(float(p) for p in parts)
        except ValueError:
            raise SchemaError("window", f"cannot parse {args.window!r}") from None
        cfg = RasterConfig(window, args.width, args.height, args.max_iter, Mode(args.mode))
    return _raster_outputs(render(target, cfg), args)


def cmd_selftest(args):
    from .acceptance import run_all

    results = run_all(args.only or None, echo=print)
    failed = [r.number for r in results if not r.passed]
    summary = f"{len(results) - len(failed)}/{len(results)} criteria passed"
    if failed:
        summary += f"; failing: {failed}"
    print(summary)
    if failed:
        raise _SelftestFailed(summary)
    return "", {}


class _SelftestFailed(DynMahlerError):
    pass


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser():
    p = argparse.ArgumentParser(prog="dynmahler", description="Dynamical Mahler measures and arithmetic dynamics")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--f", help="map f: inline JSON or path to a JSON file")
    common.add_argument("--out", help="write the result here (plus a run manifest)")
    common.add_argument("--manifest", help="manifest path (default <out>.manifest.json)")
    common.add_argument("--threads", type=int, default=os.cpu_count() or 1,
                        help="parallelism degree; results do not depend on it (default: cores)")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("measure", parents=[common], help="estimate m_f(P)")
    s.add_argument("--poly", required=True, help="polynomial P: inline JSON or path")
    s.add_argument("--method", choices=["mc", "tree", "nested", "circle", "segment"], default="mc")
    s.add_argument("--samples", type=int, default=100_000)
    s.add_argument("--seed", type=int, default=0, help="64-bit master seed")
    s.add_argument("--burn-in", type=int, default=DEFAULT_BURN_IN)
    s.add_argument("--depth", type=int, default=12, help="preimage tree depth")
    s.add_argument("--var", type=int, default=0, help="variable integrated exactly (nested)")
    s.add_argument("--grid", type=int, default=4096, help="grid size for circle/segment")
    s.add_argument("--alpha", type=float, default=-2.0)
    s.add_argument("--beta", type=float, default=2.0)
    s.set_defaults(func=cmd_measure)

    s = sub.add_parser("green", parents=[common], help="escape rate at a point")
    s.add_argument("--point", required=True)
    s.add_argument("--max-iter", type=int, default=10_000)
    s.set_defaults(func=cmd_green)

    s = sub.add_parser("height", parents=[common], help="canonical height of a rational point")
    s.add_argument("--point", required=True)
    s.add_argument("--target-error", type=float, default=1e-9)
    s.set_defaults(func=cmd_height)

    s = sub.add_parser("preper", parents=[common], help="preperiodicity of a point")
    s.add_argument("--point", required=True)
    s.add_argument("--max-iter", type=int, default=10_000)
    s.set_defaults(func=cmd_preper)

    s = sub.add_parser("cycles", parents=[common], help="CSV of period-n points with multipliers")
    s.add_argument("--period", type=int, required=True)
    s.set_defaults(func=cmd_cycles)

    s = sub.add_parser("kronecker", parents=[common], help="certify m_f(P) = 0")
    s.add_argument("--poly", required=True)
    s.add_argument("--factors", help="JSON list of factor specs (inline or path)")
    s.set_defaults(func=cmd_kronecker)

    s = sub.add_parser("boyd-lawton", parents=[common], help="CSV of m_f(P(x, f^n(x)))")
    s.add_argument("--poly", required=True)
    s.add_argument("--n-max", type=int, default=5)
    s.set_defaults(func=cmd_boyd_lawton)

    s = sub.add_parser("classify", parents=[common], help="is PrePer(f) inside J_f?")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("multibrot", parents=[common], help="render a Multibrot set to PPM")
    s.add_argument("--d", type=int, default=2)
    s.add_argument("--re-range", default="-2:1")
    s.add_argument("--im-range", default="-1.5:1.5")
    s.add_argument("--resolution", type=int, default=800, help="image width in pixels")
    s.add_argument("--max-iter", type=int, default=200)
    s.add_argument("--pgm", help="also write an escape-time PGM")
    s.set_defaults(func=cmd_multibrot)

    s = sub.add_parser("render", parents=[common], help="render a Julia-type picture")
    s.add_argument("--figure", help=f"named recipe: {', '.join(sorted(FIGURES))}")
    s.add_argument("--window", default="-2:2:-2:2", help="re_min:re_max:im_min:im_max")
    s.add_argument("--width", type=int, default=400)
    s.add_argument("--height", type=int, default=400)
    s.add_argument("--max-iter", type=int, default=200)
    s.add_argument("--mode", choices=[m.value for m in Mode], default="filled")
    s.add_argument("--d", type=int, default=2, help="degree for --mode multibrot")
    s.add_argument("--pgm", help="also write an escape-time PGM")
    s.set_defaults(func=cmd_render)

    s = sub.add_parser("selftest", parents=[common], help="run the acceptance criteria")
    s.add_argument("--only", type=int, nargs="*", help="criterion numbers to run")
    s.set_defaults(func=cmd_selftest)
    return p


def _join_signed_values(argv):
    """Turn ``--re-range -2:1`` into ``--re-range=-2:1`` so argparse accepts it."""
    out, i = [], 0
    while i < len(argv):
        a = argv[i]
        if a in _SIGNED_VALUE_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{a}={argv[i + 1]}")
            i += 2
        else:
            out.append(a)
            i += 1
    return out


def _write_manifest(args, files, seconds, path):
    config = {k: v for k, v in vars(args).items() if k != "func"}
    manifest = {
        "command": args.command,
        "config": config,
        "seed": getattr(args, "seed", None),
        "version": __version__,
        "wall_time_s": seconds,
        "outputs": {p: hashlib.sha256(b).hexdigest() for p, b in files.items()},
    }
    Path(path).write_text(_dump(manifest))


def main(argv=None):
    """Entry point; returns the process exit code."""
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_join_signed_values(argv))
    except SystemExit as exc:  # argparse usage errors exit 2, --help exits 0
        return int(exc.code or 0)
    t0 = time.perf_counter()
    try:
        text, files = args.func(args)
        for path, data in files.items():
            Path(path).write_bytes(data)
        manifest = args.manifest or (f"{args.out}.manifest.json" if args.out else None)
        if manifest:
            _write_manifest(args, files, time.perf_counter() - t0, manifest)
    except SchemaError as exc:
        print(f"dynmahler: input error: {exc}", file=sys.stderr)
        return 2
    except _SelftestFailed:
        return 1
    except DynMahlerError as exc:
        print(f"dynmahler: {exc}", file=sys.stderr)
        return 1
    except (ValueError, TypeError) as exc:
        print(f"dynmahler: usage error: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
