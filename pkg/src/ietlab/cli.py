"""Command line interface: ``ietlab <command> [options]``.

Exit codes: 0 on success, 2 for invalid input or domain errors, 3 when a
resource or precision limit is hit.  Errors are printed to stderr as JSON.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import __version__
from .errors import DomainError, IetLabError
from .exact import format_rational, parse_rational
from .experiments import (classify, example1, example2, example3_independent, example3_rational,
                          example4_independent, novak_pairing, scan, scan_csv)
from .gasket import (GasketPoint, black_count, gasket_membership, pgm_bytes, render_raster,
                     trace_rows)
from .iet import minimality_verdict, occupation_vector, rauzy_step
from .io import (fv_to_json, iet_from_json, iet_to_json, interval_set_to_json, parse_rational_list,
                 verdict_to_json)
from .itm import Itm, itm_finite_type
from .restrictions import saf_invariant
from .spi import Spi, double_suspension_iet, family_k3, family_k3_heights, family_k3_spi, spi_excess


class UsageError(IetLabError):
    exit_code = 2


def _read_json_arg(args):
    if getattr(args, "json", None):
        text = args.json
    elif getattr(args, "input", None):
        try:
            with open(args.input) as fh:
                text = fh.read()
        except OSError as exc:
            raise UsageError("cannot read %s: %s" % (args.input, exc.strerror))
    else:
        raise UsageError("provide --input FILE or --json TEXT")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError("invalid JSON: %s" % exc)


def _write(args, payload):
    """Write a JSON-able payload, text or bytes to ``--output`` or stdout."""
    if isinstance(payload, (dict, list)):
        payload = json.dumps(payload, indent=2) + "\n"
    out = getattr(args, "output", None)
    if out:
        mode = "wb" if isinstance(payload, bytes) else "w"
        with open(out, mode) as fh:
            fh.write(payload)
    elif isinstance(payload, bytes):
        sys.stdout.buffer.write(payload)
    else:
        sys.stdout.write(payload)


def _config_echo(args):
    skip = {"func", "config"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _positive(name, value):
    if value is None or value <= 0:
        raise UsageError("%s must be positive" % name)
    return value


# -- commands ---------------------------------------------------------------------------


def cmd_classify(args):
    T = iet_from_json(_read_json_arg(args))
    report = classify(T, args.depth if args.dynamics else None, args.power_cap)
    report["version"] = __version__
    report["config"] = _config_echo(args)
    _write(args, report)


def _example_report(which, args):
    if which == 1:
        out = {"example": 1, "cases": []}
        for k in (2, 3, 4):
            T = example1(k)
            rep = classify(T, args.depth, args.power_cap)
            x = T.basis.const(Fraction(1, 7))
            v = occupation_vector(T, x, args.depth)
            rep["occupationDeviation"] = max(abs(c / args.depth - float(a)) for c, a in zip(v, T.lengths))
            rep["iet"] = iet_to_json(T)
            rep["k"] = k
            out["cases"].append(rep)
        out["novakPairings"] = {str(k): format_rational(novak_pairing(k)) for k in range(2, 7)}
        return out, None
    if which == 2:
        T = example2(Fraction(1, 5), Fraction(3, 10), Fraction(3, 10))
        rep = classify(T, args.depth, args.power_cap)
        rep["iet"] = iet_to_json(T)
        rep["fixedInterval"] = [fv_to_json(T.x[2]), fv_to_json(T.x[3])]
        return {"example": 2, "cases": [rep]}, None
    if which == 3:
        cases = []
        for T in (example3_rational(Fraction(1, 10), Fraction(3, 20)), example3_independent()):
            rep = classify(T, args.depth, args.power_cap)
            rep["iet"] = iet_to_json(T)
            cases.append(rep)
        image = render_raster("example3square", args.width, args.width, args.render_depth, args.workers)
        return {"example": 3, "cases": cases}, pgm_bytes(image, args.width, args.width)
    if which == 4:
        T = example4_independent()
        rep = classify(T, args.depth, args.power_cap)
        rep["iet"] = iet_to_json(T)
        image = render_raster("example4slice", args.width, args.width, args.render_depth, args.workers)
        rep["raster"] = {"width": args.width, "depth": args.render_depth, "black": black_count(image)}
        return {"example": 4, "cases": [rep]}, pgm_bytes(image, args.width, args.width)
    raise UsageError("examples are numbered 1 to 4")


def cmd_examples(args):
    _positive("width", args.width)
    os.makedirs(args.outdir, exist_ok=True)
    for which in args.which:
        report, image = _example_report(which, args)
        report["version"] = __version__
        report["config"] = _config_echo(args)
        with open(os.path.join(args.outdir, "example%d.json" % which), "w") as fh:
            json.dump(report, fh, indent=2)
            fh.write("\n")
        if image is not None:
            with open(os.path.join(args.outdir, "example%d.pgm" % which), "wb") as fh:
                fh.write(image)
    print(json.dumps({"outdir": args.outdir, "examples": args.which}))


def cmd_scan(args):
    if args.nx < 0 or args.ny < 0:
        raise UsageError("grid sizes must be nonnegative")
    rows = scan(args.region, args.nx, args.ny, _positive("depth", args.depth),
                _positive("power-cap", args.power_cap), args.workers)
    _write(args, scan_csv(rows))


def _svg_overlay(region, width, height, pgm_name):
    if region == "delta":
        pts = [(0, height), (width, height), (0, 0)]
    elif region == "example4slice":
        # a1 = 0 along the bottom, a3 = 0 along u + v = 1
        pts = [(0, height), (width, height), (0, 0)]
    else:
        # a2 <= 3 a1 inside [0, 1/4] x [0, 3/4]: the triangle under the diagonal
        pts = [(0, height), (width, height), (width, 0)]
    poly = " ".join("%d,%d" % p for p in pts)
    return ('<svg xmlns="http://www.w3.org/2000/svg" xmlns:xlink="http://www.w3.org/1999/xlink" '
            'width="%d" height="%d">\n<image xlink:href="%s" width="%d" height="%d"/>\n'
            '<polygon points="%s" fill="none" stroke="red" stroke-width="1"/>\n</svg>\n'
            % (width, height, pgm_name, width, height, poly))


def cmd_render(args):
    _positive("width", args.width)
    height = args.height or args.width
    _positive("height", height)
    if args.depth < 0:
        raise UsageError("depth must be nonnegative")
    pixels = render_raster(args.region, args.width, height, args.depth, args.workers)
    _write(args, pgm_bytes(pixels, args.width, height))
    if args.svg:
        with open(args.svg, "w") as fh:
            fh.write(_svg_overlay(args.region, args.width, height, os.path.basename(args.output or "")))


def cmd_saf(args):
    T = iet_from_json(_read_json_arg(args))
    saf = saf_invariant(T)
    _write(args, {
        "generators": list(saf.names),
        "matrix": [[format_rational(x) for x in row] for row in saf.M],
        "wedge": {"%s^%s" % k: format_rational(v) for k, v in saf.wedge_coefficients().items()},
        "zero": saf.is_zero(),
    })


def cmd_rauzy(args):
    T = iet_from_json(_read_json_arg(args))
    saf0 = saf_invariant(T)
    steps = []
    for _ in range(args.steps):
        T = rauzy_step(T, args.step_cap)
        steps.append({"pi": list(T.perm.images), "lengths": [fv_to_json(a) for a in T.lengths]})
    _write(args, {"steps": steps, "safPreserved": saf_invariant(T) == saf0, "version": __version__})


def cmd_gasket(args):
    coords = parse_rational_list(args.point)
    if len(coords) != 3:
        raise UsageError("--point needs three coordinates")
    p = GasketPoint(coords)
    trace = gasket_membership(p, _positive("depth", args.depth), args.window)
    _write(args, {"point": [format_rational(c) for c in p.coords], "trace": verdict_to_json(trace)})
    if args.trace_csv:
        with open(args.trace_csv, "w") as fh:
            fh.write("step,index,x1,x2,x3\n")
            for row in trace_rows(p, trace.indices):
                fh.write(",".join([str(row[0]), str(row[1])] + [format_rational(c) for c in row[2:]]) + "\n")


def _arms_from_args(args):
    data = json.loads(args.arms) if args.arms else None
    if data is not None:
        return Spi([[parse_rational(x) for x in arm] for arm in data])
    if args.b:
        return family_k3_spi(*parse_rational_list(args.b))
    raise UsageError("provide --arms or --b")


def cmd_spi(args):
    if args.action == "excess":
        psi = _arms_from_args(args)
        e = spi_excess(psi)
        _write(args, {"excess": fv_to_json(e), "balanced": e.is_zero()})
    elif args.action == "family-k3":
        if not args.b:
            raise UsageError("family-k3 needs --b b1,b2,b3")
        b = parse_rational_list(args.b)
        if len(b) != 3:
            raise UsageError("--b needs three values")
        perm, a = family_k3(*b)
        e = sum(b) - 1
        _write(args, {"pi": list(perm.images), "lengths": [fv_to_json(x) for x in a],
                      "excess": format_rational(e)})
    else:
        psi = _arms_from_args(args)
        y = parse_rational_list(args.y) if args.y else family_k3_heights(psi.k)
        ds = double_suspension_iet(psi, y)
        _write(args, {"pi": list(ds.iet.perm.images), "lengths": [fv_to_json(x) for x in ds.iet.lengths],
                      "fills": ds.fills, "swept": fv_to_json(ds.swept),
                      "slitMeasure": fv_to_json(ds.slit_measure), "epsilon": format_rational(ds.epsilon)})


def cmd_itm(args):
    T = Itm(parse_rational_list(args.lam), parse_rational_list(args.t))
    v = itm_finite_type(T, _positive("cap", args.cap))
    _write(args, verdict_to_json(v))


# -- parser -----------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ietlab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--config", help="JSON file with option defaults")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_input(p):
        p.add_argument("--input", help="IET JSON file")
        p.add_argument("--json", help="inline IET JSON")
        p.add_argument("--output", help="output file (default stdout)")

    p = sub.add_parser("classify", help="rich/poor, SAF and separating cycle report")
    with_input(p)
    p.add_argument("--depth", type=int, default=10 ** 4)
    p.add_argument("--power-cap", type=int, default=20)
    p.add_argument("--no-dynamics", dest="dynamics", action="store_false",
                   help="skip the minimality verdict")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("examples", help="reproduce the worked examples")
    p.add_argument("--which", type=int, nargs="+", default=[1, 2, 3, 4])
    p.add_argument("--outdir", default="examples-out")
    p.add_argument("--depth", type=int, default=10 ** 4)
    p.add_argument("--power-cap", type=int, default=20)
    p.add_argument("--width", type=int, default=256)
    p.add_argument("--render-depth", type=int, default=12)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_examples)

    p = sub.add_parser("scan", help="verdicts over a parameter grid as CSV")
    p.add_argument("--region", choices=["example3square", "example4slice"], default="example3square")
    p.add_argument("--nx", type=int, default=64)
    p.add_argument("--ny", type=int, default=64)
    p.add_argument("--depth", type=int, default=500)
    p.add_argument("--power-cap", type=int, default=8)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--output")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("render", help="PGM raster of a region")
    p.add_argument("--region", choices=["delta", "example4slice", "example3square"], default="example4slice")
    p.add_argument("--width", type=int, default=512)
    p.add_argument("--height", type=int)
    p.add_argument("--depth", type=int, default=12)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--output")
    p.add_argument("--svg", help="also write an SVG overlay with the region boundary")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("saf", help="SAF invariant of an IET")
    with_input(p)
    p.set_defaults(func=cmd_saf)

    p = sub.add_parser("rauzy", help="iterate Rauzy induction")
    with_input(p)
    p.add_argument("--steps", type=int, default=10)
    p.add_argument("--step-cap", type=int, default=10 ** 6)
    p.set_defaults(func=cmd_rauzy)

    p = sub.add_parser("gasket", help="Rauzy gasket membership of a point")
    p.add_argument("--point", required=True, help="x1,x2,x3 as rationals")
    p.add_argument("--depth", type=int, default=60)
    p.add_argument("--window", type=int, default=30)
    p.add_argument("--trace-csv")
    p.add_argument("--output")
    p.set_defaults(func=cmd_gasket)

    p = sub.add_parser("spi", help="systems of partial isometries")
    p.add_argument("action", choices=["excess", "family-k3", "suspend"])
    p.add_argument("--arms", help='JSON list of [a, b, c, d] arms, e.g. [["0","1/2","1/2","1"]]')
    p.add_argument("--b", help="b1,b2,b3 of the three-arm family")
    p.add_argument("--y", help="comma separated heights")
    p.add_argument("--output")
    p.set_defaults(func=cmd_spi)

    p = sub.add_parser("itm", help="interval translation mappings")
    p.add_argument("action", choices=["type"])
    p.add_argument("--lam", required=True)
    p.add_argument("--t", required=True)
    p.add_argument("--cap", type=int, default=100)
    p.add_argument("--output")
    p.set_defaults(func=cmd_itm)
    return parser


def _apply_config(parser, argv):
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return
    try:
        with open(known.config) as fh:
            config = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError("cannot read config %s: %s" % (known.config, exc))
    if not isinstance(config, dict):
        raise UsageError("config must be a JSON object")
    config = {k.replace("-", "_"): v for k, v in config.items()}
    for action in parser._subparsers._group_actions:
        for sp in action.choices.values():
            sp.set_defaults(**config)


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        _apply_config(parser, argv)
        args = parser.parse_args(argv)
        args.func(args)
    except IetLabError as exc:
        kind = "reducible" if "reducible" in str(exc) else type(exc).__name__
        json.dump({"error": kind, "type": type(exc).__name__, "message": str(exc)}, sys.stderr)
        sys.stderr.write("\n")
        return exc.exit_code
    except OSError as exc:
        json.dump({"error": "io", "type": type(exc).__name__, "message": str(exc)}, sys.stderr)
        sys.stderr.write("\n")
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
