"""Command-line front end: data -> filtered complex -> barcode.

Exit codes: 0 on success, 1 on bad data or I/O failure, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import logging
import math
import os
import sys
from pathlib import Path

import numpy as np

from .errors import PHError

log = logging.getLogger("phkit")


def _error(msg: str) -> None:
    tty = sys.stderr.isatty() and "NO_COLOR" not in os.environ
    prefix = "\x1b[31merror:\x1b[0m" if tty else "error:"
    print(f"{prefix} {msg}", file=sys.stderr)


def _write(text: str, path: str | None) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _scale(x: str) -> float:
    return math.inf if x.lower() in ("inf", "infinity") else float(x)


# ------------------------------------------------------------------ inputs

def _load_metric(args):
    from .builders import graph_to_metric, read_distance_matrix, read_edge_list, read_points
    fmt = args.format or "points"
    if fmt == "points":
        return read_points(args.input)
    if fmt == "distance":
        return read_distance_matrix(args.input)
    if fmt == "edges":
        return graph_to_metric(read_edge_list(args.input), args.metric_mode)
    raise PHError(f"format {fmt!r} does not describe metric data")


def _build(args, kind: str):
    from . import builders as b
    from .cubical import build_cubical, read_image
    if kind == "cubical":
        return build_cubical(read_image(args.input))
    if kind == "wrcf":
        return b.build_wrcf(b.read_edge_list(args.input), args.max_dim)
    m = _load_metric(args)
    if kind == "rips":
        return b.build_rips(m, args.max_dim, args.max_scale)
    if kind == "cech":
        return b.build_cech(m, args.max_dim, args.max_scale)
    if kind == "witness":
        L = b.maxmin_landmarks(m, args.landmarks or max(1, m.n // 10), args.seed)
        if args.nu is None:
            return b.build_weak_witness(m, L, args.max_dim, args.max_scale)
        return b.build_parametrized_witness(m, L, args.nu, args.max_dim, args.max_scale)
    raise PHError(f"unknown complex type {kind!r}")


def _load_complex(args):
    """A complex from ``--complex`` + data, an image, or a complex file."""
    from .complex import read_complex
    from .cubical import build_cubical, read_image
    if getattr(args, "complex", None):
        return _build(args, args.complex)
    if args.format == "image":
        return build_cubical(read_image(args.input))
    return read_complex(args.input)


# ------------------------------------------------------------------ commands

def cmd_generate(args) -> int:
    from . import datasets as ds
    from .builders import write_edge_list
    out = args.output
    if args.kind == "klein":
        pts = ds.generate_klein(args.n, args.mode, args.seed)
    elif args.kind == "uniform":
        pts = ds.generate_uniform(args.N, args.d, args.seed)
    elif args.kind == "vicsek":
        p = ds.VicsekParams(l=args.l, v0=args.v0, N=args.N, eta=args.eta, T=args.T, r=args.r,
                            init=args.init, theta0=args.theta0)
        frames = args.frames or [p.T]
        clouds = ds.generate_vicsek(p, args.seed, frames)
        if len(clouds) == 1:
            pts = clouds[0]
        else:
            if out in (None, "-"):
                raise PHError("several frames need --output as a file stem")
            for f, c in zip(frames, clouds):
                np.savetxt(f"{out}.{f}.txt", c, fmt="%.17g")
            return 0
    else:
        g = ds.generate_fractal(ds.FractalParams(args.b, args.levels, args.k, args.weighting), args.seed)
        if out in (None, "-"):
            sys.stdout.write("".join(f"{u} {v} {w!r}\n" for u, v, w in g.edges))
        else:
            write_edge_list(g, out)
        return 0
    _write("".join(" ".join("%.17g" % x for x in row) + "\n" for row in pts), out)
    return 0


def cmd_build(args) -> int:
    from .complex import format_complex
    K = _build(args, args.kind)
    if args.kind == "cubical":
        text = "".join(f"{c.dim} {' '.join(map(str, c.anchor))} {' '.join(map(str, c.extent))} {c.value!r}\n"
                       for c in K)
    else:
        text = format_complex(K)
    _write(text, args.output)
    log.info("built %d simplices", len(K))
    return 0


def cmd_reduce(args) -> int:
    from .complex import boundary_matrix
    from .reduction import reduce
    K = _load_complex(args)
    B = K.boundary() if hasattr(K, "boundary") else boundary_matrix(K)
    st = reduce(B, K.dims, args.algorithm)
    lines = [f"{i} {j}" for i, j in sorted(map(tuple, st.pairs.tolist()))]
    lines += [f"{k} inf" for k in st.essentials.tolist()]
    _write("\n".join(lines) + ("\n" if lines else ""), args.output)
    return 0


def cmd_barcode(args) -> int:
    from .barcode import format_barcode
    from .reduction import compute_barcode
    K = _load_complex(args)
    b = compute_barcode(K, args.algorithm, drop_zero=not args.keep_zero)
    if args.max_dim is not None:
        from .barcode import Barcode
        keep = b.dims <= args.max_dim
        b = Barcode(b.dims[keep], b.births[keep], b.deaths[keep])
    _write(format_barcode(b), args.output)
    return 0


def cmd_distance(args) -> int:
    from .diagrams import bottleneck, from_barcode, wasserstein
    from .barcode import read_barcode
    q = math.inf if args.metric == "linf" else 2.0
    A, B = read_barcode(args.first), read_barcode(args.second)
    dims = [args.dim] if args.dim is not None else sorted(set(A.dims.tolist()) | set(B.dims.tolist()))
    per = []
    for k in dims:
        X, Y = from_barcode(A, k), from_barcode(B, k)
        per.append(bottleneck(X, Y, q) if args.kind == "bottleneck" else wasserstein(X, Y, args.p, q))
    # degrees combine by max (bottleneck) or by the p-norm (Wasserstein)
    if args.kind == "bottleneck":
        d = max(per, default=0.0)
    else:
        d = sum(x ** args.p for x in per) ** (1.0 / args.p)
    _write(f"{d:.17g}\n", args.output)
    return 0


def cmd_betti(args) -> int:
    from .reduction import betti_numbers
    betti = betti_numbers(_load_complex(args))
    while len(betti) > 1 and betti[-1] == 0:
        betti.pop()
    _write(" ".join(map(str, betti)) + "\n", args.output)
    return 0


def cmd_plot(args) -> int:
    from .barcode import read_barcode
    from .diagrams import emit_svg, from_barcode
    if args.output in (None, "-"):
        raise PHError("plot needs --output")
    b = read_barcode(args.input)
    emit_svg(from_barcode(b, args.dim) if args.diagram else b, args.output)
    return 0


def cmd_bench(args) -> int:
    from .bench import bench_suite, format_csv, load_config
    cfg = load_config(args.config or args.input)
    if args.repeats is not None:
        cfg["repeats"] = args.repeats
    if args.cap is not None:
        cfg["cap"] = args.cap
    _write(format_csv(bench_suite(cfg, parallel=args.parallel)), args.output)
    return 0


# ------------------------------------------------------------------ parser

def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--max-dim", type=int, default=None, help="largest simplex dimension")
    p.add_argument("--max-scale", type=_scale, default=math.inf, help="largest filtration value")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--input", "-i")
    p.add_argument("--output", "-o")
    p.add_argument("--format", choices=["points", "distance", "edges", "image", "complex"])
    p.add_argument("--keep-zero", action="store_true", help="keep zero-length intervals")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def _builder_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--metric-mode", choices=["inverse", "raw", "one_minus"], default="inverse",
                   help="edge length for network input")
    p.add_argument("--landmarks", type=int, help="witness landmark count (maxmin)")
    p.add_argument("--nu", type=int, help="parametrized witness index; weak witness if omitted")


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    ap = argparse.ArgumentParser(prog="phkit", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", parents=[common], help="write a synthetic dataset")
    g.add_argument("kind", choices=["klein", "uniform", "vicsek", "fractal"])
    g.add_argument("--n", type=int, default=400, help="Klein sample size")
    g.add_argument("--mode", choices=["grid", "random"], default="grid")
    g.add_argument("--N", type=int, default=50)
    g.add_argument("--d", type=int, default=16)
    g.add_argument("--l", type=float, default=10.0)
    g.add_argument("--v0", type=float, default=0.03)
    g.add_argument("--eta", type=float, default=0.1)
    g.add_argument("--T", type=int, default=100)
    g.add_argument("--r", type=float, default=1.0)
    g.add_argument("--init", choices=["random", "constant"], default="random")
    g.add_argument("--theta0", type=float, default=0.0)
    g.add_argument("--frames", type=int, nargs="*")
    g.add_argument("--b", type=int, default=5)
    g.add_argument("--levels", type=int, default=9, help="fractal n (final size 2^n)")
    g.add_argument("--k", type=int, default=2)
    g.add_argument("--weighting", choices=["random", "linear", "unit"], default="random")
    g.set_defaults(func=cmd_generate)

    b = sub.add_parser("build", parents=[common], help="build a filtered complex")
    b.add_argument("kind", choices=["rips", "cech", "witness", "wrcf", "cubical"])
    _builder_flags(b)
    b.set_defaults(func=cmd_build)

    r = sub.add_parser("reduce", parents=[common], help="reduce a boundary matrix, print pairs")
    r.add_argument("algorithm", choices=["standard", "twist", "dual"])
    r.add_argument("--complex", choices=["rips", "cech", "witness", "wrcf", "cubical"])
    _builder_flags(r)
    r.set_defaults(func=cmd_reduce)

    bc = sub.add_parser("barcode", parents=[common], help="build, reduce and print intervals")
    bc.add_argument("--algorithm", choices=["standard", "twist", "dual"], default="twist")
    bc.add_argument("--complex", choices=["rips", "cech", "witness", "wrcf", "cubical"])
    _builder_flags(bc)
    bc.set_defaults(func=cmd_barcode)

    d = sub.add_parser("distance", parents=[common], help="distance between two diagrams")
    d.add_argument("kind", choices=["bottleneck", "wasserstein"])
    d.add_argument("first")
    d.add_argument("second")
    d.add_argument("--dim", type=int, default=None, help="homology degree (all files' dims if omitted)")
    d.add_argument("--p", type=float, default=1.0)
    d.add_argument("--metric", choices=["linf", "l2"], default="linf")
    d.set_defaults(func=cmd_distance)

    bt = sub.add_parser("betti", parents=[common], help="Betti numbers of a complex")
    bt.add_argument("--complex", choices=["rips", "cech", "witness", "wrcf", "cubical"])
    _builder_flags(bt)
    bt.set_defaults(func=cmd_betti)

    pl = sub.add_parser("plot", parents=[common], help="draw a barcode or diagram as SVG")
    pl.add_argument("--diagram", action="store_true")
    pl.add_argument("--dim", type=int, default=0)
    pl.set_defaults(func=cmd_plot)

    be = sub.add_parser("bench", parents=[common], help="run a benchmark configuration")
    be.add_argument("config", nargs="?")
    be.add_argument("--repeats", type=int)
    be.add_argument("--cap", type=float)
    be.add_argument("--parallel", action="store_true")
    be.set_defaults(func=cmd_bench)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    needs_input = args.command in ("build", "reduce", "barcode", "betti", "plot")
    if needs_input and not args.input:
        ap.error(f"{args.command} needs --input")
    if args.command == "bench" and not (args.config or args.input):
        ap.error("bench needs a configuration file")
    # builders default to dimension 2; a plain barcode keeps every degree
    builds = args.command == "build" or getattr(args, "complex", None)
    if builds and args.max_dim is None:
        args.max_dim = 2
    try:
        return args.func(args)
    except (PHError, OSError) as exc:
        _error(str(exc))
        return 1


if __name__ == "__main__":
    sys.exit(main())
