"""Command-line interface.

Exit codes: 0 success, 2 configuration error, 3 data error, 4 numerical failure.
"""

import argparse
import logging
import sys

import numpy as np

from .classify import classify, fit, misclassification_rate
from .deepest import deepest
from .depth import depth
from .errors import ConfigError, DepthError
from .experiments import EXPERIMENTS, default_config, run
from .io import emit, ingest_sample, table_to_csv, write_sample
from .sampling import VmfModel, sample_vmf
from .sphere import basis_vector, get_kernel, unit_from_components


def _floats(text):
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _ints(text):
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _words(text):
    return [t.strip() for t in text.split(",") if t.strip()]


def _fmt_vec(v):
    return ",".join(f"{x:.17g}" for x in v)


def cmd_depth(args):
    sample = ingest_sample(args.input, args.normalize)
    d = depth(get_kernel(args.delta), unit_from_components(args.theta), sample)
    print(f"{d.value:.17g}")


def cmd_deepest(args):
    sample = ingest_sample(args.input, args.normalize)
    res = deepest(get_kernel(args.delta), sample)
    print(f"point={_fmt_vec(res.point.coords)}")
    print(f"depth={res.depth:.17g}")


def cmd_sample(args):
    mode = unit_from_components(args.mode) if args.mode else basis_vector(args.q, args.q)
    if mode.dim != args.q:
        raise ConfigError(f"--mode has {mode.dim} components but --q is {args.q}")
    sample = sample_vmf(VmfModel(mode, args.kappa), args.n, args.seed)
    if args.out:
        write_sample(sample, args.out)
    else:
        for row in sample.points:
            print(_fmt_vec(row))


def cmd_bdp(args):
    cfg = default_config("bdp", q=tuple(args.q_list) if args.q_list else None,
                         kappa=tuple(args.kappa_grid) if args.kappa_grid else None,
                         kernels=tuple(args.deltas))
    _output(run(cfg), args.out, args.format)


def cmd_classify(args):
    model = fit(args.delta, ingest_sample(args.train1, args.normalize),
                ingest_sample(args.train2, args.normalize), args.tie_seed)
    if args.query is not None:
        print(classify(model, unit_from_components(args.query)))
        return
    test = ingest_sample(args.test, args.normalize)
    if args.labels:
        labels = np.loadtxt(args.labels, dtype=int, ndmin=1, comments="#")
        print(f"{misclassification_rate(model, test, labels):.17g}")
    else:
        for lab in model.predict(test.points):
            print(lab)


def cmd_simulate(args):
    overrides = dict(
        seed=args.seed,
        M=args.M,
        q=tuple(args.q) if args.q else None,
        n=tuple(args.n) if args.n else None,
        kappa=tuple(args.kappa) if args.kappa else None,
        eps=tuple(args.eps) if args.eps else None,
        kernels=tuple(args.kernels) if args.kernels else None,
        setups=tuple(args.setups) if args.setups else None,
        grid=args.grid,
        output_path=args.out,
    )
    cfg = default_config(args.experiment, args.paper_scale, **overrides)
    _output(run(cfg, jobs=args.jobs), args.out, args.format)


def _output(table, path, fmt):
    if path:
        emit(table, fmt, path)
    elif fmt == "csv":
        sys.stdout.write(table_to_csv(table))
    else:
        raise ConfigError("svg output needs --out")


def build_parser():
    p = argparse.ArgumentParser(prog="dirdepth", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def delta_arg(sp, choices=("arc", "cos", "chord")):
        sp.add_argument("--delta", choices=choices, default="arc")

    sp = sub.add_parser("depth", help="depth of one direction with respect to a sample")
    delta_arg(sp)
    sp.add_argument("--theta", type=_floats, required=True)
    sp.add_argument("--input", required=True)
    sp.add_argument("--normalize", action="store_true")
    sp.set_defaults(func=cmd_depth)

    sp = sub.add_parser("deepest", help="deepest point of a sample")
    delta_arg(sp)
    sp.add_argument("--input", required=True)
    sp.add_argument("--normalize", action="store_true")
    sp.set_defaults(func=cmd_deepest)

    sp = sub.add_parser("sample", help="draw a reproducible sample")
    ssub = sp.add_subparsers(dest="law", required=True)
    vp = ssub.add_parser("vmf")
    vp.add_argument("--q", type=int, required=True)
    vp.add_argument("--kappa", type=float, required=True)
    vp.add_argument("--mode", type=_floats, help="modal direction (default e_q)")
    vp.add_argument("--n", type=int, required=True)
    vp.add_argument("--seed", type=int, default=1)
    vp.add_argument("--out")
    vp.set_defaults(func=cmd_sample)

    sp = sub.add_parser("bdp", help="breakdown-point lower bounds for vMF laws")
    sp.add_argument("--q-list", type=_ints)
    sp.add_argument("--kappa-grid", type=_floats)
    sp.add_argument("--deltas", type=_words, default=["arc", "cos", "chord"])
    sp.add_argument("--out")
    sp.add_argument("--format", choices=("csv", "svg"), default="csv")
    sp.set_defaults(func=cmd_bdp)

    sp = sub.add_parser("classify", help="max-depth classification")
    delta_arg(sp, ("arc", "cos", "chord", "asd", "atd"))
    sp.add_argument("--train1", required=True)
    sp.add_argument("--train2", required=True)
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--query", type=_floats)
    g.add_argument("--test")
    sp.add_argument("--labels", help="file of 1/2 labels, one per test row")
    sp.add_argument("--tie-seed", type=int, default=0)
    sp.add_argument("--normalize", action="store_true")
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("simulate", help="run a Monte Carlo study")
    sp.add_argument("experiment", choices=EXPERIMENTS)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--M", type=int)
    sp.add_argument("--q", type=_ints)
    sp.add_argument("--n", type=_ints)
    sp.add_argument("--kappa", type=_floats)
    sp.add_argument("--eps", type=_floats)
    sp.add_argument("--kernels", type=_words)
    sp.add_argument("--setups", type=_words)
    sp.add_argument("--grid", type=int)
    sp.add_argument("--paper-scale", action="store_true")
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--out")
    sp.add_argument("--format", choices=("csv", "svg"), default="csv")
    sp.set_defaults(func=cmd_simulate)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        args.func(args)
    except DepthError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except (ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return ConfigError.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
