"""``treesvm`` command line.

Exit codes: 0 success, 2 usage or input error, 3 solver non-convergence
under ``--strict``.
"""

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from . import bench
from .data_io import ParseError, SplitConfig, apply_scaler, load_libsvm, save_libsvm, synth_blobs
from .kernel import KernelParams
from .multiclass import STRATEGIES, classifier_count
from .persist import load_model, save_model
from .svm_binary import SolverConfig
from .tuning import GridConfig, evaluate_cell, grid_search

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_SOLVER = 3


class UsageError(Exception):
    pass


def _strategy(name):
    if name not in STRATEGIES:
        raise UsageError(f"unknown strategy {name!r} (choose from {', '.join(STRATEGIES)})")
    return name


def _grid_cfg(args, strategy):
    return GridConfig(tuple(args.gamma_range), tuple(args.cost_range), args.grid_step, strategy, args.seed)


def _solver(args, C=1.0):
    return SolverConfig(C=C, kkt_tol=args.kkt_tol)


def _fmt_exp(e):
    return f"2^{e}"


def cmd_train(args):
    strategy = _strategy(args.strategy)
    train, test, scaler = bench.prepare(args.data, args.test_file, SplitConfig(args.train_fraction, args.seed))
    if args.grid:
        report = grid_search(train, test, _grid_cfg(args, strategy), solver_defaults=_solver(args))
        rec = report.best_record
        model, gexp, cexp = report.best_model, rec.gamma_exp, rec.cost_exp
        acc, tr, te = rec.accuracy, rec.train_s, rec.test_s
        if args.grid_out:
            Path(args.grid_out).write_text(report.to_csv())
    else:
        gexp, cexp = args.gamma_exp, args.cost_exp
        k = KernelParams("rbf", 2.0**gexp)
        model, acc, tr, te = evaluate_cell(train, test, strategy, k, _solver(args, 2.0**cexp), args.seed)
    print(
        f"{train.name} strategy={strategy} gamma={_fmt_exp(gexp)} C={_fmt_exp(cexp)} "
        f"accuracy={100 * acc:.2f}% train_s={tr:.4f} test_s={te:.4f} "
        f"classifiers={len(model.binary_models())} train_n={train.n} test_n={test.n}"
    )
    if args.out:
        save_model(model, args.out, scaler)
        print(f"model written to {args.out}")
    if not model.converged:
        print("warning: at least one SMO run hit max_iter before meeting kkt_tol", file=sys.stderr)
        if args.strict:
            return EXIT_SOLVER
    return EXIT_OK


def cmd_evaluate(args):
    try:
        model, scaler = load_model(args.model)
    except FileNotFoundError as exc:
        raise UsageError(f"cannot open model {args.model}: {exc.strerror}") from None
    d = model.binary_models()[0].d
    ds = load_libsvm(args.data)
    if ds.d > d:
        raise UsageError(f"dimension mismatch: data has {ds.d} features, model {d}")
    if ds.d < d:
        ds = load_libsvm(args.data, n_features=d)
    if scaler is not None:
        ds = apply_scaler(scaler, ds)
    pred = model.predict(ds.X)
    acc = float(np.mean(pred == ds.y))
    labels = sorted(set(model.label_alphabet) | set(ds.y.tolist()))
    col = {lab: i for i, lab in enumerate(labels)}
    conf = np.zeros((len(labels), len(labels)), dtype=np.int64)
    for t, p in zip(ds.y, pred):
        conf[col[int(t)], col[int(p)]] += 1
    print(f"accuracy={100 * acc:.2f}% ({int((pred == ds.y).sum())}/{ds.n})")
    print("confusion (rows = true, columns = predicted)")
    width = max(6, max(len(str(lab)) for lab in labels) + 1)
    print(" " * width + "".join(f"{lab:>{width}}" for lab in labels))
    for lab, row in zip(labels, conf):
        print(f"{lab:>{width}}" + "".join(f"{v:>{width}}" for v in row))
    return EXIT_OK


def cmd_grid(args):
    strategy = _strategy(args.strategy)
    train, test, _ = bench.prepare(args.data, args.test_file, SplitConfig(args.train_fraction, args.seed))
    report = grid_search(train, test, _grid_cfg(args, strategy), solver_defaults=_solver(args))
    text = report.to_csv()
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    rec = report.best_record
    print(
        f"best: gamma={_fmt_exp(rec.gamma_exp)} C={_fmt_exp(rec.cost_exp)} accuracy={100 * rec.accuracy:.2f}%"
        f" ({len(report.records)} cells, {len(report.failures)} failed)",
        file=sys.stderr,
    )
    return EXIT_OK


def cmd_bench(args):
    strategies = [_strategy(s) for s in args.strategies.split(",") if s]
    grid = _grid_cfg(args, strategies[0]) if args.grid else None
    rows = bench.run_bench(
        args.data, strategies, args.seed, args.gamma_exp, args.cost_exp, grid, args.train_fraction, _solver(args)
    )
    text = bench.rows_to_csv(rows)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    for r in rows:
        print(
            f"{r.dataset:>12} {r.strategy:>4} gamma={_fmt_exp(r.gamma_exp):>5} C={_fmt_exp(r.cost_exp):>5} "
            f"acc={100 * r.accuracy:6.2f}% train_s={r.train_seconds:.4f} test_s={r.test_seconds:.4f} "
            f"trained={r.classifiers_trained} worst_evals={r.worst_path_evals} {r.status}",
            file=sys.stderr,
        )
    return EXIT_OK


def cmd_synth(args):
    ds = synth_blobs(args.classes, args.per_class, args.dim, args.spread, args.seed, args.spacing)
    save_libsvm(ds, args.out)
    print(f"wrote {ds.n} instances, {ds.n_classes} classes, d={ds.d} to {args.out}")
    return EXIT_OK


def cmd_counts(args):
    print("N,cbts_train,ovo_train,ova_train,cbts_eval,ovo_eval,ova_eval")
    for n in args.n:
        c = [classifier_count(s, n) for s in STRATEGIES]
        print(f"{n},{c[0][0]},{c[1][0]},{c[2][0]},{c[0][1]},{c[1][1]},{c[2][1]}")
    return EXIT_OK


def _common(p, split=True):
    p.add_argument("--seed", type=int, default=0, help="single source of randomness (split, k-means)")
    p.add_argument("--kkt-tol", type=float, default=1e-3)
    if split:
        p.add_argument("--train-fraction", type=float, default=2.0 / 3.0)
    p.add_argument("--grid-step", type=int, default=2)
    p.add_argument("--gamma-range", type=int, nargs=2, default=(-10, 4), metavar=("LO", "HI"))
    p.add_argument("--cost-range", type=int, nargs=2, default=(-2, 12), metavar=("LO", "HI"))


def build_parser():
    parser = argparse.ArgumentParser(prog="treesvm", description="Multiclass kernel SVMs: CBTS tree, OVO, OVA.")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="train one model, report hold-out accuracy")
    p.add_argument("data")
    p.add_argument("--strategy", default="cbts")
    p.add_argument("--gamma-exp", type=int, default=0)
    p.add_argument("--cost-exp", type=int, default=0)
    p.add_argument("--test-file")
    p.add_argument("--grid", action="store_true", help="pick (gamma, C) by grid search first")
    p.add_argument("--grid-out", help="write the grid report CSV here")
    p.add_argument("--out", help="model directory")
    p.add_argument("--strict", action="store_true", help="exit 3 if any SMO run did not converge")
    _common(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("evaluate", help="score a saved model on a LIBSVM file")
    p.add_argument("model")
    p.add_argument("data")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("grid", help="grid search, CSV report")
    p.add_argument("data")
    p.add_argument("--strategy", default="cbts")
    p.add_argument("--test-file")
    p.add_argument("--out")
    _common(p)
    p.set_defaults(func=cmd_grid)

    p = sub.add_parser("bench", help="compare strategies across datasets")
    p.add_argument("data", nargs="+")
    p.add_argument("--strategies", default=",".join(STRATEGIES))
    p.add_argument("--gamma-exp", type=int, default=0)
    p.add_argument("--cost-exp", type=int, default=0)
    p.add_argument("--grid", action="store_true")
    p.add_argument("--out")
    _common(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("synth", help="write Gaussian blobs as LIBSVM text")
    p.add_argument("--classes", type=int, default=6)
    p.add_argument("--per-class", type=int, default=5000)
    p.add_argument("--dim", type=int, default=5)
    p.add_argument("--spread", type=float, default=0.5)
    p.add_argument("--spacing", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("counts", help="classifier counts per strategy")
    p.add_argument("n", type=int, nargs="+")
    p.set_defaults(func=cmd_counts)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (UsageError, ParseError, OSError, ValueError) as exc:
        print(f"treesvm: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
