"""Command-line experiment runner.

Subcommands: `train`, `evaluate`, `average`, `inspect`. Experiments are
described by a JSON config file; every scalar field can be overridden by a
command-line flag of the same name. The report path writes the trace CSV and
report JSON and, unless disabled, renders the matching figures next to them.
"""

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .classifier import average_models, evaluate, train
from .datasets import LabeledDataset, load_cifar10_batches, load_mnist
from .errors import RklsError
from .kernels import Gaussian, Polynomial
from .model_io import (
    deserialize_model,
    emit_report_json,
    emit_trace_csv,
    serialize_model,
)
from .preprocess import (
    GaussianFilter,
    PreprocessSpec,
    SpectralConcat,
    TwoStepNormalize,
)
from .solvers import METHODS, SolverConfig

DEFAULTS = {
    "kernel": "polynomial",
    "degree": 4,
    "sigma": 1.0,
    "gamma": 1e4,
    "method": "mp",
    "block_size": 100,
    "max_iters": 100,
    "seed": 0,
    "stop_tol": 0.0,
    "committee_size": None,
    "eval_every": 1,
    "precision": 32,
    "figures": True,
    "preprocess": [{"step": "two_step_normalize"}],
    "trace_out": "trace.csv",
    "report_out": "report.json",
    "model_out": None,
}


def parse_preprocess(entries):
    steps = []
    for entry in entries:
        name = entry["step"]
        if name == "gaussian_filter":
            steps.append(GaussianFilter(c=float(entry["c"]), side=int(entry["side"])))
        elif name == "two_step_normalize":
            steps.append(TwoStepNormalize())
        elif name == "spectral_concat":
            steps.append(SpectralConcat())
        else:
            raise ValueError(f"unknown preprocess step {name!r}")
    return PreprocessSpec(tuple(steps))


def parse_kernel(cfg):
    if cfg["kernel"] == "polynomial":
        return Polynomial(int(cfg["degree"]))
    if cfg["kernel"] == "gaussian":
        return Gaussian(float(cfg["sigma"]))
    raise ValueError(f"unknown kernel {cfg['kernel']!r}")


def make_synthetic(spec):
    """Well-separated Gaussian blobs; train and test drawn from one stream."""
    n = int(spec["n"])
    m = int(spec["m"])
    k = int(spec["k"])
    n_test = int(spec.get("n_test", 100))
    separation = float(spec.get("separation", 5.0))
    rng = np.random.Generator(np.random.PCG64(int(spec.get("seed", 0))))
    # Orthonormal class directions so every pair of means is `separation` apart.
    basis, _ = np.linalg.qr(rng.standard_normal((m, m)))
    means = basis[:, :k].T * separation / np.sqrt(2.0)

    def draw(count):
        labels = rng.integers(0, k, size=count)
        samples = means[labels] + rng.standard_normal((count, m))
        return LabeledDataset(samples, labels, num_classes=k)

    return draw(n), draw(n_test)


def load_datasets(spec):
    kind = spec["kind"]
    if kind == "synthetic":
        return make_synthetic(spec)
    if kind == "mnist":
        train_ds = load_mnist(spec["train_images"], spec["train_labels"])
        test_ds = load_mnist(spec["test_images"], spec["test_labels"])
        return train_ds, test_ds
    if kind == "cifar10":
        train_ds = load_cifar10_batches(spec["train_batches"])
        test_ds = load_cifar10_batches([spec["test_batch"]])
        return train_ds, test_ds
    raise ValueError(f"unknown dataset kind {kind!r}")


def build_config(args):
    cfg = dict(DEFAULTS)
    if args.config:
        with open(args.config) as f:
            cfg.update(json.load(f))
    for key in DEFAULTS:
        value = getattr(args, key, None)
        if value is not None:
            cfg[key] = value
    if getattr(args, "no_figures", False):
        cfg["figures"] = False
    if "dataset" not in cfg:
        raise ValueError("config must define a dataset")
    return cfg


def solver_config(cfg):
    method = {"matching_pursuit": "mp"}.get(cfg["method"], cfg["method"])
    return SolverConfig(
        method=method,
        block_size=int(cfg["block_size"]),
        max_iters=int(cfg["max_iters"]),
        seed=int(cfg["seed"]),
        stop_tol=float(cfg["stop_tol"]),
        committee_size=None if cfg["committee_size"] is None else int(cfg["committee_size"]),
        eval_every=int(cfg["eval_every"]),
        dtype="float32" if int(cfg["precision"]) == 32 else "float64",
    )


def run_experiment(cfg):
    """Load data, train, evaluate, emit trace/report/model and print eta."""
    train_ds, test_ds = load_datasets(cfg["dataset"])
    kernel = parse_kernel(cfg)
    preprocess = parse_preprocess(cfg["preprocess"])
    scfg = solver_config(cfg)
    model, trace = train(
        train_ds, kernel, float(cfg["gamma"]), preprocess, scfg, eval_data=test_ds
    )
    report = evaluate(model, test_ds)

    trace_path = Path(cfg["trace_out"])
    report_path = Path(cfg["report_out"])
    emit_trace_csv(trace, trace_path)
    emit_report_json(
        report,
        report_path,
        extra={"method": scfg.method, "block_size": scfg.block_size,
               "max_iters": scfg.max_iters, "seed": scfg.seed,
               "gamma": float(cfg["gamma"]), "precision": int(cfg["precision"])},
    )
    if cfg["figures"]:
        from . import figures

        figures.plot_trace(trace, trace_path.with_suffix(".png"),
                           title=f"{scfg.method}, J={scfg.block_size}")
        figures.plot_confusion(report, report_path.with_suffix(".png"),
                               title=f"eta = {100 * report.error_rate:.2f}%")
    if cfg["model_out"]:
        serialize_model(model, cfg["model_out"])
    print(f"eta = {100 * report.error_rate:.4f}%")
    return 0


def cmd_train(args):
    return run_experiment(build_config(args))


def cmd_evaluate(args):
    model = deserialize_model(args.model)
    cfg = build_config(args)
    _, test_ds = load_datasets(cfg["dataset"])
    report = evaluate(model, test_ds)
    report_path = Path(cfg["report_out"])
    emit_report_json(report, report_path)
    if cfg["figures"]:
        from . import figures

        figures.plot_confusion(report, report_path.with_suffix(".png"),
                               title=f"eta = {100 * report.error_rate:.2f}%")
    print(f"eta = {100 * report.error_rate:.4f}%")
    return 0


def cmd_average(args):
    models = [deserialize_model(p) for p in args.models]
    serialize_model(average_models(models), args.out)
    print(f"averaged {len(models)} models -> {args.out}")
    return 0


def cmd_inspect(args):
    model = deserialize_model(args.model)
    n, m = model.train_samples.shape
    info = {
        "kernel": repr(model.kernel),
        "gamma": model.gamma,
        "preprocess": [type(s).__name__ for s in model.preprocess.steps],
        "num_classes": model.num_classes,
        "train_samples": [n, m],
        "raw_dim": model.raw_dim,
        "dtype": str(model.train_samples.dtype),
        "weights_shape": list(model.weights.shape),
    }
    print(json.dumps(info, indent=2))
    return 0


def add_common_flags(p):
    p.add_argument("--config", help="JSON experiment config")
    p.add_argument("--kernel", choices=["polynomial", "gaussian"])
    p.add_argument("--degree", type=int)
    p.add_argument("--sigma", type=float)
    p.add_argument("--gamma", type=float)
    p.add_argument("--method", choices=list(METHODS) + ["matching_pursuit"])
    p.add_argument("--block-size", dest="block_size", type=int)
    p.add_argument("--max-iters", dest="max_iters", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--stop-tol", dest="stop_tol", type=float)
    p.add_argument("--committee-size", dest="committee_size", type=int)
    p.add_argument("--eval-every", dest="eval_every", type=int)
    p.add_argument("--precision", type=int, choices=[32, 64])
    p.add_argument("--trace-out", dest="trace_out")
    p.add_argument("--report-out", dest="report_out")
    p.add_argument("--model-out", dest="model_out")
    p.add_argument("--no-figures", dest="no_figures", action="store_true")


def make_parser():
    parser = argparse.ArgumentParser(
        prog="rkls",
        description="Randomized block solvers for multi-class LS-SVM kernel classifiers",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_train = sub.add_parser("train", help="train a classifier and report test error")
    add_common_flags(p_train)
    p_train.set_defaults(func=cmd_train)

    p_eval = sub.add_parser("evaluate", help="evaluate a stored model on a dataset")
    p_eval.add_argument("--model", required=True)
    add_common_flags(p_eval)
    p_eval.set_defaults(func=cmd_evaluate)

    p_avg = sub.add_parser("average", help="average the weights of stored models")
    p_avg.add_argument("models", nargs="+")
    p_avg.add_argument("--out", required=True)
    p_avg.set_defaults(func=cmd_average)

    p_ins = sub.add_parser("inspect", help="print model metadata")
    p_ins.add_argument("model")
    p_ins.set_defaults(func=cmd_inspect)
    return parser


def main(argv=None):
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except (RklsError, OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
