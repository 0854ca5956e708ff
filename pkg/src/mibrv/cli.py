"""Command-line interface: featurize, train, predict, cv and sweep.

Reports go to stdout, diagnostics to stderr. Exit codes: 0 success,
1 internal error, 2 usage or input error. Runs with identical flags
and --seed are byte-reproducible on stdout (timings go to stderr).
"""

from __future__ import annotations

import argparse
import os
import sys
import traceback

from . import io as mio
from . import svm
from ._kernels import backend_name
from .brv import ReferenceSet, featurize_all, featurizer_fingerprint
from .core import Dataset
from .dist import DistParams, OperatorId
from .errors import FingerprintMismatch, MibrvError, UnlabeledBag
from .eval import CvConfig, format_fold_records, format_report, run_cv


def _ops_arg(text: str) -> tuple[OperatorId, ...]:
    try:
        ops = tuple(OperatorId(int(tok)) for tok in text.split(",") if tok.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"operators must be a comma list of 1..6, got {text!r}"
        ) from None
    if not ops:
        raise argparse.ArgumentTypeError("operator list must not be empty")
    if len(set(ops)) != len(ops):
        raise argparse.ArgumentTypeError(f"duplicate operators in {text!r}")
    return ops


def _int_list_arg(text: str) -> tuple[int, ...]:
    try:
        values = tuple(int(tok) for tok in text.split(",") if tok.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma list of integers, got {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("list must not be empty")
    return values


def _float_list_arg(text: str) -> tuple[float, ...]:
    try:
        values = tuple(float(tok) for tok in text.split(",") if tok.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma list of numbers, got {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("list must not be empty")
    return values


def _add_dist_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--k", type=int, default=2, metavar="K",
                   help="neighbors averaged per instance (default 2)")
    p.add_argument("--ops", type=_ops_arg, default=tuple(OperatorId), metavar="LIST",
                   help="comma list of operator numbers 1..6 (default all six)")
    p.add_argument("--normalize", choices=("block", "global"), default="block",
                   help="scale each operator block to unit norm, or the whole vector")


def _add_svm_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--c", type=float, default=1.0, help="SVM cost parameter (default 1)")
    p.add_argument("--tolerance", type=float, default=0.1,
                   help="solver stopping tolerance (default 0.1)")
    p.add_argument("--max-passes", type=int, default=1000,
                   help="solver pass limit (default 1000)")
    p.add_argument("--bias-scale", type=float, default=1.0,
                   help="appended bias feature value, 0 disables the bias (default 1)")


def _add_common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1, metavar="N",
                   help="parallel featurization workers (default: all cores)")


def _dist_params(args) -> DistParams:
    return DistParams(k=args.k, operators=args.ops)


def _svm_config(args) -> svm.SvmConfig:
    return svm.SvmConfig(
        c=args.c, tolerance=args.tolerance, max_passes=args.max_passes,
        bias_scale=args.bias_scale, seed=args.seed,
    )


def _load_refs(ds: Dataset, refs_arg: str) -> ReferenceSet:
    if refs_arg == "self":
        return ReferenceSet.from_dataset(ds)
    return ReferenceSet.from_dataset(mio.parse_dataset(refs_arg))


def _out_stream(path):
    if path is None or path == "-":
        return sys.stdout, False
    return open(path, "w", encoding="utf-8"), True


def cmd_featurize(args) -> int:
    ds = mio.parse_dataset(args.dataset)
    refs = _load_refs(ds, args.refs)
    params = _dist_params(args)
    vectors = featurize_all(ds, refs, params, args.normalize, threads=args.threads)
    stream, owned = _out_stream(args.output)
    try:
        mio.export_brv(vectors, [bag.label for bag in ds.bags], stream)
    finally:
        if owned:
            stream.close()
    return 0


def cmd_train(args) -> int:
    ds = mio.parse_dataset(args.dataset)
    if any(bag.label is None for bag in ds.bags):
        raise UnlabeledBag("training needs every bag labeled")
    refs = ReferenceSet.from_dataset(ds)
    params = _dist_params(args)
    vectors = featurize_all(ds, refs, params, args.normalize, threads=args.threads)
    model = svm.train(
        [v.values for v in vectors],
        [bag.label for bag in ds.bags],
        _svm_config(args),
        ref_fingerprint=featurizer_fingerprint(refs, params, args.normalize),
        params=params,
        normalize=args.normalize,
    )
    mio.save_model(model, args.output)
    print(f"wrote model for {len(ds)} bags (dim {model.dim}) to {args.output}",
          file=sys.stderr)
    return 0


def cmd_predict(args) -> int:
    model = mio.load_model(args.model)
    if model.params is None or not model.ref_fingerprint:
        raise FingerprintMismatch("model carries no featurizer metadata")
    ds = mio.parse_dataset(args.dataset)
    refs = _load_refs(ds, args.refs)
    fingerprint = featurizer_fingerprint(refs, model.params, model.normalize)
    if fingerprint != model.ref_fingerprint:
        raise FingerprintMismatch(
            "reference set does not match the one this model was trained with"
        )
    vectors = featurize_all(ds, refs, model.params, model.normalize, threads=args.threads)
    stream, owned = _out_stream(args.output)
    try:
        for bag, vec in zip(ds.bags, vectors):
            value = svm.decision_value(model, vec.values)
            label = int(svm.predict(model, vec.values))
            stream.write(f"{bag.id} {label} {value!r}\n")
    finally:
        if owned:
            stream.close()
    return 0


def _cv_config(args, k: int | None = None, ops=None, c: float | None = None,
               c_grid=None) -> CvConfig:
    params = DistParams(k=args.k if k is None else k,
                        operators=args.ops if ops is None else ops)
    svm_cfg = svm.SvmConfig(
        c=args.c if c is None else c, tolerance=args.tolerance,
        max_passes=args.max_passes, bias_scale=args.bias_scale, seed=args.seed,
    )
    return CvConfig(
        folds=args.folds, repeats=args.repeats, seed=args.seed,
        stratified=args.stratified, params=params, svm=svm_cfg,
        c_grid=c_grid, normalize=args.normalize,
    )


def cmd_cv(args) -> int:
    ds = mio.parse_dataset(args.dataset)
    report = run_cv(ds, _cv_config(args, c_grid=args.c_grid), threads=args.threads)
    sys.stdout.write(format_report(report))
    if args.per_fold:
        sys.stdout.write(format_fold_records(report))
    wt = report.wall_time
    print(
        f"timing: featurize {wt['featurize']:.2f}s train {wt['train']:.2f}s "
        f"score {wt['score']:.2f}s total {wt['total']:.2f}s "
        f"[{backend_name()} kernels]",
        file=sys.stderr,
    )
    return 0


def cmd_sweep(args) -> int:
    ds = mio.parse_dataset(args.dataset)
    subsets = args.ops_list if args.ops_list else [tuple(OperatorId)]
    c_values = args.c_grid if args.c_grid else (args.c,)
    for k in args.k_list:
        for ops in subsets:
            for c in c_values:
                cfg = _cv_config(args, k=k, ops=ops, c=c)
                report = run_cv(ds, cfg, threads=args.threads)
                ops_text = ",".join(str(op.value) for op in ops)
                print(
                    f"k={k} ops={ops_text} C={c:g}  "
                    f"{report.mean_accuracy:.6f} ± {report.std_accuracy:.6f}"
                )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mibrv",
        description="Bag-level classification via reference-bag distance vectors.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("featurize", help="write sparse reference vectors for a dataset")
    p.add_argument("dataset", help="dataset file")
    p.add_argument("--refs", default="self", metavar="PATH|self",
                   help="reference dataset file, or `self` to use the input (default)")
    p.add_argument("-o", "--output", default=None, help="output file (default stdout)")
    _add_dist_flags(p)
    _add_common_flags(p)
    p.set_defaults(func=cmd_featurize)

    p = sub.add_parser("train", help="train a model on a labeled dataset")
    p.add_argument("dataset", help="labeled dataset file (also the reference set)")
    p.add_argument("-o", "--output", required=True, help="model file to write")
    _add_dist_flags(p)
    _add_svm_flags(p)
    _add_common_flags(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("predict", help="predict bag labels with a trained model")
    p.add_argument("model", help="model file")
    p.add_argument("dataset", help="dataset file to predict")
    p.add_argument("--refs", required=True, metavar="PATH|self",
                   help="reference dataset the model was trained with")
    p.add_argument("-o", "--output", default=None, help="output file (default stdout)")
    _add_common_flags(p)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("cv", help="repeated stratified cross-validation")
    p.add_argument("dataset", help="labeled dataset file")
    p.add_argument("--folds", type=int, default=10)
    p.add_argument("--repeats", type=int, default=10)
    p.add_argument("--stratified", action=argparse.BooleanOptionalAction, default=True,
                   help="preserve class balance across folds (default on)")
    p.add_argument("--c-grid", type=_float_list_arg, default=None, metavar="LIST",
                   help="nested-validation grid for C, e.g. 0.03125,0.5,8")
    p.add_argument("--per-fold", action="store_true",
                   help="append per-fold records (includes timing, so not byte-stable)")
    _add_dist_flags(p)
    _add_svm_flags(p)
    _add_common_flags(p)
    p.set_defaults(func=cmd_cv)

    p = sub.add_parser("sweep", help="cross-validate a grid of k / operator subsets / C")
    p.add_argument("dataset", help="labeled dataset file")
    p.add_argument("--k", dest="k_list", type=_int_list_arg, default=(2,), metavar="LIST",
                   help="comma list of k values (default 2)")
    p.add_argument("--ops", dest="ops_list", type=_ops_arg, action="append", default=None,
                   metavar="LIST", help="operator subset; repeat the flag for several subsets")
    p.add_argument("--c-grid", type=_float_list_arg, default=None, metavar="LIST",
                   help="comma list of C values, one sweep row each")
    p.add_argument("--folds", type=int, default=10)
    p.add_argument("--repeats", type=int, default=10)
    p.add_argument("--stratified", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--normalize", choices=("block", "global"), default="block")
    _add_svm_flags(p)
    _add_common_flags(p)
    p.set_defaults(func=cmd_sweep)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (MibrvError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception:
        traceback.print_exc()
        return 1


if __name__ == "__main__":
    sys.exit(main())
