"""Repeated stratified k-fold cross-validation over the full pipeline.

Per repeat and fold: the training fold's bags become the reference set,
train and test bags are featurized against it, a linear SVM is fit on
the training vectors and scored on the held-out fold. Test bags never
enter the reference set and never influence C selection; anything else
would leak. The reported standard deviation is the population standard
deviation over all repeats x folds fold-level accuracies.

When a C grid is given, C is chosen per outer fold by nested
cross-validation on that fold's training bags (up to 5 inner folds,
honoring stratification); vectors are featurized once per inner split
and reused for every grid point. Ties prefer the earlier grid entry.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .brv import ReferenceSet, featurize_all, featurizer_fingerprint
from .core import Bag, BagLabel, Dataset, validate_dataset
from .dist import DistParams
from .errors import (
    EmptyInput,
    LengthMismatch,
    SingleClassFold,
    TooFewBags,
    TooFewPerClass,
    UnlabeledBag,
)
from . import svm

__all__ = [
    "CvConfig",
    "CvReport",
    "split_folds",
    "run_cv",
    "accuracy",
    "format_report",
    "format_fold_records",
]

_INNER_FOLDS = 5
_INNER_SEED_TAG = 0x1CF0
_REPORT_PHASES = ("featurize", "train", "score", "total")


def _u64(seed: int) -> int:
    # SeedSequence rejects negative entropy; map signed 64-bit seeds onto unsigned
    return seed % (1 << 64)


@dataclass(frozen=True)
class CvConfig:
    folds: int = 10
    repeats: int = 10
    seed: int = 0
    stratified: bool = True
    params: DistParams = field(default_factory=DistParams)
    svm: svm.SvmConfig = field(default_factory=svm.SvmConfig)
    c_grid: tuple[float, ...] | None = None
    normalize: str = "block"

    def __post_init__(self):
        if self.folds < 2:
            raise ValueError(f"folds must be >= 2, got {self.folds!r}")
        if self.repeats < 1:
            raise ValueError(f"repeats must be >= 1, got {self.repeats!r}")
        if self.c_grid is not None:
            grid = tuple(float(c) for c in self.c_grid)
            if not grid or any(c <= 0 for c in grid):
                raise ValueError(f"c_grid must be nonempty positive reals, got {self.c_grid!r}")
            object.__setattr__(self, "c_grid", grid)


@dataclass
class CvReport:
    """Results of one run_cv call; wall_time is the only non-deterministic field."""

    per_fold_accuracy: np.ndarray  # (repeats, folds)
    mean_accuracy: float
    std_accuracy: float
    config: CvConfig
    n_bags: int
    dim: int
    n_test: np.ndarray            # (repeats, folds) held-out bag counts
    fold_seconds: np.ndarray      # (repeats, folds)
    wall_time: dict[str, float]
    selected_c: np.ndarray | None = None  # (repeats, folds) when c_grid is used
    fold_reference_ids: list[tuple[str, ...]] | None = None


def accuracy(predictions: Sequence[BagLabel], truth: Sequence[BagLabel]) -> float:
    """Fraction of exact label matches."""
    predictions = list(predictions)
    truth = list(truth)
    if len(predictions) != len(truth):
        raise LengthMismatch(
            f"{len(predictions)} predictions but {len(truth)} true labels"
        )
    if not predictions:
        raise EmptyInput("accuracy of an empty prediction list is undefined")
    hits = sum(1 for p, t in zip(predictions, truth) if p == t)
    return hits / len(predictions)


def _partition_ids(ids: Sequence[str], labels: Sequence[BagLabel], folds: int,
                   stratified: bool, rng: np.random.Generator) -> list[list[str]]:
    """Assign every id to exactly one test fold. Stratified mode splits each
    class separately so per-fold class counts differ by at most one."""
    test_sets: list[list[str]] = [[] for _ in range(folds)]
    if stratified:
        groups = [
            [i for i, lab in zip(ids, labels) if lab == BagLabel.POSITIVE],
            [i for i, lab in zip(ids, labels) if lab == BagLabel.NEGATIVE],
        ]
    else:
        groups = [list(ids)]
    for group in groups:
        order = rng.permutation(len(group))
        shuffled = [group[j] for j in order]
        for fold_idx, chunk in enumerate(np.array_split(shuffled, folds)):
            test_sets[fold_idx].extend(chunk.tolist())
    return test_sets


def split_folds(ds: Dataset, cfg: CvConfig, repeat_index: int
                ) -> list[tuple[tuple[str, ...], tuple[str, ...]]]:
    """Deterministic (train ids, test ids) partition for one repeat.

    A pure function of (cfg.seed, repeat_index); different repeats get
    different shuffles.
    """
    ids = ds.ids()
    labels = ds.labels()
    if cfg.folds > len(ids):
        raise TooFewBags(f"{cfg.folds} folds requested but only {len(ids)} bags")
    if cfg.stratified:
        if any(lab is None for lab in labels):
            raise UnlabeledBag("stratified splitting needs every bag labeled")
        n_pos = sum(1 for lab in labels if lab == BagLabel.POSITIVE)
        n_neg = len(labels) - n_pos
        if cfg.folds > min(n_pos, n_neg):
            raise TooFewPerClass(
                f"{cfg.folds} stratified folds but class counts are {n_pos}/{n_neg}"
            )
    rng = np.random.default_rng(np.random.SeedSequence((_u64(cfg.seed), repeat_index)))
    test_sets = _partition_ids(ids, labels, cfg.folds, cfg.stratified, rng)
    splits = []
    for test in test_sets:
        test_set = set(test)
        train = tuple(i for i in ids if i not in test_set)
        splits.append((train, tuple(test)))
    return splits


def _check_two_classes(bags: Sequence[Bag]) -> None:
    labels = {bag.label for bag in bags}
    if BagLabel.POSITIVE not in labels or BagLabel.NEGATIVE not in labels:
        raise SingleClassFold("a training fold contains only one class")


def _inner_folds(bags: Sequence[Bag], stratified: bool) -> int:
    if stratified:
        n_pos = sum(1 for bag in bags if bag.label == BagLabel.POSITIVE)
        n_neg = len(bags) - n_pos
        return min(_INNER_FOLDS, n_pos, n_neg)
    return min(_INNER_FOLDS, len(bags))


def _select_c(train_bags: Sequence[Bag], cfg: CvConfig, repeat_index: int,
              fold_index: int, threads: int | None) -> float:
    """Pick the grid C with the best nested-CV accuracy on this training fold."""
    grid = cfg.c_grid
    folds = _inner_folds(train_bags, cfg.stratified)
    if folds < 2:
        return grid[0]
    rng = np.random.default_rng(
        np.random.SeedSequence((_u64(cfg.seed), _INNER_SEED_TAG, repeat_index, fold_index))
    )
    ids = [bag.id for bag in train_bags]
    labels = [bag.label for bag in train_bags]
    by_id = {bag.id: bag for bag in train_bags}
    test_sets = _partition_ids(ids, labels, folds, cfg.stratified, rng)
    scores = np.zeros(len(grid))
    counted = 0
    for test_ids in test_sets:
        test_set = set(test_ids)
        fit_bags = [by_id[i] for i in ids if i not in test_set]
        val_bags = [by_id[i] for i in test_ids]
        fit_labels = {bag.label for bag in fit_bags}
        if len(fit_labels) < 2:
            continue
        refs = ReferenceSet(fit_bags)
        x_fit = np.stack([v.values for v in
                          featurize_all(fit_bags, refs, cfg.params, cfg.normalize, threads)])
        x_val = np.stack([v.values for v in
                          featurize_all(val_bags, refs, cfg.params, cfg.normalize, threads)])
        y_fit = [bag.label for bag in fit_bags]
        y_val = [bag.label for bag in val_bags]
        for gi, c in enumerate(grid):
            model = svm.train(x_fit, y_fit, replace(cfg.svm, c=c))
            scores[gi] += accuracy(svm.predict_many(model, x_val), y_val)
        counted += 1
    if counted == 0:
        return grid[0]
    return grid[int(np.argmax(scores))]  # argmax takes the first maximum: earlier C wins ties


def run_cv(ds: Dataset, cfg: CvConfig, threads: int | None = None) -> CvReport:
    """Full repeated cross-validation; deterministic apart from wall_time."""
    validate_dataset(ds)
    if any(bag.label is None for bag in ds.bags):
        raise UnlabeledBag("cross-validation needs every bag labeled")
    by_id = {bag.id: bag for bag in ds.bags}
    acc = np.zeros((cfg.repeats, cfg.folds))
    n_test = np.zeros((cfg.repeats, cfg.folds), dtype=np.int64)
    fold_seconds = np.zeros((cfg.repeats, cfg.folds))
    selected_c = np.zeros((cfg.repeats, cfg.folds)) if cfg.c_grid else None
    ref_ids: list[tuple[str, ...]] = []
    times = {phase: 0.0 for phase in _REPORT_PHASES}
    t_start = time.perf_counter()
    for r in range(cfg.repeats):
        for f, (train_ids, test_ids) in enumerate(split_folds(ds, cfg, r)):
            t_fold = time.perf_counter()
            assert set(train_ids).isdisjoint(test_ids)
            train_bags = [by_id[i] for i in train_ids]
            test_bags = [by_id[i] for i in test_ids]
            _check_two_classes(train_bags)
            c = cfg.svm.c
            if cfg.c_grid:
                c = _select_c(train_bags, cfg, r, f, threads)
                selected_c[r, f] = c
            t0 = time.perf_counter()
            refs = ReferenceSet(train_bags)
            ref_ids.append(refs.ids())
            x_train = np.stack([v.values for v in
                                featurize_all(train_bags, refs, cfg.params, cfg.normalize, threads)])
            x_test = np.stack([v.values for v in
                               featurize_all(test_bags, refs, cfg.params, cfg.normalize, threads)])
            t1 = time.perf_counter()
            model = svm.train(
                x_train, [bag.label for bag in train_bags], replace(cfg.svm, c=c),
                ref_fingerprint=featurizer_fingerprint(refs, cfg.params, cfg.normalize),
                params=cfg.params, normalize=cfg.normalize,
            )
            t2 = time.perf_counter()
            preds = svm.predict_many(model, x_test)
            acc[r, f] = accuracy(preds, [bag.label for bag in test_bags])
            n_test[r, f] = len(test_bags)
            t3 = time.perf_counter()
            times["featurize"] += t1 - t0
            times["train"] += t2 - t1
            times["score"] += t3 - t2
            fold_seconds[r, f] = t3 - t_fold
    times["total"] = time.perf_counter() - t_start
    return CvReport(
        per_fold_accuracy=acc,
        mean_accuracy=float(acc.mean()),
        std_accuracy=float(acc.std()),
        config=cfg,
        n_bags=len(ds),
        dim=ds.dim,
        n_test=n_test,
        fold_seconds=fold_seconds,
        wall_time=times,
        selected_c=selected_c,
        fold_reference_ids=ref_ids,
    )


def format_report(report: CvReport) -> str:
    """Deterministic text report: key/value lines plus the fold table.

    Timing lives in report.wall_time and is deliberately left out so
    identical runs produce identical bytes.
    """
    cfg = report.config
    lines = [
        f"bags: {report.n_bags}",
        f"dim: {report.dim}",
        f"folds: {cfg.folds}",
        f"repeats: {cfg.repeats}",
        f"seed: {cfg.seed}",
        f"stratified: {'yes' if cfg.stratified else 'no'}",
        f"k: {cfg.params.k}",
        f"ops: {','.join(str(op.value) for op in cfg.params.operators)}",
        f"normalize: {cfg.normalize}",
        f"c: {cfg.svm.c:g}",
        f"c_grid: {','.join(f'{c:g}' for c in cfg.c_grid) if cfg.c_grid else '-'}",
        f"mean_accuracy: {report.mean_accuracy:.6f}",
        f"std_accuracy: {report.std_accuracy:.6f}",
        "",
        "fold accuracies (rows = repeats):",
    ]
    for r in range(cfg.repeats):
        row = " ".join(f"{v:.4f}" for v in report.per_fold_accuracy[r])
        lines.append(f"  r{r:02d}  {row}")
    return "\n".join(lines) + "\n"


def format_fold_records(report: CvReport) -> str:
    """One machine-readable line per fold: repeat fold accuracy n_test seconds.

    The seconds column varies run to run; everything else is
    deterministic.
    """
    lines = []
    for r in range(report.config.repeats):
        for f in range(report.config.folds):
            lines.append(
                f"{r} {f} {report.per_fold_accuracy[r, f]:.6f} "
                f"{report.n_test[r, f]} {report.fold_seconds[r, f]:.4f}"
            )
    return "\n".join(lines) + "\n"
