"""Set-to-set distances between bags.

The six operators pair an outer aggregator over the query bag's
instances (min, mean, max) with an inner per-instance statistic: the
mean of the k smallest (nearest) or k largest (farthest) distances to
the reference bag's instances. With k=1 the inner statistic reduces to
a plain min or max; the classic directed Hausdorff distance is operator
3 (outer max, inner min) at k=1.

k is clamped per pair to the reference bag's instance count, so one
global k works across bags of varying size. Ties among equal distances
need no tie-breaking rule: the mean over a multiset of selected values
does not depend on which of several equal elements was picked.

All distances are computed in double precision. Hot loops live in
mibrv._kernels (compiled extension when built, NumPy/SciPy otherwise);
oracle_bar_operator is a deliberately naive pure-Python reference for
cross-checking the fast path on small bags.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import IntEnum

import numpy as np

from . import _kernels
from .core import Bag
from .errors import DimMismatch, EmptyBag

__all__ = [
    "OperatorId",
    "DistParams",
    "euclidean",
    "cross_distance_matrix",
    "directed_hausdorff",
    "symmetric_hausdorff",
    "operator_table",
    "bar_operator",
    "oracle_bar_operator",
]


class OperatorId(IntEnum):
    """The six bag-distance operators, numbered 1..6.

    The name's first part is the outer aggregator over the query bag's
    instances, the second the inner statistic (nearest vs. farthest
    neighbors in the reference bag).
    """

    MIN_MIN = 1
    MEAN_MIN = 2
    MAX_MIN = 3
    MIN_MAX = 4
    MEAN_MAX = 5
    MAX_MAX = 6

    @property
    def outer(self) -> str:
        return ("min", "mean", "max")[(self.value - 1) % 3]

    @property
    def inner(self) -> str:
        return "min" if self.value <= 3 else "max"


ALL_OPERATORS = tuple(OperatorId)


@dataclass(frozen=True)
class DistParams:
    """Distance configuration: neighbor count k and the operator subset.

    Operator order is preserved; it fixes the block order of the bag
    reference vector.
    """

    k: int = 2
    operators: tuple[OperatorId, ...] = field(default_factory=lambda: ALL_OPERATORS)

    def __post_init__(self):
        if not isinstance(self.k, int) or self.k < 1:
            raise ValueError(f"k must be a positive integer, got {self.k!r}")
        ops = tuple(OperatorId(op) for op in self.operators)
        if not ops:
            raise ValueError("at least one operator is required")
        if len(set(ops)) != len(ops):
            raise ValueError(f"duplicate operators in {ops}")
        object.__setattr__(self, "operators", ops)


def _check_pair(a: Bag, b: Bag) -> None:
    if a.dim != b.dim:
        raise DimMismatch(
            f"bags {a.id!r} (dim {a.dim}) and {b.id!r} (dim {b.dim}) differ in dimensionality"
        )
    if a.n_instances < 1:
        raise EmptyBag(f"bag {a.id!r} has no instances")
    if b.n_instances < 1:
        raise EmptyBag(f"bag {b.id!r} has no instances")


def _check_k(k: int) -> int:
    if not isinstance(k, (int, np.integer)) or k < 1:
        raise ValueError(f"k must be a positive integer, got {k!r}")
    return int(k)


def euclidean(a, b) -> float:
    """Euclidean distance between two instances (1-d feature vectors)."""
    a = np.ascontiguousarray(a, dtype=np.float64)
    b = np.ascontiguousarray(b, dtype=np.float64)
    if a.ndim != 1 or b.ndim != 1:
        raise ValueError("euclidean expects 1-d instance vectors")
    if a.shape[0] != b.shape[0]:
        raise DimMismatch(f"instance lengths differ: {a.shape[0]} vs {b.shape[0]}")
    return float(_kernels.cross_distance_matrix(a[None, :], b[None, :])[0, 0])


def cross_distance_matrix(a: Bag, b: Bag) -> np.ndarray:
    """Matrix of all instance-to-instance distances, shape (|a|, |b|)."""
    _check_pair(a, b)
    return _kernels.cross_distance_matrix(a.features, b.features)


def operator_table(a: Bag, b: Bag, k: int = 1) -> np.ndarray:
    """All six operator values for one pair in one pass, indexed by number - 1.

    Computing the full table costs barely more than a single operator
    because the distance matrix dominates; callers wanting several
    operators should use this instead of repeated bar_operator calls.
    """
    _check_pair(a, b)
    return _kernels.operator_table(a.features, b.features, _check_k(k))


def bar_operator(op: OperatorId | int, k: int, a: Bag, b: Bag) -> float:
    """One operator value for the pair (a, b) with k-neighbor averaging."""
    op = OperatorId(op)
    return float(operator_table(a, b, k)[op.value - 1])


def directed_hausdorff(a: Bag, b: Bag) -> float:
    """max over a's instances of the distance to the nearest instance of b.

    Identical to bar_operator(OperatorId.MAX_MIN, 1, a, b).
    """
    return bar_operator(OperatorId.MAX_MIN, 1, a, b)


def symmetric_hausdorff(a: Bag, b: Bag) -> float:
    """max of the two directed Hausdorff distances; symmetric in a, b.

    Provided for completeness; the reference-vector pipeline uses only
    the directed operators.
    """
    return max(directed_hausdorff(a, b), directed_hausdorff(b, a))


def oracle_bar_operator(op: OperatorId | int, k: int, a: Bag, b: Bag) -> float:
    """Naive reference implementation of bar_operator for small bags.

    Materializes every pairwise distance in pure Python, fully sorts
    each row, averages the prefix (nearest) or suffix (farthest) and
    aggregates. Slow on purpose: it shares no code with the fast path.
    """
    op = OperatorId(op)
    k = _check_k(k)
    _check_pair(a, b)
    a_rows = a.features.tolist()
    b_rows = b.features.tolist()
    per_instance = []
    for p in a_rows:
        dists = sorted(
            math.sqrt(sum((pi - qi) ** 2 for pi, qi in zip(p, q))) for q in b_rows
        )
        kk = min(k, len(dists))
        chunk = dists[:kk] if op.inner == "min" else dists[len(dists) - kk:]
        per_instance.append(sum(chunk) / kk)
    if op.outer == "min":
        return min(per_instance)
    if op.outer == "max":
        return max(per_instance)
    return sum(per_instance) / len(per_instance)
