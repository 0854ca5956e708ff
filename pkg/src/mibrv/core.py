"""Bag-level data model: instances grouped into labeled bags, bags into datasets.

An instance is one row of a bag's feature matrix; instances have no
identity of their own and instance order carries no meaning (every
distance operator is invariant to it). Labels attach to bags only.
All types are immutable after construction and safe to share across
threads without synchronization.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from typing import Iterable, Iterator

import numpy as np

from .errors import (
    DimMismatch,
    DuplicateBagId,
    EmptyBag,
    EmptyDataset,
    NonFiniteFeature,
)


class BagLabel(IntEnum):
    """Binary bag label; +1 and -1 are the only admissible values."""

    POSITIVE = 1
    NEGATIVE = -1


@dataclass(frozen=True, eq=False)
class Bag:
    """A named collection of instances with an optional binary label.

    features holds one instance per row, shape (n_instances, dim),
    float64 and read-only after construction.
    """

    id: str
    features: np.ndarray
    label: BagLabel | None = None

    def __post_init__(self):
        feats = np.ascontiguousarray(self.features, dtype=np.float64)
        if feats.ndim != 2:
            raise ValueError(f"bag {self.id!r}: features must be 2-d (instances x dim)")
        if feats.shape[1] < 1:
            raise ValueError(f"bag {self.id!r}: instance dimensionality must be >= 1")
        feats.setflags(write=False)
        object.__setattr__(self, "features", feats)
        if self.label is not None:
            object.__setattr__(self, "label", BagLabel(self.label))

    @property
    def n_instances(self) -> int:
        return self.features.shape[0]

    @property
    def dim(self) -> int:
        return self.features.shape[1]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Bag):
            return NotImplemented
        return (
            self.id == other.id
            and self.label == other.label
            and self.features.shape == other.features.shape
            and np.array_equal(self.features, other.features)
        )


@dataclass(frozen=True, eq=False)
class Dataset:
    """An ordered collection of bags that share one dimensionality."""

    bags: tuple[Bag, ...]
    dim: int

    def __post_init__(self):
        object.__setattr__(self, "bags", tuple(self.bags))

    @classmethod
    def from_bags(cls, bags: Iterable[Bag]) -> "Dataset":
        bags = tuple(bags)
        if not bags:
            raise EmptyDataset("a dataset needs at least one bag")
        return cls(bags=bags, dim=bags[0].dim)

    def __len__(self) -> int:
        return len(self.bags)

    def __iter__(self) -> Iterator[Bag]:
        return iter(self.bags)

    def ids(self) -> tuple[str, ...]:
        return tuple(bag.id for bag in self.bags)

    def labels(self) -> tuple[BagLabel | None, ...]:
        return tuple(bag.label for bag in self.bags)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Dataset):
            return NotImplemented
        return self.dim == other.dim and self.bags == other.bags


def validate_dataset(ds: Dataset) -> Dataset:
    """Check every dataset invariant and return the dataset unchanged.

    Raises on the first violation found, naming the offending bag id.
    Validating an already valid dataset is a no-op, so the check is
    idempotent.
    """
    if len(ds.bags) < 1:
        raise EmptyDataset("a dataset needs at least one bag")
    seen: set[str] = set()
    for bag in ds.bags:
        if bag.id in seen:
            raise DuplicateBagId(f"bag id {bag.id!r} appears more than once")
        seen.add(bag.id)
        if bag.n_instances < 1:
            raise EmptyBag(f"bag {bag.id!r} has no instances")
        if bag.dim != ds.dim:
            raise DimMismatch(
                f"bag {bag.id!r} has dimensionality {bag.dim}, dataset has {ds.dim}"
            )
        if not np.isfinite(bag.features).all():
            raise NonFiniteFeature(f"bag {bag.id!r} contains NaN or infinite features")
    return ds
