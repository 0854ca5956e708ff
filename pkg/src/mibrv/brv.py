"""Bag reference vectors: a bag described by its distances to reference bags.

The vector has one contiguous block per selected operator, each block of
length R (the number of references, in reference order): block t,
coordinate j holds operator_t(bag, ref_j). Each block is independently
scaled to unit L2 norm ("block" mode, the default) because the six
operators live on very different scales; "global" normalizes the whole
concatenation instead. All-zero blocks stay zero rather than being
divided by zero.

Reference sets are fingerprinted over ids, shapes and features so a
model can refuse to run against references it was not trained with. A
bag may appear in its own reference set; its self-coordinate is 0 only
for inner-min operators at k=1, which is informative rather than
degenerate.
"""

from __future__ import annotations

import hashlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .core import Bag, Dataset
from .dist import DistParams
from .errors import DimMismatch, EmptyBag

NORMALIZE_MODES = ("block", "global")


class ReferenceSet:
    """Ordered, immutable reference bags plus the stacked layout the kernels use."""

    __slots__ = ("bags", "dim", "fingerprint", "_stacked", "_offsets")

    def __init__(self, bags: Iterable[Bag]):
        bags = tuple(bags)
        if not bags:
            raise ValueError("a reference set needs at least one bag")
        dim = bags[0].dim
        for bag in bags:
            if bag.dim != dim:
                raise DimMismatch(
                    f"reference bag {bag.id!r} has dimensionality {bag.dim}, expected {dim}"
                )
            if bag.n_instances < 1:
                raise EmptyBag(f"reference bag {bag.id!r} has no instances")
        self.bags = bags
        self.dim = dim
        self._stacked = np.ascontiguousarray(
            np.vstack([bag.features for bag in bags]), dtype=np.float64
        )
        counts = [0] + [bag.n_instances for bag in bags]
        self._offsets = np.cumsum(np.asarray(counts, dtype=np.int64))
        self.fingerprint = reference_fingerprint(bags)

    @classmethod
    def from_dataset(cls, ds: Dataset) -> "ReferenceSet":
        return cls(ds.bags)

    def __len__(self) -> int:
        return len(self.bags)

    def ids(self) -> tuple[str, ...]:
        return tuple(bag.id for bag in self.bags)


def reference_fingerprint(bags: Sequence[Bag]) -> str:
    """Content hash of an ordered bag collection (ids, shapes, features)."""
    h = hashlib.sha256()
    h.update(b"mibrv-refs-v1")
    for bag in bags:
        raw_id = bag.id.encode("utf-8")
        h.update(len(raw_id).to_bytes(4, "little"))
        h.update(raw_id)
        h.update(int(bag.n_instances).to_bytes(8, "little"))
        h.update(int(bag.dim).to_bytes(8, "little"))
        h.update(bag.features.tobytes())
    return h.hexdigest()


def featurizer_fingerprint(refs: ReferenceSet, params: DistParams, normalize: str = "block") -> str:
    """Hash binding a feature space: references plus distance configuration."""
    h = hashlib.sha256()
    h.update(b"mibrv-featurizer-v1")
    h.update(refs.fingerprint.encode("ascii"))
    h.update(int(params.k).to_bytes(8, "little"))
    h.update(",".join(str(op.value) for op in params.operators).encode("ascii"))
    h.update(normalize.encode("ascii"))
    return h.hexdigest()


@dataclass(frozen=True, eq=False)
class BagReferenceVector:
    """The feature vector of one bag: T operator blocks of R coordinates each."""

    values: np.ndarray
    params: DistParams
    ref_fingerprint: str

    def block(self, t: int) -> np.ndarray:
        """Coordinates of the t-th selected operator (0-based block index)."""
        n_refs = self.values.shape[0] // len(self.params.operators)
        return self.values[t * n_refs:(t + 1) * n_refs]


def _normalize_blocks(blocks: np.ndarray, mode: str) -> np.ndarray:
    if mode == "block":
        for row in blocks:
            norm = np.linalg.norm(row)
            if norm > 0.0:
                row /= norm
    elif mode == "global":
        norm = np.linalg.norm(blocks)
        if norm > 0.0:
            blocks /= norm
    else:
        raise ValueError(f"unknown normalize mode {mode!r}; use one of {NORMALIZE_MODES}")
    return blocks


def featurize(bag: Bag, refs: ReferenceSet, params: DistParams,
              normalize: str = "block") -> BagReferenceVector:
    """Build the reference vector of one bag against a fixed reference set.

    Pure and deterministic: identical inputs give bitwise-identical
    output.
    """
    if bag.dim != refs.dim:
        raise DimMismatch(
            f"bag {bag.id!r} has dimensionality {bag.dim}, references have {refs.dim}"
        )
    if bag.n_instances < 1:
        raise EmptyBag(f"bag {bag.id!r} has no instances")
    table = _kernels.operator_table_block(bag.features, refs._stacked, refs._offsets, params.k)
    cols = [op.value - 1 for op in params.operators]
    blocks = np.ascontiguousarray(table[:, cols].T)  # (T, R)
    blocks = _normalize_blocks(blocks, normalize)
    values = blocks.reshape(-1)
    values.setflags(write=False)
    return BagReferenceVector(values=values, params=params, ref_fingerprint=refs.fingerprint)


def featurize_all(bags: Dataset | Sequence[Bag], refs: ReferenceSet, params: DistParams,
                  normalize: str = "block", threads: int | None = None) -> list[BagReferenceVector]:
    """featurize() every bag, preserving order.

    threads > 1 fans bags out over a thread pool; the result is
    identical to the sequential one because each bag's vector depends
    only on that bag.
    """
    if isinstance(bags, Dataset):
        bags = bags.bags
    bags = list(bags)
    if threads is not None and threads > 1 and len(bags) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(lambda b: featurize(b, refs, params, normalize), bags))
    return [featurize(bag, refs, params, normalize) for bag in bags]
